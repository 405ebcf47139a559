#include "mlyap/scalar_field.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace mlyap {

namespace {

Vector trim_poly(const Vector& c) {
    int n = static_cast<int>(c.size());
    while (n > 1 && c[n - 1] == 0.0) --n;
    return c.head(n);
}

Vector poly_mul(const Vector& a, const Vector& b) {
    Vector out = Vector::Zero(a.size() + b.size() - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return trim_poly(out);
}

Vector poly_add(const Vector& a, const Vector& b) {
    Vector out = Vector::Zero(std::max(a.size(), b.size()));
    out.head(a.size()) = a;
    out.head(b.size()) += b;
    return trim_poly(out);
}

// Complex Fourier coefficients F[k+K] for k in [-K, K].
std::vector<std::complex<double>> to_fourier(const Vector& cosc, const Vector& sinc) {
    const int K = static_cast<int>(cosc.size()) - 1;
    std::vector<std::complex<double>> f(2 * K + 1, {0.0, 0.0});
    f[K] = {cosc[0], 0.0};
    for (int k = 1; k <= K; ++k) {
        const double a = cosc[k];
        const double b = k < sinc.size() ? sinc[k] : 0.0;
        f[K + k] = {0.5 * a, -0.5 * b};
        f[K - k] = {0.5 * a, 0.5 * b};
    }
    return f;
}

}  // namespace

ScalarField ScalarField::constant(double c) {
    ScalarField f;
    f.kind_ = Kind::constant;
    f.value_ = c;
    return f;
}

ScalarField ScalarField::polynomial(Vector coeffs) {
    if (coeffs.size() == 0) coeffs = Vector::Zero(1);
    coeffs = trim_poly(coeffs);
    if (coeffs.size() == 1) return constant(coeffs[0]);
    if (coeffs.size() - 1 > kMaxPolyDegree)
        throw std::invalid_argument("ScalarField: polynomial degree exceeds " +
                                    std::to_string(kMaxPolyDegree));
    ScalarField f;
    f.kind_ = Kind::polynomial;
    f.coeffs_ = std::move(coeffs);
    return f;
}

ScalarField ScalarField::trig(Vector cos_coeffs, Vector sin_coeffs) {
    if (cos_coeffs.size() == 0) cos_coeffs = Vector::Zero(1);
    const Eigen::Index n = std::max(cos_coeffs.size(), sin_coeffs.size());
    Vector c = Vector::Zero(n), s = Vector::Zero(n);
    c.head(cos_coeffs.size()) = cos_coeffs;
    s.head(sin_coeffs.size()) = sin_coeffs;
    int K = static_cast<int>(n) - 1;
    while (K > 0 && c[K] == 0.0 && s[K] == 0.0) --K;
    if (K == 0) return constant(c[0]);
    ScalarField f;
    f.kind_ = Kind::trig_polynomial;
    f.cosc_ = c.head(K + 1);
    f.sinc_ = s.head(K + 1);
    return f;
}

bool ScalarField::is_zero(double tol) const {
    switch (kind_) {
        case Kind::constant: return std::abs(value_) <= tol;
        case Kind::polynomial: return coeffs_.cwiseAbs().maxCoeff() <= tol;
        case Kind::trig_polynomial:
            return cosc_.cwiseAbs().maxCoeff() <= tol && sinc_.cwiseAbs().maxCoeff() <= tol;
    }
    return false;
}

ScalarField ScalarField::derivative() const {
    switch (kind_) {
        case Kind::constant: return constant(0.0);
        case Kind::polynomial: {
            Vector d = Vector::Zero(std::max<Eigen::Index>(1, coeffs_.size() - 1));
            for (Eigen::Index i = 1; i < coeffs_.size(); ++i)
                d[i - 1] = static_cast<double>(i) * coeffs_[i];
            return polynomial(d);
        }
        case Kind::trig_polynomial: {
            Vector c = Vector::Zero(cosc_.size()), s = Vector::Zero(cosc_.size());
            for (Eigen::Index k = 1; k < cosc_.size(); ++k) {
                c[k] = k * sinc_[k];
                s[k] = -double(k) * cosc_[k];
            }
            return trig(c, s);
        }
    }
    return constant(0.0);
}

Vector ScalarField::poly_coeffs() const {
    if (kind_ == Kind::constant) {
        Vector c(1);
        c[0] = value_;
        return c;
    }
    if (kind_ != Kind::polynomial)
        throw std::logic_error("ScalarField: trig field has no polynomial coefficients");
    return coeffs_;
}

int ScalarField::poly_degree() const {
    return static_cast<int>(poly_coeffs().size()) - 1;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    using K = ScalarField::Kind;
    if (a.kind_ == K::constant && b.kind_ == K::constant)
        return ScalarField::constant(a.value_ + b.value_);
    const bool a_trig = a.kind_ == K::trig_polynomial;
    const bool b_trig = b.kind_ == K::trig_polynomial;
    if (a_trig || b_trig) {
        if ((a.kind_ == K::polynomial) || (b.kind_ == K::polynomial))
            throw std::invalid_argument("ScalarField: cannot mix polynomial and trig fields");
        const Vector ac = a_trig ? a.cosc_ : (Vector(1) << a.value_).finished();
        const Vector as = a_trig ? a.sinc_ : Vector::Zero(1);
        const Vector bc = b_trig ? b.cosc_ : (Vector(1) << b.value_).finished();
        const Vector bs = b_trig ? b.sinc_ : Vector::Zero(1);
        return ScalarField::trig(poly_add(ac, bc), poly_add(as, bs));
    }
    return ScalarField::polynomial(poly_add(a.poly_coeffs(), b.poly_coeffs()));
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) { return a + (-1.0) * b; }

ScalarField operator*(double s, const ScalarField& a) {
    using K = ScalarField::Kind;
    switch (a.kind_) {
        case K::constant: return ScalarField::constant(s * a.value_);
        case K::polynomial: return ScalarField::polynomial(s * a.coeffs_);
        case K::trig_polynomial: return ScalarField::trig(s * a.cosc_, s * a.sinc_);
    }
    return ScalarField::constant(0.0);
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    using K = ScalarField::Kind;
    if (a.kind_ == K::constant) return a.value_ * b;
    if (b.kind_ == K::constant) return b.value_ * a;
    if (a.kind_ == K::polynomial && b.kind_ == K::polynomial)
        return ScalarField::polynomial(poly_mul(a.coeffs_, b.coeffs_));
    if (a.kind_ == K::trig_polynomial && b.kind_ == K::trig_polynomial) {
        const auto fa = to_fourier(a.cosc_, a.sinc_);
        const auto fb = to_fourier(b.cosc_, b.sinc_);
        const int Ka = (static_cast<int>(fa.size()) - 1) / 2;
        const int Kb = (static_cast<int>(fb.size()) - 1) / 2;
        const int K = Ka + Kb;
        std::vector<std::complex<double>> fc(2 * K + 1, {0.0, 0.0});
        for (int i = 0; i < static_cast<int>(fa.size()); ++i)
            for (int j = 0; j < static_cast<int>(fb.size()); ++j)
                fc[(i - Ka) + (j - Kb) + K] += fa[i] * fb[j];
        Vector c = Vector::Zero(K + 1), s = Vector::Zero(K + 1);
        c[0] = fc[K].real();
        for (int k = 1; k <= K; ++k) {
            c[k] = 2.0 * fc[K + k].real();
            s[k] = -2.0 * fc[K + k].imag();
        }
        return ScalarField::trig(c, s);
    }
    throw std::invalid_argument("ScalarField: cannot mix polynomial and trig fields");
}

}  // namespace mlyap

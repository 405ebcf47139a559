#pragma once

#include "mlyap/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mlyap {

/// A smooth coefficient function on the line or the circle, stored in a form
/// that keeps values and the first two derivatives exact:
///   - polynomial:       c0 + c1 x + ... + cK x^K   (ascending coefficients)
///   - trig_polynomial:  a0 + sum_k (ak cos kx + bk sin kx), 2pi-periodic
///   - constant:         c
/// Polynomial degree is capped at 8; the model catalog never produces more,
/// and a product exceeding the cap signals a modelling bug.
class ScalarField {
public:
    enum class Kind { polynomial, trig_polynomial, constant };

    static constexpr int kMaxPolyDegree = 8;

    ScalarField() : kind_(Kind::constant), value_(0.0) {}

    static ScalarField constant(double c);
    static ScalarField polynomial(Vector coeffs);  // ascending degree
    /// cos_coeffs[k] multiplies cos(kx) (k = 0 is the constant term),
    /// sin_coeffs[k] multiplies sin(kx) (entry 0 is ignored).
    static ScalarField trig(Vector cos_coeffs, Vector sin_coeffs);

    Kind kind() const { return kind_; }
    bool is_periodic() const { return kind_ != Kind::polynomial; }
    bool is_zero(double tol = 0.0) const;

    double operator()(double x) const { return value(x); }

    double value(double x) const {
        switch (kind_) {
            case Kind::constant: return value_;
            case Kind::polynomial: {
                double v = 0.0;
                for (Eigen::Index i = coeffs_.size() - 1; i >= 0; --i) v = v * x + coeffs_[i];
                return v;
            }
            case Kind::trig_polynomial: {
                double v = cosc_[0];
                for (Eigen::Index k = 1; k < cosc_.size(); ++k)
                    v += cosc_[k] * std::cos(k * x) + sinc_[k] * std::sin(k * x);
                return v;
            }
        }
        return 0.0;
    }

    double deriv1(double x) const {
        switch (kind_) {
            case Kind::constant: return 0.0;
            case Kind::polynomial: {
                double v = 0.0;
                for (Eigen::Index i = coeffs_.size() - 1; i >= 1; --i)
                    v = v * x + static_cast<double>(i) * coeffs_[i];
                return v;
            }
            case Kind::trig_polynomial: {
                double v = 0.0;
                for (Eigen::Index k = 1; k < cosc_.size(); ++k)
                    v += k * (-cosc_[k] * std::sin(k * x) + sinc_[k] * std::cos(k * x));
                return v;
            }
        }
        return 0.0;
    }

    double deriv2(double x) const {
        switch (kind_) {
            case Kind::constant: return 0.0;
            case Kind::polynomial: {
                double v = 0.0;
                for (Eigen::Index i = coeffs_.size() - 1; i >= 2; --i)
                    v = v * x + static_cast<double>(i * (i - 1)) * coeffs_[i];
                return v;
            }
            case Kind::trig_polynomial: {
                double v = 0.0;
                for (Eigen::Index k = 1; k < cosc_.size(); ++k)
                    v -= double(k) * k * (cosc_[k] * std::cos(k * x) + sinc_[k] * std::sin(k * x));
                return v;
            }
        }
        return 0.0;
    }

    ScalarField derivative() const;

    /// Polynomial coefficients, ascending; valid for polynomial/constant kinds.
    Vector poly_coeffs() const;
    int poly_degree() const;
    const Vector& cos_coeffs() const { return cosc_; }
    const Vector& sin_coeffs() const { return sinc_; }

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(double s, const ScalarField& a);

private:
    Kind kind_;
    double value_ = 0.0;  // constant kind
    Vector coeffs_;       // polynomial kind, ascending
    Vector cosc_, sinc_;  // trig kind
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

}  // namespace mlyap

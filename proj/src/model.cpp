#include "mlyap/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlyap {

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
}

ScalarField zero_field() { return ScalarField::constant(0.0); }

// Ito drift = X0 + (1/2) sum_j Xj' Xj ; Q = q0 + (1/2) sum_j Xj qj'.
void derive_ito_fields(SdeModel& m) {
    ScalarField corr = zero_field();
    ScalarField qcorr = zero_field();
    for (int j = 0; j < m.channels; ++j) {
        corr = corr + 0.5 * (m.noise[j].derivative() * m.noise[j]);
        qcorr = qcorr + 0.5 * (m.noise[j] * m.q[j].derivative());
    }
    m.ito_drift = m.drift_strat + corr;
    m.q_ito = m.q0 + qcorr;
}

SdeModel make_1d_line(const std::string& name, ScalarField drift, std::vector<ScalarField> noise,
                      ScalarField q0, std::vector<ScalarField> q, double guard) {
    SdeModel m;
    m.space = StateSpace::line;
    m.dim = 1;
    m.channels = static_cast<int>(noise.size());
    m.label = name;
    m.catalog_name = name;
    m.drift_strat = std::move(drift);
    m.noise = std::move(noise);
    m.q0 = std::move(q0);
    if (q.empty()) q.assign(m.channels, ScalarField::constant(0.0));
    if (static_cast<int>(q.size()) != m.channels)
        throw std::invalid_argument("build_model: one q field required per noise channel");
    m.q = std::move(q);
    m.guard_radius = guard;
    derive_ito_fields(m);
    return m;
}

ScalarField poly1(double c0, double c1) {
    return ScalarField::polynomial((Vector(2) << c0, c1).finished());
}

const Vector& require_array(const std::map<std::string, Vector>& arrays, const std::string& key) {
    auto it = arrays.find(key);
    if (it == arrays.end()) throw std::invalid_argument("build_model: missing array '" + key + "'");
    return it->second;
}

Matrix2 matrix_from_array(const Vector& v, const std::string& key) {
    if (v.size() != 4)
        throw std::invalid_argument("build_model: '" + key + "' must hold 4 entries (row-major)");
    Matrix2 B;
    B << v[0], v[1], v[2], v[3];
    return B;
}

}  // namespace

SdeModel project_linear_2d(const Matrix2& B0, const std::vector<Matrix2>& B) {
    // With u = (cos t, sin t) and u_perp = (-sin t, cos t):
    //   <Bu, u_perp> = (b21-b12)/2 + (b21+b12)/2 cos 2t + (b22-b11)/2 sin 2t
    //   <Bu, u>      = (b11+b22)/2 + (b11-b22)/2 cos 2t + (b12+b21)/2 sin 2t
    auto tangential = [](const Matrix2& M) {
        Vector c = Vector::Zero(3), s = Vector::Zero(3);
        c[0] = 0.5 * (M(1, 0) - M(0, 1));
        c[2] = 0.5 * (M(1, 0) + M(0, 1));
        s[2] = 0.5 * (M(1, 1) - M(0, 0));
        return ScalarField::trig(c, s);
    };
    auto radial = [](const Matrix2& M) {
        Vector c = Vector::Zero(3), s = Vector::Zero(3);
        c[0] = 0.5 * (M(0, 0) + M(1, 1));
        c[2] = 0.5 * (M(0, 0) - M(1, 1));
        s[2] = 0.5 * (M(0, 1) + M(1, 0));
        return ScalarField::trig(c, s);
    };

    SdeModel m;
    m.space = StateSpace::circle;
    m.dim = 1;
    m.channels = static_cast<int>(B.size());
    m.label = "linear2d_projected";
    m.catalog_name = "linear2d_projected";
    m.drift_strat = tangential(B0);
    m.q0 = radial(B0);
    for (const auto& Bj : B) {
        m.noise.push_back(tangential(Bj));
        m.q.push_back(radial(Bj));
    }
    m.guard_radius = std::numeric_limits<double>::infinity();
    derive_ito_fields(m);
    return m;
}

SdeModel build_model(const std::string& name, const std::map<std::string, double>& params,
                     const std::map<std::string, Vector>& arrays) {
    const double a = param_or(params, "a", 1.0);
    const double b = param_or(params, "b", 1.0);
    const double sigma = param_or(params, "sigma", 1.0);
    const double guard = param_or(params, "guard_radius", 10.0);

    SdeModel m;
    if (name == "ou_quadratic") {
        // dx = -a x dt + sigma dW,  A_t = int x^2 ds
        m = make_1d_line(name, poly1(0.0, -a), {ScalarField::constant(sigma)},
                         ScalarField::polynomial((Vector(3) << 0, 0, 1).finished()), {}, guard);
    } else if (name == "ou_linear_degenerate") {
        // dx = -a x dt + sigma dW,  A_t = int a x ds - sigma W_t  (so A_t = x_0 - x_t)
        m = make_1d_line(name, poly1(0.0, -a), {ScalarField::constant(sigma)}, poly1(0.0, a),
                         {ScalarField::constant(-sigma)}, guard);
    } else if (name == "pitchfork_q2" || name == "pitchfork_q4") {
        const int deg = name == "pitchfork_q2" ? 2 : 4;
        Vector qc = Vector::Zero(deg + 1);
        qc[deg] = 1.0;
        m = make_1d_line(name, ScalarField::polynomial((Vector(4) << 0, a, 0, -b).finished()),
                         {ScalarField::constant(sigma)}, ScalarField::polynomial(qc), {}, guard);
    } else if (name == "pitchfork_corr") {
        const double rho = param_or(params, "rho", 0.0);
        if (rho < -1.0 || rho > 1.0)
            throw std::invalid_argument("build_model: rho must lie in [-1, 1]");
        // A_t = int x dW~ with <W, W~>_t = rho t, split over two channels.
        m = make_1d_line(name, ScalarField::polynomial((Vector(4) << 0, a, 0, -b).finished()),
                         {ScalarField::constant(sigma), ScalarField::constant(0.0)}, zero_field(),
                         {poly1(0.0, rho), poly1(0.0, std::sqrt(1.0 - rho * rho))}, guard);
        m.params["rho"] = rho;
    } else if (name == "linear2d_projected") {
        std::vector<Matrix2> B;
        for (int j = 1;; ++j) {
            auto it = arrays.find("b" + std::to_string(j));
            if (it == arrays.end()) break;
            B.push_back(matrix_from_array(it->second, "b" + std::to_string(j)));
        }
        m = project_linear_2d(matrix_from_array(require_array(arrays, "b0"), "b0"), B);
    } else if (name == "langevin") {
        m.space = StateSpace::langevin3d;
        m.dim = 3;
        m.channels = 1;
        m.label = name;
        m.catalog_name = name;
        m.lg_a = a;
        m.lg_b = b;
        m.lg_beta = param_or(params, "beta", 1.0);
        m.lg_sigma = sigma;
        m.guard_radius = param_or(params, "guard_radius", 20.0);
    } else if (name == "custom") {
        if (params.count("state_space") && params.at("state_space") != 0.0)
            throw std::invalid_argument(
                "build_model: custom polynomial fields are not periodic; circle state requires a "
                "catalog model");
        ScalarField drift = ScalarField::polynomial(require_array(arrays, "drift_coeffs"));
        std::vector<ScalarField> noise, q;
        if (arrays.count("noise_coeffs"))
            noise.push_back(ScalarField::polynomial(arrays.at("noise_coeffs")));
        for (int j = 1;; ++j) {
            auto it = arrays.find("noise_coeffs_" + std::to_string(j));
            if (it == arrays.end()) break;
            noise.push_back(ScalarField::polynomial(it->second));
        }
        ScalarField q0 = arrays.count("q0_coeffs")
                             ? ScalarField::polynomial(arrays.at("q0_coeffs"))
                             : zero_field();
        if (arrays.count("q_coeffs")) q.push_back(ScalarField::polynomial(arrays.at("q_coeffs")));
        for (int j = 1;; ++j) {
            auto it = arrays.find("q_coeffs_" + std::to_string(j));
            if (it == arrays.end()) break;
            q.push_back(ScalarField::polynomial(it->second));
        }
        if (!q.empty() && q.size() != noise.size())
            throw std::invalid_argument("build_model: q_coeffs channel count must match noise");
        m = make_1d_line(name, std::move(drift), std::move(noise), std::move(q0), std::move(q),
                         guard);
    } else {
        throw std::invalid_argument("build_model: unknown catalog model '" + name + "'");
    }

    m.params.insert({{"a", a}, {"b", b}, {"sigma", sigma}});
    if (name == "langevin") m.params["beta"] = m.lg_beta;
    return m;
}

TwistedCoefficients twisted_coefficients(const SdeModel& model, double p) {
    if (!model.is_1d())
        throw std::invalid_argument("twisted_coefficients: model dimension must be 1");
    TwistedCoefficients tc;
    tc.p = p;
    ScalarField a2 = zero_field(), y = zero_field(), r = zero_field();
    for (int j = 0; j < model.channels; ++j) {
        a2 = a2 + model.noise[j] * model.noise[j];
        y = y + model.q[j] * model.noise[j];
        r = r + model.q[j] * model.q[j];
    }
    tc.a_diff = a2;
    tc.b_drift = model.ito_drift + p * y;
    tc.potential = p * model.q_ito + (0.5 * p * p) * r;
    return tc;
}

}  // namespace mlyap

#include "mlyap/bounds.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlyap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// L_p V / V as an exact ratio num(x) / (1+x^2)^(2*denom_pow); denom_pow = 0
// for the exponential families, 1 for (1+x^2)^alpha.
struct GrowthPoly {
    Vector num;  // ascending coefficients
    int denom_pow = 0;
};

struct ModelPieces {
    ScalarField a;  // sum Xj^2
    ScalarField y;  // sum qj Xj
    ScalarField r;  // sum qj^2
};

ModelPieces model_pieces(const SdeModel& m) {
    ModelPieces out{ScalarField::constant(0.0), ScalarField::constant(0.0),
                    ScalarField::constant(0.0)};
    for (int j = 0; j < m.channels; ++j) {
        out.a = out.a + m.noise[j] * m.noise[j];
        out.y = out.y + m.q[j] * m.noise[j];
        out.r = out.r + m.q[j] * m.q[j];
    }
    return out;
}

void require_line_1d(const SdeModel& m, const char* who) {
    if (!m.is_1d() || m.space != StateSpace::line)
        throw std::invalid_argument(std::string(who) + ": requires a 1d line model");
}

// beta_u scales U (condition (3)); p enters the twist terms directly.
GrowthPoly growth_poly(const SdeModel& m, const LyapunovWeight& w, double p, double beta_u) {
    const ModelPieces mp = model_pieces(m);
    const ScalarField& b = m.ito_drift;
    const ScalarField& q = m.q_ito;

    GrowthPoly g;
    if (w.u_is_polynomial()) {
        const ScalarField u = w.u_field();
        const ScalarField du = u.derivative();
        const ScalarField d2u = du.derivative();
        ScalarField f = beta_u * (0.5 * (mp.a * d2u) + b * du) +
                        (0.5 * beta_u * beta_u) * (mp.a * (du * du)) +
                        (p * beta_u) * (mp.y * du) + p * q + (0.5 * p * p) * mp.r;
        g.num = f.poly_coeffs();
        g.denom_pow = 0;
        return g;
    }
    // V = (1+x^2)^alpha: multiply through by (1+x^2)^2.
    const double alpha = w.param;
    const ScalarField x = ScalarField::polynomial((Vector(2) << 0, 1).finished());
    const ScalarField opx2 = ScalarField::polynomial((Vector(3) << 1, 0, 1).finished());
    const ScalarField opx2_sq = opx2 * opx2;
    ScalarField f = (beta_u * alpha) * (mp.a * ScalarField::polynomial(
                                                   (Vector(3) << 1, 0, -1).finished())) +
                    (beta_u * 2.0 * alpha) * (b * (x * opx2)) +
                    (beta_u * beta_u * 2.0 * alpha * alpha) * (mp.a * (x * x)) +
                    (p * beta_u * 2.0 * alpha) * (mp.y * (x * opx2)) +
                    ((p * q) + (0.5 * p * p) * mp.r) * opx2_sq;
    g.num = f.poly_coeffs();
    g.denom_pow = 1;
    return g;
}

// Leading nonzero term with a small relative tolerance against float fuzz.
std::pair<int, double> leading_term(const Vector& c) {
    const double scale = c.cwiseAbs().maxCoeff();
    const double tol = scale * 1e-13;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        if (std::abs(c[i]) > tol) return {i, c[i]};
    return {0, 0.0};
}

struct TailVerdict {
    bool bounded_above = false;
    bool tends_minus_inf = false;
};

TailVerdict tail_verdict(const GrowthPoly& g) {
    const auto [deg, lead] = leading_term(g.num);
    const int deg_eff = deg - 4 * g.denom_pow;
    TailVerdict v;
    if (lead == 0.0 || deg_eff <= 0) {
        v.bounded_above = true;
        return v;
    }
    if (deg % 2 == 0 && lead < 0.0) {
        v.bounded_above = true;
        v.tends_minus_inf = true;
    }
    return v;
}

std::vector<double> real_roots(const Vector& coeffs) {
    const auto [deg, lead] = leading_term(coeffs);
    std::vector<double> roots;
    if (deg == 0) return roots;
    Matrix comp = Matrix::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / lead;
    Eigen::EigenSolver<Matrix> es(comp, /*computeEigenvectors=*/false);
    for (int i = 0; i < deg; ++i) {
        const auto z = es.eigenvalues()[i];
        if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z.real()))) roots.push_back(z.real());
    }
    return roots;
}

double poly_eval(const Vector& c, double x) {
    double v = 0.0;
    for (Eigen::Index i = c.size() - 1; i >= 0; --i) v = v * x + c[i];
    return v;
}

Vector poly_derivative(const Vector& c) {
    if (c.size() <= 1) return Vector::Zero(1);
    Vector d(c.size() - 1);
    for (Eigen::Index i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
    return d;
}

// sup over R of num(x)/(1+x^2)^(2 denom_pow).
double rational_sup(const GrowthPoly& g) {
    const auto verdict = tail_verdict(g);
    if (!verdict.bounded_above) return kInf;
    const auto [deg, lead] = leading_term(g.num);
    auto value = [&](double x) {
        double v = poly_eval(g.num, x);
        if (g.denom_pow > 0) {
            const double d = 1.0 + x * x;
            v /= d * d;
        }
        return v;
    };
    double best = value(0.0);
    if (g.denom_pow == 0) {
        for (double r : real_roots(poly_derivative(g.num))) best = std::max(best, value(r));
    } else {
        // d/dx [N / (1+x^2)^2] = 0  <=>  N'(1+x^2) - 4 x N = 0.
        const Vector dn = poly_derivative(g.num);
        Vector m = Vector::Zero(std::max<Eigen::Index>(g.num.size() + 1, dn.size() + 2));
        m.head(dn.size()) += dn;
        m.segment(2, dn.size()) += dn;
        m.segment(1, g.num.size()) -= 4.0 * g.num;
        for (double r : real_roots(m)) best = std::max(best, value(r));
        if (deg == 4 * g.denom_pow) best = std::max(best, lead);  // finite limit at infinity
    }
    return best;
}

// Family-parameter score whose sign decides the tail test; negative iff the
// weight with this parameter satisfies condition (1).
double tail_score(const SdeModel& m, LyapunovWeight::Family family, double p, double param) {
    const GrowthPoly g = growth_poly(m, LyapunovWeight(family, param), p, 1.0);
    const auto [deg, lead] = leading_term(g.num);
    const auto verdict = tail_verdict(g);
    if (verdict.tends_minus_inf) return lead;  // negative by construction
    return std::abs(lead) + 1.0;
}

template <typename F>
double golden_min(F&& f, double lo, double hi, int iters = 80) {
    const double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int k = 0; k < iters; ++k) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

// Log-spaced scan plus golden refinement around the best bracket.
template <typename F>
std::pair<double, double> scan_then_refine(F&& f, double lo, double hi, int n_scan) {
    double best_x = lo, best_f = kInf;
    std::vector<double> xs(n_scan);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n_scan; ++i) {
        xs[i] = std::exp(llo + (lhi - llo) * i / (n_scan - 1));
        const double v = f(xs[i]);
        if (v < best_f) {
            best_f = v;
            best_x = xs[i];
        }
    }
    double blo = best_x, bhi = best_x;
    for (int i = 0; i + 1 < n_scan; ++i) {
        if (xs[i] < best_x) blo = xs[i];
        if (xs[n_scan - 1 - i] > best_x) bhi = xs[n_scan - 1 - i];
    }
    const double xr = golden_min(f, blo, bhi);
    const double fr = f(xr);
    return fr < best_f ? std::make_pair(xr, fr) : std::make_pair(best_x, best_f);
}

}  // namespace

double growth_value(const SdeModel& model, const LyapunovWeight& w, double p, double x) {
    require_line_1d(model, "growth_value");
    const ModelPieces mp = model_pieces(model);
    const double a = mp.a(x);
    const double du = w.du(x);
    return 0.5 * a * w.d2u(x) + model.ito_drift(x) * du + 0.5 * a * du * du +
           p * mp.y(x) * du + p * model.q_ito(x) + 0.5 * p * p * mp.r(x);
}

bool tail_condition_holds(const SdeModel& model, const LyapunovWeight& w, double p) {
    require_line_1d(model, "tail_condition_holds");
    if (w.is_unit()) return false;  // V = 1 never diverges
    return tail_verdict(growth_poly(model, w, p, 1.0)).tends_minus_inf;
}

GrowthReport check_growth(const SdeModel& model, const LyapunovWeight& w, double p,
                          const Vector& scan) {
    require_line_1d(model, "check_growth");
    if (scan.size() < 4) throw std::invalid_argument("check_growth: scan grid too small");

    GrowthReport rep;
    rep.p = p;
    rep.weight = w;

    Vector vals(scan.size());
    for (Eigen::Index i = 0; i < scan.size(); ++i) vals[i] = growth_value(model, w, p, scan[i]);
    rep.gamma_sup = vals.maxCoeff();

    // Outer-20% slope of L_p V / V against |x|, averaged over both tails.
    const double x_hi = scan.cwiseAbs().maxCoeff();
    const double x_cut = 0.8 * x_hi;
    double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
    int cnt = 0;
    for (Eigen::Index i = 0; i < scan.size(); ++i) {
        const double ax = std::abs(scan[i]);
        if (ax >= x_cut) {
            sx += ax;
            sy += vals[i];
            sxx += ax * ax;
            sxy += ax * vals[i];
            ++cnt;
        }
    }
    if (cnt >= 2 && sxx * cnt - sx * sx > 0.0)
        rep.tail_trend = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

    const GrowthPoly g0 = growth_poly(model, w, 0.0, 1.0);
    rep.cond0_ok = tail_verdict(g0).bounded_above;
    rep.cond0_sup = rational_sup(g0);

    rep.cond1_ok = tail_verdict(growth_poly(model, w, p, 1.0)).tends_minus_inf;

    for (double beta : {1.1, 1.25, 1.5, 2.0}) {
        const GrowthPoly g2 = growth_poly(model, w, beta * p, 1.0);
        if (tail_verdict(g2).bounded_above) {
            rep.cond2_ok = true;
            rep.cond2_beta = beta;
            rep.cond2_sup = rational_sup(g2);
            break;
        }
    }
    for (double beta : {1.1, 1.25, 1.5, 2.0}) {
        const GrowthPoly g3 = growth_poly(model, w, p, beta);
        if (tail_verdict(g3).bounded_above) {
            rep.cond3_ok = true;
            rep.cond3_beta = beta;
            rep.cond3_sup = rational_sup(g3);
            break;
        }
    }
    return rep;
}

bool family_admissible(const SdeModel& model, LyapunovWeight::Family family, double p,
                       double* best_param) {
    require_line_1d(model, "family_admissible");
    auto score = [&](double param) { return tail_score(model, family, p, param); };
    const auto [param, value] = scan_then_refine(score, 1e-4, 1e4, 129);
    if (best_param) *best_param = param;
    return value < 0.0;
}

UpperBoundResult upper_bound(const SdeModel& model, double p, LyapunovWeight::Family family) {
    require_line_1d(model, "upper_bound");
    auto objective = [&](double param) {
        const GrowthPoly g = growth_poly(model, LyapunovWeight(family, param), p, 1.0);
        if (!tail_verdict(g).tends_minus_inf) return kInf;
        return rational_sup(g);
    };
    const auto [param, value] = scan_then_refine(objective, 1e-4, 1e4, 129);
    if (!std::isfinite(value))
        throw std::runtime_error("upper_bound: no admissible weight parameter at p = " +
                                 std::to_string(p));
    UpperBoundResult out;
    out.gamma_star = value;
    out.param = param;
    out.family = family;
    return out;
}

double lower_bound_at(const SdeModel& model, double p, double A) {
    const double a = model.params.count("a") ? model.params.at("a") : 0.0;
    const double b = model.params.count("b") ? model.params.at("b") : 0.0;
    const double sigma = model.params.count("sigma") ? model.params.at("sigma") : 0.0;
    if (A < 0.5) return kNaN;
    const double c = sigma * sigma * A * (2.0 * A - 1.0);

    if (model.catalog_name == "pitchfork_q2") {
        const double gap = p - 2.0 * A * b;
        if (gap <= 0.0) return kNaN;
        return 2.0 * A * a + 2.0 * std::sqrt(gap * c);
    }
    if (model.catalog_name == "pitchfork_q4") {
        if (p <= 0.0) return kNaN;
        // inf_{y>0} (-2Ab y + c/y + p y^2); stationary point solves
        // 2p y^3 - 2Ab y^2 - c = 0 (unique positive root).
        const Vector cubic = (Vector(4) << -c, 0.0, -2.0 * A * b, 2.0 * p).finished();
        double y_star = -1.0;
        for (double r : real_roots(cubic))
            if (r > 0.0) y_star = std::max(y_star, r);
        if (y_star <= 0.0) return kNaN;
        return 2.0 * A * a + (-2.0 * A * b * y_star + (y_star > 0 ? c / y_star : 0.0) +
                              p * y_star * y_star);
    }
    if (model.catalog_name == "pitchfork_corr") {
        const double rho = model.params.at("rho");
        const double gap = 0.5 * p * p - 2.0 * A * b;
        if (gap <= 0.0) return kNaN;
        return 2.0 * A * (a + rho * p * sigma) + 2.0 * std::sqrt(gap * c);
    }
    throw std::invalid_argument("lower_bound: model '" + model.catalog_name +
                                "' is outside the implemented (x^2)^A family");
}

LowerBoundResult lower_bound(const SdeModel& model, double p, const Vector& A_grid) {
    LowerBoundResult out;
    out.gamma_tilde = -kInf;
    bool any = false;
    for (Eigen::Index i = 0; i < A_grid.size(); ++i) {
        const double v = lower_bound_at(model, p, A_grid[i]);
        if (std::isnan(v)) continue;
        any = true;
        if (v > out.gamma_tilde) {
            out.gamma_tilde = v;
            out.A = A_grid[i];
        }
    }
    if (!any)
        throw std::runtime_error("lower_bound: no test exponent in the grid satisfies the domain "
                                 "constraints at p = " +
                                 std::to_string(p));
    return out;
}

BoundsReport bounds_report(const SdeModel& model, double p, LyapunovWeight::Family family,
                           const Vector& A_grid) {
    BoundsReport rep;
    rep.p = p;
    try {
        rep.upper = upper_bound(model, p, family);
        rep.has_upper = true;
    } catch (const std::exception&) {
    }
    try {
        rep.lower = lower_bound(model, p, A_grid);
        rep.has_lower = true;
    } catch (const std::exception&) {
    }
    if (rep.has_upper && rep.has_lower)
        rep.sandwich_ok = rep.lower.gamma_tilde <= rep.upper.gamma_star + 1e-9;
    return rep;
}

double polynomial_sup(const Vector& coeffs) {
    GrowthPoly g;
    g.num = coeffs;
    g.denom_pow = 0;
    return rational_sup(g);
}

AsymptoticReport asymptotic_constants(const std::string& scenario,
                                      const std::map<std::string, double>& params,
                                      const std::vector<double>& p_ladder) {
    auto get = [&](const std::string& k, double dflt) {
        auto it = params.find(k);
        return it == params.end() ? dflt : it->second;
    };
    const double a = get("a", 0.0);
    const double b = get("b", 1.0);
    const double sigma = get("sigma", 1.0);
    const double rho = get("rho", 1.0);

    AsymptoticReport rep;
    rep.scenario = scenario;
    SdeModel model;
    if (scenario == "q2") {
        model = build_model("pitchfork_q2", {{"a", a}, {"b", b}, {"sigma", sigma}});
        rep.exponent = 1.5;
        rep.paper_constant_lo = rep.paper_constant_hi = std::pow(2.0 / 3.0, 1.5) * sigma / b;
    } else if (scenario == "q4") {
        model = build_model("pitchfork_q4", {{"a", a}, {"b", b}, {"sigma", sigma}});
        rep.exponent = 3.0;
        rep.paper_constant_lo = rep.paper_constant_hi =
            16.0 / 27.0 * std::pow(sigma / b, 4.0);
    } else if (scenario == "ito_x") {
        if (rho < -1.0 || rho > 1.0)
            throw std::invalid_argument("asymptotic_constants: rho must lie in [-1, 1]");
        model =
            build_model("pitchfork_corr", {{"a", a}, {"b", b}, {"sigma", sigma}, {"rho", rho}});
        if (rho == -1.0) {
            rep.exponent = 1.0;
            const double base = std::pow(std::max(a, 0.0), 2) / (4.0 * b * sigma);
            rep.paper_constant_lo = base - 0.5 * sigma;
            rep.paper_constant_hi = base + 0.5 * sigma;
        } else {
            rep.exponent = 3.0;
            const double s3 = std::sqrt(3.0 + rho * rho);
            rep.paper_constant_lo = rep.paper_constant_hi =
                (s3 + 2.0 * rho) * (s3 + 2.0 * rho) * (s3 - rho) * sigma / (27.0 * b);
        }
    } else {
        throw std::invalid_argument("asymptotic_constants: unknown scenario '" + scenario + "'");
    }

    for (double p : p_ladder) {
        AsymptoticLadderRow row;
        row.p = p;
        row.upper = upper_bound(model, p, LyapunovWeight::Family::exp_quadratic).gamma_star;

        double A_max = kInf;
        if (scenario == "q2") A_max = p / (2.0 * b);
        if (scenario == "ito_x") A_max = p * p / (4.0 * b);
        if (scenario == "q4") A_max = 100.0 * sigma * sigma * p * p / (9.0 * b * b * b);
        A_max = std::max(A_max * (1.0 - 1e-12), 0.5 + 1e-9);
        Vector A_grid(512);
        const double lo = std::log(0.5 + 1e-9), hi = std::log(A_max);
        for (int i = 0; i < 512; ++i) A_grid[i] = std::exp(lo + (hi - lo) * i / 511.0);
        const auto lb = lower_bound(model, p, A_grid);
        auto neg = [&](double A) {
            const double v = lower_bound_at(model, p, A);
            return std::isnan(v) ? kInf : -v;
        };
        const double A_ref =
            golden_min(neg, std::max(0.5, lb.A * 0.8), std::min(A_max, lb.A * 1.25));
        row.lower = std::max(lb.gamma_tilde, -neg(A_ref));

        rep.ladder.push_back(row);
    }
    if (!rep.ladder.empty()) {
        const auto& last = rep.ladder.back();
        rep.constant_upper = last.upper / std::pow(last.p, rep.exponent);
        rep.constant_lower = last.lower / std::pow(last.p, rep.exponent);
    }
    return rep;
}

}  // namespace mlyap

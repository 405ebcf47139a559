#include "mlyap/experiments.hpp"

#include "mlyap/analysis.hpp"
#include "mlyap/bounds.hpp"
#include "mlyap/fkmc.hpp"
#include "mlyap/reports.hpp"
#include "mlyap/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mlyap {

namespace {

double ou_lambda_oracle(double a, double sigma, double p) {
    return 0.5 * (a - std::sqrt(a * a - 2.0 * p * sigma * sigma));
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

CheckLine check(const std::string& label, bool pass, const std::string& detail) {
    return CheckLine{label, pass, detail};
}

Vector geomspace(double lo, double hi, int n) {
    Vector v(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) v[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    return v;
}

SpectralResult ou_solve(double p, double tol = 1e-8, int n = 1200) {
    const SdeModel ou = build_model("ou_quadratic");
    return solve_principal(ou, p, GridSpec::interval(-6.0, 6.0, n),
                           LyapunovWeight::exp_quadratic(0.5), tol);
}

// --- individual experiments ------------------------------------------------

ExperimentResult exp_ou_closed_form(int) {
    ExperimentResult r;
    r.name = "ou-closed-form";
    const auto t0 = std::chrono::steady_clock::now();
    for (double p : {-1.0, 0.2, 0.375}) {
        const SpectralResult sr = ou_solve(p);
        const double oracle = ou_lambda_oracle(1.0, 1.0, p);
        const double err = std::abs(sr.lambda - oracle);
        r.checks.push_back(check("lambda(p=" + fmt(p) + ")", err <= 1e-3,
                                 "spectral " + fmt(sr.lambda) + " vs closed form " + fmt(oracle) +
                                     ", |err| = " + fmt(err) + " <= 1e-3"));
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.checks.push_back(check("runtime", wall < 5.0, fmt(wall) + " s < 5 s"));
    return r;
}

ExperimentResult exp_ou_eigenfunction(int) {
    ExperimentResult r;
    r.name = "ou-eigenfunction";
    const SpectralResult sr = ou_solve(0.375);
    const Vector x = sr.grid.nodes();
    const LyapunovWeight w = LyapunovWeight::exp_quadratic(0.5);

    // phi = h V, matched at x = 0 by linear interpolation between the two
    // center nodes, then compared against exp(x^2 / 4).
    Eigen::Index i0 = 0;
    while (i0 + 1 < x.size() && x[i0 + 1] <= 0.0) ++i0;
    const double w1 = (0.0 - x[i0]) / (x[i0 + 1] - x[i0]);
    const double phi0 = (1.0 - w1) * sr.eigvec[i0] * w.v(x[i0]) +
                        w1 * sr.eigvec[i0 + 1] * w.v(x[i0 + 1]);
    double max_rel = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::abs(x[i]) > 2.0) continue;
        const double phi = sr.eigvec[i] * w.v(x[i]) / phi0;
        const double oracle = std::exp(0.25 * x[i] * x[i]);
        max_rel = std::max(max_rel, std::abs(phi - oracle) / oracle);
    }
    r.checks.push_back(check("eigenfunction", max_rel <= 0.01,
                             "max relative error on [-2,2] = " + fmt(max_rel) + " <= 1%"));
    return r;
}

ExperimentResult exp_mc_spectral(int n_threads) {
    ExperimentResult r;
    r.name = "mc-spectral";
    const auto t0 = std::chrono::steady_clock::now();

    {
        const SdeModel ou = build_model("ou_quadratic");
        const double spec = ou_solve(0.375).lambda;
        const McLambdaEstimate mc = estimate_lambda(ou, 0.375, 30.0, state1d(0.0), 100000, 3000,
                                                    RngPolicy(20240601), n_threads);
        const double err = std::abs(mc.lambda_t - spec);
        const double tol = 3.0 * mc.se_lambda + 0.03;
        r.checks.push_back(check("ou_quadratic", err <= tol,
                                 "MC " + fmt(mc.lambda_t) + " vs spectral " + fmt(spec) +
                                     ", |diff| = " + fmt(err) + " <= " + fmt(tol) +
                                     " (ess " + fmt(mc.ess) + ")"));
    }
    {
        const SdeModel pf = build_model("pitchfork_q2", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}});
        const UpperBoundResult ub = upper_bound(pf, 1.0, LyapunovWeight::Family::exp_quadratic);
        const SpectralResult sr =
            solve_principal(pf, 1.0, GridSpec::interval(-6.0, 6.0, 1200),
                            LyapunovWeight::exp_quadratic(ub.param), 1e-8);
        const McLambdaEstimate mc = estimate_lambda(pf, 1.0, 30.0, state1d(0.0), 100000, 3000,
                                                    RngPolicy(20240602), n_threads);
        const double err = std::abs(mc.lambda_t - sr.lambda);
        const double tol = 3.0 * mc.se_lambda + 0.03;
        r.checks.push_back(check("pitchfork_q2", err <= tol,
                                 "MC " + fmt(mc.lambda_t) + " vs spectral " + fmt(sr.lambda) +
                                     ", |diff| = " + fmt(err) + " <= " + fmt(tol) +
                                     " (ess " + fmt(mc.ess) + ")"));
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.checks.push_back(check("runtime", wall < 120.0, fmt(wall) + " s < 120 s"));
    return r;
}

ExperimentResult exp_sandwich(int) {
    ExperimentResult r;
    r.name = "sandwich";
    const SdeModel pf = build_model("pitchfork_q2", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}});

    // Reference bounds evaluated at the large-p parameter choices
    // gamma = sqrt(p/6), A = p/3 (sigma = b = 1).
    const double p = 10.0;
    const double gp = std::sqrt(p / 6.0);
    const double upper_ref = std::pow(2.0 * gp * gp + p, 2) / (8.0 * gp) + gp;
    const double lower_ref = lower_bound_at(pf, p, p / 3.0);

    const UpperBoundResult ub = upper_bound(pf, p, LyapunovWeight::Family::exp_quadratic);
    const SpectralResult sr = solve_principal(pf, p, GridSpec::interval(-6.0, 6.0, 1200),
                                              LyapunovWeight::exp_quadratic(ub.param), 1e-8);
    const LowerBoundResult lb = lower_bound(pf, p, geomspace(0.5 + 1e-9, p / 2.0 - 1e-9, 512));

    r.checks.push_back(check("lower_ref", std::abs(lower_ref - 15.87) < 0.01,
                             "closed-form lower bound at A = p/3 is " + fmt(lower_ref)));
    r.checks.push_back(check("upper_ref", std::abs(upper_ref - 18.50) < 0.01,
                             "closed-form upper bound at gamma = sqrt(p/6) is " + fmt(upper_ref)));
    r.checks.push_back(check("sandwich_ref",
                             lower_ref <= sr.lambda + 1e-6 && sr.lambda <= upper_ref + 1e-6,
                             fmt(lower_ref) + " <= " + fmt(sr.lambda) + " <= " + fmt(upper_ref)));
    r.checks.push_back(check("sandwich_opt",
                             lb.gamma_tilde <= sr.lambda + 1e-6 &&
                                 sr.lambda <= ub.gamma_star + 1e-6,
                             "optimized bounds " + fmt(lb.gamma_tilde) + " <= " + fmt(sr.lambda) +
                                 " <= " + fmt(ub.gamma_star)));

    const AsymptoticReport rep = asymptotic_constants(
        "q2", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}}, {10.0, 30.0, 100.0, 300.0});
    const double cref = std::pow(2.0 / 3.0, 1.5);
    r.checks.push_back(check("ladder_upper",
                             std::abs(rep.constant_upper - cref) <= 0.15 * cref,
                             "upper/p^1.5 at p=300: " + fmt(rep.constant_upper) + " vs " +
                                 fmt(cref) + " (15%)"));
    r.checks.push_back(check("ladder_lower",
                             std::abs(rep.constant_lower - cref) <= 0.15 * cref,
                             "lower/p^1.5 at p=300: " + fmt(rep.constant_lower) + " vs " +
                                 fmt(cref) + " (15%)"));
    bool gaps_shrink = true;
    std::string gaps;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& row : rep.ladder) {
        const double g = (row.upper - row.lower) / std::pow(row.p, 1.5);
        gaps_shrink = gaps_shrink && g < prev;
        prev = g;
        gaps += fmt(g) + " ";
    }
    r.checks.push_back(check("ladder_gap_monotone", gaps_shrink, "scaled gaps: " + gaps));
    return r;
}

ExperimentResult exp_growth_flip(int) {
    ExperimentResult r;
    r.name = "growth-flip";
    const SdeModel ou = build_model("ou_quadratic");
    double par = 0.0;
    const bool pass_low = family_admissible(ou, LyapunovWeight::Family::exp_quadratic, 0.49, &par);
    r.checks.push_back(check("p=0.49", pass_low,
                             "exp_quadratic family admits p = 0.49 (gamma ~ " + fmt(par) + ")"));
    const bool pass_high = family_admissible(ou, LyapunovWeight::Family::exp_quadratic, 0.51);
    r.checks.push_back(
        check("p=0.51", !pass_high, "no admissible gamma at p = 0.51 (critical p* = 0.5)"));
    return r;
}

ExperimentResult exp_lambda_prime(int) {
    ExperimentResult r;
    r.name = "lambda-prime";
    const SdeModel ou = build_model("ou_quadratic");
    const double lam = lambda_as(ou);
    r.checks.push_back(check("quadrature", std::abs(lam - 0.5) <= 1e-6,
                             "int Q dnu = " + fmt(lam) + " vs 0.5"));
    const double lp = ou_solve(0.01, 1e-9).lambda;
    const double lm = ou_solve(-0.01, 1e-9).lambda;
    const double deriv = (lp - lm) / 0.02;
    r.checks.push_back(check("spectral_derivative", std::abs(deriv - lam) <= 1e-3,
                             "centered difference " + fmt(deriv) + " vs " + fmt(lam) +
                                 " within 1e-3"));
    return r;
}

ExperimentResult exp_clt(int n_threads) {
    ExperimentResult r;
    r.name = "clt";
    const auto t0 = std::chrono::steady_clock::now();
    const SdeModel ou = build_model("ou_quadratic");
    const CltSummary s =
        clt_sample(ou, 50.0, state1d(0.0), 10000, 10000, RngPolicy(20240607), 0.5, n_threads);
    r.checks.push_back(check("variance", s.sample_variance >= 0.45 && s.sample_variance <= 0.55,
                             "var((A_t - t/2)/sqrt(t)) = " + fmt(s.sample_variance) +
                                 " in [0.45, 0.55]"));
    const double ks = ks_distance_normal(s.z, 0.5);
    r.checks.push_back(check("ks", ks < 0.02, "KS distance to N(0, 0.5) = " + fmt(ks) + " < 0.02"));
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.checks.push_back(check("runtime", wall < 60.0, fmt(wall) + " s < 60 s"));
    return r;
}

ExperimentResult exp_degenerate(int n_threads) {
    ExperimentResult r;
    r.name = "degenerate";
    const SdeModel deg = build_model("ou_linear_degenerate");

    // Pathwise telescoping A_t = x0 - x_t (exact in the discretization).
    const double t = 10.0;
    const int steps = 1000;
    const double dt = t / steps;
    double max_err = 0.0;
    const RngPolicy pol(20240608);
    for (int i = 0; i < 50; ++i) {
        const PathSample ps = simulate_path(deg, state1d(0.3), t, steps, pol.stream_for(i));
        max_err = std::max(max_err, std::abs(ps.a_final - (0.3 - ps.x_final[0])));
    }
    r.checks.push_back(check("pathwise", max_err <= 5.0 * dt * t,
                             "max |A_t - (x0 - x_t)| = " + fmt(max_err) + " <= " +
                                 fmt(5.0 * dt * t)));

    std::vector<double> p_grid;
    for (int i = 0; i <= 8; ++i) p_grid.push_back(-1.0 + 0.25 * i);
    const LambdaCurve curve = lambda_curve(deg, p_grid, 40.0, state1d(0.0), 100000, 4000,
                                           RngPolicy(20240609), n_threads);
    double max_abs = 0.0;
    for (const auto& pt : curve.points) max_abs = std::max(max_abs, std::abs(pt.lambda_t));
    r.checks.push_back(check("flat_curve", max_abs <= 0.01,
                             "max |Lambda_t(p)| on [-1,1] = " + fmt(max_abs) + " <= 0.01"));

    std::vector<std::pair<double, double>> stencil;
    for (double p : {-0.2, -0.1, 0.0, 0.1, 0.2}) {
        const SpectralResult sr =
            solve_principal(deg, p, GridSpec::interval(-6.0, 6.0, 1200),
                            LyapunovWeight::exp_quadratic(0.5), 1e-9);
        stencil.emplace_back(p, sr.lambda);
    }
    const double d2 = second_derivative_at_zero(stencil);
    r.checks.push_back(check("second_derivative", std::abs(d2) <= 1e-4,
                             "Lambda''(0) from spectral stencil = " + fmt(d2) + ", |.| <= 1e-4"));
    return r;
}

ExperimentResult exp_rate_function(int) {
    ExperimentResult r;
    r.name = "rate-function";
    const SdeModel ou = build_model("ou_quadratic");
    std::vector<std::pair<double, double>> samples;
    std::vector<double> ps;
    for (double p = -0.5; p <= 0.2501; p += 0.05) ps.push_back(p);
    for (double p = 0.275; p <= 0.4501; p += 0.025) ps.push_back(p);
    for (double p : ps) samples.emplace_back(p, ou_solve(p, 1e-9).lambda);

    const RateFunctionTable table =
        legendre(samples, (Vector(2) << 0.5, 1.0).finished(), 1e-6);
    r.checks.push_back(check("I(1)", std::abs(table.rate[1] - 0.125) <= 2e-3,
                             "I(1) = " + fmt(table.rate[1]) + " vs 0.125 +- 2e-3 (argmax p = " +
                                 fmt(table.argmax_p[1]) + ")"));
    r.checks.push_back(check("I(0.5)", std::abs(table.rate[0]) <= 1e-4,
                             "I(0.5) = " + fmt(table.rate[0]) + ", |.| <= 1e-4"));
    r.checks.push_back(check("interior", !table.boundary_limited[0] && !table.boundary_limited[1],
                             "both argmax points interior to the sampled p range"));
    return r;
}

ExperimentResult exp_mdp(int n_threads) {
    ExperimentResult r;
    r.name = "mdp";
    const SdeModel ou = build_model("ou_quadratic");
    // dt = 5e-3: the tilted expectation amplifies the weak integrator bias by
    // t/a_t = 20, so a coarse step would not sit inside the 25% window.
    const double v = mdp_lmgf(ou, 400.0, state1d(0.0), 0.75, 0.5, 100000, 80000,
                              RngPolicy(20240610), 0.5, n_threads);
    const double ref = 0.0625;  // p^2 Lambda''(0) / 2 at p = 0.5
    r.checks.push_back(check("mdp_lmgf", std::abs(v - ref) <= 0.25 * ref,
                             "scaled lmgf = " + fmt(v) + " vs " + fmt(ref) + " within 25%"));
    return r;
}

ExperimentResult exp_khasminskii(int) {
    ExperimentResult r;
    r.name = "khasminskii";

    // Isotropic noise: the projected angle is a pure constant-potential model
    // and Lambda(p) = p^2 sigma^2 / 2 exactly.
    const double sigma = 1.0;
    std::vector<Matrix2> Bn{Matrix2::Identity() * sigma};
    const SdeModel iso = project_linear_2d(Matrix2::Zero(), Bn);
    for (double p : {1.0, 2.0}) {
        const SpectralResult sr =
            solve_principal(iso, p, GridSpec::circle(256), LyapunovWeight::unit(), 1e-10);
        const double oracle = 0.5 * p * p * sigma * sigma;
        r.checks.push_back(check("isotropic p=" + fmt(p), std::abs(sr.lambda - oracle) <= 1e-4,
                                 "circle lambda = " + fmt(sr.lambda) + " vs " + fmt(oracle)));
    }

    // Pathwise: ||v_t|| integrated in R^2 against exp(A_t) from the projected
    // model, driven by the same increments.
    Matrix2 B0, B1;
    B0 << 0.3, -0.8, 0.5, -0.2;
    B1 << 0.4, 0.1, -0.3, 0.6;
    const SdeModel proj = project_linear_2d(B0, {B1});
    const double t = 1.0;
    const int steps = 10000;
    const double dt = t / steps;
    const double theta0 = 0.7;
    const RngPolicy pol(20240611);
    const PathSample ps = simulate_path(proj, state1d(theta0), t, steps, pol.stream_for(3));

    RngStream stream = pol.stream_for(3);
    Vector2 v(std::cos(theta0), std::sin(theta0));
    const Matrix2 drift_ito = B0 + 0.5 * B1 * B1;
    for (int k = 0; k < steps; ++k) {
        const double dw = std::sqrt(dt) * stream.next_normal();
        v = v + dt * (drift_ito * v) + dw * (B1 * v);
    }
    const double log_growth = std::log(v.norm());
    const double err = std::abs(log_growth - ps.a_final);
    r.checks.push_back(check("pathwise", err <= 0.02,
                             "|log||v_t|| - A_t| = " + fmt(err) + " <= 0.02 at dt = " + fmt(dt)));
    return r;
}

ExperimentResult exp_determinism(int) {
    ExperimentResult r;
    r.name = "determinism";
    const SdeModel ou = build_model("ou_quadratic");
    auto run = [&](int threads) {
        const McLambdaEstimate est =
            estimate_lambda(ou, 0.375, 30.0, state1d(0.0), 100000, 3000, RngPolicy(20240601),
                            threads);
        return lambda_mc_table({est}).str();
    };
    const std::string csv1 = run(1);
    const std::string csv8 = run(8);
    r.checks.push_back(check("threads 1 vs 8", csv1 == csv8,
                             csv1 == csv8 ? "CSV outputs byte-identical"
                                          : "CSV outputs differ between thread counts"));
    return r;
}

ExperimentResult exp_langevin(int n_threads) {
    ExperimentResult r;
    r.name = "langevin";
    const auto t0 = std::chrono::steady_clock::now();
    const SdeModel lg = build_model(
        "langevin", {{"a", 1.0}, {"b", 1.0}, {"beta", 1.0}, {"sigma", 1.0}});
    State x0(3);
    x0 << 1.0, 0.0, 0.5;
    const double t = 20.0;
    const int steps = 20000;  // dt = 1e-3
    const LambdaCurve curve = lambda_curve(lg, {-0.5, 0.0, 0.5}, t, x0, 20000, steps,
                                           RngPolicy(20240613), n_threads);

    bool finite = true;
    int blowups = 0;
    for (const auto& pt : curve.points) {
        finite = finite && std::isfinite(pt.lambda_t);
        blowups = pt.n_blowups;
    }
    std::string vals;
    for (const auto& pt : curve.points) vals += fmt(pt.lambda_t) + " ";
    r.checks.push_back(check("finite", finite, "Lambda_t values: " + vals));
    r.checks.push_back(check("no_blowups", blowups == 0,
                             std::to_string(blowups) + " blowups at dt = 1e-3"));
    // The top exponent may have either sign here, so the sampled curve is
    // monotone decreasing when the linearization is a.s. stable and
    // increasing otherwise; either direction is the expected shape.
    const bool increasing = curve.points[0].lambda_t <= curve.points[1].lambda_t &&
                            curve.points[1].lambda_t <= curve.points[2].lambda_t;
    const bool decreasing = curve.points[0].lambda_t >= curve.points[1].lambda_t &&
                            curve.points[1].lambda_t >= curve.points[2].lambda_t;
    r.checks.push_back(check("monotone", increasing || decreasing,
                             std::string("Lambda_t monotone (") +
                                 (decreasing ? "decreasing" : "non-decreasing") +
                                 ") on {-0.5, 0, 0.5}"));
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.checks.push_back(check("runtime", wall < 120.0, fmt(wall) + " s"));
    return r;
}

using Runner = ExperimentResult (*)(int);

const std::vector<std::pair<std::string, Runner>>& registry() {
    static const std::vector<std::pair<std::string, Runner>> reg = {
        {"ou-closed-form", exp_ou_closed_form},
        {"ou-eigenfunction", exp_ou_eigenfunction},
        {"mc-spectral", exp_mc_spectral},
        {"sandwich", exp_sandwich},
        {"growth-flip", exp_growth_flip},
        {"lambda-prime", exp_lambda_prime},
        {"clt", exp_clt},
        {"degenerate", exp_degenerate},
        {"rate-function", exp_rate_function},
        {"mdp", exp_mdp},
        {"khasminskii", exp_khasminskii},
        {"determinism", exp_determinism},
        {"langevin", exp_langevin},
    };
    return reg;
}

}  // namespace

std::vector<std::string> experiment_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

ExperimentResult run_experiment(const std::string& name, int n_threads) {
    for (const auto& [n, fn] : registry()) {
        if (n == name) {
            const auto t0 = std::chrono::steady_clock::now();
            ExperimentResult r = fn(n_threads);
            r.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return r;
        }
    }
    throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::string format_experiment(const ExperimentResult& r) {
    std::ostringstream out;
    out << "[" << (r.pass() ? "PASS" : "FAIL") << "] " << r.name << "  ("
        << fmt(r.wall_seconds) << " s)\n";
    for (const auto& c : r.checks)
        out << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.label << ": " << c.detail << "\n";
    return out.str();
}

}  // namespace mlyap

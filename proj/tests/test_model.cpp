#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlyap/model.hpp"
#include "mlyap/pathsim.hpp"
#include "mlyap/rng.hpp"

#include <cmath>

using namespace mlyap;

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Heun (Stratonovich midpoint) step for 1d models, used as the independent
// integrator in the Ito/Stratonovich consistency check.
double heun_path(const SdeModel& m, double x0, double t, int n_steps, RngStream stream) {
    const double dt = t / n_steps;
    const double sqdt = std::sqrt(dt);
    double x = x0;
    for (int k = 0; k < n_steps; ++k) {
        double drift0 = m.drift_strat(x);
        Vector dw(m.channels);
        for (int j = 0; j < m.channels; ++j) dw[j] = sqdt * stream.next_normal();
        double pred = x + drift0 * dt;
        for (int j = 0; j < m.channels; ++j) pred += m.noise[j](x) * dw[j];
        double xn = x + 0.5 * (drift0 + m.drift_strat(pred)) * dt;
        for (int j = 0; j < m.channels; ++j)
            xn += 0.5 * (m.noise[j](x) + m.noise[j](pred)) * dw[j];
        x = xn;
    }
    return x;
}

}  // namespace

TEST_CASE("pitchfork catalog entry carries the expected fields") {
    const SdeModel m = build_model("pitchfork_q2", {{"a", 1.0}, {"b", 1.0}, {"sigma", 1.0}});
    CHECK(m.drift_strat(2.0) == doctest::Approx(2.0 - 8.0));  // x - x^3
    CHECK(m.noise[0](0.7) == doctest::Approx(1.0));
    CHECK(m.q0(3.0) == doctest::Approx(9.0));
    CHECK(m.q[0].is_zero());
    // Constant diffusion: no Ito correction.
    CHECK(m.ito_drift(2.0) == doctest::Approx(m.drift_strat(2.0)));
    CHECK(m.q_ito(3.0) == doctest::Approx(9.0));
}

TEST_CASE("Ito correction for state-dependent q: Q = sigma/2 for q = x") {
    // q0 = 0, q1(x) = x, X1 = sigma: Q = q0 + (1/2) X1 q1' = sigma / 2.
    const double sigma = 1.7;
    std::map<std::string, Vector> arrays;
    arrays["drift_coeffs"] = (Vector(2) << 0.0, -1.0).finished();
    arrays["noise_coeffs"] = (Vector(1) << sigma).finished();
    arrays["q_coeffs"] = (Vector(2) << 0.0, 1.0).finished();
    const SdeModel m = build_model("custom", {}, arrays);
    CHECK(m.q_ito(0.0) == doctest::Approx(sigma / 2.0));
    CHECK(m.q_ito(5.0) == doctest::Approx(sigma / 2.0));
}

TEST_CASE("state-dependent noise picks up the Stratonovich correction") {
    // X1 = x: ito drift = drift + x/2.
    std::map<std::string, Vector> arrays;
    arrays["drift_coeffs"] = (Vector(2) << 0.0, -1.0).finished();
    arrays["noise_coeffs"] = (Vector(2) << 0.0, 1.0).finished();
    const SdeModel m = build_model("custom", {}, arrays);
    CHECK(m.ito_drift(2.0) == doctest::Approx(-2.0 + 1.0));
}

TEST_CASE("Q and ito drift are invariant under channel reordering") {
    std::map<std::string, Vector> a1, a2;
    a1["drift_coeffs"] = a2["drift_coeffs"] = (Vector(2) << 0.0, -1.0).finished();
    a1["noise_coeffs_1"] = (Vector(2) << 1.0, 0.5).finished();
    a1["noise_coeffs_2"] = (Vector(3) << 0.0, 0.0, 0.25).finished();
    a1["q_coeffs_1"] = (Vector(2) << 0.0, 1.0).finished();
    a1["q_coeffs_2"] = (Vector(2) << 1.0, -2.0).finished();
    a2["noise_coeffs_1"] = a1["noise_coeffs_2"];
    a2["noise_coeffs_2"] = a1["noise_coeffs_1"];
    a2["q_coeffs_1"] = a1["q_coeffs_2"];
    a2["q_coeffs_2"] = a1["q_coeffs_1"];
    const SdeModel m1 = build_model("custom", {}, a1);
    const SdeModel m2 = build_model("custom", {}, a2);
    for (double x : {-1.5, -0.2, 0.0, 0.73, 2.0}) {
        CHECK(m1.q_ito(x) == doctest::Approx(m2.q_ito(x)).epsilon(1e-14));
        CHECK(m1.ito_drift(x) == doctest::Approx(m2.ito_drift(x)).epsilon(1e-14));
    }
}

TEST_CASE("unknown catalog name and bad rho are rejected") {
    CHECK_THROWS_AS(build_model("no_such_model"), std::invalid_argument);
    CHECK_THROWS_AS(build_model("pitchfork_corr", {{"rho", 1.5}}), std::invalid_argument);
}

TEST_CASE("projection: isotropic noise leaves the angle frozen") {
    std::vector<Matrix2> B{Matrix2::Identity() * 1.3};
    const SdeModel m = project_linear_2d(Matrix2::Zero(), B);
    CHECK(m.space == StateSpace::circle);
    for (double th : {0.0, 0.9, 2.5, 5.1}) {
        CHECK(m.drift_strat(th) == doctest::Approx(0.0));
        CHECK(m.noise[0](th) == doctest::Approx(0.0));
        CHECK(m.q[0](th) == doctest::Approx(1.3));
        CHECK(m.q0(th) == doctest::Approx(0.0));
    }
}

TEST_CASE("projection: diagonal drift matrix gives mu cos 2theta") {
    const double mu = 0.8;
    Matrix2 B0;
    B0 << mu, 0.0, 0.0, -mu;
    const SdeModel m = project_linear_2d(B0, {});
    for (double th : {0.0, 0.3, 1.2, 4.0}) {
        CHECK(m.q0(th) == doctest::Approx(mu * std::cos(2.0 * th)));
        CHECK(m.drift_strat(th) == doctest::Approx(-mu * std::sin(2.0 * th)));
    }
}

TEST_CASE("projection matches the frozen Langevin linearization at x = 0") {
    // B = [[0, 1], [a - 3 b x^2, -beta]] at x = 0 with a = beta = 0:
    // q0(theta) = sin(theta) cos(theta).
    Matrix2 B0;
    B0 << 0.0, 1.0, 0.0, 0.0;
    const SdeModel m = project_linear_2d(B0, {});
    for (double th : {0.1, 0.7, 2.0, 3.9})
        CHECK(m.q0(th) == doctest::Approx(std::sin(th) * std::cos(th)));
}

TEST_CASE("projected circle fields are 2pi-periodic") {
    Matrix2 B0, B1;
    B0 << 0.2, -0.9, 0.4, -0.1;
    B1 << 0.5, 0.3, -0.2, 0.8;
    const SdeModel m = project_linear_2d(B0, {B1});
    for (const ScalarField* f : {&m.ito_drift, &m.q_ito, &m.noise[0], &m.q[0]})
        CHECK(std::abs((*f)(0.0) - (*f)(kTwoPi)) <= 1e-12);
}

TEST_CASE("twisted coefficients: quadratic OU potential") {
    const SdeModel ou = build_model("ou_quadratic", {{"a", 1.0}, {"sigma", 1.0}});
    const TwistedCoefficients tc = twisted_coefficients(ou, 0.7);
    CHECK(tc.potential(2.0) == doctest::Approx(0.7 * 4.0));  // p x^2
    CHECK(tc.b_drift(2.0) == doctest::Approx(-2.0));         // q = 0 leaves drift alone
    CHECK(tc.a_diff(0.3) == doctest::Approx(1.0));
}

TEST_CASE("twisted coefficients vanish at p = 0 and R >= 0") {
    for (const char* name : {"ou_quadratic", "pitchfork_q2", "ou_linear_degenerate"}) {
        const SdeModel m = build_model(name);
        const TwistedCoefficients tc = twisted_coefficients(m, 0.0);
        for (double x : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
            CHECK(tc.potential(x) == doctest::Approx(0.0));
            CHECK(tc.b_drift(x) == doctest::Approx(m.ito_drift(x)));
        }
    }
    const SdeModel corr = build_model("pitchfork_corr", {{"rho", -0.4}});
    const TwistedCoefficients tc = twisted_coefficients(corr, 2.0);
    ScalarField r = ScalarField::constant(0.0);
    for (int j = 0; j < corr.channels; ++j) r = r + corr.q[j] * corr.q[j];
    for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0}) CHECK(r(x) >= 0.0);
}

TEST_CASE("twisted coefficients of the correlated pitchfork") {
    // Y = rho sigma x d/dx and R = x^2: b_drift = a x - b x^3 + p rho sigma x.
    const double rho = 0.6, p = 1.2;
    const SdeModel m =
        build_model("pitchfork_corr", {{"a", 1.0}, {"b", 1.0}, {"sigma", 1.0}, {"rho", rho}});
    const TwistedCoefficients tc = twisted_coefficients(m, p);
    for (double x : {-1.0, 0.4, 2.0}) {
        CHECK(tc.b_drift(x) == doctest::Approx(x - x * x * x + p * rho * x));
        CHECK(tc.potential(x) ==
              doctest::Approx(p * rho / 2.0 + 0.5 * p * p * x * x));  // Q = rho sigma / 2
    }
    const SdeModel lg = build_model("langevin");
    CHECK_THROWS_AS(twisted_coefficients(lg, 1.0), std::invalid_argument);
}

TEST_CASE("Stratonovich and Ito forms agree via Heun vs Euler-Maruyama") {
    // Same Brownian increments, mean-square difference O(dt) on [0, 1].
    std::map<std::string, Vector> arrays;
    arrays["drift_coeffs"] = (Vector(2) << 0.0, -1.0).finished();
    arrays["noise_coeffs"] = (Vector(3) << 1.0, 0.0, 0.2).finished();  // 1 + 0.2 x^2
    const SdeModel m = build_model("custom", {}, arrays);
    const RngPolicy pol(77);
    auto ms_gap = [&](int n_steps) {
        double acc = 0.0;
        const int n_paths = 400;
        for (int i = 0; i < n_paths; ++i) {
            const double xh = heun_path(m, 0.5, 1.0, n_steps, pol.stream_for(i));
            const PathSample pe = simulate_path(m, state1d(0.5), 1.0, n_steps, pol.stream_for(i));
            acc += (xh - pe.x_final[0]) * (xh - pe.x_final[0]);
        }
        return acc / n_paths;
    };
    const double g1 = ms_gap(200);
    const double g2 = ms_gap(400);
    CHECK(g1 < 2e-3);
    CHECK(g2 < g1);  // gap shrinks with dt
}

TEST_CASE("projected log norm reproduces the full 2d linear flow pathwise") {
    Matrix2 B0, B1;
    B0 << -0.1, 0.6, -0.7, 0.2;
    B1 << 0.3, -0.2, 0.1, 0.4;
    const SdeModel proj = project_linear_2d(B0, {B1});
    const double t = 1.0;
    const int steps = 20000;
    const double dt = t / steps;
    const RngPolicy pol(123);
    for (int path = 0; path < 3; ++path) {
        const double th0 = 0.3 + 0.9 * path;
        const PathSample ps = simulate_path(proj, state1d(th0), t, steps, pol.stream_for(path));

        RngStream stream = pol.stream_for(path);
        Vector2 v(std::cos(th0), std::sin(th0));
        const Matrix2 drift_ito = B0 + 0.5 * B1 * B1;
        for (int k = 0; k < steps; ++k) {
            const double dw = std::sqrt(dt) * stream.next_normal();
            v += dt * (drift_ito * v) + dw * (B1 * v);
        }
        CHECK(std::abs(std::log(v.norm()) - ps.a_final) < 0.02);
    }
}

TEST_CASE("langevin catalog model evaluates the hard-coded fields") {
    const SdeModel lg =
        build_model("langevin", {{"a", 1.0}, {"b", 1.0}, {"beta", 1.0}, {"sigma", 1.0}});
    CHECK(lg.dim == 3);
    State x(3);
    x << 0.5, -0.3, 1.1;
    State drift(3);
    lg.drift_at(x, drift);
    CHECK(drift[0] == doctest::Approx(-0.3));
    CHECK(drift[1] == doctest::Approx(0.5 - 0.125 + 0.3));
    const double c = std::cos(1.1), s = std::sin(1.1);
    CHECK(drift[2] == doctest::Approx(-s * s + (1.0 - 3.0 * 0.25) * c * c - s * c));
    CHECK(lg.q_ito_at(x) == doctest::Approx((2.0 - 3.0 * 0.25) * s * c - s * s));
    CHECK(lg.qj_at(x, 0) == 0.0);
}

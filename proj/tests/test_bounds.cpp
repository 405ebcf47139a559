#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlyap/bounds.hpp"
#include "mlyap/spectral.hpp"

#include <cmath>

using namespace mlyap;

namespace {

// Brute-force infimum oracle for the (x^2)^A test-function rates.
double grid_inf(const std::function<double(double)>& f, double lo, double hi, int n) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) best = std::min(best, f(lo + (hi - lo) * i / n));
    return best;
}

}  // namespace

TEST_CASE("polynomial_sup handles the catalog shapes") {
    CHECK(polynomial_sup((Vector(1) << 3.0).finished()) == 3.0);
    CHECK(polynomial_sup((Vector(5) << 3.0, 0.0, 2.0, 0.0, -1.0).finished()) ==
          doctest::Approx(4.0));  // -x^4 + 2x^2 + 3 peaks at x^2 = 1
    CHECK(std::isinf(polynomial_sup((Vector(3) << 0.0, 0.0, 1.0).finished())));
    CHECK(std::isinf(polynomial_sup((Vector(2) << 0.0, 1.0).finished())));
    CHECK(polynomial_sup((Vector(3) << 0.0, 2.0, -1.0).finished()) == doctest::Approx(1.0));
}

TEST_CASE("OU growth report at an admissible p") {
    const SdeModel ou = build_model("ou_quadratic");
    const LyapunovWeight w = LyapunovWeight::exp_quadratic(0.5);
    const Vector scan = Vector::LinSpaced(801, -6.0, 6.0);
    const GrowthReport rep = check_growth(ou, w, 0.375, scan);

    // L_p V / V = 1/2 + (p - 1/2) x^2 with gamma = a/(2 sigma^2).
    for (double x : {-3.0, 0.0, 1.4})
        CHECK(growth_value(ou, w, 0.375, x) ==
              doctest::Approx(0.5 + (0.375 - 0.5) * x * x).epsilon(1e-12));
    CHECK(rep.gamma_sup == doctest::Approx(0.5));
    CHECK(rep.cond0_ok);
    CHECK(rep.cond0_sup == doctest::Approx(0.5));
    CHECK(rep.cond1_ok);
    CHECK(rep.cond2_ok);
    CHECK(rep.cond2_beta > 1.0);
    CHECK(rep.cond3_ok);
    CHECK(rep.tail_trend < -0.1);
    CHECK(rep.all_ok());
}

TEST_CASE("OU tail verdict fails past the critical moment") {
    const SdeModel ou = build_model("ou_quadratic");
    const Vector scan = Vector::LinSpaced(201, -6.0, 6.0);
    const GrowthReport rep = check_growth(ou, LyapunovWeight::exp_quadratic(0.5), 0.6, scan);
    CHECK(!rep.cond1_ok);
    CHECK(!family_admissible(ou, LyapunovWeight::Family::exp_quadratic, 0.6));
}

TEST_CASE("growth-condition flip brackets p* = a^2/(2 sigma^2)") {
    const SdeModel ou = build_model("ou_quadratic");
    double best = 0.0;
    CHECK(family_admissible(ou, LyapunovWeight::Family::exp_quadratic, 0.49, &best));
    CHECK(best == doctest::Approx(0.5).epsilon(0.05));
    CHECK(!family_admissible(ou, LyapunovWeight::Family::exp_quadratic, 0.51));
}

TEST_CASE("pitchfork growth expression matches the hand expansion") {
    // L_p V / V = -2 b g x^4 + (2 g a + 2 g^2 s^2 + p) x^2 + g s^2.
    const SdeModel pf = build_model("pitchfork_q2", {{"a", 1.0}, {"b", 1.0}, {"sigma", 1.0}});
    const double g = 0.7, p = 2.3;
    const LyapunovWeight w = LyapunovWeight::exp_quadratic(g);
    for (double x : {-2.0, -0.3, 0.0, 1.1, 3.0}) {
        const double expected =
            -2.0 * g * std::pow(x, 4) + (2.0 * g + 2.0 * g * g + p) * x * x + g;
        CHECK(growth_value(pf, w, p, x) == doctest::Approx(expected).epsilon(1e-12));
    }
    for (double p_any : {-5.0, 0.0, 4.0, 50.0})
        CHECK(tail_condition_holds(pf, w, p_any));
}

TEST_CASE("quartic weights admit the pitchfork only below b/(2 sigma^2)") {
    const SdeModel pf = build_model("pitchfork_q2", {{"a", 1.0}, {"b", 1.0}, {"sigma", 1.0}});
    CHECK(tail_condition_holds(pf, LyapunovWeight::exp_quartic(0.4), 1.0));
    CHECK(!tail_condition_holds(pf, LyapunovWeight::exp_quartic(0.6), 1.0));
}

TEST_CASE("polynomial weights: admissibility depends on the potential degree") {
    // (1 + x^2)^alpha controls the pitchfork for alpha > p/(2b) but can never
    // control the OU quadratic functional at p > 0.
    const SdeModel pf = build_model("pitchfork_q2", {{"a", 1.0}, {"b", 1.0}, {"sigma", 1.0}});
    CHECK(tail_condition_holds(pf, LyapunovWeight::poly(2.0), 1.0));
    CHECK(!tail_condition_holds(pf, LyapunovWeight::poly(0.3), 1.0));
    const SdeModel ou = build_model("ou_quadratic");
    CHECK(!family_admissible(ou, LyapunovWeight::Family::poly, 0.2));
    CHECK(family_admissible(ou, LyapunovWeight::Family::poly, -0.2));
}

TEST_CASE("upper bound at p = 10 reproduces the pitchfork constants") {
    const SdeModel pf = build_model("pitchfork_q2", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}});
    const UpperBoundResult ub = upper_bound(pf, 10.0, LyapunovWeight::Family::exp_quadratic);
    const double gp = std::sqrt(10.0 / 6.0);
    const double at_paper_gamma = std::pow(2.0 * gp * gp + 10.0, 2) / (8.0 * gp) + gp;
    CHECK(at_paper_gamma == doctest::Approx(18.50).epsilon(1e-3));
    CHECK(ub.gamma_star <= at_paper_gamma + 1e-9);  // optimum can only improve
    CHECK(ub.gamma_star > 15.9);
    CHECK(ub.param == doctest::Approx(1.23).epsilon(0.05));
}

TEST_CASE("OU upper bound brackets the closed-form lambda") {
    const SdeModel ou = build_model("ou_quadratic");
    const UpperBoundResult ub = upper_bound(ou, 0.375, LyapunovWeight::Family::exp_quadratic);
    CHECK(ub.gamma_star <= 0.5 + 1e-9);  // gamma = 1/2 realizes 0.5
    CHECK(ub.gamma_star >= 0.25);        // never below Lambda(p)
    CHECK_THROWS_AS(upper_bound(ou, 0.6, LyapunovWeight::Family::exp_quadratic),
                    std::runtime_error);
}

TEST_CASE("lower bound closed forms agree with brute-force infima") {
    const SdeModel q2 = build_model("pitchfork_q2", {{"a", 0.5}, {"b", 1.0}, {"sigma", 1.0}});
    const double p = 10.0, A = 3.0;
    const double oracle_q2 = grid_inf(
        [&](double x) {
            const double x2 = std::max(x * x, 1e-12);
            return 2.0 * A * 0.5 - 2.0 * A * x2 + A * (2.0 * A - 1.0) / x2 + p * x2;
        },
        1e-3, 10.0, 2000000);
    CHECK(lower_bound_at(q2, p, A) == doctest::Approx(oracle_q2).epsilon(1e-6));

    const SdeModel q4 = build_model("pitchfork_q4", {{"a", 0.5}, {"b", 1.0}, {"sigma", 1.0}});
    const double oracle_q4 = grid_inf(
        [&](double x) {
            const double x2 = std::max(x * x, 1e-12);
            return 2.0 * A * 0.5 - 2.0 * A * x2 + A * (2.0 * A - 1.0) / x2 + p * x2 * x2;
        },
        1e-3, 10.0, 2000000);
    CHECK(lower_bound_at(q4, p, A) == doctest::Approx(oracle_q4).epsilon(1e-6));
}

TEST_CASE("lower bound at the paper's A = p/(3b) reproduces 15.87") {
    const SdeModel pf = build_model("pitchfork_q2", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}});
    CHECK(lower_bound_at(pf, 10.0, 10.0 / 3.0) == doctest::Approx(15.87).epsilon(1e-3));
    Vector A_grid = Vector::LinSpaced(400, 0.5, 4.99);
    const LowerBoundResult lb = lower_bound(pf, 10.0, A_grid);
    CHECK(lb.gamma_tilde >= 15.87);
    CHECK(lb.A == doctest::Approx(3.41).epsilon(0.05));
}

TEST_CASE("degenerate test exponent A -> 1/2 leaves only the linear term") {
    const SdeModel pf = build_model("pitchfork_q2", {{"a", 2.0}, {"b", 1.0}, {"sigma", 1.0}});
    CHECK(lower_bound_at(pf, 10.0, 0.5) == doctest::Approx(2.0));  // 2 A a = a
}

TEST_CASE("domain constraints make the lower bound unavailable at small p") {
    const SdeModel pf = build_model("pitchfork_q2", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}});
    CHECK(std::isnan(lower_bound_at(pf, 0.9, 0.6)));
    CHECK_THROWS_AS(lower_bound(pf, 0.9, Vector::LinSpaced(64, 0.5, 50.0)), std::runtime_error);
    const SdeModel ou = build_model("ou_quadratic");
    CHECK_THROWS_AS(lower_bound(ou, 1.0, Vector::LinSpaced(8, 1.0, 4.0)), std::invalid_argument);
}

TEST_CASE("sandwich holds around the spectral eigenvalue") {
    const SdeModel pf = build_model("pitchfork_q2", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}});
    for (double p : {10.0, 30.0}) {
        const BoundsReport br = bounds_report(pf, p, LyapunovWeight::Family::exp_quadratic,
                                              Vector::LinSpaced(512, 0.5, p / 2.0 * 0.9999));
        REQUIRE(br.has_upper);
        REQUIRE(br.has_lower);
        CHECK(br.sandwich_ok);
        const SpectralResult sr =
            solve_principal(pf, p, GridSpec::interval(-6.0, 6.0, 800),
                            LyapunovWeight::exp_quadratic(br.upper.param), 1e-8);
        CHECK(br.lower.gamma_tilde <= sr.lambda + 1e-6);
        CHECK(sr.lambda <= br.upper.gamma_star + 1e-6);
    }
}

TEST_CASE("upper bound grows monotonically along the p ladder") {
    const SdeModel pf = build_model("pitchfork_q2", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}});
    double prev = 0.0;
    for (double p : {1.0, 3.0, 10.0, 30.0, 100.0}) {
        const double ub = upper_bound(pf, p, LyapunovWeight::Family::exp_quadratic).gamma_star;
        CHECK(ub >= prev - 1e-12);
        prev = ub;
    }
}

TEST_CASE("q4 scaling limit: gamma_tilde / p^3 approaches 16/27") {
    const SdeModel q4 = build_model("pitchfork_q4", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}});
    const double p = 1000.0;
    const double A = 8.0 * p * p / 9.0;
    const double ratio = lower_bound_at(q4, p, A) / (p * p * p);
    CHECK(ratio == doctest::Approx(16.0 / 27.0).epsilon(0.02));
}

TEST_CASE("asymptotic scenarios expose the limiting constants") {
    const AsymptoticReport q2 =
        asymptotic_constants("q2", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}}, {10.0, 100.0});
    CHECK(q2.exponent == 1.5);
    CHECK(q2.paper_constant_lo == doctest::Approx(std::pow(2.0 / 3.0, 1.5)));

    const AsymptoticReport i1 = asymptotic_constants(
        "ito_x", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}, {"rho", 1.0}}, {30.0});
    CHECK(i1.exponent == 3.0);
    CHECK(i1.paper_constant_lo == doctest::Approx(16.0 / 27.0).epsilon(1e-12));
    // Same number via the correlated formula at rho = 1 (algebraic identity).
    const double s3 = 2.0;
    CHECK((s3 + 2.0) * (s3 + 2.0) * (s3 - 1.0) / 27.0 == doctest::Approx(16.0 / 27.0));

    const AsymptoticReport im1 = asymptotic_constants(
        "ito_x", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}, {"rho", -1.0}}, {30.0});
    CHECK(im1.exponent == 1.0);
    CHECK(im1.paper_constant_lo == doctest::Approx(-0.5));
    CHECK(im1.paper_constant_hi == doctest::Approx(0.5));

    CHECK_THROWS_AS(asymptotic_constants("nope", {}, {10.0}), std::invalid_argument);
}

TEST_CASE("q4 ladder constants approach the cubic-growth limit") {
    const AsymptoticReport rep =
        asymptotic_constants("q4", {{"a", 0.0}, {"b", 1.0}, {"sigma", 1.0}}, {30.0, 300.0});
    const double cref = 16.0 / 27.0;
    CHECK(std::abs(rep.constant_upper - cref) <= 0.05 * cref);
    CHECK(std::abs(rep.constant_lower - cref) <= 0.05 * cref);
    CHECK(rep.constant_lower <= rep.constant_upper);
}

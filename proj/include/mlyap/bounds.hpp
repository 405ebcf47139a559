#pragma once

#include "mlyap/model.hpp"
#include "mlyap/weight.hpp"

#include <string>
#include <vector>

namespace mlyap {

/// Numerical audit of the growth conditions (0)-(3) on L_p V / V for one
/// weight at one p.  Tail verdicts come from exact leading-coefficient
/// analysis (the catalog keeps every field polynomial), never from grid
/// extrapolation; the sup values are grid scans.
struct GrowthReport {
    double p = 0.0;
    LyapunovWeight weight;
    double gamma_sup = 0.0;   // sup of L_p V / V over the scan grid
    double tail_trend = 0.0;  // outer-20% slope of L_p V / V vs |x|
    bool cond0_ok = false;    // L V / V bounded above
    double cond0_sup = 0.0;
    bool cond1_ok = false;    // L_p V / V -> -inf
    bool cond2_ok = false;    // some beta > 1 with L_{beta p} V / V bounded
    double cond2_beta = 0.0;
    double cond2_sup = 0.0;
    bool cond3_ok = false;    // some beta > 1 with L_p V^beta / V^beta bounded
    double cond3_beta = 0.0;
    double cond3_sup = 0.0;
    bool all_ok() const { return cond0_ok && cond1_ok && cond2_ok && cond3_ok; }
};

struct UpperBoundResult {
    double gamma_star = 0.0;  // min over the family parameter of sup_x L_p V / V
    double param = 0.0;       // argmin (gamma or alpha)
    LyapunovWeight::Family family = LyapunovWeight::Family::exp_quadratic;
};

struct LowerBoundResult {
    double gamma_tilde = 0.0;  // max over A of inf_x L_p g / g, g = (x^2)^A
    double A = 0.0;            // argmax
};

struct BoundsReport {
    double p = 0.0;
    bool has_upper = false;
    UpperBoundResult upper;
    bool has_lower = false;
    LowerBoundResult lower;
    bool sandwich_ok = true;  // lower <= upper whenever both exist
};

struct AsymptoticLadderRow {
    double p = 0.0;
    double upper = 0.0;
    double lower = 0.0;
};

struct AsymptoticReport {
    std::string scenario;
    double exponent = 0.0;
    // Single limiting constant unless rho = -1, where only an interval is known.
    double paper_constant_lo = 0.0;
    double paper_constant_hi = 0.0;
    double constant_upper = 0.0;  // upper ladder value / p^exponent at largest p
    double constant_lower = 0.0;
    std::vector<AsymptoticLadderRow> ladder;
};

/// Exact value of L_p V / V at x (the conjugation identity expanded in U).
double growth_value(const SdeModel& model, const LyapunovWeight& w, double p, double x);

GrowthReport check_growth(const SdeModel& model, const LyapunovWeight& w, double p,
                          const Vector& scan);

/// Condition (1) alone: L_p V / V -> -inf, decided symbolically.
bool tail_condition_holds(const SdeModel& model, const LyapunovWeight& w, double p);

/// Searches the family parameter for any weight passing the tail test.
bool family_admissible(const SdeModel& model, LyapunovWeight::Family family, double p,
                       double* best_param = nullptr);

/// Gamma* = min over admissible family parameters of the exact sup_x L_p V / V.
/// Throws if no parameter passes the tail test.
UpperBoundResult upper_bound(const SdeModel& model, double p, LyapunovWeight::Family family);

/// Sub-eigenfunction bound with test family g = (x^2)^A, closed form per
/// pitchfork scenario (Q = x^2, Q = x^4, or the Ito-integral functional with
/// correlation rho).  Throws for models outside the family.
LowerBoundResult lower_bound(const SdeModel& model, double p, const Vector& A_grid);

/// Evaluates the closed-form lower-bound rate at one test exponent A
/// (NaN where the domain constraint fails); exposed for oracle tests.
double lower_bound_at(const SdeModel& model, double p, double A);

BoundsReport bounds_report(const SdeModel& model, double p, LyapunovWeight::Family family,
                           const Vector& A_grid);

/// Sweeps both bounds over a geometric p ladder and compares the scaled
/// constants against the known large-p limits.  scenario: q2 | q4 | ito_x.
AsymptoticReport asymptotic_constants(const std::string& scenario,
                                      const std::map<std::string, double>& params,
                                      const std::vector<double>& p_ladder);

/// Supremum over the real line of a polynomial given by ascending
/// coefficients; +inf when unbounded above.
double polynomial_sup(const Vector& coeffs);

}  // namespace mlyap

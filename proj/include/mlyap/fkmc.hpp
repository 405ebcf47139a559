#pragma once

#include "mlyap/pathsim.hpp"

#include <vector>

namespace mlyap {

/// Monte Carlo estimate of the finite-time log moment generating function
///   lambda_t = (1/t) log mean exp(p A_t)
/// together with its first two p-derivatives (exponentially weighted ratio
/// formulas) and a batch-means standard error for lambda_t.
struct McLambdaEstimate {
    double p = 0.0;
    double t = 0.0;
    double x0 = 0.0;
    double lambda_t = 0.0;
    double dlambda_t = 0.0;
    double d2lambda_t = 0.0;
    double se_lambda = 0.0;
    double ess = 0.0;  // effective sample size of the weights exp(p A_t)
    int n_paths = 0;   // paths that entered the estimate (blowups excluded)
    int n_blowups = 0;
    bool low_confidence = false;  // ess below threshold; estimate still returned
};

struct LambdaCurve {
    std::vector<McLambdaEstimate> points;
    /// Largest decrease between consecutive chord slopes of the sampled
    /// curve; zero for a perfectly convex sample.
    double max_convexity_violation = 0.0;
};

struct CltSummary {
    std::vector<double> z;      // (A_t - t lambda_ref) / sqrt(t), finite paths only
    double sample_variance = 0.0;
    int n_blowups = 0;
};

/// Weighted estimate from precomputed path endpoints; callers that already
/// hold a batch (lambda_curve, the CLI) reuse it for every p.
McLambdaEstimate lambda_from_samples(double p, double t, double x0,
                                     const std::vector<PathSample>& samples, int n_blowups);

McLambdaEstimate estimate_lambda(const SdeModel& model, double p, double t, const State& x0,
                                 int n_paths, int n_steps, const RngPolicy& policy,
                                 int n_threads = 0);

/// One simulated batch re-weighted at every p in the sorted grid.
LambdaCurve lambda_curve(const SdeModel& model, const std::vector<double>& p_grid, double t,
                         const State& x0, int n_paths, int n_steps, const RngPolicy& policy,
                         int n_threads = 0);

CltSummary clt_sample(const SdeModel& model, double t, const State& x0, int n_paths, int n_steps,
                      const RngPolicy& policy, double lambda_ref, int n_threads = 0);

/// Kolmogorov-Smirnov distance of the samples against N(0, s2).
double ks_distance_normal(std::vector<double> z, double s2);

/// Moderate-deviation log moment generating function at scale b_t = t^beta_exp:
///   (1/a_t) log mean exp(p a_t (A_t - t lambda_ref) / b_t),  a_t = b_t^2 / t.
double mdp_lmgf(const SdeModel& model, double t, const State& x0, double beta_exp, double p,
                int n_paths, int n_steps, const RngPolicy& policy, double lambda_ref,
                int n_threads = 0);

/// Per-x0 profile of exp(-t lambda_ref) * mean exp(p A_t); proportional to the
/// principal eigenfunction for large t.  All start points share the same
/// streams so shape comparisons see correlated noise.
std::vector<double> mult_ergodic_profile(const SdeModel& model, double p, double t,
                                         const std::vector<double>& x0_grid, int n_paths,
                                         int n_steps, const RngPolicy& policy, double lambda_ref,
                                         int n_threads = 0);

}  // namespace mlyap

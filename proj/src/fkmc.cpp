#include "mlyap/fkmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlyap {

namespace {

constexpr double kLowEssThreshold = 30.0;

std::vector<double> valid_a_values(const std::vector<PathSample>& samples) {
    std::vector<double> a;
    a.reserve(samples.size());
    for (const auto& s : samples)
        if (!s.blowup) a.push_back(s.a_final);
    return a;
}

}  // namespace

McLambdaEstimate lambda_from_samples(double p, double t, double x0,
                                     const std::vector<PathSample>& samples, int n_blowups) {
    if (samples.size() < 2)
        throw std::invalid_argument("lambda_from_samples: need at least 2 paths");
    const std::vector<double> a = valid_a_values(samples);
    const auto n = static_cast<std::ptrdiff_t>(a.size());
    if (n == 0) throw std::runtime_error("lambda_from_samples: all paths blown up");

    // Max-shifted weights keep exp() in range for any p*A magnitude.
    double shift = 0.0;
    if (p != 0.0) {
        shift = p * a[0];
        for (double v : a) shift = std::max(shift, p * v);
    }
    std::vector<double> w(n), aw(n), a2w(n), w2(n);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        w[i] = std::exp(p * a[i] - shift);
        aw[i] = a[i] * w[i];
        a2w[i] = a[i] * aw[i];
        w2[i] = w[i] * w[i];
    }
    const double sw = pairwise_sum(w.data(), n);
    const double saw = pairwise_sum(aw.data(), n);
    const double sa2w = pairwise_sum(a2w.data(), n);
    const double sw2 = pairwise_sum(w2.data(), n);

    McLambdaEstimate est;
    est.p = p;
    est.t = t;
    est.x0 = x0;
    est.n_paths = static_cast<int>(n);
    est.n_blowups = n_blowups;
    est.lambda_t = (shift + std::log(sw / static_cast<double>(n))) / t;
    const double mean_a = saw / sw;
    est.dlambda_t = mean_a / t;
    est.d2lambda_t = (sa2w / sw - mean_a * mean_a) / t;
    est.ess = sw * sw / sw2;
    est.low_confidence = est.ess < kLowEssThreshold;

    // Delta method on sqrt(n) batch means of the shifted weights.
    const auto n_batches = static_cast<std::ptrdiff_t>(std::max(2.0, std::floor(std::sqrt(n))));
    const std::ptrdiff_t bs = n / n_batches;
    if (bs >= 1) {
        std::vector<double> bm(n_batches);
        for (std::ptrdiff_t b = 0; b < n_batches; ++b)
            bm[b] = pairwise_sum(w.data() + b * bs, bs) / static_cast<double>(bs);
        const double mbar = pairwise_sum(bm.data(), n_batches) / static_cast<double>(n_batches);
        double ss = 0.0;
        for (double v : bm) ss += (v - mbar) * (v - mbar);
        const double se_mean = std::sqrt(ss / (n_batches - 1)) / std::sqrt(double(n_batches));
        est.se_lambda = se_mean / (sw / static_cast<double>(n)) / t;
    }
    return est;
}

McLambdaEstimate estimate_lambda(const SdeModel& model, double p, double t, const State& x0,
                                 int n_paths, int n_steps, const RngPolicy& policy,
                                 int n_threads) {
    if (n_paths < 2) throw std::invalid_argument("estimate_lambda: n_paths must be >= 2");
    const BatchResult batch = simulate_batch(model, x0, t, n_steps, n_paths, policy, n_threads);
    return lambda_from_samples(p, t, x0[0], batch.samples, batch.n_blowups);
}

LambdaCurve lambda_curve(const SdeModel& model, const std::vector<double>& p_grid, double t,
                         const State& x0, int n_paths, int n_steps, const RngPolicy& policy,
                         int n_threads) {
    if (p_grid.empty()) throw std::invalid_argument("lambda_curve: empty p grid");
    if (!std::is_sorted(p_grid.begin(), p_grid.end()))
        throw std::invalid_argument("lambda_curve: p grid must be sorted");
    const BatchResult batch = simulate_batch(model, x0, t, n_steps, n_paths, policy, n_threads);

    LambdaCurve curve;
    curve.points.reserve(p_grid.size());
    for (double p : p_grid)
        curve.points.push_back(lambda_from_samples(p, t, x0[0], batch.samples, batch.n_blowups));

    for (std::size_t i = 0; i + 2 < curve.points.size(); ++i) {
        const auto& l = curve.points[i];
        const auto& m = curve.points[i + 1];
        const auto& r = curve.points[i + 2];
        const double s1 = (m.lambda_t - l.lambda_t) / (m.p - l.p);
        const double s2 = (r.lambda_t - m.lambda_t) / (r.p - m.p);
        curve.max_convexity_violation = std::max(curve.max_convexity_violation, s1 - s2);
    }
    return curve;
}

CltSummary clt_sample(const SdeModel& model, double t, const State& x0, int n_paths, int n_steps,
                      const RngPolicy& policy, double lambda_ref, int n_threads) {
    const BatchResult batch = simulate_batch(model, x0, t, n_steps, n_paths, policy, n_threads);
    CltSummary out;
    out.n_blowups = batch.n_blowups;
    const double sqt = std::sqrt(t);
    for (const auto& s : batch.samples)
        if (!s.blowup) out.z.push_back((s.a_final - t * lambda_ref) / sqt);
    const auto n = static_cast<std::ptrdiff_t>(out.z.size());
    if (n >= 2) {
        const double mean = pairwise_sum(out.z.data(), n) / static_cast<double>(n);
        double ss = 0.0;
        for (double v : out.z) ss += (v - mean) * (v - mean);
        out.sample_variance = ss / (n - 1);
    }
    return out;
}

double ks_distance_normal(std::vector<double> z, double s2) {
    if (z.empty()) return 1.0;
    std::sort(z.begin(), z.end());
    const double s = std::sqrt(s2);
    const auto n = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double f = 0.5 * (1.0 + std::erf(z[i] / (s * std::sqrt(2.0))));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

double mdp_lmgf(const SdeModel& model, double t, const State& x0, double beta_exp, double p,
                int n_paths, int n_steps, const RngPolicy& policy, double lambda_ref,
                int n_threads) {
    if (beta_exp <= 0.5 || beta_exp >= 1.0)
        throw std::invalid_argument("mdp_lmgf: beta_exp must lie in (1/2, 1)");
    const double bt = std::pow(t, beta_exp);
    const double at = bt * bt / t;
    const BatchResult batch = simulate_batch(model, x0, t, n_steps, n_paths, policy, n_threads);
    std::vector<double> y;
    y.reserve(batch.samples.size());
    for (const auto& s : batch.samples)
        if (!s.blowup) y.push_back(p * at * (s.a_final - t * lambda_ref) / bt);
    const auto n = static_cast<std::ptrdiff_t>(y.size());
    if (n == 0) throw std::runtime_error("mdp_lmgf: all paths blown up");
    const double shift = *std::max_element(y.begin(), y.end());
    std::vector<double> w(n);
    for (std::ptrdiff_t i = 0; i < n; ++i) w[i] = std::exp(y[i] - shift);
    return (shift + std::log(pairwise_sum(w.data(), n) / static_cast<double>(n))) / at;
}

std::vector<double> mult_ergodic_profile(const SdeModel& model, double p, double t,
                                         const std::vector<double>& x0_grid, int n_paths,
                                         int n_steps, const RngPolicy& policy, double lambda_ref,
                                         int n_threads) {
    std::vector<double> profile;
    profile.reserve(x0_grid.size());
    for (double x0 : x0_grid) {
        const BatchResult batch =
            simulate_batch(model, state1d(x0), t, n_steps, n_paths, policy, n_threads);
        const auto est = lambda_from_samples(p, t, x0, batch.samples, batch.n_blowups);
        profile.push_back(std::exp(t * (est.lambda_t - lambda_ref)));
    }
    return profile;
}

}  // namespace mlyap

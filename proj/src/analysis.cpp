#include "mlyap/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace mlyap {

namespace {

double trapezoid(const Vector& x, const Vector& y) {
    double s = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
        s += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return s;
}

}  // namespace

StationaryDensity1D stationary_density(const SdeModel& model, double x_max, int n) {
    if (!model.is_1d() || model.space != StateSpace::line)
        throw std::invalid_argument("stationary_density: requires a 1d line model");
    if (model.channels < 1)
        throw std::invalid_argument("stationary_density: model carries no noise");
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("stationary_density: n must be odd >= 3");

    StationaryDensity1D out;
    out.grid = Vector::LinSpaced(n, -x_max, x_max);
    const double h = out.grid[1] - out.grid[0];
    const int mid = (n - 1) / 2;

    ScalarField a_field = ScalarField::constant(0.0);
    for (int j = 0; j < model.channels; ++j)
        a_field = a_field + model.noise[j] * model.noise[j];
    Vector a(n), f(n);
    for (int i = 0; i < n; ++i) {
        a[i] = a_field(out.grid[i]);
        if (a[i] <= 0.0)
            throw std::invalid_argument("stationary_density: diffusion vanishes on the grid");
        f[i] = 2.0 * model.ito_drift(out.grid[i]) / a[i];
    }

    // log density up to a constant: int_0^x 2 b / a - log a.
    Vector logd(n);
    logd[mid] = -std::log(a[mid]);
    for (int i = mid; i + 1 < n; ++i)
        logd[i + 1] = logd[i] + 0.5 * h * (f[i] + f[i + 1]) - std::log(a[i + 1] / a[i]);
    for (int i = mid; i > 0; --i)
        logd[i - 1] = logd[i] - 0.5 * h * (f[i - 1] + f[i]) - std::log(a[i - 1] / a[i]);

    const double shift = logd.maxCoeff();
    out.density = (logd.array() - shift).exp();
    if (out.density[0] > 1e-10 || out.density[n - 1] > 1e-10)
        throw std::runtime_error("stationary_density: tail does not decay on [-x_max, x_max]; "
                                 "density may be non-normalizable");
    const double mass = trapezoid(out.grid, out.density);
    out.density /= mass;
    out.normalization_residual = std::abs(trapezoid(out.grid, out.density) - 1.0);
    return out;
}

double lambda_as(const SdeModel& model, double x_max, int n) {
    const StationaryDensity1D d = stationary_density(model, x_max, n);
    Vector integrand(d.grid.size());
    for (Eigen::Index i = 0; i < d.grid.size(); ++i)
        integrand[i] = model.q_ito(d.grid[i]) * d.density[i];
    return trapezoid(d.grid, integrand);
}

double second_derivative_at_zero(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() != 5)
        throw std::invalid_argument("second_derivative_at_zero: need a 5-point stencil");
    const double h = samples[3].first;
    if (h <= 0.0) throw std::invalid_argument("second_derivative_at_zero: bad stencil spacing");
    const double expected[5] = {-2.0 * h, -h, 0.0, h, 2.0 * h};
    for (int i = 0; i < 5; ++i)
        if (std::abs(samples[i].first - expected[i]) > 1e-12 * h)
            throw std::invalid_argument("second_derivative_at_zero: stencil must be symmetric "
                                        "{-2h, -h, 0, h, 2h}");
    const double f0 = samples[0].second, f1 = samples[1].second, f2 = samples[2].second,
                 f3 = samples[3].second, f4 = samples[4].second;
    return (-f0 + 16.0 * f1 - 30.0 * f2 + 16.0 * f3 - f4) / (12.0 * h * h);
}

RateFunctionTable legendre(const std::vector<std::pair<double, double>>& lambda_samples,
                           const Vector& s_grid, double conv_tol) {
    const auto n = static_cast<Eigen::Index>(lambda_samples.size());
    if (n < 3) throw std::invalid_argument("legendre: need at least 3 Lambda samples");
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        if (!(lambda_samples[i].first < lambda_samples[i + 1].first))
            throw std::invalid_argument("legendre: p samples must be strictly increasing");
    for (Eigen::Index i = 0; i + 2 < n; ++i) {
        const auto& [pl, ll] = lambda_samples[i];
        const auto& [pm, lm] = lambda_samples[i + 1];
        const auto& [pr, lr] = lambda_samples[i + 2];
        const double s1 = (lm - ll) / (pm - pl);
        const double s2 = (lr - lm) / (pr - pm);
        if (s1 - s2 > 3.0 * conv_tol)
            throw std::invalid_argument("legendre: Lambda samples are non-convex beyond "
                                        "tolerance");
    }

    RateFunctionTable out;
    out.lambda_samples = lambda_samples;
    out.s = s_grid;
    out.rate.resize(s_grid.size());
    out.argmax_p.resize(s_grid.size());
    out.boundary_limited.assign(s_grid.size(), 0);

    for (Eigen::Index j = 0; j < s_grid.size(); ++j) {
        const double s = s_grid[j];
        Eigen::Index k = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double v = s * lambda_samples[i].first - lambda_samples[i].second;
            if (v > best) {
                best = v;
                k = i;
            }
        }
        double p_star = lambda_samples[k].first;
        double i_star = best;
        if (k == 0 || k == n - 1) {
            out.boundary_limited[j] = 1;
        } else {
            // Parabolic refinement through the three points around the argmax.
            const double pl = lambda_samples[k - 1].first, pm = lambda_samples[k].first,
                         pr = lambda_samples[k + 1].first;
            const double vl = s * pl - lambda_samples[k - 1].second;
            const double vm = best;
            const double vr = s * pr - lambda_samples[k + 1].second;
            const double num = (pm - pl) * (pm - pl) * (vm - vr) -
                               (pm - pr) * (pm - pr) * (vm - vl);
            const double den = (pm - pl) * (vm - vr) - (pm - pr) * (vm - vl);
            if (std::abs(den) > 0.0) {
                const double p_ref = pm - 0.5 * num / den;
                if (p_ref > pl && p_ref < pr) {
                    // Lagrange value of the same parabola at its vertex.
                    const double l0 = (p_ref - pm) * (p_ref - pr) / ((pl - pm) * (pl - pr));
                    const double l1 = (p_ref - pl) * (p_ref - pr) / ((pm - pl) * (pm - pr));
                    const double l2 = (p_ref - pl) * (p_ref - pm) / ((pr - pl) * (pr - pm));
                    const double v_ref = l0 * vl + l1 * vm + l2 * vr;
                    if (v_ref >= vm) {
                        p_star = p_ref;
                        i_star = v_ref;
                    }
                }
            }
        }
        out.rate[j] = std::max(i_star, 0.0);
        out.argmax_p[j] = p_star;
    }
    return out;
}

PoissonResidual poisson_residual(const SdeModel& model, const ScalarField& phi1,
                                 double lambda_ref, const Vector& grid) {
    if (!model.is_1d()) throw std::invalid_argument("poisson_residual: requires a 1d model");
    const ScalarField dphi = phi1.derivative();
    const ScalarField d2phi = dphi.derivative();
    ScalarField a = ScalarField::constant(0.0);
    for (int j = 0; j < model.channels; ++j) a = a + model.noise[j] * model.noise[j];

    PoissonResidual out;
    out.channel_sup = Vector::Zero(model.channels);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double lphi = 0.5 * a(x) * d2phi(x) + model.ito_drift(x) * dphi(x);
        out.equation_sup =
            std::max(out.equation_sup, std::abs(model.q_ito(x) + lphi - lambda_ref));
        for (int j = 0; j < model.channels; ++j)
            out.channel_sup[j] = std::max(
                out.channel_sup[j], std::abs(model.q[j](x) + model.noise[j](x) * dphi(x)));
    }
    return out;
}

}  // namespace mlyap

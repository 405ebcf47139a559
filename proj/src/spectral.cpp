#include "mlyap/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace mlyap {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

Vector interp_to(const GridSpec& coarse, const Vector& values, const GridSpec& fine) {
    const Vector xc = coarse.nodes();
    const Vector xf = fine.nodes();
    Vector out(xf.size());
    if (coarse.domain == GridSpec::Domain::circle) {
        const double period = 2.0 * kPi;
        const double dc = coarse.spacing();
        for (Eigen::Index i = 0; i < xf.size(); ++i) {
            double t = std::fmod(xf[i], period) / dc;
            const auto k = static_cast<Eigen::Index>(std::floor(t));
            const double w = t - k;
            const Eigen::Index k0 = k % xc.size();
            const Eigen::Index k1 = (k + 1) % xc.size();
            out[i] = (1.0 - w) * values[k0] + w * values[k1];
        }
        return out;
    }
    // Interval: Dirichlet zeros just outside the interior nodes.
    auto value_at = [&](double x) {
        if (x <= xc[0]) {
            const double w = (x - coarse.x_min) / (xc[0] - coarse.x_min);
            return w * values[0];
        }
        if (x >= xc[xc.size() - 1]) {
            const double w = (coarse.x_max - x) / (coarse.x_max - xc[xc.size() - 1]);
            return w * values[values.size() - 1];
        }
        const double t = (x - xc[0]) / coarse.spacing();
        const auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(t)),
                                              xc.size() - 2);
        const double w = t - k;
        return (1.0 - w) * values[k] + w * values[k + 1];
    };
    for (Eigen::Index i = 0; i < xf.size(); ++i) out[i] = std::max(value_at(xf[i]), 0.0);
    return out;
}

}  // namespace

GridSpec GridSpec::interval(double x_min, double x_max, int n) {
    if (n < 16) throw std::invalid_argument("GridSpec: need at least 16 nodes");
    if (!(x_min < x_max)) throw std::invalid_argument("GridSpec: x_min must be below x_max");
    GridSpec g;
    g.domain = Domain::interval;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n = n;
    return g;
}

GridSpec GridSpec::circle(int n) {
    if (n < 16) throw std::invalid_argument("GridSpec: need at least 16 nodes");
    GridSpec g;
    g.domain = Domain::circle;
    g.x_min = 0.0;
    g.x_max = 2.0 * kPi;
    g.n = n;
    return g;
}

double GridSpec::spacing() const {
    return domain == Domain::interval ? (x_max - x_min) / (n + 1) : 2.0 * kPi / n;
}

Vector GridSpec::nodes() const {
    Vector x(n);
    const double d = spacing();
    for (int i = 0; i < n; ++i)
        x[i] = domain == Domain::interval ? x_min + (i + 1) * d : i * d;
    return x;
}

void ConjugatedOperator::apply(const Vector& x, Vector& y) const {
    const Eigen::Index n = diag.size();
    y.resize(n);
    y[0] = diag[0] * x[0] + upper[0] * x[1];
    for (Eigen::Index i = 1; i + 1 < n; ++i)
        y[i] = lower[i] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
    y[n - 1] = lower[n - 1] * x[n - 2] + diag[n - 1] * x[n - 1];
    if (circular) {
        y[0] += lower[0] * x[n - 1];
        y[n - 1] += upper[n - 1] * x[0];
    }
}

double ConjugatedOperator::inf_norm() const {
    double m = 0.0;
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        m = std::max(m, std::abs(lower[i]) + std::abs(diag[i]) + std::abs(upper[i]));
    return m;
}

int ConjugatedOperator::n_upwinded() const {
    int c = 0;
    for (char f : upwinded) c += f != 0;
    return c;
}

ConjugatedOperator assemble(const SdeModel& model, double p, const GridSpec& grid,
                            const LyapunovWeight& weight) {
    if (!model.is_1d()) throw std::invalid_argument("assemble: model dimension must be 1");
    if (grid.domain == GridSpec::Domain::circle) {
        if (model.space != StateSpace::circle)
            throw std::invalid_argument("assemble: circle grid needs a circle model");
        if (!weight.is_unit())
            throw std::invalid_argument("assemble: the circle is compact; use the unit weight");
    } else {
        if (model.space != StateSpace::line)
            throw std::invalid_argument("assemble: interval grid needs a line model");
        if (weight.is_unit() || !tail_condition_holds(model, weight, p))
            throw std::invalid_argument(
                "assemble: weight " + weight.describe() + " fails the growth tail test at p = " +
                std::to_string(p) +
                "; an inadmissible weight can converge to a spurious eigenfunction outside the "
                "weighted space");
    }

    const TwistedCoefficients tc = twisted_coefficients(model, p);
    const Vector x = grid.nodes();
    const double d = grid.spacing();

    ConjugatedOperator op;
    op.grid = grid;
    op.weight = weight;
    op.p = p;
    op.circular = grid.domain == GridSpec::Domain::circle;
    const Eigen::Index n = x.size();
    op.lower.resize(n);
    op.diag.resize(n);
    op.upper.resize(n);
    op.upwinded.assign(n, 0);

    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = tc.a_diff(x[i]);
        const double b = tc.b_drift(x[i]);
        const double du = weight.du(x[i]);
        const double d2u = weight.d2u(x[i]);
        const double b_conj = b + a * du;
        const double c_conj = 0.5 * a * (d2u + du * du) + b * du + tc.potential(x[i]);

        const double diff = 0.5 * a / (d * d);
        const double adv = b_conj / (2.0 * d);
        if (diff >= std::abs(adv)) {
            op.lower[i] = diff - adv;
            op.upper[i] = diff + adv;
            op.diag[i] = -2.0 * diff + c_conj;
        } else {
            const double fwd = std::max(b_conj, 0.0) / d;
            const double bwd = std::max(-b_conj, 0.0) / d;
            op.lower[i] = diff + bwd;
            op.upper[i] = diff + fwd;
            op.diag[i] = -2.0 * diff - fwd - bwd + c_conj;
            op.upwinded[i] = 1;
        }
    }
    return op;
}

SpectralResult principal_eigpair(const ConjugatedOperator& op, double tol, int max_iter,
                                 const Vector* warm_start) {
    const Eigen::Index n = op.diag.size();
    const double shift = 1.0 + op.inf_norm();

    // Work on M = sI + H, elementwise nonnegative by construction.
    ConjugatedOperator m = op;
    m.diag.array() += shift;

    Vector x = warm_start && warm_start->size() == n ? warm_start->cwiseMax(0.0).eval()
                                                     : Vector::Ones(n);
    if (x.maxCoeff() <= 0.0) x = Vector::Ones(n);
    x /= x.maxCoeff();

    Vector y(n);
    double lambda_m = shift;
    double residual = std::numeric_limits<double>::infinity();
    double prev_residual = residual;
    double gap = 0.0;
    constexpr int kCheckEvery = 16;

    int it = 0;
    for (; it < max_iter; ++it) {
        m.apply(x, y);
        if (it % kCheckEvery == 0) {
            lambda_m = x.dot(y) / x.squaredNorm();
            residual = (y - lambda_m * x).cwiseAbs().maxCoeff() / x.cwiseAbs().maxCoeff();
            const double lambda_h = lambda_m - shift;
            if (prev_residual > residual && std::isfinite(prev_residual)) {
                const double rho = std::pow(residual / prev_residual, 1.0 / kCheckEvery);
                if (rho < 1.0) gap = (1.0 - rho) * lambda_m;
            }
            prev_residual = residual;
            if (residual <= tol * std::max(1.0, std::abs(lambda_h))) {
                x = y / y.maxCoeff();
                ++it;
                break;
            }
        }
        x = y / y.maxCoeff();
    }

    SpectralResult out;
    out.p = op.p;
    out.lambda = lambda_m - shift;
    out.grid = op.grid;
    out.weight = op.weight;
    out.iterations = it;
    if (x.minCoeff() < 0.0)
        throw std::logic_error("principal_eigpair: eigenvector sign change; the assembled "
                               "operator is not Perron-positive (assembly bug)");
    out.eigvec = x;
    out.residual = residual;
    out.gap_estimate = gap;
    if (!(residual <= tol * std::max(1.0, std::abs(out.lambda))))
        throw std::runtime_error("principal_eigpair: no convergence after " +
                                 std::to_string(max_iter) +
                                 " iterations (residual = " + std::to_string(residual) + ")");
    return out;
}

SpectralResult solve_principal(const SdeModel& model, double p, const GridSpec& grid,
                               const LyapunovWeight& weight, double tol) {
    if (grid.n > 400) {
        GridSpec coarse = grid;
        coarse.n = grid.n / 2;
        const SpectralResult cr = solve_principal(model, p, coarse, weight, tol);
        const Vector guess = interp_to(coarse, cr.eigvec, grid);
        return principal_eigpair(assemble(model, p, grid, weight), tol, 4'000'000, &guess);
    }
    return principal_eigpair(assemble(model, p, grid, weight), tol);
}

RefinementReport refine_and_validate(const SdeModel& model, double p,
                                     const LyapunovWeight& weight, const GridSpec& base_grid,
                                     double tol) {
    RefinementReport rep;
    for (int level = 0; level < 3; ++level) {
        GridSpec g = base_grid;
        g.n = base_grid.n << level;
        const SpectralResult r = solve_principal(model, p, g, weight, tol);
        rep.lambdas.emplace_back(g.n, r.lambda);
        if (level == 2) rep.finest = r;
    }
    const double l0 = rep.lambdas[0].second;
    const double l1 = rep.lambdas[1].second;
    const double l2 = rep.lambdas[2].second;
    const double d01 = l1 - l0;
    const double d12 = l2 - l1;
    rep.lambda_richardson = l2 + d12 / 3.0;
    if (d12 != 0.0 && d01 * d12 > 0.0) rep.observed_order = std::log2(d01 / d12);
    rep.monotone_ok = std::abs(d12) <= std::abs(d01) + 1e-14;

    if (base_grid.domain == GridSpec::Domain::interval) {
        rep.domain_checked = true;
        GridSpec wide = rep.finest.grid;
        wide.x_min *= 1.5;
        wide.x_max *= 1.5;
        wide.n = static_cast<int>(std::lround(1.5 * (rep.finest.grid.n + 1))) - 1;
        const SpectralResult rw = solve_principal(model, p, wide, weight, tol);
        rep.domain_sensitivity = std::abs(rw.lambda - rep.finest.lambda);
    }
    return rep;
}

}  // namespace mlyap

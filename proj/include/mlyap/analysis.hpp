#pragma once

#include "mlyap/model.hpp"

#include <utility>
#include <vector>

namespace mlyap {

struct StationaryDensity1D {
    Vector grid;
    Vector density;  // trapezoid-normalized to mass 1
    double normalization_residual = 0.0;
};

struct RateFunctionTable {
    Vector s;
    Vector rate;      // I(s) = sup_p (p s - Lambda(p)), parabola-refined
    Vector argmax_p;
    std::vector<char> boundary_limited;  // argmax pinned to the sampled p range
    std::vector<std::pair<double, double>> lambda_samples;
};

struct PoissonResidual {
    double equation_sup = 0.0;            // sup |Q + L phi1 - lambda_ref|
    Vector channel_sup;                   // sup |qj + Xj phi1| per channel
};

/// Stationary density of a 1d elliptic model, density ~ exp(int 2 b/a) / a.
/// Throws when the diffusion vanishes on the grid or the tail fails to decay.
StationaryDensity1D stationary_density(const SdeModel& model, double x_max = 8.0, int n = 4001);

/// Almost-sure rate lambda = int Q dnu by trapezoid quadrature.
double lambda_as(const SdeModel& model, double x_max = 8.0, int n = 4001);

/// Fourth-order centered second difference from a 5-point symmetric stencil
/// of (p, Lambda(p)) samples.
double second_derivative_at_zero(const std::vector<std::pair<double, double>>& samples);

/// Legendre transform of sampled Lambda values.  Samples must be sorted in p
/// and convex up to conv_tol (chord-slope decreases beyond 3x it are errors).
RateFunctionTable legendre(const std::vector<std::pair<double, double>>& lambda_samples,
                           const Vector& s_grid, double conv_tol = 1e-8);

/// Defect of the Poisson equation Q + L phi1 = lambda_ref for a candidate
/// phi1, plus the per-channel degeneracy defects |qj + Xj phi1|.
PoissonResidual poisson_residual(const SdeModel& model, const ScalarField& phi1,
                                 double lambda_ref, const Vector& grid);

}  // namespace mlyap

#pragma once

#include "mlyap/scalar_field.hpp"
#include "mlyap/types.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace mlyap {

enum class StateSpace { line, circle, langevin3d };

/// A diffusion dx = X0 dt + sum_j Xj o dWj together with the additive
/// functional A_t = int q0 dt + sum_j int qj o dWj, stored in Stratonovich
/// form and converted to Ito form on construction.  One-dimensional models
/// (line or circle) carry exact coefficient fields; the 3d Langevin-with-
/// linearization model is a hard-coded catalog entry, simulation only.
struct SdeModel {
    StateSpace space = StateSpace::line;
    int dim = 1;
    int channels = 0;
    std::string label;

    // 1d coefficient data (line: polynomials, circle: trig polynomials).
    ScalarField drift_strat;
    ScalarField ito_drift;               // X0 + (1/2) sum_j Xj' Xj
    std::vector<ScalarField> noise;      // Xj per channel
    ScalarField q0;
    std::vector<ScalarField> q;          // qj per channel
    ScalarField q_ito;                   // Q = q0 + (1/2) sum_j Xj qj'

    // langevin3d parameters (state x, y, theta; noise sigma on y only).
    double lg_a = 0, lg_b = 0, lg_beta = 0, lg_sigma = 0;

    // Simulation guard: |state| beyond this marks the path blown up.
    double guard_radius = 10.0;

    // Catalog identity, used by the bounds module to match closed forms.
    std::string catalog_name;
    std::map<std::string, double> params;

    bool is_1d() const { return dim == 1; }
    bool periodic_coord(int i) const {
        return (space == StateSpace::circle && i == 0) ||
               (space == StateSpace::langevin3d && i == 2);
    }

    // Pointwise evaluation used by the path integrator (Ito convention).
    void drift_at(const State& x, State& out) const {
        if (is_1d()) {
            out[0] = ito_drift(x[0]);
            return;
        }
        // Langevin: state (x, y, theta), additive noise, so Ito = Stratonovich.
        const double xx = x[0], yy = x[1], th = x[2];
        const double c = std::cos(th), s = std::sin(th);
        out[0] = yy;
        out[1] = lg_a * xx - lg_b * xx * xx * xx - lg_beta * yy;
        out[2] = -s * s + (lg_a - 3.0 * lg_b * xx * xx) * c * c - lg_beta * s * c;
    }

    void noise_col_at(const State& x, int j, State& out) const {
        if (is_1d()) {
            out[0] = noise[j](x[0]);
            return;
        }
        (void)j;
        out[0] = 0.0;
        out[1] = lg_sigma;
        out[2] = 0.0;
    }

    double q_ito_at(const State& x) const {
        if (is_1d()) return q_ito(x[0]);
        const double xx = x[0], th = x[2];
        const double c = std::cos(th), s = std::sin(th);
        return (1.0 + lg_a - 3.0 * lg_b * xx * xx) * s * c - lg_beta * s * s;
    }

    double qj_at(const State& x, int j) const {
        if (is_1d()) return q[j](x[0]);
        return 0.0;
    }
};

/// Drift, diffusion and potential of the twisted generator
/// L_p = L + pY + pQ + (p^2/2) R at a fixed p, as exact fields:
///   a_diff    = sum_j Xj^2
///   b_drift   = ito_drift + p sum_j qj Xj
///   potential = p Q + (p^2/2) sum_j qj^2
struct TwistedCoefficients {
    double p = 0.0;
    ScalarField a_diff;
    ScalarField b_drift;
    ScalarField potential;
};

/// Builds a catalog model.  Known names: ou_quadratic, ou_linear_degenerate,
/// pitchfork_q2, pitchfork_q4, pitchfork_corr, linear2d_projected, langevin,
/// custom.  Parameters not supplied fall back to per-model defaults.
SdeModel build_model(const std::string& name, const std::map<std::string, double>& params = {},
                     const std::map<std::string, Vector>& arrays = {});

/// Khas'minskii angle projection of dv = B0 v dt + sum_j Bj v o dWj on R^2.
/// Returns a circle-state model in theta with
///   drift/noise = tangential components <Bj u, u_perp>,  u = (cos, sin),
///   qj = <Bj u, u>, all exact degree-2 trig polynomials.
SdeModel project_linear_2d(const Matrix2& B0, const std::vector<Matrix2>& B);

/// Twisted-generator coefficients for a 1d model at parameter p.
TwistedCoefficients twisted_coefficients(const SdeModel& model, double p);

}  // namespace mlyap

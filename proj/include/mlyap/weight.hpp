#pragma once

#include "mlyap/scalar_field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mlyap {

/// Parametric Lyapunov weight V = exp(U) >= 1 on the line, with U = log V and
/// its first two derivatives in closed form:
///   exp_quadratic: U = gamma x^2
///   exp_quartic:   U = gamma x^4
///   poly:          U = alpha log(1 + x^2),  V = (1 + x^2)^alpha
/// `unit` (V = 1) is the no-conjugation case used on the circle.
struct LyapunovWeight {
    enum class Family { unit, exp_quadratic, exp_quartic, poly };

    Family family = Family::unit;
    double param = 0.0;  // gamma for exp families, alpha for poly

    LyapunovWeight() = default;
    LyapunovWeight(Family f, double par) : family(f), param(par) {
        if (f != Family::unit && par <= 0.0)
            throw std::invalid_argument("LyapunovWeight: parameter must be positive");
    }

    static LyapunovWeight unit() { return LyapunovWeight(); }
    static LyapunovWeight exp_quadratic(double gamma) {
        return {Family::exp_quadratic, gamma};
    }
    static LyapunovWeight exp_quartic(double gamma) { return {Family::exp_quartic, gamma}; }
    static LyapunovWeight poly(double alpha) { return {Family::poly, alpha}; }

    bool is_unit() const { return family == Family::unit; }

    double u(double x) const {
        switch (family) {
            case Family::unit: return 0.0;
            case Family::exp_quadratic: return param * x * x;
            case Family::exp_quartic: return param * x * x * x * x;
            case Family::poly: return param * std::log1p(x * x);
        }
        return 0.0;
    }
    double du(double x) const {
        switch (family) {
            case Family::unit: return 0.0;
            case Family::exp_quadratic: return 2.0 * param * x;
            case Family::exp_quartic: return 4.0 * param * x * x * x;
            case Family::poly: return 2.0 * param * x / (1.0 + x * x);
        }
        return 0.0;
    }
    double d2u(double x) const {
        switch (family) {
            case Family::unit: return 0.0;
            case Family::exp_quadratic: return 2.0 * param;
            case Family::exp_quartic: return 12.0 * param * x * x;
            case Family::poly: {
                const double w = 1.0 + x * x;
                return 2.0 * param * (1.0 - x * x) / (w * w);
            }
        }
        return 0.0;
    }
    double v(double x) const { return std::exp(u(x)); }

    /// U as an exact field for the exponential families (poly has no
    /// polynomial U; callers use the rationalized form instead).
    bool u_is_polynomial() const {
        return family == Family::exp_quadratic || family == Family::exp_quartic ||
               family == Family::unit;
    }
    ScalarField u_field() const {
        switch (family) {
            case Family::unit: return ScalarField::constant(0.0);
            case Family::exp_quadratic:
                return ScalarField::polynomial((Vector(3) << 0, 0, param).finished());
            case Family::exp_quartic:
                return ScalarField::polynomial((Vector(5) << 0, 0, 0, 0, param).finished());
            case Family::poly: break;
        }
        throw std::logic_error("LyapunovWeight: poly family has no polynomial U");
    }

    std::string describe() const {
        switch (family) {
            case Family::unit: return "unit";
            case Family::exp_quadratic: return "exp_quadratic(gamma=" + std::to_string(param) + ")";
            case Family::exp_quartic: return "exp_quartic(gamma=" + std::to_string(param) + ")";
            case Family::poly: return "poly(alpha=" + std::to_string(param) + ")";
        }
        return "?";
    }

    static Family family_from_name(const std::string& name) {
        if (name == "unit") return Family::unit;
        if (name == "exp_quadratic") return Family::exp_quadratic;
        if (name == "exp_quartic") return Family::exp_quartic;
        if (name == "poly") return Family::poly;
        throw std::invalid_argument("LyapunovWeight: unknown family '" + name + "'");
    }
};

}  // namespace mlyap

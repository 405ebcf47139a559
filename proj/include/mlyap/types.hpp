#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace mlyap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Matrix2 = Eigen::Matrix2d;
using Vector2 = Eigen::Vector2d;

// SDE state vector: dynamic size, stack-allocated up to dimension 3.
using State = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

/// Fixed-order pairwise tree reduction. Result depends only on the element
/// order, never on how work was scheduled, and carries O(log n) rounding.
double pairwise_sum(const double* data, std::ptrdiff_t n);
double pairwise_sum(const Vector& v);

}  // namespace mlyap

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ivdae {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Largest singular value (operator 2-norm).
double spectral_norm(const Matrix& m);
double spectral_norm(const CMatrix& m);

/// Extreme singular values of a (possibly empty or rectangular) matrix; {0, 0} for empty input.
struct SingularRange {
  double min = 0.0;
  double max = 0.0;
};
SingularRange singular_range(const Matrix& m);

bool all_finite(const Matrix& m);

/// Reciprocal of the 1-norm condition estimate; 0 for an exactly singular factorization.
double reciprocal_condition(const Eigen::PartialPivLU<Matrix>& lu);
double reciprocal_condition(const Eigen::PartialPivLU<CMatrix>& lu);

/// Geometric grid of `count` points from lo to hi inclusive.
Eigen::ArrayXd geometric_grid(double lo, double hi, Index count);

}  // namespace ivdae

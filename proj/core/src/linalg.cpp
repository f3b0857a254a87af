#include "ivdae/linalg.hpp"

#include <cmath>

namespace ivdae {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

SingularRange singular_range(const Matrix& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  return {sv(sv.size() - 1), sv(0)};
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

namespace {

// Eigen's estimator divides by the pivots, so an exact zero pivot must be caught first.
template <typename Lu>
double rcond_of(const Lu& lu) {
  if (lu.rows() == 0) return 1.0;
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (!(pivots.minCoeff() > 0.0) || !pivots.allFinite()) return 0.0;
  const double rc = lu.rcond();
  return std::isfinite(rc) ? rc : 0.0;
}

}  // namespace

double reciprocal_condition(const Eigen::PartialPivLU<Matrix>& lu) { return rcond_of(lu); }

double reciprocal_condition(const Eigen::PartialPivLU<CMatrix>& lu) { return rcond_of(lu); }

Eigen::ArrayXd geometric_grid(double lo, double hi, Index count) {
  Eigen::ArrayXd g(count);
  if (count == 1) {
    g(0) = lo;
    return g;
  }
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (Index i = 0; i < count; ++i) g(i) = lo * std::exp(step * static_cast<double>(i));
  g(count - 1) = hi;
  return g;
}

}  // namespace ivdae

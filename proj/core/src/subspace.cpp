#include "ivdae/subspace.hpp"

#include <algorithm>
#include <string>

#include "ivdae/errors.hpp"

namespace ivdae {

namespace {

void require_ambient(const Subspace& s, const Subspace& t, const char* op) {
  if (s.ambient_dim() != t.ambient_dim()) {
    throw DimensionMismatch(std::string(op) + ": ambient dimensions " +
                            std::to_string(s.ambient_dim()) + " and " +
                            std::to_string(t.ambient_dim()) + " differ");
  }
}

void require_square(const Matrix& m, Index n, const char* op) {
  if (m.rows() != m.cols() || m.rows() != n) {
    throw DimensionMismatch(std::string(op) + ": expected " + std::to_string(n) + "x" +
                            std::to_string(n) + " matrix, got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
}

Index numerical_rank(const Eigen::VectorXd& sv, double threshold) {
  Index r = 0;
  while (r < sv.size() && sv(r) > threshold) ++r;
  return r;
}

}  // namespace

double RankTolerance::threshold(double scale, Index rows, Index cols) const noexcept {
  return relative * scale * static_cast<double>(std::max<Index>({rows, cols, 1}));
}

RankTolerance RankTolerance::coarser(RankTolerance a, RankTolerance b) noexcept {
  return a.relative >= b.relative ? a : b;
}

Subspace Subspace::zero(Index ambient_dim, RankTolerance tol) {
  return Subspace(Matrix(ambient_dim, 0), tol);
}

Subspace Subspace::full(Index ambient_dim, RankTolerance tol) {
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim), tol);
}

Subspace Subspace::from_orthonormal(Matrix basis, RankTolerance tol) {
  return Subspace(std::move(basis), tol);
}

Vector Subspace::coordinates(const Vector& v) const {
  if (v.size() != ambient_dim()) throw DimensionMismatch("coordinates: vector length mismatch");
  return basis_.transpose() * v;
}

Vector Subspace::project(const Vector& v) const { return basis_ * coordinates(v); }

double Subspace::distance(const Vector& v) const { return (v - project(v)).norm(); }

Matrix Subspace::projector() const { return basis_ * basis_.transpose(); }

Subspace column_space(const Matrix& columns, RankTolerance tol, double scale) {
  const Index n = columns.rows();
  if (columns.cols() == 0 || n == 0) return Subspace::zero(n, tol);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double ref = scale >= 0.0 ? scale : sv(0);
  if (ref == 0.0) return Subspace::zero(n, tol);
  const Index r = numerical_rank(sv, tol.threshold(ref, columns.rows(), columns.cols()));
  return Subspace::from_orthonormal(svd.matrixU().leftCols(r), tol);
}

Subspace span(const std::vector<Vector>& vectors, RankTolerance tol) {
  if (vectors.empty()) throw InvalidArgument("span: no vectors given");
  const Index n = vectors.front().size();
  if (n < 1) throw InvalidArgument("span: vectors must have length >= 1");
  Matrix cols(n, static_cast<Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != n) {
      throw DimensionMismatch("span: vector " + std::to_string(j) + " has length " +
                              std::to_string(vectors[j].size()) + ", expected " + std::to_string(n));
    }
    cols.col(static_cast<Index>(j)) = vectors[j];
  }
  return column_space(cols, tol);
}

Subspace image(const Matrix& m, const Subspace& s) {
  require_square(m, s.ambient_dim(), "image");
  return image(m, s, spectral_norm(m));
}

Subspace image(const Matrix& m, const Subspace& s, double operator_norm) {
  require_square(m, s.ambient_dim(), "image");
  if (s.dim() == 0 || operator_norm == 0.0) return Subspace::zero(s.ambient_dim(), s.tol());
  // Rank relative to ||M||, not to ||M B||: an image that is pure rounding noise must come out {0}.
  return column_space(m * s.basis(), s.tol(), operator_norm);
}

Subspace kernel(const Matrix& m, RankTolerance tol) {
  if (m.size() == 0) return Subspace::full(m.cols(), tol);
  return kernel(m, tol, spectral_norm(m));
}

Subspace kernel(const Matrix& m, RankTolerance tol, double scale) {
  const Index cols = m.cols();
  if (cols == 0) return Subspace::zero(0, tol);
  if (m.rows() == 0 || scale == 0.0) return Subspace::full(cols, tol);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Index r = numerical_rank(svd.singularValues(), tol.threshold(scale, m.rows(), m.cols()));
  return Subspace::from_orthonormal(svd.matrixV().rightCols(cols - r), tol);
}

Subspace preimage(const Matrix& m, const Subspace& s) {
  require_square(m, s.ambient_dim(), "preimage");
  return preimage(m, s, spectral_norm(m));
}

Subspace preimage(const Matrix& m, const Subspace& s, double operator_norm) {
  require_square(m, s.ambient_dim(), "preimage");
  const Index n = s.ambient_dim();
  if (s.dim() == n) return Subspace::full(n, s.tol());
  const Matrix residual = m - s.basis() * (s.basis().transpose() * m);
  return kernel(residual, s.tol(), operator_norm);
}

Subspace sum(const Subspace& s, const Subspace& t) {
  require_ambient(s, t, "sum");
  const RankTolerance tol = RankTolerance::coarser(s.tol(), t.tol());
  Matrix cols(s.ambient_dim(), s.dim() + t.dim());
  cols << s.basis(), t.basis();
  return column_space(cols, tol);
}

Subspace intersect(const Subspace& s, const Subspace& t) {
  require_ambient(s, t, "intersect");
  const RankTolerance tol = RankTolerance::coarser(s.tol(), t.tol());
  const Index n = s.ambient_dim();
  if (s.dim() == 0 || t.dim() == 0) return Subspace::zero(n, tol);
  // Coefficients c with S c in T: kernel of (I - P_T) S, whose columns have unit norm.
  const Matrix residual = s.basis() - t.basis() * (t.basis().transpose() * s.basis());
  const Subspace coeffs = kernel(residual, tol, 1.0);
  return Subspace::from_orthonormal(s.basis() * coeffs.basis(), tol);
}

double max_distance(const Subspace& s, const Subspace& t) {
  require_ambient(s, t, "max_distance");
  if (t.dim() == 0) return 0.0;
  const Matrix residual = t.basis() - s.basis() * (s.basis().transpose() * t.basis());
  return residual.colwise().norm().maxCoeff();
}

bool contains(const Subspace& s, const Subspace& t) {
  require_ambient(s, t, "contains");
  if (t.dim() == 0) return true;
  if (t.dim() > s.dim()) return false;
  const RankTolerance tol = RankTolerance::coarser(s.tol(), t.tol());
  const Matrix residual = t.basis() - s.basis() * (s.basis().transpose() * t.basis());
  for (Index j = 0; j < t.dim(); ++j) {
    if (residual.col(j).norm() > 10.0 * tol.relative * t.basis().col(j).norm()) return false;
  }
  return true;
}

bool equal(const Subspace& s, const Subspace& t) { return contains(s, t) && contains(t, s); }

Vector project(const Subspace& s, const Vector& v) { return s.project(v); }

double distance(const Subspace& s, const Vector& v) { return s.distance(v); }

double orthonormality_defect(const Subspace& s) {
  if (s.dim() == 0) return 0.0;
  const Matrix gram = s.basis().transpose() * s.basis();
  return (gram - Matrix::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff();
}

}  // namespace ivdae

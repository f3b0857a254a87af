#pragma once

#include <vector>

#include "ivdae/linalg.hpp"

namespace ivdae {

/// Relative rank rule: a singular value sigma_i counts as zero iff
/// sigma_i <= relative * scale * max(rows, cols), where `scale` is the largest
/// singular value of the factored matrix unless an operator norm is supplied.
struct RankTolerance {
  double relative = 1e-10;

  double threshold(double scale, Index rows, Index cols) const noexcept;
  /// The larger (coarser) of two tolerances.
  static RankTolerance coarser(RankTolerance a, RankTolerance b) noexcept;
};

/// Linear subspace of R^n held as an orthonormal basis (n x d, d may be 0).
class Subspace {
 public:
  static Subspace zero(Index ambient_dim, RankTolerance tol = {});
  static Subspace full(Index ambient_dim, RankTolerance tol = {});
  /// Wraps a basis that is already orthonormal. No re-orthogonalization.
  static Subspace from_orthonormal(Matrix basis, RankTolerance tol = {});

  Index ambient_dim() const noexcept { return basis_.rows(); }
  Index dim() const noexcept { return basis_.cols(); }
  const Matrix& basis() const noexcept { return basis_; }
  RankTolerance tol() const noexcept { return tol_; }

  Vector project(const Vector& v) const;
  double distance(const Vector& v) const;
  /// Orthogonal projector onto the subspace.
  Matrix projector() const;
  /// Coordinates of v in the basis (basis^T v).
  Vector coordinates(const Vector& v) const;

 private:
  Subspace(Matrix basis, RankTolerance tol) : basis_(std::move(basis)), tol_(tol) {}

  Matrix basis_;
  RankTolerance tol_;
};

Subspace span(const std::vector<Vector>& vectors, RankTolerance tol = {});
/// Column space of `columns`. A non-negative `scale` replaces sigma_max in the rank rule.
Subspace column_space(const Matrix& columns, RankTolerance tol = {}, double scale = -1.0);

/// {M b : b in S}. Rank decided relative to ||M||_2.
Subspace image(const Matrix& m, const Subspace& s);
Subspace image(const Matrix& m, const Subspace& s, double operator_norm);

/// {x : M x in S} = ker((I - P_S) M). Rank decided relative to ||M||_2.
Subspace preimage(const Matrix& m, const Subspace& s);
Subspace preimage(const Matrix& m, const Subspace& s, double operator_norm);

Subspace kernel(const Matrix& m, RankTolerance tol = {});
Subspace kernel(const Matrix& m, RankTolerance tol, double scale);

Subspace sum(const Subspace& s, const Subspace& t);
Subspace intersect(const Subspace& s, const Subspace& t);

/// T subset of S: every basis vector t of T has distance(S, t) <= 10 * tol * ||t||.
bool contains(const Subspace& s, const Subspace& t);
bool equal(const Subspace& s, const Subspace& t);

Vector project(const Subspace& s, const Vector& v);
double distance(const Subspace& s, const Vector& v);

/// Largest distance from a basis vector of T to S (0 for T = {0}).
double max_distance(const Subspace& s, const Subspace& t);

/// ||B^T B - I||_max for the basis B.
double orthonormality_defect(const Subspace& s);

}  // namespace ivdae

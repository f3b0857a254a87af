#pragma once

// Quad-precision helpers for samples at large |s|, where the resolvent of a
// high-index pencil is too ill-conditioned for double arithmetic.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include "ivdae/linalg.hpp"
#include "ivdae/pencil.hpp"
#include "ivdae/subspace.hpp"

namespace ivdae::detail {

using Quad = boost::multiprecision::float128;
using QMatrix = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;
using QVector = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;

inline constexpr double kQuadEpsilon = 1.925929944387236e-34;

inline QMatrix to_quad(const Matrix& m) { return m.cast<Quad>(); }

inline Matrix to_double(const QMatrix& m) {
  Matrix out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out(i, j) = static_cast<double>(m(i, j));
  return out;
}

inline Quad norm1(const QMatrix& m) {
  Quad best = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    Quad col = 0;
    for (Index i = 0; i < m.rows(); ++i) col += boost::multiprecision::abs(m(i, j));
    if (col > best) best = col;
  }
  return best;
}

/// (sE + A)^{-1} in quad precision with its 1-norm condition number
/// (infinite when the factorization breaks down). Keep `lu` for solves: applying the
/// explicit inverse to a vector is much less accurate at high condition numbers.
struct QuadResolvent {
  Eigen::PartialPivLU<QMatrix> lu;
  QMatrix inverse;
  double condition = 0.0;
};

inline QuadResolvent quad_resolvent(const QMatrix& e, const QMatrix& a, const Quad& s) {
  QuadResolvent out;
  const QMatrix m = s * e + a;
  out.lu.compute(m);
  out.inverse = out.lu.inverse();
  bool finite = true;
  for (Index j = 0; j < out.inverse.cols() && finite; ++j)
    for (Index i = 0; i < out.inverse.rows(); ++i)
      if (!boost::multiprecision::isfinite(out.inverse(i, j))) {
        finite = false;
        break;
      }
  out.condition = finite ? static_cast<double>(norm1(m) * norm1(out.inverse))
                         : std::numeric_limits<double>::infinity();
  return out;
}

/// (sE + A)^{-1} rhs; throws SingularMatrix when the factorization breaks down.
QMatrix quad_solve(const QMatrix& e, const QMatrix& a, const Quad& s, const QMatrix& rhs);

/// Orthonormal bases of IV_0..IV_{j_max} recomputed in quad precision by the chain
/// recursion (column space of E B, then kernel of (I - Q Q^T) A), using the dimensions
/// of the double-precision chain as ranks. `moved` receives the largest distance from a
/// double basis vector to the corresponding quad subspace.
std::vector<QMatrix> quad_iv_bases(const Pencil& p, const std::vector<Subspace>& spaces, int j_max,
                                   double& moved);

}  // namespace ivdae::detail

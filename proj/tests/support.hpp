#pragma once

#include <cmath>
#include <vector>

#include "ivdae/linalg.hpp"
#include "ivdae/pencil.hpp"
#include "ivdae/rng.hpp"

namespace ivdae::test {

inline Matrix jordan(Index n) {
  Matrix m = Matrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
  return m;
}

inline Matrix blockdiag(const std::vector<Matrix>& blocks) {
  Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix m = Matrix::Zero(n, n);
  Index off = 0;
  for (const auto& b : blocks) {
    m.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return m;
}

inline Vector unit(Index n, Index i) { return Vector::Unit(n, i); }

inline Matrix gaussian(Index rows, Index cols, CounterRng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

inline Vector gaussian(Index n, CounterRng& rng) { return gaussian(n, 1, rng).col(0); }

inline Matrix orthogonal(Index n, CounterRng& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Unit triangular times unit triangular with sparse +-1 entries: integer, unimodular.
inline Matrix unimodular(Index n, CounterRng& rng) {
  Matrix l = Matrix::Identity(n, n), u = Matrix::Identity(n, n);
  const double density = 2.0 / static_cast<double>(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < i; ++j) {
      if (rng.uniform() < density) l(i, j) = rng.uniform() < 0.5 ? -1.0 : 1.0;
      if (rng.uniform() < density) u(j, i) = rng.uniform() < 0.5 ? -1.0 : 1.0;
    }
  }
  return l * u;
}

/// (P E0 Q, P A0 Q) with integer P, Q, so E keeps the exact rank of E0 in double.
inline Pencil transformed(const Matrix& e0, const Matrix& a0, CounterRng& rng) {
  const Matrix p = unimodular(e0.rows(), rng);
  const Matrix q = unimodular(e0.rows(), rng);
  return Pencil(p * e0 * q, p * a0 * q);
}

/// Regular pencil with an n1-dimensional stable block and the given nilpotent blocks.
/// The stable block J is dyadic upper triangular with eigenvalues in [1, 2].
inline Pencil structured(Index n1, const std::vector<Index>& blocks, CounterRng& rng) {
  std::vector<Matrix> es{Matrix::Identity(n1, n1)};
  Matrix j = Matrix::Zero(n1, n1);
  for (Index r = 0; r < n1; ++r) {
    j(r, r) = 1.0 + 0.25 * static_cast<double>(rng.uniform_int(0, 4));
    for (Index c = r + 1; c < n1; ++c) j(r, c) = 0.125 * static_cast<double>(rng.uniform_int(-2, 2));
  }
  std::vector<Matrix> as{j};
  for (Index b : blocks) {
    es.push_back(jordan(b));
    as.push_back(Matrix::Identity(b, b));
  }
  return transformed(blockdiag(es), blockdiag(as), rng);
}

/// E of random rank below n, A Gaussian.
inline Pencil low_rank_pencil(Index n, CounterRng& rng) {
  const Index r = rng.uniform_int(0, n - 1);
  return Pencil(gaussian(n, r, rng) * gaussian(n, r, rng).transpose(), gaussian(n, n, rng));
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

}  // namespace ivdae::test

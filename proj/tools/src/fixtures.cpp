#include "ivdae/cli/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ivdae/errors.hpp"

namespace ivdae::cli {

namespace {

constexpr int kConditioningDraws = 50;

// Dyadic value with three fractional bits, so products and sums of fixture entries stay exact.
double dyadic(double v) { return std::round(8.0 * v) / 8.0; }

// Diagonally dominant integer factor d I + R (R: sparse +-1, about two entries per row),
// times a random permutation of its columns.
Matrix integer_factor(Index n, CounterRng& rng) {
  static constexpr double kDiagonals[] = {3.0, 4.0, 6.0, 8.0};
  const double d = kDiagonals[rng.uniform_int(0, 3)];
  const double density = std::min(1.0, 2.0 / static_cast<double>(n));
  Matrix f = d * Matrix::Identity(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (i != j && rng.uniform() < density) f(i, j) = rng.uniform() < 0.5 ? -1.0 : 1.0;
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
  Matrix out(n, n);
  for (Index j = 0; j < n; ++j) out.col(j) = f.col(perm[j]);
  return out;
}

// Real quasi-triangular dyadic matrix with eigenvalues in Re >= 0.25.
Matrix stable_block(Index n, CounterRng& rng) {
  Matrix j = Matrix::Zero(n, n);
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < c; ++r) j(r, c) = dyadic(0.5 * rng.normal());
  Index i = 0;
  while (i < n) {
    const double re = dyadic(rng.uniform(0.25, 2.0));
    if (i + 1 < n && rng.uniform() < 0.3) {
      const double im = dyadic(rng.uniform(0.25, 1.5));
      j(i, i) = re;
      j(i + 1, i + 1) = re;
      j(i, i + 1) = im;
      j(i + 1, i) = -im;
      i += 2;
    } else {
      j(i, i) = re;
      i += 1;
    }
  }
  return j;
}

}  // namespace

Index FixtureSpec::size() const {
  return n1 + std::accumulate(nilpotent_blocks.begin(), nilpotent_blocks.end(), Index{0});
}

std::string FixtureSpec::label() const {
  std::ostringstream os;
  os << "n1=" << n1 << " blocks=[";
  for (std::size_t i = 0; i < nilpotent_blocks.size(); ++i) {
    os << (i ? "," : "") << nilpotent_blocks[i];
  }
  os << "] seed=" << seed;
  return os.str();
}

GroundTruth ground_truth(const FixtureSpec& spec) {
  GroundTruth t;
  Index nu = 0;
  for (Index b : spec.nilpotent_blocks) nu = std::max(nu, b);
  t.kronecker_index = static_cast<int>(nu);
  t.index = std::max(t.kronecker_index - 1, 0);
  t.consistent_dim = spec.n1;
  for (Index j = 0; j <= nu; ++j) {
    Index d = spec.n1;
    for (Index b : spec.nilpotent_blocks) d += std::max<Index>(b - j, 0);
    t.iv_dims.push_back(d);
  }
  return t;
}

Matrix random_conditioned(Index n, double conditioning, CounterRng& rng) {
  const double bound = conditioning * (1.0 + 1e-10);
  for (int draw = 0; draw < kConditioningDraws; ++draw) {
    const int factors = static_cast<int>(rng.uniform_int(1, 3));
    Matrix m = integer_factor(n, rng);
    for (int f = 1; f < factors; ++f) m = m * integer_factor(n, rng);
    const SingularRange sv = singular_range(m);
    if (sv.min > 0.0 && sv.max / sv.min <= bound) return m;
  }
  throw NumericalFailure("generate: no change of basis with condition <= " +
                         std::to_string(conditioning) + " after 50 draws");
}

Fixture generate(const FixtureSpec& spec) {
  if (spec.n1 < 0) throw InvalidArgument("generate: n1 must be non-negative");
  for (Index b : spec.nilpotent_blocks)
    if (b < 1) throw InvalidArgument("generate: nilpotent block sizes must be >= 1");
  const Index n = spec.size();
  if (n < 1) throw InvalidArgument("generate: total dimension must be >= 1");
  if (!std::isfinite(spec.conditioning) || spec.conditioning < 1.0) {
    throw InvalidArgument("generate: conditioning must be a finite bound >= 1");
  }

  CounterRng rng(spec.seed, 0x46495854);  // "FIXT"
  Matrix e0 = Matrix::Zero(n, n);
  Matrix a0 = Matrix::Zero(n, n);
  e0.topLeftCorner(spec.n1, spec.n1).setIdentity();
  a0.topLeftCorner(spec.n1, spec.n1) = stable_block(spec.n1, rng);
  Index off = spec.n1;
  for (Index b : spec.nilpotent_blocks) {
    for (Index i = 0; i + 1 < b; ++i) e0(off + i, off + i + 1) = 1.0;
    a0.block(off, off, b, b).setIdentity();
    off += b;
  }
  const Matrix p = random_conditioned(n, spec.conditioning, rng);
  const Matrix q = random_conditioned(n, spec.conditioning, rng);
  return Fixture{spec, Pencil(p * e0 * q, p * a0 * q), ground_truth(spec)};
}

std::pair<int, int> kronecker_range(int index_lo, int index_hi) {
  return {index_lo == 0 ? 0 : index_lo + 1, index_hi + 1};
}

FixtureSpec random_spec(Index dim_lo, Index dim_hi, int nu_lo, int nu_hi, double conditioning,
                        CounterRng& rng) {
  if (dim_lo < 1 || dim_hi < dim_lo) throw InvalidArgument("random_spec: invalid dimension range");
  if (nu_lo < 0 || nu_hi < nu_lo) throw InvalidArgument("random_spec: invalid index range");
  if (nu_lo > dim_hi) throw InvalidArgument("random_spec: index range exceeds dimension range");
  const int nu = static_cast<int>(rng.uniform_int(nu_lo, std::min<Index>(nu_hi, dim_hi)));
  const Index n = rng.uniform_int(std::max<Index>(dim_lo, nu), dim_hi);

  FixtureSpec spec;
  spec.conditioning = conditioning;
  spec.seed = rng.next_u64();
  Index left = n;
  if (nu > 0) {
    spec.nilpotent_blocks.push_back(nu);
    left -= nu;
    while (left > 0 && rng.uniform() < 0.4) {
      const Index b = rng.uniform_int(1, std::min<Index>(nu, left));
      spec.nilpotent_blocks.push_back(b);
      left -= b;
    }
  }
  spec.n1 = left;
  return spec;
}

Pencil random_pencil(Index n, CounterRng& rng) {
  const Index r = rng.uniform_int(0, n - 1);
  Matrix x(n, r), y(n, r), a(n, n);
  for (Index j = 0; j < r; ++j)
    for (Index i = 0; i < n; ++i) {
      x(i, j) = rng.normal();
      y(i, j) = rng.normal();
    }
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) a(i, j) = rng.normal();
  return Pencil(x * y.transpose(), a);
}

}  // namespace ivdae::cli

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivdae/linalg.hpp"
#include "ivdae/pencil.hpp"
#include "ivdae/rng.hpp"

namespace ivdae::cli {

struct FixtureSpec {
  /// Size of the regular (ODE) block.
  Index n1 = 0;
  /// Sizes of the nilpotent Jordan blocks, each >= 1.
  std::vector<Index> nilpotent_blocks;
  /// Bound on cond(P) and cond(Q).
  double conditioning = 100.0;
  std::uint64_t seed = 0;

  Index size() const;
  std::string label() const;
};

struct GroundTruth {
  int kronecker_index = 0;
  int index = 0;
  Index consistent_dim = 0;
  /// dim IV_j for j = 0 .. kronecker_index.
  std::vector<Index> iv_dims;
};

struct Fixture {
  FixtureSpec spec;
  Pencil pencil;
  GroundTruth truth;
};

GroundTruth ground_truth(const FixtureSpec& spec);

/// E = P blockdiag(I, N_b...) Q, A = P blockdiag(J, I) Q with Re spec(J) > 0.1.
/// P and Q are integer matrices and J is dyadic, so E and A are exact in double precision
/// and E is exactly singular. Throws InvalidArgument for an invalid spec and NumericalFailure when no P, Q within
/// the conditioning bound is found in 50 draws.
Fixture generate(const FixtureSpec& spec);

/// Product of one to three integer factors (d I + sparse +-1) P_perm with condition <= conditioning.
Matrix random_conditioned(Index n, double conditioning, CounterRng& rng);

/// Draws a spec with size in [dim_lo, dim_hi] and Kronecker index in [nu_lo, nu_hi].
FixtureSpec random_spec(Index dim_lo, Index dim_hi, int nu_lo, int nu_hi, double conditioning,
                        CounterRng& rng);

/// Kronecker index range for an index range: ind 0 covers nu in {0, 1}.
std::pair<int, int> kronecker_range(int index_lo, int index_hi);

/// E = X Y^T of random rank in [0, n-1], A Gaussian (regular with probability one).
Pencil random_pencil(Index n, CounterRng& rng);

}  // namespace ivdae::cli

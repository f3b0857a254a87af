#include <gtest/gtest.h>

#include "ivdae/cli/fixtures.hpp"
#include "ivdae/errors.hpp"
#include "ivdae/ivchain.hpp"

using namespace ivdae;
using namespace ivdae::cli;

namespace {

FixtureSpec spec(Index n1, std::vector<Index> blocks, std::uint64_t seed = 0) {
  FixtureSpec s;
  s.n1 = n1;
  s.nilpotent_blocks = std::move(blocks);
  s.seed = seed;
  return s;
}

double cond(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  return sv(0) / sv(sv.size() - 1);
}

}  // namespace

TEST(Generate, Examples) {
  const Fixture a = generate(spec(2, {}));
  EXPECT_EQ(a.truth.index, 0);
  EXPECT_EQ(a.truth.consistent_dim, 2);
  const Fixture b = generate(spec(1, {2}));
  EXPECT_EQ(b.truth.index, 1);
  EXPECT_EQ(b.truth.consistent_dim, 1);
  EXPECT_EQ(b.truth.iv_dims, (std::vector<Index>{3, 2, 1}));
  const Fixture c = generate(spec(0, {3}));
  EXPECT_EQ(c.truth.index, 2);
  EXPECT_EQ(c.truth.kronecker_index, 3);
  EXPECT_EQ(c.truth.consistent_dim, 0);
}

TEST(Generate, InvalidSpecs) {
  EXPECT_THROW(generate(spec(0, {})), InvalidArgument);
  EXPECT_THROW(generate(spec(-1, {2})), InvalidArgument);
  EXPECT_THROW(generate(spec(1, {0})), InvalidArgument);
  FixtureSpec s = spec(2, {1});
  s.conditioning = 0.5;
  EXPECT_THROW(generate(s), InvalidArgument);
}

TEST(Generate, ConditioningBoundRespected) {
  CounterRng rng(3);
  for (double target : {10.0, 100.0, 1000.0}) {
    for (int i = 0; i < 10; ++i) {
      const Index n = rng.uniform_int(2, 30);
      EXPECT_LE(cond(random_conditioned(n, target, rng)), target);
    }
  }
}

TEST(Generate, UnreachableConditioningFails) {
  CounterRng rng(4);
  EXPECT_THROW(random_conditioned(30, 1.0 + 1e-12, rng), NumericalFailure);
}

TEST(Generate, Deterministic) {
  const Fixture a = generate(spec(3, {2, 3}, 99));
  const Fixture b = generate(spec(3, {2, 3}, 99));
  const Fixture c = generate(spec(3, {2, 3}, 100));
  EXPECT_EQ(a.pencil.E(), b.pencil.E());
  EXPECT_EQ(a.pencil.A(), b.pencil.A());
  EXPECT_NE(a.pencil.E(), c.pencil.E());
}

TEST(Generate, StructureIsExactInDouble) {
  const Fixture f = generate(spec(4, {3, 2}, 5));
  Eigen::JacobiSVD<Matrix> svd(f.pencil.E());
  const Index n = f.pencil.size();
  EXPECT_LT(svd.singularValues()(n - 1), 1e-12 * svd.singularValues()(0));
  EXPECT_LT(svd.singularValues()(n - 2), 1e-12 * svd.singularValues()(0));
}

TEST(Generate, GroundTruthMatchesChain) {
  CounterRng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto [lo, hi] = kronecker_range(0, 4);
    FixtureSpec s = random_spec(2, 40, lo, hi, 100.0, rng);
    s.seed = static_cast<std::uint64_t>(i);
    const Fixture f = generate(s);
    const IvChain chain = compute_chain(f.pencil);
    EXPECT_EQ(index_by_chain(chain).k, f.truth.index) << s.label();
    EXPECT_EQ(consistent_space(chain).dim(), f.truth.consistent_dim) << s.label();
    const auto dims = chain.dims();
    for (std::size_t j = 0; j < f.truth.iv_dims.size(); ++j) EXPECT_EQ(dims[j], f.truth.iv_dims[j]) << s.label();
  }
}

TEST(Generate, SingleBlockOfFiveDimsDecreaseByOne) {
  const Fixture f = generate(spec(0, {5}, 1));
  EXPECT_EQ(compute_chain(f.pencil).dims(), (std::vector<Index>{5, 4, 3, 2, 1, 0, 0}));
  EXPECT_EQ(f.truth.iv_dims, (std::vector<Index>{5, 4, 3, 2, 1, 0}));
}

TEST(RandomSpec, RespectsRanges) {
  CounterRng rng(6);
  for (int i = 0; i < 200; ++i) {
    const FixtureSpec s = random_spec(2, 40, 1, 5, 100.0, rng);
    EXPECT_GE(s.size(), 2);
    EXPECT_LE(s.size(), 40);
    const int nu = ground_truth(s).kronecker_index;
    EXPECT_GE(nu, 1);
    EXPECT_LE(nu, 5);
  }
  EXPECT_EQ(kronecker_range(0, 4), std::make_pair(0, 5));
  EXPECT_EQ(kronecker_range(1, 2), std::make_pair(2, 3));
}

TEST(RandomPencil, SingularE) {
  CounterRng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Pencil p = random_pencil(rng.uniform_int(2, 10), rng);
    Eigen::JacobiSVD<Matrix> svd(p.E());
    EXPECT_LE(svd.singularValues()(p.size() - 1), 1e-10 * std::max(svd.singularValues()(0), 1.0));
    EXPECT_TRUE(certify_regularity(p).regular);
  }
}

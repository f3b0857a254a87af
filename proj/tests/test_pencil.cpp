#include <gtest/gtest.h>

#include <set>

#include "ivdae/errors.hpp"
#include "ivdae/pencil.hpp"
#include "support.hpp"

using namespace ivdae;

namespace {

const Matrix kI2 = Matrix::Identity(2, 2);

Pencil nilpotent2() { return Pencil(test::jordan(2), kI2); }

double growth_slope(const IndexEstimate& est) { return std::get<GrowthFit>(est.diagnostics).slope; }

}  // namespace

TEST(Pencil, ConstructorExamples) {
  EXPECT_NO_THROW(Pencil(kI2, kI2));
  EXPECT_THROW(Pencil(kI2, Matrix::Identity(3, 3)), DimensionMismatch);
  EXPECT_NO_THROW(nilpotent2());
}

TEST(Pencil, ConstructorRejectsBadInput) {
  EXPECT_THROW(Pencil(Matrix::Identity(2, 3), Matrix::Identity(2, 3)), InvalidArgument);
  EXPECT_THROW(Pencil(Matrix(0, 0), Matrix(0, 0)), InvalidArgument);
  Matrix bad = kI2;
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Pencil(bad, kI2), InvalidArgument);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Pencil(kI2, bad), InvalidArgument);
}

TEST(Regularity, Examples) {
  CounterRng rng(1);
  EXPECT_TRUE(certify_regularity(Pencil(Matrix::Identity(4, 4), test::gaussian(4, 4, rng))).regular);
  const auto c = certify_regularity(Pencil(Matrix::Zero(3, 3), Matrix::Identity(3, 3)));
  EXPECT_TRUE(c.regular);
  for (const Complex d : c.determinant_values) EXPECT_NEAR(std::abs(d - 1.0), 0.0, 1e-14);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  const auto sing = certify_regularity(Pencil(d, d));
  EXPECT_FALSE(sing.regular);
  EXPECT_FALSE(sing.witness.has_value());
}

TEST(Regularity, SamplePointsDistinctAndOnCircle) {
  CounterRng rng(2);
  const Pencil p(test::gaussian(5, 5, rng), test::gaussian(5, 5, rng));
  const auto c = certify_regularity(p, 77);
  ASSERT_EQ(c.sample_points.size(), 6u);
  ASSERT_EQ(c.determinant_values.size(), 6u);
  const double radius = 1.0 + p.E().norm() + p.A().norm();
  for (std::size_t i = 0; i < c.sample_points.size(); ++i) {
    EXPECT_NEAR(std::abs(c.sample_points[i]), radius, 1e-12 * radius);
    for (std::size_t j = 0; j < i; ++j) EXPECT_GT(std::abs(c.sample_points[i] - c.sample_points[j]), 1e-6);
  }
  bool any_nonzero = false;
  for (const Complex v : c.determinant_values) any_nonzero |= std::abs(v) > 1e-300;
  EXPECT_EQ(c.regular, any_nonzero);
}

TEST(Regularity, VerdictIndependentOfSeed) {
  CounterRng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Index n = rng.uniform_int(1, 8);
    Pencil p = test::low_rank_pencil(n, rng);
    if (i % 3 == 0) {
      // Common null vector of E and A: singular pencil.
      const Matrix proj = Matrix::Identity(n, n) - Vector::Unit(n, 0) * Vector::Unit(n, 0).transpose();
      p = Pencil(p.E() * proj, p.A() * proj);
    }
    const bool verdict = certify_regularity(p, 0).regular;
    for (std::uint64_t seed : {1u, 17u, 123456789u}) EXPECT_EQ(certify_regularity(p, seed).regular, verdict);
    if (i % 3 == 0) EXPECT_FALSE(verdict);
  }
}

TEST(Resolvent, Examples) {
  const Resolvent r = resolvent(Pencil(kI2, Matrix::Zero(2, 2)), 2.0);
  EXPECT_LT((r.inverse - 0.5 * kI2).norm(), 1e-15);
  for (double s : {0.5, 3.0, -7.0, 1e4}) {
    Matrix expect(2, 2);
    expect << 1.0, -s, 0.0, 1.0;
    EXPECT_LT((resolvent(nilpotent2(), s).inverse - expect).norm(), 1e-12 * (1 + std::abs(s)));
  }
  EXPECT_EQ(resolvent(Pencil(Matrix::Zero(2, 2), kI2), 42.0).inverse, kI2);
}

TEST(Resolvent, ComplexArgument) {
  const Complex s(2.0, -3.0);
  CMatrix expect(2, 2);
  expect << 1.0, -s, 0.0, 1.0;
  EXPECT_LT((resolvent(nilpotent2(), s).inverse - expect).norm(), 1e-14);
  const ComplexResolvent r = resolvent(Pencil(kI2, kI2), Complex(0.0, 1.0));
  EXPECT_LT((r.inverse - CMatrix::Identity(2, 2) / Complex(1.0, 1.0)).norm(), 1e-15);
}

TEST(Resolvent, SingularPointThrows) {
  EXPECT_THROW(resolvent(Pencil(kI2, kI2), -1.0), SingularMatrix);
  EXPECT_THROW(resolvent(Pencil(kI2, kI2), Complex(-1.0, 0.0)), SingularMatrix);
  try {
    resolvent(Pencil(kI2, -2.0 * kI2), 2.0);
    FAIL();
  } catch (const SingularMatrix& e) {
    EXPECT_GT(e.condition(), 1e15);
  }
  EXPECT_THROW(resolvent(Pencil(kI2, kI2), std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST(Resolvent, ConditionReported) {
  const Resolvent r = resolvent(Pencil(kI2, kI2), 1.0);
  EXPECT_NEAR(r.condition, 1.0, 1e-12);
}

TEST(Resolvent, ResolventIdentity) {
  CounterRng rng(4);
  for (int i = 0; i < 50; ++i) {
    const Index n = rng.uniform_int(1, 10);
    const Pencil p = test::structured(n, {}, rng);
    const Pencil q = i % 2 ? p : test::structured(1, {static_cast<Index>(rng.uniform_int(1, 4))}, rng);
    const double s = rng.uniform(0.5, 20.0), t = rng.uniform(0.5, 20.0);
    const Matrix rs = resolvent(q, s).inverse, rt = resolvent(q, t).inverse;
    const Matrix lhs = rs - rt;
    const Matrix rhs = (t - s) * rs * q.E() * rt;
    const double scale = std::abs(t - s) * rs.norm() * q.E().norm() * rt.norm();
    EXPECT_LE((lhs - rhs).norm(), 1e-9 * std::max(scale, lhs.norm()));
  }
}

TEST(Growth, Examples) {
  const IndexEstimate a = index_by_growth(Pencil(kI2, kI2));
  EXPECT_EQ(a.k, 0);
  EXPECT_EQ(a.method, IndexMethod::growth);
  EXPECT_NEAR(growth_slope(a), -1.0, 0.05);
  const IndexEstimate b = index_by_growth(nilpotent2());
  EXPECT_EQ(b.k, 1);
  EXPECT_TRUE(b.confident);
  EXPECT_NEAR(growth_slope(b), 1.0, 0.05);
  const IndexEstimate c = index_by_growth(Pencil(test::jordan(3), Matrix::Identity(3, 3)));
  EXPECT_EQ(c.k, 2);
  EXPECT_TRUE(c.confident);
  EXPECT_NEAR(growth_slope(c), 2.0, 0.05);
}

TEST(Growth, DiagnosticsCarryUpperHalfFit) {
  GrowthOptions opts;
  const IndexEstimate e = index_by_growth(Pencil(test::jordan(3), Matrix::Identity(3, 3)), opts);
  const auto& fit = std::get<GrowthFit>(e.diagnostics);
  EXPECT_EQ(fit.sample_points.size(), static_cast<std::size_t>(opts.samples));
  EXPECT_EQ(fit.fit_indices.size(), static_cast<std::size_t>(opts.samples / 2));
  EXPECT_EQ(fit.fit_indices.front(), static_cast<std::size_t>(opts.samples / 2));
  EXPECT_LT(fit.residual, 0.01);
}

TEST(Growth, ConfidenceBandAroundHalfIntegers) {
  CounterRng rng(5);
  for (int i = 0; i < 60; ++i) {
    const Index n = rng.uniform_int(2, 6);
    const Pencil p = i % 2 ? test::low_rank_pencil(n, rng)
                           : test::structured(1, {static_cast<Index>(rng.uniform_int(1, 3))}, rng);
    const IndexEstimate e = index_by_growth(p);
    const double slope = growth_slope(e);
    const double frac = slope - std::floor(slope);
    if (frac >= 0.35 && frac <= 0.65) EXPECT_FALSE(e.confident) << slope;
    EXPECT_GE(e.k, 0);
    EXPECT_EQ(e.k, std::max(static_cast<int>(std::round(slope)), 0));
  }
}

TEST(Growth, RejectsBadOptionsAndSingularPencils) {
  GrowthOptions bad;
  bad.s_min = 0.0;
  EXPECT_THROW(index_by_growth(Pencil(kI2, kI2), bad), InvalidArgument);
  bad = {};
  bad.samples = 3;
  EXPECT_THROW(index_by_growth(Pencil(kI2, kI2), bad), InvalidArgument);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  EXPECT_THROW(index_by_growth(Pencil(d, d)), NotRegular);
}

TEST(Growth, SamplePerturbedAwayFromPole) {
  GrowthOptions opts;
  opts.s_min = 10.0;
  opts.s_max = 1e5;
  opts.samples = 5;
  const IndexEstimate e = index_by_growth(Pencil(kI2, -10.0 * kI2), opts);
  const auto& fit = std::get<GrowthFit>(e.diagnostics);
  EXPECT_NEAR(fit.sample_points[0], 10.0 * 1.01, 1e-9);
  EXPECT_EQ(e.k, 0);
}

TEST(Nilpotency, Examples) {
  CounterRng rng(6);
  const IndexEstimate a = index_by_nilpotency(Pencil(Matrix::Identity(3, 3), test::gaussian(3, 3, rng)));
  EXPECT_EQ(a.k, 0);
  EXPECT_EQ(std::get<DimensionChain>(a.diagnostics).dims, (std::vector<Index>{0, 0}));
  const IndexEstimate b = index_by_nilpotency(nilpotent2());
  EXPECT_EQ(b.k, 1);
  EXPECT_EQ(std::get<DimensionChain>(b.diagnostics).dims, (std::vector<Index>{0, 1, 2, 2}));
  const IndexEstimate c = index_by_nilpotency(Pencil(Matrix::Zero(2, 2), kI2));
  EXPECT_EQ(c.k, 0);
  EXPECT_EQ(std::get<DimensionChain>(c.diagnostics).dims, (std::vector<Index>{0, 2, 2}));
  EXPECT_TRUE(c.confident);
}

TEST(Nilpotency, SingularPencilRejected) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  EXPECT_THROW(index_by_nilpotency(Pencil(d, d)), NotRegular);
}

TEST(Nilpotency, ShiftInUnitIntervalAndSeeded) {
  const Pencil p = nilpotent2();
  const ShiftedOperator a = shifted_operator(p, 9), b = shifted_operator(p, 9);
  EXPECT_EQ(a.s0, b.s0);
  EXPECT_GE(a.s0, 1.0);
  EXPECT_LE(a.s0, 2.0);
  EXPECT_LT((a.F - a.resolvent * p.E()).norm(), 1e-15);
}

TEST(IndexRoutes, InvertibleEGivesZero) {
  CounterRng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Index n = rng.uniform_int(1, 8);
    const Pencil p = test::structured(n, {}, rng);
    EXPECT_EQ(index_by_growth(p).k, 0);
    EXPECT_EQ(index_by_nilpotency(p, static_cast<std::uint64_t>(i)).k, 0);
  }
}

TEST(IndexRoutes, AgreeOnStructuredPencils) {
  CounterRng rng(8);
  for (int i = 0; i < 40; ++i) {
    std::vector<Index> blocks;
    const int nb = static_cast<int>(rng.uniform_int(0, 3));
    for (int b = 0; b < nb; ++b) blocks.push_back(rng.uniform_int(1, 4));
    const Pencil p = test::structured(rng.uniform_int(blocks.empty() ? 1 : 0, 4), blocks, rng);
    Index nu = 0;
    for (Index b : blocks) nu = std::max(nu, b);
    const int expect = std::max(static_cast<int>(nu) - 1, 0);
    EXPECT_EQ(index_by_nilpotency(p).k, expect);
    const IndexEstimate g = index_by_growth(p);
    if (g.confident) EXPECT_EQ(g.k, expect);
  }
}

TEST(IndexMethod, Names) {
  EXPECT_EQ(to_string(IndexMethod::growth), "growth");
  EXPECT_EQ(to_string(IndexMethod::ivchain), "ivchain");
  EXPECT_EQ(to_string(IndexMethod::nilpotency), "nilpotency");
}

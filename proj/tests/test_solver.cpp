#include <gtest/gtest.h>

#include <cmath>

#include "ivdae/errors.hpp"
#include <unsupported/Eigen/MatrixFunctions>

#include "ivdae/solver.hpp"
#include "support.hpp"

using namespace ivdae;

namespace {

Pencil diag_n2() {
  return Pencil(test::blockdiag({Matrix::Identity(1, 1), test::jordan(2)}), Matrix::Identity(3, 3));
}

Pencil nilpotent2() { return Pencil(test::jordan(2), Matrix::Identity(2, 2)); }

std::vector<double> grid(double t_end, int steps) {
  std::vector<double> t;
  for (int i = 0; i <= steps; ++i) t.push_back(t_end * i / steps);
  return t;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

double final_error(const Trajectory& euler, const Trajectory& exact) {
  return (euler.states.back() - exact.states.back()).norm();
}

}  // namespace

TEST(Consistency, Examples) {
  CounterRng rng(1);
  const Pencil a(Matrix::Identity(3, 3), test::gaussian(3, 3, rng));
  const ConsistencyCheck ca = is_consistent(compute_chain(a), test::gaussian(3, rng));
  EXPECT_TRUE(ca.consistent);
  EXPECT_NEAR(ca.distance, 0.0, 1e-14);

  const ConsistencyCheck cb = is_consistent(compute_chain(nilpotent2()), vec({1, 0}));
  EXPECT_FALSE(cb.consistent);
  EXPECT_NEAR(cb.distance, 1.0, 1e-14);

  const ConsistencyCheck cc = is_consistent(compute_chain(diag_n2()), vec({1, 0, 0}));
  EXPECT_TRUE(cc.consistent);
  EXPECT_NEAR(cc.distance, 0.0, 1e-14);
}

TEST(Consistency, NearestExamples) {
  const IvChain c = compute_chain(diag_n2());
  EXPECT_LT((nearest_consistent(c, vec({5, 0, 0})) - vec({5, 0, 0})).norm(), 1e-14);
  EXPECT_LT(nearest_consistent(compute_chain(nilpotent2()), vec({3, 4})).norm(), 1e-15);
  EXPECT_LT((nearest_consistent(c, vec({2, 1, 1})) - vec({2, 0, 0})).norm(), 1e-14);
  EXPECT_THROW(is_consistent(c, vec({1, 0})), DimensionMismatch);
}

TEST(Generator, Examples) {
  CounterRng rng(2);
  const Matrix a = test::gaussian(3, 3, rng);
  const Pencil p(Matrix::Identity(3, 3), a);
  const ReducedGenerator g = reduced_generator(p, compute_chain(p));
  EXPECT_LT(test::rel_diff(g.basis * g.generator * g.basis.transpose(), a), 1e-13);

  const ReducedGenerator g2 = reduced_generator(diag_n2(), compute_chain(diag_n2()));
  ASSERT_EQ(g2.generator.rows(), 1);
  EXPECT_NEAR(g2.generator(0, 0), 1.0, 1e-14);

  const Pencil z(Matrix::Zero(2, 2), Matrix::Identity(2, 2));
  const ReducedGenerator g3 = reduced_generator(z, compute_chain(z));
  EXPECT_EQ(g3.basis.cols(), 0);
  EXPECT_EQ(g3.generator.size(), 0);
}

TEST(Generator, ResidualInvariant) {
  CounterRng rng(3);
  for (int i = 0; i < 30; ++i) {
    const Pencil p = test::structured(rng.uniform_int(1, 5), {static_cast<Index>(rng.uniform_int(1, 4))}, rng);
    const ReducedGenerator g = reduced_generator(p, compute_chain(p));
    const Matrix defect = p.E() * g.basis * g.generator - p.A() * g.basis;
    for (Index j = 0; j < g.basis.cols(); ++j) {
      EXPECT_LE(defect.col(j).norm(), 1e-8 * (p.norm_E() + p.norm_A()));
    }
  }
}

TEST(Classical, Examples) {
  const Pencil a(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  const Trajectory ta = classical_solution(a, compute_chain(a), vec({1, 0}), {0.0, 1.0});
  EXPECT_NEAR(ta.states.back()(0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(ta.states.back()(1), 0.0, 1e-15);
  EXPECT_EQ(ta.method, SolveMethod::exponential);

  const IvChain c = compute_chain(diag_n2());
  const Trajectory tb = classical_solution(diag_n2(), c, vec({1, 0, 0}), grid(2.0, 20));
  for (std::size_t i = 0; i < tb.times.size(); ++i) {
    EXPECT_LT((tb.states[i] - std::exp(-tb.times[i]) * vec({1, 0, 0})).norm(), 1e-14);
  }

  const Trajectory tc = classical_solution(nilpotent2(), compute_chain(nilpotent2()), vec({0, 0}), grid(1.0, 4));
  for (const auto& u : tc.states) EXPECT_EQ(u.norm(), 0.0);
}

TEST(Classical, InconsistentInitialValueThrows) {
  const IvChain c = compute_chain(diag_n2());
  try {
    classical_solution(diag_n2(), c, vec({1, 1, 0}), grid(1.0, 4));
    FAIL();
  } catch (const InconsistentInitialValue& e) {
    EXPECT_NEAR(e.distance(), 1.0, 1e-14);
    EXPECT_LT((e.nearest() - vec({1, 0, 0})).norm(), 1e-14);
  }
}

TEST(Classical, RejectsBadGrid) {
  const IvChain c = compute_chain(diag_n2());
  EXPECT_THROW(classical_solution(diag_n2(), c, vec({1, 0, 0}), {0.0, 0.5, 0.5}), InvalidArgument);
  EXPECT_THROW(classical_solution(diag_n2(), c, vec({1, 0, 0}), {-1.0, 0.5}), InvalidArgument);
  EXPECT_THROW(classical_solution(diag_n2(), c, vec({1, 0}), {0.0}), DimensionMismatch);
}

TEST(Classical, ResidualInitialConditionAndInvariance) {
  CounterRng rng(4);
  for (int i = 0; i < 30; ++i) {
    std::vector<Index> blocks{static_cast<Index>(rng.uniform_int(1, 4))};
    const Pencil p = test::structured(rng.uniform_int(1, 6), blocks, rng);
    const IvChain c = compute_chain(p);
    const Subspace& cs = consistent_space(c);
    const Vector u0 = cs.basis() * test::gaussian(cs.dim(), rng);
    const Trajectory t = classical_solution(p, c, u0, grid(2.0, 20));
    ASSERT_EQ(t.states.size(), t.times.size());
    ASSERT_EQ(t.residuals.size(), t.times.size());
    EXPECT_LE((t.states[0] - u0).norm(), 1e-12 * u0.norm());
    double max_u = 0.0, max_r = 0.0;
    for (std::size_t j = 0; j < t.states.size(); ++j) {
      max_u = std::max(max_u, t.states[j].norm());
      max_r = std::max(max_r, t.residuals[j]);
      EXPECT_LE(cs.distance(t.states[j]), 1e-9 * t.states[j].norm());
    }
    EXPECT_LE(max_r, 1e-8 * (p.norm_E() + p.norm_A()) * max_u);
  }
}

TEST(Classical, SemigroupProperty) {
  CounterRng rng(5);
  const Pencil p = test::structured(4, {2, 3}, rng);
  const IvChain c = compute_chain(p);
  const Subspace& cs = consistent_space(c);
  const Vector u0 = cs.basis() * test::gaussian(cs.dim(), rng);
  for (int i = 0; i < 20; ++i) {
    const double t = rng.uniform(0.0, 2.0), s = rng.uniform(0.0, 2.0);
    const Vector direct = classical_solution(p, c, u0, {0.0, t + s}).states.back();
    const Vector mid = classical_solution(p, c, u0, {0.0, t}).states.back();
    const Vector restarted = classical_solution(p, c, mid, {0.0, s}).states.back();
    EXPECT_LE((direct - restarted).norm(), 1e-9 * direct.norm());
  }
}

TEST(Euler, ScalarGeometricRecursion) {
  const Pencil p(Matrix::Identity(1, 1), Matrix::Identity(1, 1));
  const Trajectory t = implicit_euler(p, Vector::Ones(1), 0.1, 1.0);
  ASSERT_EQ(t.states.size(), 11u);
  EXPECT_NEAR(t.states.back()(0), std::pow(1.0 / 1.1, 10), 1e-14);
  EXPECT_NEAR(t.states.back()(0), 0.3855, 1e-4);
  EXPECT_NEAR(t.times.back(), 1.0, 1e-14);
  EXPECT_FALSE(t.step_adjusted);
  EXPECT_EQ(t.method, SolveMethod::implicit_euler);
}

TEST(Euler, FirstOrderConvergence) {
  CounterRng rng(6);
  const Pencil idx0 = test::structured(3, {}, rng);
  for (const Pencil& p : {idx0, diag_n2()}) {
    const IvChain c = compute_chain(p);
    const Vector u0 = consistent_space(c).basis().col(0);
    const double t_end = 1.0;
    const Trajectory exact = classical_solution(p, c, u0, {0.0, t_end});
    const double e1 = final_error(implicit_euler(p, u0, 0.01, t_end), exact);
    const double e2 = final_error(implicit_euler(p, u0, 0.005, t_end), exact);
    EXPECT_GE(e1 / e2, 1.7);
    EXPECT_LE(e1 / e2, 2.3);
  }
}

TEST(Euler, DelayedForcingIsCausal) {
  const Pencil p = diag_n2();
  const Forcing f = [](double t) { return t < 1.0 ? Vector::Zero(3) : Vector::Ones(3); };
  const Trajectory t = implicit_euler(p, Vector::Zero(3), 0.05, 2.0, f);
  bool saw_nonzero = false;
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    if (t.times[i] < 1.0 - 1e-12) {
      EXPECT_EQ(t.states[i], Vector::Zero(3)) << "t=" << t.times[i];
    } else {
      saw_nonzero |= t.states[i].norm() > 0.0;
    }
  }
  EXPECT_TRUE(saw_nonzero);
}

TEST(Euler, SingularStepRetried) {
  const Pencil p(Matrix::Identity(2, 2), -10.0 * Matrix::Identity(2, 2));
  const Trajectory t = implicit_euler(p, Vector::Ones(2), 0.1, 1.0);
  EXPECT_TRUE(t.step_adjusted);
  EXPECT_NEAR(t.step, 0.101, 1e-15);
  const Pencil sing(Matrix::Zero(2, 2), Matrix::Zero(2, 2));
  EXPECT_THROW(implicit_euler(sing, Vector::Ones(2), 0.1, 1.0), SingularMatrix);
}

TEST(Euler, RejectsBadArguments) {
  const Pencil p(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  EXPECT_THROW(implicit_euler(p, Vector::Ones(2), 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(implicit_euler(p, Vector::Ones(2), 0.1, -1.0), InvalidArgument);
  EXPECT_THROW(implicit_euler(p, Vector::Ones(3), 0.1, 1.0), DimensionMismatch);
}

TEST(Euler, ResidualsShrinkWithStep) {
  const Pencil p = diag_n2();
  const Vector u0 = vec({1, 0, 0});
  const auto worst = [&](double h) {
    const Trajectory t = implicit_euler(p, u0, h, 1.0);
    return *std::max_element(t.residuals.begin() + 1, t.residuals.end());
  };
  EXPECT_LT(worst(0.005), worst(0.01));
}

TEST(Oracle, Examples) {
  CounterRng rng(7);
  const Matrix a = test::gaussian(3, 3, rng);
  const Pencil p(Matrix::Identity(3, 3), a);
  const Vector u0 = test::gaussian(3, rng);
  const OracleResult r = decomposition_oracle(p, u0, {0.0, 0.7});
  EXPECT_FALSE(r.inconsistent);
  EXPECT_EQ(r.nilpotency_index, 0);
  EXPECT_LT((r.trajectory.states.back() - Matrix((-0.7 * a).exp()) * u0).norm(), 1e-9 * u0.norm());

  const OracleResult r2 = decomposition_oracle(nilpotent2(), vec({1, 0}), {0.0, 1.0});
  EXPECT_TRUE(r2.inconsistent);
  EXPECT_NEAR(r2.kernel_component, 1.0, 1e-12);

  const OracleResult r3 = decomposition_oracle(diag_n2(), vec({1, 0, 0}), grid(1.0, 10));
  EXPECT_FALSE(r3.inconsistent);
  for (std::size_t i = 0; i < r3.trajectory.times.size(); ++i) {
    EXPECT_LT((r3.trajectory.states[i] - std::exp(-r3.trajectory.times[i]) * vec({1, 0, 0})).norm(), 1e-9);
  }
  EXPECT_EQ(r3.trajectory.method, SolveMethod::decomposition_oracle);
}

TEST(Oracle, SingularPencilRejected) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  EXPECT_THROW(decomposition_oracle(Pencil(d, d), vec({1, 0}), {0.0}), NotRegular);
}

TEST(Oracle, AgreesWithClassicalSolution) {
  CounterRng rng(8);
  for (int i = 0; i < 30; ++i) {
    std::vector<Index> blocks;
    for (int b = rng.uniform_int(0, 2); b > 0; --b) blocks.push_back(rng.uniform_int(1, 4));
    const Pencil p = test::structured(rng.uniform_int(1, 6), blocks, rng);
    const IvChain c = compute_chain(p);
    const Subspace& cs = consistent_space(c);
    const Vector u0 = cs.basis() * test::gaussian(cs.dim(), rng);
    const auto times = grid(2.0, 10);
    const Trajectory a = classical_solution(p, c, u0, times);
    const OracleResult b = decomposition_oracle(p, u0, times, static_cast<std::uint64_t>(i));
    EXPECT_FALSE(b.inconsistent);
    for (std::size_t j = 0; j < times.size(); ++j) {
      EXPECT_LE((a.states[j] - b.trajectory.states[j]).norm(), 1e-7 * std::max(a.states[j].norm(), 1e-300));
    }
  }
}

TEST(Oracle, FlagsInconsistency) {
  CounterRng rng(9);
  for (int i = 0; i < 30; ++i) {
    const Pencil p = test::structured(rng.uniform_int(0, 4), {static_cast<Index>(rng.uniform_int(1, 4))}, rng);
    const IvChain c = compute_chain(p);
    const Subspace& cs = consistent_space(c);
    Vector u0 = test::gaussian(p.size(), rng);
    u0 -= cs.project(u0);
    EXPECT_THROW(classical_solution(p, c, u0, {0.0, 1.0}), InconsistentInitialValue);
    EXPECT_TRUE(decomposition_oracle(p, u0, {0.0, 1.0}).inconsistent);
  }
}

TEST(SolveMethod, Names) {
  EXPECT_EQ(to_string(SolveMethod::exponential), "exponential");
  EXPECT_EQ(to_string(SolveMethod::implicit_euler), "implicit_euler");
  EXPECT_EQ(to_string(SolveMethod::decomposition_oracle), "decomposition_oracle");
}

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ivdae/ivchain.hpp"
#include "ivdae/pencil.hpp"

namespace ivdae {

enum class IdentityKind { commutation_b, shift_d, expansion_e, solution_formula, transform_match };
std::string_view to_string(IdentityKind k);

struct IdentityReport {
  IdentityKind identity = IdentityKind::commutation_b;
  std::vector<Complex> sample_points;
  double max_relative_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> warnings;
};

/// E (sE+A)^{-1} A = A (sE+A)^{-1} E, error scaled by ||E|| ||A|| ||(sE+A)^{-1}||. Tolerance 1e-10.
IdentityReport verify_commutation(const Pencil& p, std::span<const Complex> points);

/// (sE+A)^{-1} E = I/s - (sE+A)^{-1} A / s for s != 0. Tolerance 1e-10.
IdentityReport verify_shift(const Pencil& p, std::span<const Complex> points);

struct ExpansionOptions {
  double s_lo = 1e3;
  double s_hi = 1e6;
  int grid = 16;
  /// Bound on C in ||s^{k+1} r(s)|| <= C (1 + ||(sE+A)^{-1}|| ||A||) ||x||.
  double max_constant = 10.0;
};

/// For every basis vector x of IV_k (recomputed in extended precision): fits x_1..x_k from k + 2 samples of (sE+A)^{-1} E x
/// (Vandermonde in 1/s), then checks that the remainder
/// r(s) = (sE+A)^{-1}Ex - x/s - sum_l x_l / s^{l+1} satisfies the bound above on the grid.
/// max_relative_error carries the worst observed C. Requires k <= stabilization + 1.
IdentityReport verify_expansion(const Pencil& p, const IvChain& chain, int k,
                                const ExpansionOptions& opts = {});

/// (sE+A)^{-1} E u0: Laplace transform of the distributional solution.
CVector hat_solution(const Pencil& p, const Vector& u0, Complex s);

/// hat_solution(s) = u0/s - (sE+A)^{-1} A u0 / s for any u0. Tolerance 1e-10.
IdentityReport verify_solution_formula(const Pencil& p, const Vector& u0, std::span<const Complex> points);

struct TransformOptions {
  double t_end = 10.0;
  int quad_steps = 4000;
  double tolerance = 1e-6;
};

/// Composite Simpson of int_0^T e^{-st} u(t) dt on the classical solution against
/// hat_solution(s). Requires s T >= 30 and consistent u0.
IdentityReport verify_transform_match(const Pencil& p, const IvChain& chain, const Vector& u0,
                                      std::span<const double> s_points, const TransformOptions& opts = {});

}  // namespace ivdae

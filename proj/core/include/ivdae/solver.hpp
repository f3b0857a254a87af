#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ivdae/ivchain.hpp"
#include "ivdae/pencil.hpp"

namespace ivdae {

/// The generator E~^{-1} A on IV_{k+1}, in an orthonormal basis of IV_{k+1}.
struct ReducedGenerator {
  int k = 0;
  /// n x d orthonormal basis of IV_{k+1}.
  Matrix basis;
  /// d x d matrix of E~^{-1} A.
  Matrix generator;
  /// max_j ||E B M e_j - A b_j||.
  double max_residual = 0.0;
};

enum class SolveMethod { exponential, implicit_euler, decomposition_oracle };
std::string_view to_string(SolveMethod m);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  /// ||E u'(t_i) + A u(t_i) - f(t_i)|| (analytic u' or a difference quotient).
  std::vector<double> residuals;
  SolveMethod method = SolveMethod::exponential;
  /// Actual step for implicit Euler (0 otherwise).
  double step = 0.0;
  /// Implicit Euler had to retry with h * 1.01.
  bool step_adjusted = false;
};

struct ConsistencyCheck {
  bool consistent = false;
  double distance = 0.0;
};

/// distance(IV_{k+1}, u0) <= 1e-9 * max(1, ||u0||).
ConsistencyCheck is_consistent(const IvChain& chain, const Vector& u0);
Vector nearest_consistent(const IvChain& chain, const Vector& u0);

/// Throws IsomorphismFailure when E~ is not bijective and NumericalFailure when the
/// residual bound 1e-8 (||E|| + ||A||) ||b_j|| is violated.
ReducedGenerator reduced_generator(const Pencil& p, const IvChain& chain);

/// u(t) = exp(-t E~^{-1} A) u0. Throws InconsistentInitialValue for u0 outside IV_{k+1}.
Trajectory classical_solution(const Pencil& p, const IvChain& chain, const Vector& u0,
                              const std::vector<double>& times);
Trajectory classical_solution(const Pencil& p, const ReducedGenerator& gen, const IvChain& chain,
                              const Vector& u0, const std::vector<double>& times);

using Forcing = std::function<Vector(double)>;

/// (E/h + A) u_{m+1} = (E/h) u_m + f(t_{m+1}), t_m = m h, up to the first t_m >= T.
/// residuals[m] (m >= 1) is ||E (u_m - u_{m-1})/h + A (u_m + u_{m-1})/2 - f(t_m - h/2)||,
/// residuals[0] uses the forward quotient at t_0. A singular step matrix is retried once
/// with h * 1.01; a second failure throws SingularMatrix.
Trajectory implicit_euler(const Pencil& p, const Vector& u0, double h, double t_end,
                          const Forcing& forcing = {});

struct OracleResult {
  Trajectory trajectory;
  /// ||component of u0 in ker F^n along range F^n||.
  double kernel_component = 0.0;
  /// Nonzero kernel component: no classical solution exists.
  bool inconsistent = false;
  /// Smallest singular value of [basis(ker F^n), basis(range F^n)].
  double splitting_gap = 0.0;
  bool ill_conditioned_split = false;
  int nilpotency_index = 0;
};

/// Independent cross-check: splits H = ker F^nu (+) range F^nu for F = (s0E+A)^{-1}E and
/// solves c' = -F_r^{-1} G_r c on the range part (G = I - s0 F).
OracleResult decomposition_oracle(const Pencil& p, const Vector& u0, const std::vector<double>& times,
                                  std::uint64_t seed = 0);

}  // namespace ivdae

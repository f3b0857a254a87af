#include "ivdae/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "ivdae/errors.hpp"
#include "ivdae/expm.hpp"

namespace ivdae {

namespace {

constexpr double kConsistencyRelTol = 1e-9;
constexpr double kGeneratorResidualRelTol = 1e-8;
constexpr double kSplitGapWarning = 1e-8;

void require_length(const Pencil& p, const Vector& u0, const char* op) {
  if (u0.size() != p.size()) {
    throw DimensionMismatch(std::string(op) + ": u0 has length " + std::to_string(u0.size()) +
                            ", pencil has size " + std::to_string(p.size()));
  }
}

void require_grid(const std::vector<double>& times, const char* op) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0 || (i > 0 && !(times[i] > times[i - 1]))) {
      throw InvalidArgument(std::string(op) +
                            ": time grid must be finite, non-negative and strictly increasing");
    }
  }
}

// Evaluates u(t) = u0 + B (exp(-t M) c0 - c0) on the grid, with u' = -B M c(t).
Trajectory propagate(const Pencil& p, const Matrix& basis, const Matrix& generator,
                     const Vector& anchor, const Vector& c0, const std::vector<double>& times,
                     SolveMethod method) {
  Trajectory traj;
  traj.method = method;
  traj.times = times;
  traj.states.reserve(times.size());
  traj.residuals.reserve(times.size());
  // c(t_i) = exp(-(t_i - t_{i-1}) M) c(t_{i-1}); equal gaps reuse the step exponential.
  Vector c = c0;
  double prev_t = 0.0;
  double cached_dt = -1.0;
  Matrix step;
  for (double t : times) {
    const double dt = t - prev_t;
    if (generator.size() > 0 && dt != 0.0) {
      if (std::abs(dt - cached_dt) > 1e-13 * std::abs(dt)) {
        step = expm(-dt * generator);
        cached_dt = dt;
      }
      c = step * c;
    }
    prev_t = t;
    Vector u = anchor + basis * (c - c0);
    const Vector du = -(basis * (generator * c));
    traj.residuals.push_back((p.E() * du + p.A() * u).norm());
    traj.states.push_back(std::move(u));
  }
  return traj;
}

void require_consistent(const IvChain& chain, const Vector& u0) {
  const ConsistencyCheck cc = is_consistent(chain, u0);
  if (cc.consistent) return;
  std::ostringstream msg;
  msg << "classical_solution: u0 is not a consistent initial value (distance " << cc.distance
      << " to IV_" << chain.stabilization_index() + 1 << ")";
  throw InconsistentInitialValue(msg.str(), cc.distance, nearest_consistent(chain, u0));
}

}  // namespace

std::string_view to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::exponential: return "exponential";
    case SolveMethod::implicit_euler: return "implicit_euler";
    case SolveMethod::decomposition_oracle: return "decomposition_oracle";
  }
  return "unknown";
}

ConsistencyCheck is_consistent(const IvChain& chain, const Vector& u0) {
  const Subspace& space = consistent_space(chain);
  if (u0.size() != space.ambient_dim()) throw DimensionMismatch("is_consistent: length mismatch");
  ConsistencyCheck out;
  out.distance = space.distance(u0);
  out.consistent = out.distance <= kConsistencyRelTol * std::max(1.0, u0.norm());
  return out;
}

Vector nearest_consistent(const IvChain& chain, const Vector& u0) {
  const Subspace& space = consistent_space(chain);
  if (u0.size() != space.ambient_dim()) {
    throw DimensionMismatch("nearest_consistent: length mismatch");
  }
  return space.project(u0);
}

ReducedGenerator reduced_generator(const Pencil& p, const IvChain& chain) {
  const IsoReport iso = check_restricted_iso(p, chain);
  if (!iso.bijective) {
    std::ostringstream msg;
    msg << "reduced_generator: E restricted to IV_" << iso.k + 1 << " (dim " << iso.dim_domain
        << ") -> E[IV_" << iso.k << "] (dim " << iso.dim_codomain
        << ") is not bijective (sigma_min " << iso.sigma_min << ")";
    throw IsomorphismFailure(msg.str());
  }
  ReducedGenerator gen;
  gen.k = iso.k;
  gen.basis = consistent_space(chain).basis();
  const Index d = gen.basis.cols();
  if (d == 0) {
    gen.generator = Matrix(0, 0);
    return gen;
  }
  const Subspace codomain = restricted_codomain(p, chain);
  const Matrix restricted = codomain.basis().transpose() * p.E() * gen.basis;
  const Matrix a_coords = codomain.basis().transpose() * p.A() * gen.basis;
  gen.generator = restricted.partialPivLu().solve(a_coords);

  const Matrix defect = p.E() * gen.basis * gen.generator - p.A() * gen.basis;
  gen.max_residual = defect.colwise().norm().maxCoeff();
  const double bound = kGeneratorResidualRelTol * (p.norm_E() + p.norm_A());
  if (!(gen.max_residual <= bound)) {
    std::ostringstream msg;
    msg << "reduced_generator: residual " << gen.max_residual << " exceeds " << bound
        << " (A IV_{k+1} not inside E[IV_k])";
    throw NumericalFailure(msg.str());
  }
  return gen;
}

Trajectory classical_solution(const Pencil& p, const IvChain& chain, const Vector& u0,
                              const std::vector<double>& times) {
  require_length(p, u0, "classical_solution");
  require_consistent(chain, u0);
  return classical_solution(p, reduced_generator(p, chain), chain, u0, times);
}

Trajectory classical_solution(const Pencil& p, const ReducedGenerator& gen, const IvChain& chain,
                              const Vector& u0, const std::vector<double>& times) {
  require_length(p, u0, "classical_solution");
  require_grid(times, "classical_solution");
  require_consistent(chain, u0);
  const Vector c0 = gen.basis.transpose() * u0;
  return propagate(p, gen.basis, gen.generator, u0, c0, times, SolveMethod::exponential);
}

Trajectory implicit_euler(const Pencil& p, const Vector& u0, double h, double t_end,
                          const Forcing& forcing) {
  require_length(p, u0, "implicit_euler");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("implicit_euler: h must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw InvalidArgument("implicit_euler: T must be non-negative");
  }
  const Index n = p.size();
  const auto f = [&](double t) -> Vector { return forcing ? forcing(t) : Vector::Zero(n); };

  Trajectory traj;
  traj.method = SolveMethod::implicit_euler;

  Eigen::PartialPivLU<Matrix> lu;
  double step = h;
  for (int attempt = 0;; ++attempt) {
    lu.compute(p.E() / step + p.A());
    if (reciprocal_condition(lu) > static_cast<double>(n) * std::numeric_limits<double>::epsilon()) {
      break;
    }
    if (attempt == 1) {
      throw SingularMatrix("implicit_euler: step matrix E/h + A is singular for h and 1.01 h",
                           std::numeric_limits<double>::infinity());
    }
    step *= 1.01;
    traj.step_adjusted = true;
  }
  traj.step = step;

  const long steps = t_end > 0.0 ? static_cast<long>(std::ceil(t_end / step - 1e-9)) : 0;
  const Matrix e_over_h = p.E() / step;
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  for (long m = 1; m <= steps; ++m) {
    const double t = static_cast<double>(m) * step;
    const Vector rhs = e_over_h * traj.states.back() + f(t);
    traj.times.push_back(t);
    traj.states.push_back(lu.solve(rhs));
  }

  traj.residuals.assign(traj.states.size(), 0.0);
  if (steps >= 1) {
    traj.residuals[0] =
        (e_over_h * (traj.states[1] - traj.states[0]) + p.A() * traj.states[0] - f(0.0)).norm();
  }
  for (std::size_t m = 1; m < traj.states.size(); ++m) {
    const Vector& cur = traj.states[m];
    const Vector& prev = traj.states[m - 1];
    traj.residuals[m] =
        (e_over_h * (cur - prev) + 0.5 * (p.A() * (cur + prev)) - f(traj.times[m] - 0.5 * step))
            .norm();
  }
  return traj;
}

OracleResult decomposition_oracle(const Pencil& p, const Vector& u0, const std::vector<double>& times,
                                  std::uint64_t seed) {
  require_length(p, u0, "decomposition_oracle");
  require_grid(times, "decomposition_oracle");
  if (!certify_regularity(p, seed).regular) {
    throw NotRegular("decomposition_oracle: det(sE + A) vanishes identically");
  }
  const Index n = p.size();
  const ShiftedOperator shifted = shifted_operator(p, seed);
  const Matrix& f = shifted.F;
  const double norm_f = spectral_norm(f);

  const std::vector<Subspace> kchain = kernel_chain(f);
  const auto nu = static_cast<int>(kchain.size()) - 2;
  const Subspace& ker = kchain[static_cast<std::size_t>(nu)];
  Subspace range = Subspace::full(n);
  for (int j = 0; j < nu; ++j) range = image(f, range, norm_f);

  if (ker.dim() + range.dim() != n) {
    std::ostringstream msg;
    msg << "decomposition_oracle: generalized kernel (dim " << ker.dim() << ") and range (dim "
        << range.dim() << ") do not split R^" << n;
    throw NumericalFailure(msg.str());
  }

  OracleResult out;
  out.nilpotency_index = nu;
  Matrix split(n, n);
  split << ker.basis(), range.basis();
  out.splitting_gap = singular_range(split).min;
  out.ill_conditioned_split = out.splitting_gap < kSplitGapWarning;

  const Vector coeffs = split.colPivHouseholderQr().solve(u0);
  const Vector kernel_part = ker.basis() * coeffs.head(ker.dim());
  const Vector c0 = coeffs.tail(range.dim());
  out.kernel_component = kernel_part.norm();
  out.inconsistent = out.kernel_component > kConsistencyRelTol * std::max(1.0, u0.norm());

  const Matrix& rb = range.basis();
  Matrix generator(0, 0);
  if (range.dim() > 0) {
    const Matrix fr = rb.transpose() * f * rb;
    const Matrix g = Matrix::Identity(n, n) - shifted.s0 * f;
    const Matrix gr = rb.transpose() * g * rb;
    generator = fr.partialPivLu().solve(gr);
  }
  const Vector anchor = rb * c0;
  out.trajectory = propagate(p, rb, generator, anchor, c0, times, SolveMethod::decomposition_oracle);
  return out;
}

}  // namespace ivdae

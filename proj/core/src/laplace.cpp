#include "ivdae/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "extended.hpp"
#include "ivdae/errors.hpp"
#include "ivdae/solver.hpp"

namespace ivdae {

namespace {

constexpr double kIdentityTol = 1e-10;

using detail::QMatrix;
using detail::Quad;
using detail::quad_solve;

IdentityReport make_report(IdentityKind kind, double tol) {
  IdentityReport rep;
  rep.identity = kind;
  rep.tolerance = tol;
  return rep;
}

void finish(IdentityReport& rep) {
  rep.pass = std::isfinite(rep.max_relative_error) && rep.max_relative_error <= rep.tolerance;
}

void require_points(std::span<const Complex> points, const char* op) {
  if (points.empty()) throw InvalidArgument(std::string(op) + ": no sample points");
}

double ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

std::string format_s(double s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

}  // namespace

std::string_view to_string(IdentityKind k) {
  switch (k) {
    case IdentityKind::commutation_b: return "commutation_b";
    case IdentityKind::shift_d: return "shift_d";
    case IdentityKind::expansion_e: return "expansion_e";
    case IdentityKind::solution_formula: return "solution_formula";
    case IdentityKind::transform_match: return "transform_match";
  }
  return "unknown";
}

IdentityReport verify_commutation(const Pencil& p, std::span<const Complex> points) {
  require_points(points, "verify_commutation");
  IdentityReport rep = make_report(IdentityKind::commutation_b, kIdentityTol);
  const CMatrix e = p.E().cast<Complex>();
  const CMatrix a = p.A().cast<Complex>();
  for (const Complex s : points) {
    const CMatrix r = resolvent(p, s).inverse;
    const CMatrix diff = e * r * a - a * r * e;
    const double err = ratio(spectral_norm(diff), p.norm_E() * p.norm_A() * spectral_norm(r));
    rep.max_relative_error = std::max(rep.max_relative_error, err);
    rep.sample_points.push_back(s);
  }
  finish(rep);
  return rep;
}

IdentityReport verify_shift(const Pencil& p, std::span<const Complex> points) {
  require_points(points, "verify_shift");
  IdentityReport rep = make_report(IdentityKind::shift_d, kIdentityTol);
  const Index n = p.size();
  const CMatrix e = p.E().cast<Complex>();
  const CMatrix a = p.A().cast<Complex>();
  const CMatrix id = CMatrix::Identity(n, n);
  for (const Complex s : points) {
    if (s == Complex(0.0)) throw InvalidArgument("verify_shift: s = 0 is excluded");
    const CMatrix r = resolvent(p, s).inverse;
    const CMatrix lhs = r * e;
    const CMatrix rhs = id / s - (r * a) / s;
    const double norm_r = spectral_norm(r);
    const double scale = norm_r * p.norm_E() + (1.0 + norm_r * p.norm_A()) / std::abs(s);
    rep.max_relative_error = std::max(rep.max_relative_error, ratio(spectral_norm(CMatrix(lhs - rhs)), scale));
    rep.sample_points.push_back(s);
  }
  finish(rep);
  return rep;
}

IdentityReport verify_expansion(const Pencil& p, const IvChain& chain, int k,
                                const ExpansionOptions& opts) {
  const int ind = chain.stabilization_index();
  if (k < 0 || k > ind + 1) {
    throw InvalidArgument("verify_expansion: k must lie in [0, stabilization + 1]");
  }
  if (!(opts.s_lo > 0.0) || !(opts.s_hi > opts.s_lo) || opts.grid < 2) {
    throw InvalidArgument("verify_expansion: need 0 < s_lo < s_hi and grid >= 2");
  }
  IdentityReport rep = make_report(IdentityKind::expansion_e, opts.max_constant);
  const Eigen::ArrayXd grid = geometric_grid(opts.s_lo, opts.s_hi, opts.grid);
  for (Index i = 0; i < grid.size(); ++i) rep.sample_points.emplace_back(grid(i), 0.0);

  const Matrix& basis = chain.spaces.at(static_cast<std::size_t>(k)).basis();
  if (basis.cols() == 0) {
    finish(rep);
    return rep;
  }

  double snap = 0.0;
  const QMatrix x = detail::quad_iv_bases(p, chain.spaces, k, snap).back();
  if (snap > 1e-6) {
    rep.warnings.push_back("IV_k differs by " + format_s(snap) + " from its extended-precision recomputation");
  }
  const QMatrix eq = detail::to_quad(p.E());
  const QMatrix aq = detail::to_quad(p.A());
  const QMatrix ex = eq * x;

  // Fit g(s) = (sE+A)^{-1} E x as sum_{j=1}^{k+2} c_j tau^j + sum_{m=0}^{deg} d_m sigma^m with
  // tau = s_lo / s and sigma = 1 / tau. The polynomial part only appears for k < index, where the
  // nilpotent component of g grows; it belongs to the remainder, not to x_1..x_k.
  const int deg = ind - 1 - k;
  const int inverse_terms = k + 2;
  const int nodes = inverse_terms + std::max(deg + 1, 0);
  const Quad s_ref(opts.s_lo);
  QMatrix vander(nodes, nodes);
  QMatrix samples(nodes, x.rows() * x.cols());
  for (int i = 0; i < nodes; ++i) {
    const Quad s = s_ref * Quad(std::ldexp(1.0, i));
    const Quad tau = s_ref / s;
    for (int j = 1; j <= inverse_terms; ++j) vander(i, j - 1) = boost::multiprecision::pow(tau, j);
    for (int m = 0; m <= deg; ++m) vander(i, inverse_terms + m) = boost::multiprecision::pow(1 / tau, m);
    const QMatrix g = quad_solve(eq, aq, s, ex);
    samples.row(i) = Eigen::Map<const Eigen::Matrix<Quad, 1, Eigen::Dynamic>>(g.data(), g.size());
  }
  const QMatrix coeffs = Eigen::FullPivLU<QMatrix>(vander).solve(samples);

  const double norm_a = p.norm_A();
  double worst = 0.0;
  for (Index gi = 0; gi < grid.size(); ++gi) {
    const Quad s(grid(gi));
    const Quad tau = s_ref / s;
    const auto res = detail::quad_resolvent(eq, aq, s);
    if (!std::isfinite(res.condition)) {
      throw SingularMatrix("verify_expansion: sE + A singular at s = " + format_s(grid(gi)),
                           std::numeric_limits<double>::infinity());
    }
    if (res.condition * detail::kQuadEpsilon * static_cast<double>(p.size()) >= 1.0) {
      rep.warnings.push_back("cond(sE + A) beyond quad precision at s = " + format_s(grid(gi)));
    }
    const double norm_r = spectral_norm(detail::to_double(res.inverse));
    // A solve, not the explicit inverse: inverse times vector loses accuracy at this conditioning.
    QMatrix r = QMatrix(res.lu.solve(ex)) - x / s;
    for (int l = 1; l <= k; ++l) {
      const Eigen::Matrix<Quad, 1, Eigen::Dynamic> row = coeffs.row(l);  // coefficient of tau^{l+1}
      const QMatrix xl = Eigen::Map<const QMatrix>(row.data(), x.rows(), x.cols());
      r -= xl * boost::multiprecision::pow(tau, l + 1);
    }
    const Matrix scaled = detail::to_double(QMatrix(r * boost::multiprecision::pow(s, k + 1)));
    const Matrix xd = detail::to_double(x);
    for (Index j = 0; j < x.cols(); ++j) {
      const double c = scaled.col(j).norm() / ((1.0 + norm_r * norm_a) * xd.col(j).norm());
      worst = std::max(worst, c);
    }
  }
  rep.max_relative_error = worst;
  finish(rep);
  return rep;
}

CVector hat_solution(const Pencil& p, const Vector& u0, Complex s) {
  if (u0.size() != p.size()) throw DimensionMismatch("hat_solution: length mismatch");
  return resolvent(p, s).inverse * (p.E() * u0).cast<Complex>();
}

IdentityReport verify_solution_formula(const Pencil& p, const Vector& u0, std::span<const Complex> points) {
  require_points(points, "verify_solution_formula");
  if (u0.size() != p.size()) throw DimensionMismatch("verify_solution_formula: length mismatch");
  IdentityReport rep = make_report(IdentityKind::solution_formula, kIdentityTol);
  const CVector u = u0.cast<Complex>();
  const CVector au = (p.A() * u0).cast<Complex>();
  const CVector eu = (p.E() * u0).cast<Complex>();
  const double norm_u = u0.norm();
  for (const Complex s : points) {
    if (s == Complex(0.0)) throw InvalidArgument("verify_solution_formula: s = 0 is excluded");
    const CMatrix r = resolvent(p, s).inverse;
    const CVector lhs = r * eu;
    const CVector rhs = u / s - (r * au) / s;
    const double norm_r = spectral_norm(r);
    const double scale =
        (norm_r * p.norm_E() + (1.0 + norm_r * p.norm_A()) / std::abs(s)) * norm_u;
    rep.max_relative_error = std::max(rep.max_relative_error, ratio((lhs - rhs).norm(), scale));
    rep.sample_points.push_back(s);
  }
  finish(rep);
  return rep;
}

IdentityReport verify_transform_match(const Pencil& p, const IvChain& chain, const Vector& u0,
                                      std::span<const double> s_points, const TransformOptions& opts) {
  if (s_points.empty()) throw InvalidArgument("verify_transform_match: no sample points");
  if (opts.quad_steps < 2 || opts.quad_steps % 2 != 0) {
    throw InvalidArgument("verify_transform_match: quad_steps must be even and >= 2");
  }
  for (double s : s_points) {
    if (!(s > 0.0) || s * opts.t_end < 30.0) {
      throw InvalidArgument("verify_transform_match: need s > 0 and s * T >= 30 (s = " +
                            format_s(s) + ")");
    }
  }
  IdentityReport rep = make_report(IdentityKind::transform_match, opts.tolerance);

  const int steps = opts.quad_steps;
  const double h = opts.t_end / steps;
  std::vector<double> times(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) times[static_cast<std::size_t>(i)] = h * i;
  times.back() = opts.t_end;
  const Trajectory traj = classical_solution(p, chain, u0, times);

  const auto simpson = [&](double s, int stride) {
    const double hh = h * stride;
    const int m = steps / stride;
    Vector acc = Vector::Zero(p.size());
    for (int i = 0; i <= m; ++i) {
      const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const auto idx = static_cast<std::size_t>(i * stride);
      acc += w * std::exp(-s * traj.times[idx]) * traj.states[idx];
    }
    return Vector(acc * (hh / 3.0));
  };

  for (double s : s_points) {
    const Vector integral = simpson(s, 1);
    const CVector hat = hat_solution(p, u0, Complex(s, 0.0));
    const double hat_norm = hat.norm();
    const double err = ratio((integral.cast<Complex>() - hat).norm(), hat_norm);
    rep.max_relative_error = std::max(rep.max_relative_error, err);
    rep.sample_points.emplace_back(s, 0.0);
    if (steps % 4 == 0 && hat_norm > 0.0) {
      const double change = (simpson(s, 2) - integral).norm() / hat_norm;
      if (change > 0.1 * opts.tolerance) {
        rep.warnings.push_back("quadrature not resolved at s = " + format_s(s) +
                               ": halving the steps changes the result by " + format_s(change));
      }
    }
  }
  finish(rep);
  return rep;
}

}  // namespace ivdae

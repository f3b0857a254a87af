#include "ivdae/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "extended.hpp"
#include "ivdae/errors.hpp"
#include "ivdae/rng.hpp"

namespace ivdae {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::uint64_t kRegularityStream = 0x5245474C;  // "REGL"
constexpr std::uint64_t kShiftStream = 0x53484654;       // "SHFT"

void require_regular(const Pencil& p, std::uint64_t seed, const char* op) {
  if (!certify_regularity(p, seed).regular) {
    throw NotRegular(std::string(op) + ": det(sE + A) vanishes identically");
  }
}

template <typename M>
ResolventT<M> invert(const M& m, const char* what) {
  Eigen::PartialPivLU<M> lu(m);
  const double rc = reciprocal_condition(lu);
  const double n = static_cast<double>(std::max<Index>(m.rows(), 1));
  if (!(rc > n * kEps)) {
    throw SingularMatrix(std::string(what) + ": sE + A is numerically singular",
                         rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity());
  }
  return {lu.inverse(), 1.0 / rc};
}

struct GrowthSample {
  double s = 0.0;
  double norm = 0.0;
  bool reliable = false;
  bool failed = true;
};

// One resolvent norm sample: double precision when well conditioned, quad otherwise.
GrowthSample sample_growth(const Pencil& p, const detail::QMatrix& eq, const detail::QMatrix& aq,
                           double s, double max_condition) {
  GrowthSample out;
  out.s = s;
  const Matrix m = p.at(s);
  Eigen::PartialPivLU<Matrix> lu(m);
  const double rc = reciprocal_condition(lu);
  if (rc > 1e-8) {
    out.norm = spectral_norm(Matrix(lu.inverse()));
    out.reliable = true;
    out.failed = false;
    return out;
  }
  const auto q = detail::quad_resolvent(eq, aq, detail::Quad(s));
  const double n = static_cast<double>(p.size());
  if (!(q.condition * detail::kQuadEpsilon * n < 1.0)) return out;
  out.failed = false;
  out.norm = spectral_norm(detail::to_double(q.inverse));
  out.reliable = q.condition <= max_condition && std::isfinite(out.norm);
  return out;
}

struct LineFit {
  double slope = 0.0;
  double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + f.slope * (x[i] - mx));
    ss += r * r;
  }
  f.rms = std::sqrt(ss / m);
  return f;
}

}  // namespace

Pencil::Pencil(Matrix e, Matrix a) : e_(std::move(e)), a_(std::move(a)) {
  if (e_.rows() != e_.cols()) throw InvalidArgument("pencil: E is not square");
  if (a_.rows() != a_.cols()) throw InvalidArgument("pencil: A is not square");
  if (e_.rows() != a_.rows()) {
    throw DimensionMismatch("pencil: E is " + std::to_string(e_.rows()) + "x" +
                            std::to_string(e_.cols()) + " but A is " + std::to_string(a_.rows()) +
                            "x" + std::to_string(a_.cols()));
  }
  if (e_.rows() < 1) throw InvalidArgument("pencil: dimension must be positive");
  if (!e_.allFinite() || !a_.allFinite()) throw InvalidArgument("pencil: non-finite entries");
  norm_e_ = spectral_norm(e_);
  norm_a_ = spectral_norm(a_);
}

RegularityCertificate certify_regularity(const Pencil& p, std::uint64_t seed) {
  const Index n = p.size();
  const double radius = 1.0 + p.E().norm() + p.A().norm();
  const auto count = static_cast<std::size_t>(n + 1);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(count);
  CounterRng rng(seed, kRegularityStream);
  const double phase = rng.uniform() * step;

  RegularityCertificate cert;
  cert.sample_points.reserve(count);
  cert.determinant_values.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const Complex s = std::polar(radius, phase + step * static_cast<double>(j));
    const Complex det = Eigen::PartialPivLU<CMatrix>(p.at(s)).determinant();
    cert.sample_points.push_back(s);
    cert.determinant_values.push_back(det);
    if (!cert.witness && std::abs(det) > 1e-300) cert.witness = s;
  }
  cert.regular = cert.witness.has_value();
  return cert;
}

Resolvent resolvent(const Pencil& p, double s) {
  if (!std::isfinite(s)) throw InvalidArgument("resolvent: non-finite s");
  return invert(p.at(s), "resolvent");
}

ComplexResolvent resolvent(const Pencil& p, Complex s) {
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
    throw InvalidArgument("resolvent: non-finite s");
  }
  return invert(p.at(s), "resolvent");
}

std::string_view to_string(IndexMethod m) {
  switch (m) {
    case IndexMethod::growth: return "growth";
    case IndexMethod::ivchain: return "ivchain";
    case IndexMethod::nilpotency: return "nilpotency";
  }
  return "unknown";
}

IndexEstimate index_by_growth(const Pencil& p, const GrowthOptions& opts) {
  if (!(opts.s_min > 0.0) || !(opts.s_max > opts.s_min) || opts.samples < 4) {
    throw InvalidArgument("index_by_growth: need 0 < s_min < s_max and at least 4 samples");
  }
  require_regular(p, 0, "index_by_growth");

  const detail::QMatrix eq = detail::to_quad(p.E());
  const detail::QMatrix aq = detail::to_quad(p.A());
  const Eigen::ArrayXd grid = geometric_grid(opts.s_min, opts.s_max, opts.samples);

  GrowthFit fit;
  std::vector<GrowthSample> samples;
  for (Index j = 0; j < grid.size(); ++j) {
    double s = grid(j);
    GrowthSample smp = sample_growth(p, eq, aq, s, opts.max_condition);
    for (int retry = 0; smp.failed && retry < 5; ++retry) {
      s *= 1.01;
      smp = sample_growth(p, eq, aq, s, opts.max_condition);
    }
    samples.push_back(smp);
    fit.sample_points.push_back(smp.s);
    fit.norms.push_back(smp.failed ? std::numeric_limits<double>::quiet_NaN() : smp.norm);
    if (!smp.reliable) ++fit.unreliable;
  }
  const bool all_failed =
      std::all_of(samples.begin(), samples.end(), [](const GrowthSample& g) { return g.failed; });
  if (all_failed) {
    throw SingularMatrix("index_by_growth: resolvent failed at every sample point",
                         std::numeric_limits<double>::infinity());
  }

  const std::size_t half = samples.size() / 2;
  for (std::size_t j = half; j < samples.size(); ++j)
    if (samples[j].reliable) fit.fit_indices.push_back(j);
  const bool upper_half_usable = fit.fit_indices.size() >= 3;
  if (!upper_half_usable) {
    // Fall back to the largest reliable samples; the estimate is then never confident.
    fit.fit_indices.clear();
    for (std::size_t j = samples.size(); j-- > 0 && fit.fit_indices.size() < half;)
      if (samples[j].reliable) fit.fit_indices.insert(fit.fit_indices.begin(), j);
  }

  IndexEstimate est;
  est.method = IndexMethod::growth;
  if (fit.fit_indices.size() >= 2) {
    std::vector<double> x, y;
    for (auto j : fit.fit_indices) {
      x.push_back(std::log(samples[j].s));
      y.push_back(std::log(samples[j].norm));
    }
    const LineFit line = fit_line(x, y);
    fit.slope = line.slope;
    fit.residual = line.rms;
    est.k = std::max(static_cast<int>(std::round(fit.slope)), 0);
    const double frac = fit.slope - std::floor(fit.slope);
    est.confident = upper_half_usable && !(frac >= 0.35 && frac <= 0.65);
  } else {
    est.k = 0;
    est.confident = false;
  }
  est.diagnostics = std::move(fit);
  return est;
}

ShiftedOperator shifted_operator(const Pencil& p, std::uint64_t seed) {
  CounterRng rng(seed, kShiftStream);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const double s0 = rng.uniform(1.0, 2.0);
    try {
      Resolvent r = resolvent(p, s0);
      Matrix f = r.inverse * p.E();
      return {s0, std::move(r.inverse), std::move(f)};
    } catch (const SingularMatrix&) {
    }
  }
  throw SingularMatrix("shifted_operator: no invertible shift s0 in [1, 2] after 10 draws",
                       std::numeric_limits<double>::infinity());
}

std::vector<Subspace> kernel_chain(const Matrix& f, RankTolerance tol) {
  const Index n = f.rows();
  const double norm_f = spectral_norm(f);
  std::vector<Subspace> chain{Subspace::zero(n, tol)};
  for (Index j = 0; j <= n; ++j) {
    chain.push_back(preimage(f, chain.back(), norm_f));
    if (equal(chain[chain.size() - 2], chain.back())) break;
  }
  return chain;
}

IndexEstimate index_by_nilpotency(const Pencil& p, std::uint64_t seed, RankTolerance tol) {
  require_regular(p, seed, "index_by_nilpotency");
  const ShiftedOperator shifted = shifted_operator(p, seed);
  const std::vector<Subspace> chain = kernel_chain(shifted.F, tol);

  DimensionChain dims;
  for (const auto& s : chain) dims.dims.push_back(s.dim());
  const int nu = static_cast<int>(chain.size()) - 2;

  IndexEstimate est;
  est.method = IndexMethod::nilpotency;
  est.k = std::max(nu - 1, 0);
  est.confident = equal(chain[chain.size() - 2], chain.back());
  est.diagnostics = std::move(dims);
  return est;
}

}  // namespace ivdae

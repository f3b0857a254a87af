#include "ivdae/cli/analysis.hpp"

#include <cmath>

#include "ivdae/errors.hpp"
#include "ivdae/rng.hpp"
#include "ivdae/solver.hpp"

#ifndef IVDAE_VERSION
#define IVDAE_VERSION "unknown"
#endif

namespace ivdae::cli {

namespace {

constexpr std::uint64_t kPointStream = 0x504F494E;  // "POIN"
constexpr std::uint64_t kVectorStream = 0x56454354;  // "VECT"

nlohmann::json index_json(const IndexEstimate& e) {
  nlohmann::json j;
  j["k"] = e.k;
  j["confident"] = e.confident;
  j["method"] = std::string(to_string(e.method));
  if (const auto* fit = std::get_if<GrowthFit>(&e.diagnostics)) {
    j["slope"] = fit->slope;
    j["fit_residual"] = fit->residual;
    j["unreliable_samples"] = fit->unreliable;
  } else if (const auto* dims = std::get_if<DimensionChain>(&e.diagnostics)) {
    j["dims"] = dims->dims;
  }
  return j;
}

Vector random_vector(Index n, CounterRng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

}  // namespace

bool AnalysisReport::routes_agree() const {
  if (!index_chain || !index_nilpotency) return false;
  if (index_chain->k != index_nilpotency->k) return false;
  if (index_growth && index_growth->confident && index_growth->k != index_chain->k) return false;
  return true;
}

std::vector<Complex> identity_points(const Pencil& p, int count, std::uint64_t seed) {
  CounterRng rng(seed, kPointStream);
  std::vector<Complex> pts;
  for (int attempt = 0; static_cast<int>(pts.size()) < count && attempt < 10 * count + 10; ++attempt) {
    const double r = 0.5 * std::pow(100.0, rng.uniform());
    const double theta = rng.uniform(-1.2, 1.2);
    const Complex s = std::polar(r, theta);
    try {
      resolvent(p, s);
      pts.push_back(s);
    } catch (const SingularMatrix&) {
    }
  }
  return pts;
}

AnalysisReport analyze(const Pencil& p, const AnalysisOptions& opts) {
  AnalysisReport rep;
  rep.n = p.size();
  rep.seed = opts.seed;
  rep.tol = opts.tol;
  const RankTolerance tol{opts.tol};

  rep.regular = certify_regularity(p, opts.seed).regular;
  if (!rep.regular) return rep;

  const auto stage = [&rep](const char* name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      rep.errors.push_back(std::string(name) + ": " + e.what());
    }
  };

  stage("index_growth", [&] { rep.index_growth = index_by_growth(p); });
  stage("index_nilpotency", [&] { rep.index_nilpotency = index_by_nilpotency(p, opts.seed, tol); });
  const IvChain chain = compute_chain(p, tol);
  rep.iv_dims = chain.dims();
  stage("index_chain", [&] { rep.index_chain = index_by_chain(chain); });

  const std::vector<Complex> pts = identity_points(p, opts.identity_points, opts.seed);
  CounterRng rng(opts.seed, kVectorStream);
  stage("commutation_b", [&] { rep.identity_checks.push_back(verify_commutation(p, pts)); });
  stage("shift_d", [&] { rep.identity_checks.push_back(verify_shift(p, pts)); });
  const Vector arbitrary = random_vector(p.size(), rng);
  stage("solution_formula",
        [&] { rep.identity_checks.push_back(verify_solution_formula(p, arbitrary, pts)); });

  if (!rep.index_chain) return rep;
  const Subspace& consistent = consistent_space(chain);
  rep.consistent_dim = consistent.dim();
  stage("iso", [&] { rep.iso = check_restricted_iso(p, chain); });
  stage("expansion_e", [&] {
    rep.identity_checks.push_back(verify_expansion(p, chain, rep.index_chain->k));
  });
  stage("transform_match", [&] {
    const Vector u0 = consistent.basis() * random_vector(consistent.dim(), rng);
    const std::vector<double> s_points{3.0, 5.0, 10.0};
    rep.identity_checks.push_back(verify_transform_match(p, chain, u0, s_points));
  });
  return rep;
}

nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["identity"] = std::string(to_string(r.identity));
  j["points"] = r.sample_points.size();
  j["max_relative_error"] = r.max_relative_error;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["warnings"] = r.warnings;
  return j;
}

nlohmann::json versions() {
  nlohmann::json j;
  j["ivdae"] = IVDAE_VERSION;
  j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  return j;
}

nlohmann::json to_json(const AnalysisReport& r) {
  nlohmann::json j;
  j["versions"] = versions();
  j["seed"] = r.seed;
  j["tol"] = r.tol;
  j["n"] = r.n;
  j["regular"] = r.regular;
  j["index_growth"] = r.index_growth ? index_json(*r.index_growth) : nlohmann::json();
  j["index_chain"] = r.index_chain ? index_json(*r.index_chain) : nlohmann::json();
  j["index_nilpotency"] = r.index_nilpotency ? index_json(*r.index_nilpotency) : nlohmann::json();
  j["routes_agree"] = r.regular && r.routes_agree();
  j["iv_dims"] = r.iv_dims;
  j["consistent_dim"] = r.consistent_dim ? nlohmann::json(*r.consistent_dim) : nlohmann::json();
  if (r.iso) {
    j["iso"] = {{"k", r.iso->k},
                {"dim_domain", r.iso->dim_domain},
                {"dim_codomain", r.iso->dim_codomain},
                {"sigma_min", r.iso->sigma_min},
                {"sigma_max", r.iso->sigma_max},
                {"threshold", r.iso->threshold},
                {"bijective", r.iso->bijective},
                {"closedness_hypothesis", r.iso->closedness_hypothesis}};
  } else {
    j["iso"] = nullptr;
  }
  j["identity_checks"] = nlohmann::json::array();
  for (const auto& c : r.identity_checks) j["identity_checks"].push_back(to_json(c));
  j["errors"] = r.errors;
  return j;
}

}  // namespace ivdae::cli

#include "ivdae/cli/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "ivdae/cli/analysis.hpp"
#include "ivdae/errors.hpp"
#include "ivdae/ivchain.hpp"
#include "ivdae/laplace.hpp"
#include "ivdae/rng.hpp"
#include "ivdae/solver.hpp"

namespace ivdae::cli {

namespace {

constexpr double kResolventInvarianceTol = 1e-8;
constexpr double kProjectorTol = 1e-12;
constexpr double kResidualRelTol = 1e-8;
constexpr double kInitialTol = 1e-12;
constexpr double kOracleTol = 1e-7;
constexpr double kInvarianceTol = 1e-9;

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

std::string dims_string(const std::vector<Index>& d) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << ']';
  return os.str();
}

Vector random_vector(Index n, CounterRng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

class Checker {
 public:
  explicit Checker(CaseResult& out) : out_(out) {}

  // Runs `fn` returning {pass, metric, detail}; an exception fails the check.
  template <typename Fn>
  void run(const std::string& name, Fn&& fn) {
    CheckResult r;
    r.name = name;
    try {
      fn(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out_.checks.push_back(std::move(r));
  }

 private:
  CaseResult& out_;
};

const Subspace& chain_at(const IvChain& chain, int j) {
  const auto last = chain.spaces.size() - 1;
  return chain.spaces[std::min(static_cast<std::size_t>(j), last)];
}

// Two-sided distance between subspaces of equal dimension, or infinity.
double subspace_gap(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
  return std::max(max_distance(a, b), max_distance(b, a));
}

void chain_law_checks(Checker& ck, const Pencil& p, const IvChain& chain, int index,
                      const SuiteOptions& opts) {
  ck.run("chain_monotone", [&](CheckResult& r) {
    for (std::size_t j = 0; j + 1 < chain.spaces.size(); ++j) {
      const double d = max_distance(chain.spaces[j], chain.spaces[j + 1]);
      r.metric = std::max(r.metric, d);
    }
    r.pass = r.metric <= opts.chain_tol;
    r.detail = "dims " + dims_string(chain.dims());
  });
  ck.run("chain_stabilization", [&](CheckResult& r) {
    r.metric = subspace_gap(chain_at(chain, index + 1), chain_at(chain, index + 2));
    r.pass = !chain.truncated && r.metric <= opts.chain_tol;
    r.detail = "k=" + std::to_string(index) + (chain.truncated ? " truncated" : "");
  });
  ck.run("subspace_laws", [&](CheckResult& r) {
    CounterRng rng(p.size(), 0x5355424C);  // "SUBL"
    std::vector<Vector> vs;
    for (Index i = 0; i < (p.size() + 1) / 2; ++i) vs.push_back(random_vector(p.size(), rng));
    const Subspace t = span(vs);
    const Subspace& s = chain_at(chain, 1);
    // image(M, preimage(M, T)) inside T and S inside preimage(M, image(M, S)).
    const double adj1 = max_distance(t, image(p.E(), preimage(p.E(), t)));
    const double adj2 = max_distance(preimage(p.A(), image(p.A(), s)), s);
    double proj = 0.0;
    for (const auto& sp : chain.spaces) {
      const Matrix pr = sp.projector();
      proj = std::max(proj, (pr * pr - pr).cwiseAbs().maxCoeff());
      proj = std::max(proj, orthonormality_defect(sp));
    }
    r.metric = std::max({adj1, adj2, proj});
    r.pass = adj1 <= opts.chain_tol && adj2 <= opts.chain_tol && proj <= kProjectorTol;
    r.detail = "adjunction " + sci(std::max(adj1, adj2)) + ", projector " + sci(proj);
  });
}

}  // namespace

bool CaseResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* CaseResult::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool SuiteReport::all_pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.pass(); });
}

CaseResult run_pencil_case(const std::string& label, const Pencil& p, std::uint64_t case_seed,
                           const SuiteOptions& opts) {
  CaseResult out;
  out.label = label;
  out.n = p.size();
  Checker ck(out);
  const RankTolerance tol{opts.tol};

  bool regular = false;
  ck.run("regularity", [&](CheckResult& r) {
    regular = certify_regularity(p, case_seed).regular;
    r.pass = regular;
  });
  if (!regular) return out;

  const IvChain chain = compute_chain(p, tol);
  std::optional<IndexEstimate> nil;
  ck.run("index_agreement", [&](CheckResult& r) {
    nil = index_by_nilpotency(p, case_seed, tol);
    const IndexEstimate chain_est = index_by_chain(chain);
    r.metric = nil->k;
    r.pass = nil->k == chain_est.k;
    r.detail = "chain " + std::to_string(chain_est.k) + ", nilpotency " + std::to_string(nil->k);
  });
  chain_law_checks(ck, p, chain, nil ? nil->k : chain.stabilization.value_or(0), opts);
  return out;
}

CaseResult run_fixture_case(const FixtureSpec& spec, std::uint64_t case_seed, const SuiteOptions& opts) {
  CaseResult out;
  out.label = spec.label();
  Checker ck(out);
  std::optional<Fixture> fx;
  ck.run("generate", [&](CheckResult& r) {
    fx.emplace(generate(spec));
    r.pass = true;
  });
  if (!fx) return out;
  const Pencil& p = fx->pencil;
  const GroundTruth& truth = fx->truth;
  out.n = p.size();
  const RankTolerance tol{opts.tol};
  CounterRng rng(case_seed, 0x56455249);  // "VERI"

  ck.run("regularity", [&](CheckResult& r) { r.pass = certify_regularity(p, case_seed).regular; });

  const IvChain chain = compute_chain(p, tol);
  const bool chain_ok = !chain.truncated;
  ck.run("index_agreement", [&](CheckResult& r) {
    const IndexEstimate c = index_by_chain(chain);
    const IndexEstimate nil = index_by_nilpotency(p, case_seed, tol);
    const IndexEstimate g = index_by_growth(p);
    r.metric = std::abs(c.k - truth.index) + std::abs(nil.k - truth.index);
    const bool growth_ok = !g.confident || g.k == truth.index;
    r.pass = c.k == truth.index && nil.k == truth.index && growth_ok;
    r.detail = "truth " + std::to_string(truth.index) + ", chain " + std::to_string(c.k) +
               ", nilpotency " + std::to_string(nil.k) + ", growth " + std::to_string(g.k) +
               (g.confident ? "" : " (not confident)");
  });
  ck.run("chain_dims", [&](CheckResult& r) {
    const std::vector<Index> dims = chain.dims();
    r.pass = true;
    for (std::size_t j = 0; j < truth.iv_dims.size(); ++j) {
      const Index expect = truth.iv_dims[j];
      const Index got = j < dims.size() ? dims[j] : dims.back();
      if (got != expect) r.pass = false;
    }
    r.pass = r.pass && dims.back() == truth.consistent_dim;
    r.detail = "dims " + dims_string(dims) + ", expected " + dims_string(truth.iv_dims);
  });
  chain_law_checks(ck, p, chain, truth.index, opts);
  if (!chain_ok) return out;
  const int k = chain.stabilization_index();
  const Subspace& consistent = consistent_space(chain);

  ck.run("consistent_dim", [&](CheckResult& r) {
    r.metric = static_cast<double>(consistent.dim());
    r.pass = consistent.dim() == truth.consistent_dim;
    r.detail = std::to_string(consistent.dim()) + " vs " + std::to_string(truth.consistent_dim);
  });

  ck.run("resolvent_invariance", [&](CheckResult& r) {
    const std::vector<double> s_points{3.0, 10.0, 100.0};
    const InvarianceReport inv = check_invariance(p, chain, s_points);
    r.metric = inv.max_relative_distance;
    r.pass = r.metric <= kResolventInvarianceTol;
    r.detail = std::to_string(inv.vectors_checked) + " vectors, basis snap " + sci(inv.max_snap);
  });

  ck.run("iso_bijective", [&](CheckResult& r) {
    const IsoReport iso = check_restricted_iso(p, chain);
    r.metric = iso.sigma_min;
    r.pass = iso.bijective;
    r.detail = "dims " + std::to_string(iso.dim_domain) + "->" + std::to_string(iso.dim_codomain) +
               ", sigma_min " + sci(iso.sigma_min) + ", threshold " + sci(iso.threshold);
  });

  const std::vector<Complex> pts = identity_points(p, 20, case_seed);
  const auto identity = [&](const std::string& name, auto&& fn) {
    ck.run(name, [&](CheckResult& r) {
      const IdentityReport rep = fn();
      r.metric = rep.max_relative_error;
      r.pass = rep.pass && rep.sample_points.size() >= (name == "expansion_e" ? 2u : 1u);
      r.detail = "tolerance " + sci(rep.tolerance);
      for (const auto& w : rep.warnings) r.detail += "; " + w;
    });
  };
  identity("commutation_b", [&] {
    if (pts.size() < 20) throw NumericalFailure("fewer than 20 usable sample points");
    return verify_commutation(p, pts);
  });
  identity("shift_d", [&] { return verify_shift(p, pts); });
  const Vector arbitrary = random_vector(p.size(), rng);
  identity("solution_formula", [&] { return verify_solution_formula(p, arbitrary, pts); });
  identity("expansion_e", [&] {
    return verify_expansion(p, chain, k);
  });
  const Vector consistent_u0 = consistent.basis() * random_vector(consistent.dim(), rng);
  identity("transform_match", [&] {
    const std::vector<double> s_points{3.0, 5.0, 10.0};
    return verify_transform_match(p, chain, consistent_u0, s_points);
  });

  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(0.1 * i);
  std::optional<ReducedGenerator> gen;
  ck.run("classical_residual", [&](CheckResult& r) {
    gen = reduced_generator(p, chain);
    const double bound_scale = kResidualRelTol * (p.norm_E() + p.norm_A());
    r.pass = true;
    double worst_init = 0.0;
    for (Index c = 0; c <= consistent.dim(); ++c) {
      const Vector u0 = c < consistent.dim() ? Vector(consistent.basis().col(c)) : consistent_u0;
      const Trajectory tr = classical_solution(p, *gen, chain, u0, times);
      double max_u = 0.0, max_res = 0.0;
      for (std::size_t i = 0; i < tr.states.size(); ++i) {
        max_u = std::max(max_u, tr.states[i].norm());
        max_res = std::max(max_res, tr.residuals[i]);
      }
      const double init = (tr.states.front() - u0).norm();
      const double bound = bound_scale * max_u;
      if (max_res > bound || init > kInitialTol * u0.norm()) r.pass = false;
      if (bound > 0.0) r.metric = std::max(r.metric, max_res / (bound_scale * max_u));
      worst_init = std::max(worst_init, u0.norm() > 0 ? init / u0.norm() : init);
    }
    r.detail = "residual / ((|E|+|A|) max|u|) " + sci(r.metric) + ", initial " + sci(worst_init);
  });

  ck.run("classical_invariance", [&](CheckResult& r) {
    if (!gen) gen = reduced_generator(p, chain);
    const Trajectory tr = classical_solution(p, *gen, chain, consistent_u0, times);
    for (const Vector& u : tr.states) {
      const double nu = u.norm();
      if (nu > 0.0) r.metric = std::max(r.metric, consistent.distance(u) / nu);
    }
    r.pass = r.metric <= kInvarianceTol;
  });

  ck.run("oracle_agreement", [&](CheckResult& r) {
    if (!gen) gen = reduced_generator(p, chain);
    r.pass = true;
    for (Index c = 0; c <= consistent.dim(); ++c) {
      const Vector u0 = c < consistent.dim() ? Vector(consistent.basis().col(c)) : consistent_u0;
      const Trajectory cl = classical_solution(p, *gen, chain, u0, times);
      const OracleResult orc = decomposition_oracle(p, u0, times, case_seed);
      double diff = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < cl.states.size(); ++i) {
        diff = std::max(diff, (cl.states[i] - orc.trajectory.states[i]).norm());
        scale = std::max(scale, cl.states[i].norm());
      }
      const double rel = scale > 0.0 ? diff / scale : diff;
      r.metric = std::max(r.metric, rel);
      if (rel > kOracleTol || orc.inconsistent) r.pass = false;
    }
  });

  if (consistent.dim() < p.size()) {
    ck.run("inconsistency_detection", [&](CheckResult& r) {
      Vector w = random_vector(p.size(), rng);
      w -= consistent.project(w);
      w /= w.norm();
      const Vector u0 = consistent_u0 + w;
      bool thrown = false;
      try {
        classical_solution(p, chain, u0, times);
      } catch (const InconsistentInitialValue& e) {
        thrown = true;
        r.metric = e.distance();
      }
      const OracleResult orc = decomposition_oracle(p, u0, times, case_seed);
      r.pass = thrown && orc.inconsistent;
      r.detail = std::string(thrown ? "classical rejects" : "classical accepts") +
                 (orc.inconsistent ? ", oracle flags " : ", oracle misses ") +
                 "(kernel component " + sci(orc.kernel_component) + ")";
    });
  }
  return out;
}

SuiteReport run_suite(const std::vector<FixtureSpec>& specs, const SuiteOptions& opts) {
  SuiteReport rep;
  rep.seed = opts.seed;
  rep.cases.resize(specs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      rep.cases[i] = run_fixture_case(specs[i], splitmix64(opts.seed + i), opts);
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(specs.size())));
  std::vector<std::jthread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  return rep;
}

std::string format_table(const SuiteReport& r) {
  struct Row {
    std::size_t passed = 0;
    std::size_t total = 0;
    double worst = 0.0;
  };
  std::vector<std::string> order;
  std::map<std::string, Row> rows;
  for (const auto& c : r.cases) {
    for (const auto& ch : c.checks) {
      auto [it, inserted] = rows.try_emplace(ch.name);
      if (inserted) order.push_back(ch.name);
      it->second.total++;
      if (ch.pass) it->second.passed++;
      if (std::isfinite(ch.metric)) it->second.worst = std::max(it->second.worst, ch.metric);
    }
  }
  std::ostringstream os;
  os << "seed " << r.seed << ", " << r.cases.size() << " cases\n";
  os << std::left << std::setw(26) << "check" << std::setw(12) << "passed" << std::setw(12)
     << "worst" << "status\n";
  for (const auto& name : order) {
    const Row& row = rows[name];
    os << std::left << std::setw(26) << name << std::setw(12)
       << (std::to_string(row.passed) + "/" + std::to_string(row.total)) << std::setw(12)
       << sci(row.worst) << (row.passed == row.total ? "PASS" : "FAIL") << '\n';
  }
  for (std::size_t i = 0; i < r.cases.size(); ++i) {
    for (const auto& ch : r.cases[i].checks) {
      if (ch.pass) continue;
      os << "FAIL case " << i << " (" << r.cases[i].label << ") " << ch.name << ": " << ch.detail
         << '\n';
    }
  }
  os << (r.all_pass() ? "ALL PASS" : "FAILURES") << '\n';
  return os.str();
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json j;
  j["versions"] = versions();
  j["seed"] = r.seed;
  j["all_pass"] = r.all_pass();
  j["cases"] = nlohmann::json::array();
  for (const auto& c : r.cases) {
    nlohmann::json jc;
    jc["label"] = c.label;
    jc["n"] = c.n;
    jc["pass"] = c.pass();
    jc["checks"] = nlohmann::json::array();
    for (const auto& ch : c.checks) {
      jc["checks"].push_back({{"name", ch.name},
                              {"pass", ch.pass},
                              {"metric", std::isfinite(ch.metric) ? nlohmann::json(ch.metric)
                                                                  : nlohmann::json(nullptr)},
                              {"detail", ch.detail}});
    }
    j["cases"].push_back(std::move(jc));
  }
  return j;
}

std::vector<FixtureSpec> parse_fixture_json(const nlohmann::json& j) {
  const nlohmann::json& list = j.is_object() && j.contains("fixtures") ? j.at("fixtures") : j;
  if (!list.is_array()) throw Error("fixture file: expected an array of fixture specs");
  std::vector<FixtureSpec> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& e = list[i];
    const std::string where = "fixture " + std::to_string(i) + ": ";
    if (!e.is_object()) throw Error(where + "expected an object");
    try {
      FixtureSpec s;
      s.n1 = e.value("n1", Index{0});
      s.nilpotent_blocks = e.value("blocks", std::vector<Index>{});
      s.conditioning = e.value("conditioning", 100.0);
      s.seed = e.value("seed", std::uint64_t{0});
      if (s.n1 < 0 || s.size() < 1) throw Error("needs n1 >= 0 and total size >= 1");
      for (Index b : s.nilpotent_blocks)
        if (b < 1) throw Error("block sizes must be >= 1");
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(where + ex.what());
    } catch (const Error& ex) {
      throw Error(where + ex.what());
    }
  }
  return out;
}

std::vector<FixtureSpec> parse_fixture_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  try {
    return parse_fixture_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::vector<FixtureSpec> random_fixtures(int count, Index dim_lo, Index dim_hi, int index_lo,
                                         int index_hi, std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("random fixture count must be non-negative");
  const auto [nu_lo, nu_hi] = kronecker_range(index_lo, index_hi);
  std::vector<FixtureSpec> out;
  for (int i = 0; i < count; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    out.push_back(random_spec(dim_lo, dim_hi, nu_lo, nu_hi, 100.0, rng));
  }
  return out;
}

}  // namespace ivdae::cli

#include "ivdae/cli/commands.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "ivdae/cli/analysis.hpp"
#include "ivdae/cli/matrix_market.hpp"
#include "ivdae/cli/verify.hpp"
#include "ivdae/errors.hpp"
#include "ivdae/ivchain.hpp"
#include "ivdae/solver.hpp"

namespace ivdae::cli {

namespace {

// Writes to the file when given, otherwise to `fallback`.
void emit(const std::optional<std::filesystem::path>& path, const std::string& text,
          std::ostream& fallback) {
  if (!path) {
    fallback << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path->string() + "'");
  f << text;
}

std::string format_vector(const Vector& v) {
  std::ostringstream os;
  os << std::setprecision(17) << '[';
  for (Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ']';
  return os.str();
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << std::setprecision(17);
  const Index n = tr.states.empty() ? 0 : tr.states.front().size();
  os << 't';
  for (Index i = 1; i <= n; ++i) os << ",u_" << i;
  os << ",residual\n";
  for (std::size_t m = 0; m < tr.states.size(); ++m) {
    os << tr.times[m];
    for (Index i = 0; i < n; ++i) os << ',' << tr.states[m](i);
    os << ',' << tr.residuals[m] << '\n';
  }
  return os.str();
}

Pencil load_pencil(const std::filesystem::path& e, const std::filesystem::path& a) {
  return Pencil(parse_matrix_market(e), parse_matrix_market(a));
}

}  // namespace

std::pair<long, long> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw Error("range '" + text + "' must look like a..b");
  const auto parse = [&](std::string_view part) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw Error("range '" + text + "' must look like a..b with integers a <= b");
    }
    return v;
  };
  const std::string_view sv(text);
  const long lo = parse(sv.substr(0, dots));
  const long hi = parse(sv.substr(dots + 2));
  if (lo > hi) throw Error("range '" + text + "' is empty");
  return {lo, hi};
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const Pencil p = load_pencil(args.e_path, args.a_path);
    AnalysisOptions opts;
    opts.seed = args.seed;
    opts.tol = args.tol;
    const AnalysisReport rep = analyze(p, opts);
    emit(args.json_out, to_json(rep).dump(2) + "\n", out);
    if (!rep.regular) {
      err << "pencil is not regular: det(sE + A) vanishes identically\n";
      return kNotRegular;
    }
    for (const auto& e : rep.errors) err << "warning: " << e << '\n';
    if (!rep.routes_agree()) {
      err << "index routes disagree\n";
      return kRoutesDisagree;
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.method != "exponential" && args.method != "euler" && args.method != "oracle") {
      throw Error("--method must be exponential, euler or oracle");
    }
    if (args.steps < 1) throw Error("--steps must be >= 1");
    if (!(args.t_end > 0.0)) throw Error("--t-end must be positive");
    const Pencil p = load_pencil(args.e_path, args.a_path);
    const Vector u0 = parse_vector(args.u0_path);
    if (u0.size() != p.size()) {
      throw Error("u0 has length " + std::to_string(u0.size()) + ", pencil has size " +
                  std::to_string(p.size()));
    }
    if (!certify_regularity(p, args.seed).regular) {
      err << "pencil is not regular: det(sE + A) vanishes identically\n";
      return kNotRegular;
    }
    const double h = args.t_end / args.steps;
    std::vector<double> times;
    for (int i = 0; i <= args.steps; ++i) times.push_back(i == args.steps ? args.t_end : i * h);

    Trajectory tr;
    if (args.method == "euler") {
      tr = implicit_euler(p, u0, h, args.t_end);
    } else {
      const IvChain chain = compute_chain(p, RankTolerance{args.tol});
      if (args.method == "exponential") {
        tr = classical_solution(p, chain, u0, times);
      } else {
        const ConsistencyCheck cc = is_consistent(chain, u0);
        OracleResult orc = decomposition_oracle(p, u0, times, args.seed);
        if (orc.inconsistent || !cc.consistent) {
          throw InconsistentInitialValue(
              "u0 has a component " + std::to_string(orc.kernel_component) +
                  " in the generalized kernel",
              cc.distance, nearest_consistent(chain, u0));
        }
        tr = std::move(orc.trajectory);
      }
    }
    emit(args.csv_out, trajectory_csv(tr), out);
    return kOk;
  } catch (const InconsistentInitialValue& e) {
    err << "inconsistent initial value: " << e.what() << "\n  distance to consistent space: "
        << std::setprecision(17) << e.distance() << "\n  nearest consistent point: "
        << format_vector(e.nearest()) << '\n';
    return kInconsistent;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.fixtures.has_value() == args.random.has_value()) {
      throw Error("give exactly one of --fixtures and --random");
    }
    std::vector<FixtureSpec> specs;
    if (args.fixtures) {
      specs = parse_fixture_file(*args.fixtures);
    } else {
      const auto [dlo, dhi] = parse_range(args.dim_range);
      const auto [ilo, ihi] = parse_range(args.index_range);
      if (dlo < 1) throw Error("--dim-range must start at 1 or more");
      if (ilo < 0) throw Error("--index-range must start at 0 or more");
      if (ilo + 1 > dhi && ilo > 0) throw Error("--index-range needs dimensions above " + std::to_string(ilo));
      specs = random_fixtures(*args.random, dlo, dhi, static_cast<int>(ilo), static_cast<int>(ihi), args.seed);
    }
    if (specs.empty()) throw Error("nothing to verify: the fixture list is empty");
    if (args.jobs < 1) throw Error("--jobs must be >= 1");

    SuiteOptions opts;
    opts.seed = args.seed;
    opts.tol = args.tol;
    opts.jobs = args.jobs;
    const SuiteReport rep = run_suite(specs, opts);
    out << format_table(rep);
    if (args.json_out) emit(args.json_out, to_json(rep).dump(2) + "\n", out);
    return rep.all_pass() ? kOk : kRoutesDisagree;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const Fixture fx = generate(args.spec);
    std::filesystem::create_directories(args.out_dir);
    write_matrix_market(args.out_dir / "E.mtx", fx.pencil.E());
    write_matrix_market(args.out_dir / "A.mtx", fx.pencil.A());
    nlohmann::json truth{{"n", fx.pencil.size()},
                         {"n1", fx.spec.n1},
                         {"blocks", fx.spec.nilpotent_blocks},
                         {"conditioning", fx.spec.conditioning},
                         {"seed", fx.spec.seed},
                         {"kronecker_index", fx.truth.kronecker_index},
                         {"index", fx.truth.index},
                         {"consistent_dim", fx.truth.consistent_dim},
                         {"iv_dims", fx.truth.iv_dims}};
    emit(args.out_dir / "truth.json", truth.dump(2) + "\n", out);
    out << "wrote " << (args.out_dir / "E.mtx").string() << ", " << (args.out_dir / "A.mtx").string()
        << ", " << (args.out_dir / "truth.json").string() << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Index, consistent initial values and solutions of E u' + A u = 0"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(versions()["ivdae"]));

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Regularity, index routes, IV chain and identity checks");
  analyze_cmd->add_option("E", an.e_path, "Matrix Market file for E")->required();
  analyze_cmd->add_option("A", an.a_path, "Matrix Market file for A")->required();
  analyze_cmd->add_option("--seed", an.seed, "Random seed")->capture_default_str();
  analyze_cmd->add_option("--tol", an.tol, "Relative rank tolerance")->capture_default_str();
  analyze_cmd->add_option("--json", an.json_out, "Report path (default: standard output)");

  SolveArgs so;
  auto* solve_cmd = app.add_subcommand("solve", "Solve E u' + A u = 0 and write a CSV trajectory");
  solve_cmd->add_option("E", so.e_path, "Matrix Market file for E")->required();
  solve_cmd->add_option("A", so.a_path, "Matrix Market file for A")->required();
  solve_cmd->add_option("u0", so.u0_path, "Initial value, whitespace-separated")->required();
  solve_cmd->add_option("--t-end", so.t_end, "Final time")->capture_default_str();
  solve_cmd->add_option("--steps", so.steps, "Number of time steps")->capture_default_str();
  solve_cmd->add_option("--method", so.method, "exponential | euler | oracle")
      ->check(CLI::IsMember({"exponential", "euler", "oracle"}))
      ->capture_default_str();
  solve_cmd->add_option("--seed", so.seed, "Random seed")->capture_default_str();
  solve_cmd->add_option("--tol", so.tol, "Relative rank tolerance")->capture_default_str();
  solve_cmd->add_option("--csv", so.csv_out, "CSV path (default: standard output)");

  VerifyArgs ve;
  auto* verify_cmd = app.add_subcommand("verify", "Run the property suite on generated pencils");
  verify_cmd->add_option("--fixtures", ve.fixtures, "JSON file of fixture specs");
  verify_cmd->add_option("--random", ve.random, "Number of random fixtures");
  verify_cmd->add_option("--dim-range", ve.dim_range, "Dimension range a..b")->capture_default_str();
  verify_cmd->add_option("--index-range", ve.index_range, "Index range a..b")->capture_default_str();
  verify_cmd->add_option("--seed", ve.seed, "Random seed")->capture_default_str();
  verify_cmd->add_option("--tol", ve.tol, "Relative rank tolerance")->capture_default_str();
  verify_cmd->add_option("--jobs", ve.jobs, "Worker threads")->capture_default_str();
  verify_cmd->add_option("--json", ve.json_out, "Write the full report as JSON");

  GenerateArgs ge;
  auto* generate_cmd = app.add_subcommand("generate", "Write a fixture pencil with known index");
  generate_cmd->add_option("--n1", ge.spec.n1, "Size of the regular block")->capture_default_str();
  generate_cmd->add_option("--blocks", ge.spec.nilpotent_blocks, "Nilpotent block sizes")->delimiter(',');
  generate_cmd->add_option("--conditioning", ge.spec.conditioning, "Condition bound for P and Q")
      ->capture_default_str();
  generate_cmd->add_option("--seed", ge.spec.seed, "Random seed")->capture_default_str();
  generate_cmd->add_option("--out", ge.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  if (analyze_cmd->parsed()) return cmd_analyze(an, out, err);
  if (solve_cmd->parsed()) return cmd_solve(so, out, err);
  if (verify_cmd->parsed()) return cmd_verify(ve, out, err);
  return cmd_generate(ge, out, err);
}

}  // namespace ivdae::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ivdae/cli/fixtures.hpp"

namespace ivdae::cli {

struct CheckResult {
  std::string name;
  bool pass = false;
  /// Worst observed value of the checked quantity (error, distance or ratio).
  double metric = 0.0;
  std::string detail;
};

struct CaseResult {
  std::string label;
  Index n = 0;
  std::vector<CheckResult> checks;

  bool pass() const;
  const CheckResult* find(const std::string& name) const;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  double tol = 1e-10;
  /// Worker threads; results are always reported in input order.
  int jobs = 1;
  /// Tolerance for subspace containment and equality in the chain laws.
  double chain_tol = 1e-9;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::vector<CaseResult> cases;

  bool all_pass() const;
};

/// Full property suite on a generated fixture, including ground-truth checks.
CaseResult run_fixture_case(const FixtureSpec& spec, std::uint64_t case_seed, const SuiteOptions& opts);

/// Chain laws and index agreement on a pencil without ground truth.
CaseResult run_pencil_case(const std::string& label, const Pencil& p, std::uint64_t case_seed,
                           const SuiteOptions& opts);

SuiteReport run_suite(const std::vector<FixtureSpec>& specs, const SuiteOptions& opts);

/// One row per check name (passed/total, worst metric), then one line per failure.
std::string format_table(const SuiteReport& r);
nlohmann::json to_json(const SuiteReport& r);

/// Accepts a JSON array of specs or {"fixtures": [...]}; each spec has "n1", "blocks",
/// optional "conditioning" (100) and "seed" (0). Throws Error on malformed input.
std::vector<FixtureSpec> parse_fixture_file(const std::filesystem::path& path);
std::vector<FixtureSpec> parse_fixture_json(const nlohmann::json& j);

/// `count` specs with size in [dim_lo, dim_hi] and index in [index_lo, index_hi].
std::vector<FixtureSpec> random_fixtures(int count, Index dim_lo, Index dim_hi, int index_lo,
                                         int index_hi, std::uint64_t seed);

}  // namespace ivdae::cli

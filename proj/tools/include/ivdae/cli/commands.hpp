#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ivdae/cli/fixtures.hpp"

namespace ivdae::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kRoutesDisagree = 2,
  kNotRegular = 3,
  kInconsistent = 4,
};

struct AnalyzeArgs {
  std::filesystem::path e_path;
  std::filesystem::path a_path;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  /// Report destination; standard output when empty.
  std::optional<std::filesystem::path> json_out;
};
int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err);

struct SolveArgs {
  std::filesystem::path e_path;
  std::filesystem::path a_path;
  std::filesystem::path u0_path;
  double t_end = 1.0;
  int steps = 100;
  /// exponential | euler | oracle
  std::string method = "exponential";
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::optional<std::filesystem::path> csv_out;
};
int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);

struct VerifyArgs {
  std::optional<std::filesystem::path> fixtures;
  std::optional<int> random;
  std::string dim_range = "2..20";
  std::string index_range = "0..4";
  std::uint64_t seed = 0;
  double tol = 1e-10;
  int jobs = 1;
  std::optional<std::filesystem::path> json_out;
};
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

struct GenerateArgs {
  FixtureSpec spec;
  std::filesystem::path out_dir = ".";
};
/// Writes E.mtx, A.mtx and truth.json into out_dir.
int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err);

/// Parses "a..b" into a closed integer range.
std::pair<long, long> parse_range(const std::string& text);

/// Subcommand dispatch: analyze | solve | verify | generate.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ivdae::cli

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ivdae/ivchain.hpp"
#include "ivdae/laplace.hpp"
#include "ivdae/pencil.hpp"

namespace ivdae::cli {

struct AnalysisOptions {
  std::uint64_t seed = 0;
  double tol = 1e-10;
  /// Sample points per resolvent identity.
  int identity_points = 20;
};

struct AnalysisReport {
  Index n = 0;
  bool regular = false;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::optional<IndexEstimate> index_growth;
  std::optional<IndexEstimate> index_chain;
  std::optional<IndexEstimate> index_nilpotency;
  std::vector<Index> iv_dims;
  std::optional<Index> consistent_dim;
  std::optional<IsoReport> iso;
  std::vector<IdentityReport> identity_checks;
  /// Failures of individual stages, in the order they ran.
  std::vector<std::string> errors;

  /// Chain and nilpotency routes agree, and growth agrees when confident.
  bool routes_agree() const;
};

/// Runs every stage; a failing stage is recorded in `errors` and later stages that
/// depend on it are skipped.
AnalysisReport analyze(const Pencil& p, const AnalysisOptions& opts = {});

nlohmann::json to_json(const AnalysisReport& r);
nlohmann::json to_json(const IdentityReport& r);

/// `count` complex points r e^{i theta}, r log-uniform in [0.5, 50], |theta| <= 1.2,
/// each with sE + A invertible.
std::vector<Complex> identity_points(const Pencil& p, int count, std::uint64_t seed);

/// Library and dependency versions.
nlohmann::json versions();

}  // namespace ivdae::cli

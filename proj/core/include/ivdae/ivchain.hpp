#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ivdae/pencil.hpp"
#include "ivdae/subspace.hpp"

namespace ivdae {

/// IV_0 = H, IV_{k+1} = {x : A x in E[IV_k]}, computed until IV_{k+1} = IV_{k+2}.
struct IvChain {
  std::vector<Subspace> spaces;
  /// Smallest k with IV_{k+1} = IV_{k+2}.
  std::optional<int> stabilization;
  bool truncated = false;

  std::vector<Index> dims() const;
  /// Throws TruncatedChain when no stabilization was found.
  int stabilization_index() const;
};

/// max_k defaults to n + 2. Truncation is reported in the result, never thrown.
IvChain compute_chain(const Pencil& p, RankTolerance tol = {}, std::optional<int> max_k = {});

/// k = chain.stabilization, method ivchain, always confident.
IndexEstimate index_by_chain(const IvChain& chain);

/// IV_{k+1} with k the stabilization index: the set of consistent initial values.
const Subspace& consistent_space(const IvChain& chain);

struct IsoReport {
  int k = 0;
  Index dim_domain = 0;
  Index dim_codomain = 0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double threshold = 0.0;
  bool bijective = false;
  /// E[IV_k] closed: automatic in finite dimensions.
  bool closedness_hypothesis = true;
};

/// Singular values of E : IV_{k+1} -> E[IV_k] in orthonormal bases of both spaces.
IsoReport check_restricted_iso(const Pencil& p, const IvChain& chain);

struct InvarianceReport {
  /// max distance(IV_{j+1}, y) / ||y|| over y = (sE+A)^{-1} E x, x a basis vector of IV_j.
  double max_relative_distance = 0.0;
  /// Largest distance between the double basis and its extended-precision recomputation.
  double max_snap = 0.0;
  Index vectors_checked = 0;
};

/// (sE+A)^{-1} E maps IV_j into IV_{j+1}, checked for j = 0..k and every s. The IV_j bases
/// and y are recomputed in extended precision; a y below double roundoff of
/// ||(sE+A)^{-1}|| ||E|| counts as zero.
InvarianceReport check_invariance(const Pencil& p, const IvChain& chain, std::span<const double> s_points);

/// Orthonormal basis of E[IV_k] (the codomain of the restricted map).
Subspace restricted_codomain(const Pencil& p, const IvChain& chain);

}  // namespace ivdae

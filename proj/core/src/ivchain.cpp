#include "ivdae/ivchain.hpp"

#include <algorithm>
#include <limits>

#include "extended.hpp"
#include "ivdae/errors.hpp"

namespace ivdae {

std::vector<Index> IvChain::dims() const {
  std::vector<Index> d;
  d.reserve(spaces.size());
  for (const auto& s : spaces) d.push_back(s.dim());
  return d;
}

int IvChain::stabilization_index() const {
  if (truncated || !stabilization) {
    throw TruncatedChain("IV chain was truncated before it stabilized");
  }
  return *stabilization;
}

IvChain compute_chain(const Pencil& p, RankTolerance tol, std::optional<int> max_k) {
  const Index n = p.size();
  const int limit = max_k.value_or(static_cast<int>(n) + 2);
  if (limit < 0) throw InvalidArgument("compute_chain: max_k must be non-negative");

  IvChain chain;
  chain.spaces.push_back(Subspace::full(n, tol));
  // IV_{k+2} is needed to witness stabilization at k.
  for (int j = 0; j <= limit + 1; ++j) {
    const Subspace e_image = image(p.E(), chain.spaces.back(), p.norm_E());
    chain.spaces.push_back(preimage(p.A(), e_image, p.norm_A()));
    const std::size_t m = chain.spaces.size() - 1;  // index of the newest space
    if (m >= 2 && equal(chain.spaces[m - 1], chain.spaces[m])) {
      chain.stabilization = static_cast<int>(m) - 2;
      break;
    }
  }
  chain.truncated = !chain.stabilization.has_value();
  return chain;
}

IndexEstimate index_by_chain(const IvChain& chain) {
  IndexEstimate est;
  est.k = chain.stabilization_index();
  est.method = IndexMethod::ivchain;
  est.confident = true;
  est.diagnostics = DimensionChain{chain.dims()};
  return est;
}

const Subspace& consistent_space(const IvChain& chain) {
  return chain.spaces.at(static_cast<std::size_t>(chain.stabilization_index()) + 1);
}

Subspace restricted_codomain(const Pencil& p, const IvChain& chain) {
  const int k = chain.stabilization_index();
  return image(p.E(), chain.spaces.at(static_cast<std::size_t>(k)), p.norm_E());
}

IsoReport check_restricted_iso(const Pencil& p, const IvChain& chain) {
  IsoReport rep;
  rep.k = chain.stabilization_index();
  const Subspace& domain = consistent_space(chain);
  const Subspace codomain = restricted_codomain(p, chain);
  rep.dim_domain = domain.dim();
  rep.dim_codomain = codomain.dim();
  rep.threshold = domain.tol().threshold(p.norm_E(), p.size(), p.size());

  if (rep.dim_domain == 0 && rep.dim_codomain == 0) {
    rep.bijective = true;
    return rep;
  }
  const Matrix restricted = codomain.basis().transpose() * p.E() * domain.basis();
  const SingularRange sv = singular_range(restricted);
  rep.sigma_min = rep.dim_domain == rep.dim_codomain ? sv.min : 0.0;
  rep.sigma_max = sv.max;
  rep.bijective = rep.dim_domain == rep.dim_codomain && rep.sigma_min > rep.threshold;
  return rep;
}

InvarianceReport check_invariance(const Pencil& p, const IvChain& chain, std::span<const double> s_points) {
  const int k = chain.stabilization_index();
  InvarianceReport rep;
  const detail::QMatrix eq = detail::to_quad(p.E());
  const detail::QMatrix aq = detail::to_quad(p.A());
  const std::vector<detail::QMatrix> snapped = detail::quad_iv_bases(p, chain.spaces, k, rep.max_snap);
  const double eps = static_cast<double>(p.size()) * std::numeric_limits<double>::epsilon();
  for (double s : s_points) {
    const auto res = detail::quad_resolvent(eq, aq, detail::Quad(s));
    if (!std::isfinite(res.condition)) {
      throw SingularMatrix("check_invariance: sE + A singular", res.condition);
    }
    const double roundoff = eps * spectral_norm(detail::to_double(res.inverse)) * p.norm_E();
    for (int j = 0; j <= k; ++j) {
      const detail::QMatrix& x = snapped[static_cast<std::size_t>(j)];
      if (x.cols() == 0) continue;
      const Matrix y = detail::to_double(detail::QMatrix(res.lu.solve(detail::QMatrix(eq * x))));
      const Subspace& to = chain.spaces[static_cast<std::size_t>(j) + 1];
      for (Index c = 0; c < y.cols(); ++c) {
        const double floor = roundoff * detail::to_double(detail::QMatrix(x.col(c))).norm();
        const double d = to.distance(y.col(c)) / std::max(y.col(c).norm(), floor);
        rep.max_relative_distance = std::max(rep.max_relative_distance, d);
        ++rep.vectors_checked;
      }
    }
  }
  return rep;
}

}  // namespace ivdae

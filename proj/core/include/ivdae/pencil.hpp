#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "ivdae/linalg.hpp"
#include "ivdae/subspace.hpp"

namespace ivdae {

/// The pair (E, A) behind E u' + A u = 0. Both square, same size, finite entries.
class Pencil {
 public:
  /// Throws InvalidArgument (non-square, non-finite) or DimensionMismatch.
  Pencil(Matrix e, Matrix a);

  const Matrix& E() const noexcept { return e_; }
  const Matrix& A() const noexcept { return a_; }
  Index size() const noexcept { return e_.rows(); }

  /// Cached spectral norms.
  double norm_E() const noexcept { return norm_e_; }
  double norm_A() const noexcept { return norm_a_; }

  /// s E + A.
  Matrix at(double s) const { return s * e_ + a_; }
  CMatrix at(Complex s) const { return s * e_.cast<Complex>() + a_.cast<Complex>(); }

 private:
  Matrix e_;
  Matrix a_;
  double norm_e_ = 0.0;
  double norm_a_ = 0.0;
};

struct RegularityCertificate {
  bool regular = false;
  std::vector<Complex> sample_points;
  std::vector<Complex> determinant_values;
  /// A sample point with det(sE + A) != 0, when one exists.
  std::optional<Complex> witness;
};

/// Evaluates det(sE + A) at n + 1 equally spaced points on |s| = 1 + ||E||_F + ||A||_F,
/// rotated by a seed-dependent phase. A degree <= n polynomial vanishing at n + 1
/// points is identically zero.
RegularityCertificate certify_regularity(const Pencil& p, std::uint64_t seed = 0);

template <typename M>
struct ResolventT {
  M inverse;
  /// 1-norm condition estimate of sE + A.
  double condition = 0.0;
};
using Resolvent = ResolventT<Matrix>;
using ComplexResolvent = ResolventT<CMatrix>;

/// (sE + A)^{-1}. Throws SingularMatrix when the reciprocal condition is below n * eps.
Resolvent resolvent(const Pencil& p, double s);
ComplexResolvent resolvent(const Pencil& p, Complex s);

enum class IndexMethod { growth, ivchain, nilpotency };
std::string_view to_string(IndexMethod m);

/// Log-log fit of ||(sE+A)^{-1}||_2 against s.
struct GrowthFit {
  double slope = 0.0;
  /// RMS residual of the least-squares line.
  double residual = 0.0;
  std::vector<double> sample_points;
  std::vector<double> norms;
  /// Indices (into sample_points) used for the fit.
  std::vector<std::size_t> fit_indices;
  /// Samples whose condition number exceeded the reliability limit even in extended precision.
  std::size_t unreliable = 0;
};

/// Dimensions of a nested chain (kernel chain of F, or the IV chain).
struct DimensionChain {
  std::vector<Index> dims;
};

struct IndexEstimate {
  int k = 0;
  IndexMethod method = IndexMethod::growth;
  bool confident = false;
  std::variant<GrowthFit, DimensionChain> diagnostics;
};

struct GrowthOptions {
  double s_min = 1e2;
  double s_max = 1e7;
  int samples = 24;
  /// Sample points with cond(sE + A) above this are treated as unreliable (quad precision).
  double max_condition = 1e31;
};

/// Index from the growth exponent of the resolvent on the positive real axis:
/// k = max(round(slope), 0), not confident when frac(slope) lies in [0.35, 0.65].
IndexEstimate index_by_growth(const Pencil& p, const GrowthOptions& opts = {});

/// Index from the kernel chain of F = (s0 E + A)^{-1} E:
/// nu = min{j : ker F^j = ker F^{j+1}}, k = max(nu - 1, 0).
IndexEstimate index_by_nilpotency(const Pencil& p, std::uint64_t seed = 0, RankTolerance tol = {});

/// s0 in [1, 2] with s0 E + A invertible, plus the resulting F = (s0E+A)^{-1}E.
struct ShiftedOperator {
  double s0 = 0.0;
  Matrix resolvent;
  Matrix F;
};
/// Draws s0 from the seed; retries up to 10 times. Throws SingularMatrix on failure.
ShiftedOperator shifted_operator(const Pencil& p, std::uint64_t seed);

/// ker F^0 = {0}, ker F^{j+1} = preimage(F, ker F^j), up to and including the first repeat.
std::vector<Subspace> kernel_chain(const Matrix& f, RankTolerance tol = {});

}  // namespace ivdae

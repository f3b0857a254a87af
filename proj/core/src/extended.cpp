#include "extended.hpp"

#include <algorithm>
#include <sstream>

#include "ivdae/errors.hpp"

namespace ivdae::detail {

QMatrix quad_solve(const QMatrix& e, const QMatrix& a, const Quad& s, const QMatrix& rhs) {
  Eigen::PartialPivLU<QMatrix> lu(QMatrix(s * e + a));
  QMatrix x = lu.solve(rhs);
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i)
      if (!boost::multiprecision::isfinite(x(i, j))) {
        std::ostringstream msg;
        msg << "sE + A singular at s = " << static_cast<double>(s);
        throw SingularMatrix(msg.str(), std::numeric_limits<double>::infinity());
      }
  return x;
}

std::vector<QMatrix> quad_iv_bases(const Pencil& p, const std::vector<Subspace>& spaces, int j_max,
                                   double& moved) {
  const Index n = p.size();
  const QMatrix eq = to_quad(p.E());
  const QMatrix aq = to_quad(p.A());
  std::vector<QMatrix> out{QMatrix::Identity(n, n)};
  for (int i = 0; i < j_max; ++i) {
    const Index img_rank = image(p.E(), spaces[static_cast<std::size_t>(i)], p.norm_E()).dim();
    const Index next_dim = spaces[static_cast<std::size_t>(i) + 1].dim();
    QMatrix q(n, img_rank);
    if (img_rank > 0) {
      Eigen::ColPivHouseholderQR<QMatrix> qr(QMatrix(eq * out.back()));
      q = (qr.householderQ() * QMatrix::Identity(n, n)).leftCols(img_rank);
    }
    const QMatrix k = aq - q * (q.transpose() * aq);
    Eigen::ColPivHouseholderQR<QMatrix> qr(QMatrix(k.transpose()));
    out.push_back((qr.householderQ() * QMatrix::Identity(n, n)).rightCols(next_dim));
  }
  moved = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const Matrix& ref = spaces[j].basis();
    if (ref.cols() == 0) continue;
    const Matrix bd = to_double(out[j]);
    moved = std::max(moved, (ref - bd * (bd.transpose() * ref)).colwise().norm().maxCoeff());
  }
  return out;
}

}  // namespace ivdae::detail

#include <cmath>

#include "f3/subsystem.hpp"

namespace f3 {

double weighted_norm(const Field& f, double p, const SpectralData& sd, const ChannelCut& cut,
                     const GridPair& grid) {
  const std::size_t na = grid.xa_size();
  const std::size_t np = grid.xperp_size();
  const double ha = grid.xa_weight();
  const double hp = grid.xperp_weight();
  const int m = grid.dim_xa();

  std::vector<double> wa(m);
  double weighted_sq = 0.0;   // sum over bound channels of ||<w_a>^p c||^2
  double unweighted_sq = 0.0; // same without the weight (for the remainder split)
  for (std::size_t i = 0; i < na; ++i) {
    grid.xa_node(i, wa.data());
    double r2 = 0.0;
    for (int d = 0; d < m; ++d) r2 += wa[d] * wa[d];
    const double weight = std::pow(1.0 + r2, p);
    const cplx* slice = f.data() + i * np;
    for (int kb : cut.bound) {
      cplx c(0.0, 0.0);
      for (std::size_t q = 0; q < np; ++q)
        c += sd.eigenvectors(static_cast<Eigen::Index>(q), kb) * slice[q];
      // c is the Euclidean coefficient; the L^2 coefficient is sqrt(hp) c.
      const double c2 = std::norm(c) * hp;
      weighted_sq += weight * c2;
      unweighted_sq += c2;
    }
  }
  weighted_sq *= ha;
  unweighted_sq *= ha;

  double total_sq = 0.0;
  for (const cplx& v : f.values) total_sq += std::norm(v);
  total_sq *= ha * hp;

  const double remainder_sq = std::max(0.0, total_sq - unweighted_sq);
  return std::sqrt(weighted_sq + remainder_sq);
}

}  // namespace f3

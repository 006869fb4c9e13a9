#include "f3/grids.hpp"

#include <cmath>
#include <sstream>

namespace f3 {

namespace {

GridAxis make_axis(double length, int count) {
  if (count % 2 != 0) {
    std::ostringstream os;
    os << "odd count " << count << " (grid counts must be even)";
    throw config_error(os.str());
  }
  if (count < 8) {
    std::ostringstream os;
    os << "count " << count << " below minimum of 8 points per axis";
    throw config_error(os.str());
  }
  if (!(length > 0.0)) throw config_error("non-positive box length");

  GridAxis ax;
  ax.length = length;
  ax.count = count;
  ax.spacing = length / count;
  ax.nodes.resize(count);
  ax.frequencies.resize(count);
  for (int j = 0; j < count; ++j) ax.nodes[j] = -0.5 * length + j * ax.spacing;
  // FFT storage order: k = 0..N/2-1, then -N/2..-1.
  for (int k = 0; k < count; ++k) {
    int kk = (k < count / 2) ? k : k - count;
    ax.frequencies[k] = 2.0 * M_PI * kk / length;
  }
  return ax;
}

}  // namespace

GridPair build_grids(const GridSpec& spec) {
  if (spec.xa_lengths.size() != spec.xa_counts.size() ||
      spec.xperp_lengths.size() != spec.xperp_counts.size()) {
    throw config_error("grid lengths/counts size mismatch");
  }
  if (spec.xa_lengths.empty() || spec.xperp_lengths.empty()) {
    throw config_error("grids require at least one axis on each factor");
  }
  GridPair g;
  for (std::size_t d = 0; d < spec.xa_lengths.size(); ++d)
    g.xa.push_back(make_axis(spec.xa_lengths[d], spec.xa_counts[d]));
  for (std::size_t d = 0; d < spec.xperp_lengths.size(); ++d)
    g.xperp.push_back(make_axis(spec.xperp_lengths[d], spec.xperp_counts[d]));
  return g;
}

double field_norm(const Field& f, const GridPair& g) {
  double s = 0.0;
  for (const cplx& v : f.values) s += std::norm(v);
  return std::sqrt(s * g.total_weight());
}

double field_dist(const Field& a, const Field& b, const GridPair& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * g.total_weight());
}

cplx field_dot(const Field& a, const Field& b, const GridPair& g) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
  return s * g.total_weight();
}

}  // namespace f3

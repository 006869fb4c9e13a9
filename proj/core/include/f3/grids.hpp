#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "f3/errors.hpp"

namespace f3 {

using cplx = std::complex<double>;

/// One periodic axis: box [-L/2, L/2) sampled at N points, together with
/// its dual (frequency) axis in FFT storage order.
struct GridAxis {
  double length = 0.0;
  int count = 0;
  double spacing = 0.0;             // L / N
  std::vector<double> nodes;        // -L/2 + j h
  std::vector<double> frequencies;  // 2*pi*k/L, k in FFT order 0,1,..,-N/2,..,-1

  double dual_spacing() const { return 2.0 * M_PI / length; }
};

/// Product grid X_a x X^a. Fields are stored row-major with the X_a axes
/// outermost and the X^a axes innermost.
struct GridPair {
  std::vector<GridAxis> xa;
  std::vector<GridAxis> xperp;

  int dim_xa() const { return static_cast<int>(xa.size()); }
  int dim_xperp() const { return static_cast<int>(xperp.size()); }

  std::size_t xa_size() const {
    std::size_t n = 1;
    for (const auto& ax : xa) n *= static_cast<std::size_t>(ax.count);
    return n;
  }
  std::size_t xperp_size() const {
    std::size_t n = 1;
    for (const auto& ax : xperp) n *= static_cast<std::size_t>(ax.count);
    return n;
  }
  std::size_t total_size() const { return xa_size() * xperp_size(); }

  /// Product of spacings over the X_a axes (quadrature weight per node).
  double xa_weight() const {
    double w = 1.0;
    for (const auto& ax : xa) w *= ax.spacing;
    return w;
  }
  double xperp_weight() const {
    double w = 1.0;
    for (const auto& ax : xperp) w *= ax.spacing;
    return w;
  }
  double total_weight() const { return xa_weight() * xperp_weight(); }

  /// Volume of the X_a box.
  double xa_volume() const {
    double v = 1.0;
    for (const auto& ax : xa) v *= ax.length;
    return v;
  }

  /// Decode flat X_a index into per-axis indices.
  void xa_indices(std::size_t flat, int* idx) const {
    for (int d = dim_xa() - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(flat % xa[d].count);
      flat /= xa[d].count;
    }
  }
  void xa_node(std::size_t flat, double* w) const {
    for (int d = dim_xa() - 1; d >= 0; --d) {
      w[d] = xa[d].nodes[flat % xa[d].count];
      flat /= xa[d].count;
    }
  }
  void xa_frequency(std::size_t flat, double* xi) const {
    for (int d = dim_xa() - 1; d >= 0; --d) {
      xi[d] = xa[d].frequencies[flat % xa[d].count];
      flat /= xa[d].count;
    }
  }
  void xperp_node(std::size_t flat, double* s) const {
    for (int d = dim_xperp() - 1; d >= 0; --d) {
      s[d] = xperp[d].nodes[flat % xperp[d].count];
      flat /= xperp[d].count;
    }
  }
};

/// Gauge tag for complex fields on the product grid. In the removed gauge
/// the stored values represent exp(-i rho . w_a) times the true function;
/// the absolute-gauge exponential is never materialized for |Im z| large.
enum class Gauge : std::uint8_t { absolute = 0, plane_wave_removed = 1 };

struct Field {
  std::vector<cplx> values;
  Gauge gauge = Gauge::absolute;

  Field() = default;
  explicit Field(std::size_t n, Gauge g = Gauge::absolute) : values(n), gauge(g) {}

  std::size_t size() const { return values.size(); }
  cplx* data() { return values.data(); }
  const cplx* data() const { return values.data(); }
};

struct RealField {
  std::vector<double> values;

  RealField() = default;
  explicit RealField(std::size_t n) : values(n, 0.0) {}
  std::size_t size() const { return values.size(); }
};

double field_norm(const Field& f, const GridPair& g);
double field_dist(const Field& a, const Field& b, const GridPair& g);

/// Grid-quadrature L2 inner product <a, b> = sum conj(a) b h.
cplx field_dot(const Field& a, const Field& b, const GridPair& g);

struct GridSpec {
  std::vector<double> xa_lengths;
  std::vector<int> xa_counts;
  std::vector<double> xperp_lengths;
  std::vector<int> xperp_counts;
};

/// Build the product grid with dual-frequency tables precomputed.
/// Rejects odd counts and counts below 8.
GridPair build_grids(const GridSpec& spec);

}  // namespace f3

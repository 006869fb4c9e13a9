#include "f3/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "f3/numerics/quadrature.hpp"

namespace f3 {

namespace {

struct CellBox {
  std::vector<double> lo, hi;
};

CellBox cell_box(const GridPair& grid, std::size_t flat) {
  const int m = grid.dim_xa();
  CellBox box;
  box.lo.resize(m);
  box.hi.resize(m);
  std::vector<double> xi(m);
  grid.xa_frequency(flat, xi.data());
  for (int d = 0; d < m; ++d) {
    const double hd = grid.xa[d].dual_spacing();
    box.lo[d] = xi[d] - 0.5 * hd;
    box.hi[d] = xi[d] + 0.5 * hd;
  }
  return box;
}

// Zero of Q(xi) = (E - eps_alpha) + |xi|^2 + 2 r . xi inside the box,
// by exact interval bounds of the separable quadratic.
bool quadratic_zero_in_box(double e_minus_eps, const Eigen::VectorXd& r, const CellBox& box) {
  double qmin = e_minus_eps - r.squaredNorm();
  double qmax = qmin;
  for (std::size_t d = 0; d < box.lo.size(); ++d) {
    const double a = box.lo[d] + r(d);
    const double b = box.hi[d] + r(d);
    const double hi2 = std::max(a * a, b * b);
    const double lo2 = (a <= 0.0 && b >= 0.0) ? 0.0 : std::min(a * a, b * b);
    qmin += lo2;
    qmax += hi2;
  }
  return qmin <= 0.0 && qmax >= 0.0;
}

// Zeros of E - F at a momentum with Im z != 0 require nu . xi = 0 and the
// real quadratic to vanish on that slice.
bool segment_zero_in_box(double e_minus_eps, const Eigen::VectorXd& re_rho,
                         const Eigen::VectorXd& nu, const CellBox& box,
                         std::vector<double>* roots_out) {
  const int m = static_cast<int>(box.lo.size());
  double tc = 0.0, dt = 0.0;
  for (int d = 0; d < m; ++d) {
    const double c = 0.5 * (box.lo[d] + box.hi[d]);
    tc += nu(d) * c;
    dt += std::abs(nu(d)) * 0.5 * (box.hi[d] - box.lo[d]);
  }
  if (std::abs(tc) > dt) return false;

  if (m == 2) {
    Eigen::Vector2d u(-nu(1), nu(0));
    double t0 = -1e300, t1 = 1e300;
    for (int d = 0; d < 2; ++d) {
      if (std::abs(u(d)) < 1e-15) {
        if (box.lo[d] > 0.0 || box.hi[d] < 0.0) return false;
        continue;
      }
      double a = box.lo[d] / u(d), b = box.hi[d] / u(d);
      if (a > b) std::swap(a, b);
      t0 = std::max(t0, a);
      t1 = std::min(t1, b);
    }
    if (t0 > t1) return false;
    const double ru = re_rho(0) * u(0) + re_rho(1) * u(1);
    auto g = [&](double t) { return e_minus_eps + t * t + 2.0 * ru * t; };
    double gmin = std::min(g(t0), g(t1));
    double gmax = std::max(g(t0), g(t1));
    const double tv = -ru;
    if (tv > t0 && tv < t1) {
      gmin = std::min(gmin, g(tv));
      gmax = std::max(gmax, g(tv));
    }
    if (!(gmin <= 0.0 && gmax >= 0.0)) return false;
    if (roots_out) {
      // tau^2 + 2 ru tau + e_minus_eps = 0
      const double disc = ru * ru - e_minus_eps;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        for (double tau : {-ru - sq, -ru + sq})
          if (tau >= t0 - 1e-12 && tau <= t1 + 1e-12) {
            roots_out->push_back(tau * u(0));  // x-coordinate split
            roots_out->push_back(tau * u(1));  // y-coordinate split
          }
      }
    }
    return true;
  }
  // Conservative fallback in higher dimension: box test on the slice's
  // superset. May average a few extra cells, which is harmless.
  return quadratic_zero_in_box(e_minus_eps, re_rho, box);
}

cplx integrate_box(const std::function<cplx(const std::vector<double>&)>& f,
                   const std::vector<double>& lo, const std::vector<double>& hi, int axis,
                   std::vector<double>& point, const QuadOptions& opt) {
  const int m = static_cast<int>(lo.size());
  if (axis == m - 1) {
    return adaptive_gk(
        [&](double x) {
          point[axis] = x;
          return f(point);
        },
        lo[axis], hi[axis], opt);
  }
  return adaptive_gk(
      [&](double x) {
        point[axis] = x;
        return integrate_box(f, lo, hi, axis + 1, point, opt);
      },
      lo[axis], hi[axis], opt);
}

cplx integrate_with_splits(const std::function<cplx(const std::vector<double>&)>& f,
                           const CellBox& box, const std::vector<std::vector<double>>& splits,
                           const QuadOptions& opt) {
  // Subdivide the box at the split coordinates per axis, integrate each
  // sub-box; keeps interior singular points on panel corners where the
  // Gauss-Kronrod nodes never land.
  const int m = static_cast<int>(box.lo.size());
  std::vector<std::vector<double>> edges(m);
  for (int d = 0; d < m; ++d) {
    edges[d].push_back(box.lo[d]);
    for (double s : splits[d])
      if (s > box.lo[d] + 1e-14 && s < box.hi[d] - 1e-14) edges[d].push_back(s);
    edges[d].push_back(box.hi[d]);
    std::sort(edges[d].begin(), edges[d].end());
  }
  std::vector<int> idx(m, 0);
  cplx total(0.0, 0.0);
  while (true) {
    std::vector<double> lo(m), hi(m);
    for (int d = 0; d < m; ++d) {
      lo[d] = edges[d][idx[d]];
      hi[d] = edges[d][idx[d] + 1];
    }
    std::vector<double> point(m);
    total += integrate_box(f, lo, hi, 0, point, opt);
    int d = m - 1;
    while (d >= 0) {
      if (++idx[d] < static_cast<int>(edges[d].size()) - 1) break;
      idx[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return total;
}

}  // namespace

cplx average_inverse_multiplier(double eigenvalue, const ComplexMomentum& mom,
                                const std::vector<double>& lo, const std::vector<double>& hi,
                                double tol) {
  const int m = static_cast<int>(lo.size());
  const double e_minus_eps = eigenvalue - mom.epsilon_alpha;
  Eigen::VectorXcd rho = mom.rho();

  auto integrand = [&](const std::vector<double>& xi) {
    cplx den(e_minus_eps, 0.0);
    double x2 = 0.0;
    cplx rx(0.0, 0.0);
    for (int d = 0; d < m; ++d) {
      x2 += xi[d] * xi[d];
      rx += rho(d) * xi[d];
    }
    den += x2 + 2.0 * rx;
    return 1.0 / den;
  };

  // Split at zeros of E - F inside the cell (and at the node) so that
  // singular points sit on sub-panel corners.
  CellBox box{lo, hi};
  std::vector<std::vector<double>> splits(m);
  std::vector<double> roots;
  if (mom.z.imag() != 0.0) {
    segment_zero_in_box(e_minus_eps, mom.re_rho(), mom.nu, box, &roots);
    for (std::size_t i = 0; i + 1 < roots.size(); i += 2) {
      splits[0].push_back(roots[i]);
      if (m > 1) splits[1].push_back(roots[i + 1]);
    }
  }
  for (int d = 0; d < m; ++d) splits[d].push_back(0.5 * (lo[d] + hi[d]));

  QuadOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = 0.0;
  opt.max_depth = 38;
  cplx integral = integrate_with_splits(integrand, box, splits, opt);

  double vol = 1.0;
  for (int d = 0; d < m; ++d) vol *= (hi[d] - lo[d]);
  return integral / vol;
}

MultiplierTable build_multiplier_table(const ComplexMomentum& mom, const SpectralData& sd,
                                       const ChannelCut& cut, const GridPair& grid,
                                       const MultiplierOptions& opt,
                                       const std::optional<Eigen::VectorXd>& set_rho_real) {
  const std::size_t na = grid.xa_size();
  const int m = grid.dim_xa();

  MultiplierTable table;
  table.real_limit_set = set_rho_real.has_value();
  table.f_values.resize(na);
  table.patch_first.assign(na, -1);
  table.patch_count.assign(na, 0);

  const Eigen::VectorXd rho_for_set = set_rho_real ? *set_rho_real : mom.re_rho();
  Eigen::VectorXd xi(m);
  std::vector<double> xibuf(m);

  for (std::size_t c = 0; c < na; ++c) {
    grid.xa_frequency(c, xibuf.data());
    for (int d = 0; d < m; ++d) xi(d) = xibuf[d];
    const cplx F = f_rho(mom, xi);
    table.f_values[c] = F;

    CellBox box = cell_box(grid, c);
    bool any_patch = false;
    for (std::size_t bp = 0; bp < cut.bound.size(); ++bp) {
      const int k = cut.bound[bp];
      const double E = sd.eigenvalues(k);
      const cplx d = cplx(E, 0.0) - F;
      const double scale = std::max(1.0, std::abs(E) + std::abs(F));
      const bool exact = std::abs(d) <= opt.exact_tol * scale;

      bool contains;
      if (table.real_limit_set) {
        contains = quadratic_zero_in_box(E - mom.epsilon_alpha, rho_for_set, box);
      } else if (mom.z.imag() != 0.0) {
        contains = segment_zero_in_box(E - mom.epsilon_alpha, rho_for_set, mom.nu, box, nullptr);
      } else {
        contains = quadratic_zero_in_box(E - mom.epsilon_alpha, rho_for_set, box);
      }

      if (exact || contains) {
        MultiplierPatch patch;
        patch.cell = c;
        patch.bound_pos = static_cast<int>(bp);
        patch.eigen_index = k;
        patch.exact = exact;
        patch.point = exact ? cplx(0.0, 0.0) : 1.0 / d;
        patch.avg = average_inverse_multiplier(E, mom, box.lo, box.hi, opt.avg_quad_tol);
        if (!std::isfinite(patch.avg.real()) || !std::isfinite(patch.avg.imag()) ||
            std::abs(patch.avg) == 0.0)
          throw solver_error("multiplier cell average failed to converge");
        if (!any_patch) {
          table.patch_first[c] = static_cast<int>(table.patches.size());
          any_patch = true;
        }
        table.patches.push_back(patch);
        table.patch_count[c] += 1;
      } else if (std::abs(d) < opt.underflow_tol * scale) {
        std::ostringstream os;
        os << "multiplier entry (E_k - F) underflow at non-averaged dual cell " << c
           << " (grid hit an excluded configuration)";
        throw solver_error(os.str());
      }
    }

    // Continuum-surrogate part: eigenvalues above the cut never cross F
    // in the admissible region; a near-hit means the configuration is
    // excluded rather than averaged.
    if (std::abs(F.imag()) < opt.underflow_tol) {
      const double re = F.real();
      if (re >= cut.epsilon0 - opt.underflow_tol) {
        const auto& ev = sd.eigenvalues;
        for (int k = 0; k < sd.n(); ++k) {
          if (std::find(cut.bound.begin(), cut.bound.end(), k) != cut.bound.end()) continue;
          if (std::abs(ev(k) - re) < opt.underflow_tol) {
            throw solver_error("multiplier underflow on a continuum-surrogate eigenvalue");
          }
        }
      }
    }
  }
  return table;
}

}  // namespace f3

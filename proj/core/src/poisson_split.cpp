#include <algorithm>
#include <cmath>

#include "f3/faddeev_green.hpp"
#include "f3/numerics/quadrature.hpp"

namespace f3 {

namespace {

struct SplitGeometry {
  double z = 0.0;          // real part of z (>= 0)
  double lambda = 0.0;     // real spectral parameter
  double rc = 0.0;         // circle radius sqrt(lambda - eps')
  Eigen::VectorXd re_rho;  // z nu + rho_perp
  Eigen::VectorXd nu;
};

SplitGeometry split_geometry(const ComplexMomentum& mom, double eps_channel) {
  if (mom.nu.size() != 2)
    throw config_error("verify_poisson_split: implemented for dim X_a = 2");
  if (mom.z.imag() != 0.0) throw config_error("verify_poisson_split: momentum must be real");
  SplitGeometry geo;
  geo.z = mom.z.real();
  geo.lambda = mom.lambda.real();
  if (!(geo.lambda > eps_channel))
    throw config_error("verify_poisson_split: requires lambda > eps' (open channel)");
  geo.rc = std::sqrt(geo.lambda - eps_channel);
  geo.re_rho = mom.re_rho();
  geo.nu = mom.nu;
  return geo;
}

// phi(kappa) = |g^(kappa - Re rho)|^2 shifted into the conjugated frame:
// the caller encodes the shift through the packet's modulation.
double phi_at(const GaussianPacket& g, double x, double y) {
  Eigen::VectorXd k(2);
  k << x, y;
  return std::norm(g.transform(k));
}

// Angles where the Heaviside cut meets the circle; the integrands are
// singular or discontinuous there, so theta integrals split at them.
std::vector<double> cut_angles(const SplitGeometry& geo) {
  std::vector<double> out;
  if (geo.z < geo.rc) {
    const double tnu = std::atan2(geo.nu(1), geo.nu(0));
    const double dth = std::acos(geo.z / geo.rc);
    for (double th : {tnu + dth, tnu - dth}) {
      double t = std::fmod(th, 2.0 * M_PI);
      if (t < 0.0) t += 2.0 * M_PI;
      out.push_back(t);
    }
  }
  return out;
}

cplx segmented_theta(const std::function<cplx(double)>& f, const std::vector<double>& splits,
                     const QuadOptions& opt) {
  std::vector<double> edges{0.0, 2.0 * M_PI};
  for (double s : splits)
    if (s > 1e-12 && s < 2.0 * M_PI - 1e-12) edges.push_back(s);
  std::sort(edges.begin(), edges.end());
  cplx total(0.0, 0.0);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    total += adaptive_gk(f, edges[i], edges[i + 1], opt);
  return total;
}

}  // namespace

cplx poisson_split_continuum_pairing(const ComplexMomentum& mom_real, double eps_channel,
                                     const GaussianPacket& g) {
  SplitGeometry geo = split_geometry(mom_real, eps_channel);
  const double rc = geo.rc;
  const double smax = rc + 14.0 / std::max(g.width, 0.2) +
                      (g.modulation.size() == 2 ? g.modulation.norm() : 0.0) +
                      g.center.size() * 0.0;

  QuadOptions sopt;
  sopt.rel_tol = 1e-8;
  sopt.abs_tol = 1e-12;
  QuadOptions topt;
  topt.rel_tol = 1e-7;
  topt.abs_tol = 1e-12;

  const std::vector<double> splits = cut_angles(geo);

  // PV part: int_theta PV_s phi(s,theta) s / (s^2 - rc^2) ds
  cplx pv = segmented_theta(
      [&](double th) {
        const double cx = std::cos(th), sy = std::sin(th);
        return pv_radial([&](double s) { return cplx(phi_at(g, s * cx, s * sy) * s, 0.0); },
                         rc, smax, sopt);
      },
      splits, topt);

  // Residue part with the (1 - 2H) mask: i pi (1/2) int (1-2H) phi r dtheta / r ... m = 2.
  cplx res = segmented_theta(
      [&](double th) {
        const double cx = std::cos(th), sy = std::sin(th);
        const double t = geo.nu(0) * rc * cx + geo.nu(1) * rc * sy - geo.z;
        const double mask = (t > 0.0) ? 1.0 : (t < 0.0 ? 0.0 : 0.5);
        return cplx(phi_at(g, rc * cx, rc * sy) * (1.0 - 2.0 * mask), 0.0);
      },
      splits, topt);

  return pv + cplx(0.0, M_PI) * 0.5 * res;
}

PoissonSplitReport verify_poisson_split(const ComplexMomentum& mom_real, double eps_channel,
                                        const GaussianPacket& test_fn,
                                        const std::vector<double>& eta_schedule) {
  SplitGeometry geo = split_geometry(mom_real, eps_channel);
  const double rc = geo.rc;
  const double smax = rc + 14.0 / std::max(test_fn.width, 0.2) +
                      (test_fn.modulation.size() == 2 ? test_fn.modulation.norm() : 0.0);

  QuadOptions sopt;
  sopt.rel_tol = 1e-8;
  sopt.abs_tol = 1e-12;
  sopt.max_depth = 46;
  QuadOptions topt;
  topt.rel_tol = 1e-7;
  topt.abs_tol = 1e-12;

  // Limiting-absorption side: exact denominator Q + 2 i eta (nu.kappa - z).
  const std::vector<double> splits = cut_angles(geo);

  auto regularized = [&](double eta) {
    return segmented_theta(
        [&](double th) {
          const double cx = std::cos(th), sy = std::sin(th);
          const double nu_dir = geo.nu(0) * cx + geo.nu(1) * sy;
          auto inner = [&](double s) {
            const cplx den(s * s - rc * rc, 2.0 * eta * (s * nu_dir - geo.z));
            return cplx(phi_at(test_fn, s * cx, s * sy) * s, 0.0) / den;
          };
          return adaptive_gk(inner, 0.0, rc, sopt) + adaptive_gk(inner, rc, smax, sopt);
        },
        splits, topt);
  };

  std::vector<cplx> vals;
  for (double eta : eta_schedule) vals.push_back(regularized(eta));
  // Neville to eta = 0.
  const int n = static_cast<int>(vals.size());
  std::vector<cplx> tab = vals;
  for (int j = 1; j < n; ++j)
    for (int i = n - 1; i >= j; --i) {
      const double xi = eta_schedule[i];
      const double xj = eta_schedule[i - j];
      tab[i] = (xi * tab[i - 1] - xj * tab[i]) / (xi - xj);
    }
  const cplx limit = tab[n - 1];

  // +i0 reference: PV + i pi half-residue (no mask).
  cplx pv = segmented_theta(
      [&](double th) {
        const double cx = std::cos(th), sy = std::sin(th);
        return pv_radial(
            [&](double s) { return cplx(phi_at(test_fn, s * cx, s * sy) * s, 0.0); }, rc, smax,
            sopt);
      },
      splits, topt);
  cplx circ_all = segmented_theta(
      [&](double th) {
        return cplx(phi_at(test_fn, rc * std::cos(th), rc * std::sin(th)), 0.0);
      },
      splits, topt);
  const cplx reference = pv + cplx(0.0, M_PI) * 0.5 * circ_all;

  // Masked circle term.
  cplx circ_masked = segmented_theta(
      [&](double th) {
        const double cx = std::cos(th), sy = std::sin(th);
        const double t = geo.nu(0) * rc * cx + geo.nu(1) * rc * sy - geo.z;
        const double mask = (t > 0.0) ? 1.0 : (t < 0.0 ? 0.0 : 0.5);
        return cplx(phi_at(test_fn, rc * cx, rc * sy) * mask, 0.0);
      },
      splits, topt);

  PoissonSplitReport rep;
  rep.circle_radius = rc;
  rep.constant_recorded = M_PI;  // (lambda - eps')^{(m-2)/2} = 1 for m = 2
  rep.reference_pairing = reference;
  rep.lhs = limit - reference;
  rep.rhs = cplx(0.0, -M_PI) * circ_masked;
  const double denom = std::max(std::abs(rep.rhs), 1e-9 * std::abs(reference)) + 1e-300;
  rep.rel_diff = std::abs(rep.lhs - rep.rhs) / denom;
  return rep;
}

}  // namespace f3

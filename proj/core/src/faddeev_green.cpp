#include "f3/faddeev_green.hpp"

#include <cmath>
#include <sstream>

namespace f3 {

RealLimitResult real_limit_green(const ComplexMomentum& mom_real, const SpectralData& sd,
                                 const ChannelCut& cut, const GridPair& grid,
                                 const std::vector<double>& eta_schedule, const Field& f,
                                 const GreenConfig& cfg, double spread_tol) {
  if (mom_real.z.imag() != 0.0)
    throw config_error("real_limit_green: momentum must sit on the real axis");
  if (!mom_real.in_plus)
    throw config_error("real_limit_green: lambda outside the admissible limit region");
  if (eta_schedule.size() < 2) throw config_error("real_limit_green: need >= 2 eta values");
  for (std::size_t i = 1; i < eta_schedule.size(); ++i)
    if (!(eta_schedule[i] < eta_schedule[i - 1]) || !(eta_schedule[i] > 0.0))
      throw config_error("real_limit_green: eta schedule must be positive decreasing");

  const Eigen::VectorXd target = mom_real.re_rho();
  std::vector<Field> vals;
  for (double eta : eta_schedule) {
    ComplexMomentum m = mom_real;
    m.z = cplx(mom_real.z.real(), eta);
    m.lambda = m.z * m.z + cplx(mom_real.rho_perp.squaredNorm() + mom_real.epsilon_alpha, 0.0);
    m.in_circ = true;
    GreenOperator op(m, sd, cut, grid, cfg, target);
    vals.push_back(op.apply(f));
  }

  // Neville extrapolation of the field family to eta = 0.
  const int n = static_cast<int>(vals.size());
  std::vector<Field> tab = vals;
  Field prev_diag = tab.back();
  for (int j = 1; j < n; ++j) {
    if (j == n - 1) prev_diag = tab[n - 1];
    for (int i = n - 1; i >= j; --i) {
      const double xi = eta_schedule[i];
      const double xj = eta_schedule[i - j];
      const double denom = xi - xj;
      for (std::size_t t = 0; t < tab[i].values.size(); ++t) {
        tab[i].values[t] =
            (xi * tab[i - 1].values[t] - xj * tab[i].values[t]) / denom;
      }
    }
  }

  RealLimitResult res;
  res.limit = tab[n - 1];
  res.limit.gauge = f.gauge;
  res.eta_schedule = eta_schedule;
  res.error_estimate = field_dist(tab[n - 1], prev_diag, grid);

  const double scale = field_norm(res.limit, grid) + 1e-300;
  if (res.error_estimate > spread_tol * scale) {
    std::ostringstream os;
    os << "real_limit_green: extrapolation spread " << res.error_estimate / scale
       << " exceeds tolerance " << spread_tol << " (grid too coarse near the singular set)";
    throw solver_error(os.str());
  }
  return res;
}

NormProbeDiagnostics green_norm_probe(const std::vector<ComplexMomentum>& path, double p,
                                      double r, const std::vector<Field>& probes,
                                      const SpectralData& sd, const ChannelCut& cut,
                                      const GridPair& grid, const GreenConfig& cfg) {
  if (!(p > 0.0) || !(r < 0.0) || !(r < p - 1.0))
    throw config_error("green_norm_probe: require p > 0, r < 0, r < p - 1");

  NormProbeDiagnostics diag;
  for (const auto& mom : path) {
    GreenOperator op(mom, sd, cut, grid, cfg);
    std::vector<double> norms;
    for (const auto& f : probes) {
      Field g = op.apply(f);
      norms.push_back(weighted_norm(g, r, sd, cut, grid));
    }
    if (!probes.empty()) {
      Field g = op.apply(probes.front());
      diag.l2_norms_first_probe.push_back(field_norm(g, grid));
    }
    double bound = 0.0;
    for (const cplx& F : op.table().f_values) {
      if (F.real() >= cut.epsilon0) {
        bound = std::numeric_limits<double>::infinity();
        break;
      }
      bound = std::max(bound, 1.0 / (cut.epsilon0 - F.real()));
    }
    diag.closed_channel_bound.push_back(bound);
    diag.weighted_norms.push_back(std::move(norms));
  }
  return diag;
}

cplx GaussianPacket::transform(const Eigen::VectorXd& xi) const {
  const int m = static_cast<int>(center.size());
  Eigen::VectorXd k = xi;
  if (modulation.size() == m) k -= modulation;
  const double s2 = width * width;
  const double amp = std::pow(2.0 * M_PI * s2, 0.5 * m) * std::exp(-0.5 * s2 * k.squaredNorm());
  return amp * std::polar(1.0, -k.dot(center));
}

double GaussianPacket::value(const Eigen::VectorXd& w) const {
  const double d2 = (w - center).squaredNorm();
  return std::exp(-0.5 * d2 / (width * width));
}

}  // namespace f3

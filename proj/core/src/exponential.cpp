#include "f3/exponential.hpp"

#include <cmath>
#include <sstream>

namespace f3 {

namespace {

Field multiply_real(const RealField& ia, const Field& f) {
  Field out(f.size(), f.gauge);
  for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = ia.values[i] * f.values[i];
  return out;
}

Field channel_source(const RealField& ia, const SpectralData& sd, int channel,
                     const GridPair& grid) {
  const std::size_t na = grid.xa_size();
  const std::size_t np = grid.xperp_size();
  const double inv_sqrt_h = 1.0 / std::sqrt(sd.quad_weight);
  Field out(na * np, Gauge::plane_wave_removed);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t p = 0; p < np; ++p) {
      const double psi = sd.eigenvectors(static_cast<Eigen::Index>(p), channel) * inv_sqrt_h;
      out.values[i * np + p] = ia.values[i * np + p] * psi;
    }
  return out;
}

struct CoreResult {
  Field w;
  int iterations = 0;
  double contraction = 0.0;
};

CoreResult fixed_point_solve(const GreenOperator& op, const RealField& ia, const Field& rhs,
                             const GridPair& grid, const SolveOptions& opt,
                             const Field* warm_start) {
  const double rhs_norm = field_norm(rhs, grid);
  CoreResult res;
  res.w = warm_start ? *warm_start : rhs;
  if (rhs_norm == 0.0) {
    res.w = rhs;
    return res;
  }
  double prev_delta = -1.0;
  int bad_streak = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    Field gw = op.apply(res.w);
    Field wn = rhs;
    for (std::size_t i = 0; i < wn.size(); ++i)
      wn.values[i] -= ia.values[i] * gw.values[i];
    const double delta = field_dist(wn, res.w, grid);
    res.w = std::move(wn);
    res.iterations = it + 1;
    if (prev_delta > 0.0 && delta > 0.0) {
      const double ratio = delta / prev_delta;
      res.contraction = std::max(res.contraction, ratio);
      if (ratio > opt.divergence_ratio) {
        if (++bad_streak >= 2) {
          std::ostringstream os;
          os << "contraction failure: iteration ratio " << ratio << " exceeds "
             << opt.divergence_ratio << " (interaction scale too large for the Neumann regime)";
          throw solver_error(os.str());
        }
      } else {
        bad_streak = 0;
      }
    }
    prev_delta = delta;
    if (delta <= opt.tol * rhs_norm) return res;
  }
  throw solver_error("fixed-point solve failed to reach tolerance within max_iterations");
}

void measure_residual(const GreenOperator& op, const RealField& ia, const SpectralData& sd,
                      const GridPair& grid, const Field& v, RemainderSolution& sol) {
  const std::size_t na = grid.xa_size();
  const std::size_t np = grid.xperp_size();
  const double inv_sqrt_h = 1.0 / std::sqrt(sd.quad_weight);
  const int channel = op.momentum().incident_channel;

  Field u(na * np, Gauge::plane_wave_removed);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t p = 0; p < np; ++p) {
      const double psi = sd.eigenvectors(static_cast<Eigen::Index>(p), channel) * inv_sqrt_h;
      u.values[i * np + p] = psi + v.values[i * np + p];
    }

  Field resid = op.apply_inverse(u);
  for (std::size_t i = 0; i < resid.size(); ++i) resid.values[i] += ia.values[i] * u.values[i];

  Field projected = resid;
  op.project_out_exact_modes(projected);
  const double full = field_norm(resid, grid);
  const double reg = field_norm(projected, grid);
  const double flux = std::sqrt(std::max(0.0, full * full - reg * reg));

  Field rhs = channel_source(ia, sd, channel, grid);
  const double scale = field_norm(rhs, grid) + 1e-300;
  sol.residual = reg / scale;
  sol.kernel_flux = flux / scale;
}

}  // namespace

RemainderSolution solve_remainder(const ComplexMomentum& mom, const RealField& ia,
                                  const SpectralData& sd, const ChannelCut& cut,
                                  const GridPair& grid, const SolveOptions& opt,
                                  const Field* warm_start) {
  RemainderSolution sol;
  sol.mom = mom;

  Field rhs = channel_source(ia, sd, mom.incident_channel, grid);
  if (field_norm(rhs, grid) == 0.0) {
    sol.v = Field(grid.total_size(), Gauge::plane_wave_removed);
    return sol;
  }

  if (mom.z.imag() != 0.0) {
    GreenOperator op(mom, sd, cut, grid, opt.green);
    CoreResult core = fixed_point_solve(op, ia, rhs, grid, opt, warm_start);
    sol.iterations = core.iterations;
    sol.contraction_estimate = core.contraction;
    sol.v = op.apply(core.w);
    for (cplx& x : sol.v.values) x = -x;
    sol.v.gauge = Gauge::plane_wave_removed;
    measure_residual(op, ia, sd, grid, sol.v, sol);
    return sol;
  }

  // Real axis: solve at z + i eta down the schedule, extrapolate v.
  if (!mom.in_plus)
    throw config_error("solve_remainder: real momentum outside the admissible limit region");
  const Eigen::VectorXd target = mom.re_rho();
  std::vector<Field> vs;
  Field warm;
  bool have_warm = warm_start != nullptr;
  if (have_warm) warm = *warm_start;
  for (double eta : opt.eta_schedule) {
    ComplexMomentum m = mom;
    m.z = cplx(mom.z.real(), eta);
    m.lambda = m.z * m.z + cplx(mom.rho_perp.squaredNorm() + mom.epsilon_alpha, 0.0);
    m.in_circ = true;
    GreenOperator op(m, sd, cut, grid, opt.green, target);
    CoreResult core = fixed_point_solve(op, ia, rhs, grid, opt, have_warm ? &warm : nullptr);
    warm = core.w;
    have_warm = true;
    sol.iterations += core.iterations;
    sol.contraction_estimate = std::max(sol.contraction_estimate, core.contraction);
    Field v = op.apply(core.w);
    for (cplx& x : v.values) x = -x;
    vs.push_back(std::move(v));
    if (eta == opt.eta_schedule.back()) {
      sol.v = vs.back();  // placeholder; replaced by the extrapolation below
      measure_residual(op, ia, sd, grid, vs.back(), sol);
    }
  }

  const int n = static_cast<int>(vs.size());
  std::vector<Field> tab = vs;
  Field prev = tab[n - 1];
  for (int j = 1; j < n; ++j) {
    if (j == n - 1) prev = tab[n - 1];
    for (int i = n - 1; i >= j; --i) {
      const double xi = opt.eta_schedule[i];
      const double xj = opt.eta_schedule[i - j];
      for (std::size_t t = 0; t < tab[i].values.size(); ++t)
        tab[i].values[t] = (xi * tab[i - 1].values[t] - xj * tab[i].values[t]) / (xi - xj);
    }
  }
  sol.eta_error_estimate = field_dist(tab[n - 1], prev, grid);
  sol.v = std::move(tab[n - 1]);
  sol.v.gauge = Gauge::plane_wave_removed;

  const double vscale = field_norm(sol.v, grid) + 1e-300;
  if (sol.eta_error_estimate > opt.spread_tol * vscale) {
    std::ostringstream os;
    os << "solve_remainder: eta extrapolation spread " << sol.eta_error_estimate / vscale
       << " exceeds tolerance " << opt.spread_tol;
    throw solver_error(os.str());
  }
  return sol;
}

cplx pairing(const RemainderSolution& sol, const RealField& ia, const Eigen::VectorXd& zeta,
             const SpectralData& sd, int alpha_prime, const GridPair& grid) {
  const std::size_t na = grid.xa_size();
  const std::size_t np = grid.xperp_size();
  const int m = grid.dim_xa();
  const double inv_sqrt_h = 1.0 / std::sqrt(sd.quad_weight);
  const int alpha = sol.mom.incident_channel;

  std::vector<double> w(m);
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    cplx slice(0.0, 0.0);
    for (std::size_t p = 0; p < np; ++p) {
      const double psi_a =
          sd.eigenvectors(static_cast<Eigen::Index>(p), alpha) * inv_sqrt_h;
      const double psi_b =
          sd.eigenvectors(static_cast<Eigen::Index>(p), alpha_prime) * inv_sqrt_h;
      const cplx u = sol.v.size() ? psi_a + sol.v.values[i * np + p] : cplx(psi_a, 0.0);
      slice += ia.values[i * np + p] * u * psi_b;
    }
    grid.xa_node(i, w.data());
    double phase = 0.0;
    for (int d = 0; d < m; ++d) phase += zeta(d) * w[d];
    acc += slice * std::polar(1.0, -phase);
  }
  return acc * grid.total_weight();
}

cplx born_term(const Eigen::VectorXd& zeta, int alpha, int alpha_prime, const RealField& ia,
               const SpectralData& sd, const GridPair& grid) {
  RemainderSolution stub;
  stub.mom.incident_channel = alpha;
  stub.v = Field();
  return pairing(stub, ia, zeta, sd, alpha_prime, grid);
}

std::vector<cplx> pairing_profile(const RemainderSolution& sol, const RealField& ia,
                                  const SpectralData& sd, int alpha_prime,
                                  const GridPair& grid) {
  const std::size_t na = grid.xa_size();
  const std::size_t np = grid.xperp_size();
  const double inv_sqrt_h = 1.0 / std::sqrt(sd.quad_weight);
  const int alpha = sol.mom.incident_channel;

  std::vector<cplx> profile(na);
  for (std::size_t i = 0; i < na; ++i) {
    cplx slice(0.0, 0.0);
    for (std::size_t p = 0; p < np; ++p) {
      const double psi_a = sd.eigenvectors(static_cast<Eigen::Index>(p), alpha) * inv_sqrt_h;
      const double psi_b =
          sd.eigenvectors(static_cast<Eigen::Index>(p), alpha_prime) * inv_sqrt_h;
      const cplx u = sol.v.size() ? psi_a + sol.v.values[i * np + p] : cplx(psi_a, 0.0);
      slice += ia.values[i * np + p] * u * psi_b;
    }
    profile[i] = slice;
  }
  return profile;
}

cplx pairing_from_profile(const std::vector<cplx>& profile, const Eigen::VectorXd& zeta,
                          const GridPair& grid) {
  const std::size_t na = grid.xa_size();
  const int m = grid.dim_xa();
  std::vector<double> w(m);
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    grid.xa_node(i, w.data());
    double phase = 0.0;
    for (int d = 0; d < m; ++d) phase += zeta(d) * w[d];
    acc += profile[i] * std::polar(1.0, -phase);
  }
  return acc * grid.total_weight();
}

}  // namespace f3

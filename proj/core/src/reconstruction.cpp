#include "f3/reconstruction.hpp"

#include <cmath>
#include <sstream>

#include "f3/numerics/parallel.hpp"

namespace f3 {

ReconstructionPlan plan_reconstruction(const Eigen::VectorXd& zeta, double interval_lo,
                                       double interval_hi, const SpectralData& sd, int channel,
                                       const std::vector<double>& lambda_prime, int n_samples) {
  if (zeta.size() != 2) throw config_error("plan_reconstruction: zeta must be 2-dimensional");
  const double eps_a = sd.eigenvalues(channel);
  if (!(interval_lo < interval_hi) || !(interval_lo > eps_a) || !(interval_hi < 0.0))
    throw config_error("plan_reconstruction: interval must be open, inside (eps_alpha, 0)");

  ReconstructionPlan plan;
  plan.channel = channel;
  plan.zeta = zeta;
  plan.ball_radius = 2.0 * std::sqrt(interval_hi - eps_a);
  const double az = zeta.norm();
  if (!(az < plan.ball_radius)) throw config_error("zeta outside ball");
  if (az == 0.0) throw config_error("plan_reconstruction: zeta must be nonzero");

  const double quarter = 0.25 * az * az + eps_a;
  if (near_threshold(quarter, lambda_prime, 1e-6)) throw config_error("excluded sphere");

  plan.rho_perp = -0.5 * zeta;
  Eigen::VectorXd nu(2);
  nu << -zeta(1), zeta(0);
  plan.nu = nu / nu.norm();

  // Channel cut: midpoint between the top of the working window and the
  // continuum edge, nudged off eigenvalues.
  double eps1 = 0.5 * std::max(quarter, interval_hi);
  for (int guard = 0; guard < 100; ++guard) {
    bool clash = false;
    for (int k = 0; k < sd.n(); ++k)
      if (std::abs(sd.eigenvalues(k) - eps1) < 1e-6) clash = true;
    if (!clash) break;
    eps1 += 1e-4 * std::abs(eps1);
  }
  if (!(quarter < eps1) || !(eps1 < 0.0))
    throw config_error("plan_reconstruction: no admissible epsilon1");
  plan.epsilon1 = eps1;
  double eps0 = std::numeric_limits<double>::infinity();
  for (double t : lambda_prime)
    if (t > eps1) eps0 = std::min(eps0, t);
  plan.epsilon0 = eps0;

  const double base = plan.rho_perp.squaredNorm() + eps_a;  // = quarter
  const double lam_lo = std::max(interval_lo, base);
  const double lam_hi = std::min({interval_hi, eps0});
  if (!(lam_lo < lam_hi)) throw config_error("empty z-interval");
  plan.z_lo = std::sqrt(std::max(0.0, lam_lo - base));
  plan.z_hi = std::sqrt(lam_hi - base);
  if (!(plan.z_hi > plan.z_lo + 1e-12)) throw config_error("empty z-interval");

  // Chebyshev-distributed samples, nudged away from Lambda' energies.
  for (int k = 0; k < n_samples; ++k) {
    const double t = std::cos(M_PI * (2.0 * k + 1.0) / (2.0 * n_samples));
    double zval = 0.5 * (plan.z_lo + plan.z_hi) + 0.5 * (plan.z_hi - plan.z_lo) * t;
    double lam = zval * zval + base;
    if (near_threshold(lam, lambda_prime, 1e-6)) {
      zval += 1e-5 * (plan.z_hi - plan.z_lo);
      lam = zval * zval + base;
      if (near_threshold(lam, lambda_prime, 1e-6)) continue;
    }
    plan.z_samples.push_back(zval);
  }
  std::sort(plan.z_samples.begin(), plan.z_samples.end());
  if (plan.z_samples.size() < 2) throw config_error("empty z-interval");
  return plan;
}

namespace {

ComplexMomentum plan_momentum(const ReconstructionPlan& plan, cplx z, const SpectralData& sd,
                              const ChannelCut& cut) {
  return momentum(z, plan.nu, plan.rho_perp, sd, cut, plan.channel);
}

}  // namespace

BoundaryData boundary_data(const ReconstructionPlan& plan, const PipelineContext& ctx,
                           ReconstructionMode mode) {
  BoundaryData out;
  const SpectralData& sd = *ctx.sd;
  auto [channels, cut] = channel_partition(sd, plan.epsilon1, *ctx.grid);
  const double base = plan.rho_perp.squaredNorm() + sd.eigenvalues(plan.channel);

  std::vector<std::vector<Field>> warm_bank;
  for (double zk : plan.z_samples) {
    const double lambda = zk * zk + base;
    if (near_threshold(lambda, ctx.lambda_prime, 1e-6)) {
      out.dropped_z.push_back(zk);
      continue;
    }
    Eigen::VectorXd rho = plan.rho_perp + zk * plan.nu;
    Eigen::VectorXd rho_out = rho + plan.zeta;

    PairingGenOptions gen = ctx.gen;
    gen.rho_perp_mag = plan.rho_perp.norm();
    PairingDataSet data;
    try {
      data = generate_pairing_data(lambda, plan.channel, plan.nu, zk, {rho_out}, *ctx.ia, sd,
                                   cut, *ctx.grid, gen, &warm_bank);
    } catch (const solver_error&) {
      out.dropped_z.push_back(zk);
      continue;
    }
    out.max_contraction = std::max(out.max_contraction, data.max_contraction);

    ForwardResult fwd = forward_smatrix(data);
    ComplexMomentum mom = plan_momentum(plan, cplx(zk, 0.0), sd, cut);

    InvertResult inv;
    if (mode == ReconstructionMode::near_forward)
      inv = invert_smatrix_near_forward(fwd.kernels, data.circles, data.extra_outgoing, mom,
                                        lambda);
    else
      inv = invert_smatrix(fwd.kernels, data.circles, data.extra_outgoing, mom, lambda);
    out.siblings_excluded = out.siblings_excluded && inv.siblings_excluded;

    int cpos = -1;
    for (std::size_t c = 0; c < inv.channels.size(); ++c)
      if (inv.channels[c] == plan.channel) cpos = static_cast<int>(c);
    if (cpos < 0) {
      out.dropped_z.push_back(zk);
      continue;
    }
    // rho + zeta is the second cut node of the incident circle; read the
    // solved value there and keep the Nystrom extra column as cross-check.
    const int node = data.circles[cpos].find_node(rho_out, 1e-9 * (1.0 + rho_out.norm()));
    BoundarySample s;
    s.z = zk;
    s.value = node >= 0 ? inv.node_values[cpos][node] : inv.extra_values[cpos][0];
    s.condition_number = std::max(fwd.condition_number, inv.condition_number);
    s.solver_residual = data.max_residual;
    out.samples.push_back(s);
  }
  return out;
}

std::vector<std::pair<cplx, cplx>> oracle_pairing_path(const ReconstructionPlan& plan,
                                                       const std::vector<cplx>& z_list,
                                                       const PipelineContext& ctx) {
  const SpectralData& sd = *ctx.sd;
  auto [channels, cut] = channel_partition(sd, plan.epsilon1, *ctx.grid);
  std::vector<std::pair<cplx, cplx>> out(z_list.size());
  Field warm;
  bool have_warm = false;
  for (std::size_t i = 0; i < z_list.size(); ++i) {
    ComplexMomentum mom = plan_momentum(plan, z_list[i], sd, cut);
    RemainderSolution sol = solve_remainder(mom, *ctx.ia, sd, cut, *ctx.grid, ctx.gen.solve,
                                            have_warm ? &warm : nullptr);
    warm = Field(ctx.grid->total_size(), Gauge::plane_wave_removed);
    for (std::size_t t = 0; t < warm.size(); ++t) warm.values[t] = -sol.v.values[t];
    have_warm = true;
    out[i] = {z_list[i], pairing(sol, *ctx.ia, plan.zeta, sd, plan.channel, *ctx.grid)};
  }
  return out;
}

ReconstructionReport reconstruct_ball(const PipelineContext& ctx,
                                      const EffectiveInteraction& truth, int channel,
                                      const SweepConfig& cfg) {
  ReconstructionReport rep;
  const SpectralData& sd = *ctx.sd;
  const double eps_a = sd.eigenvalues(channel);
  rep.ball_radius = 2.0 * std::sqrt(cfg.interval_hi - eps_a);
  rep.mode = cfg.mode == ReconstructionMode::full ? "full" : "near_forward";

  // Excluded spheres inside the sweep range.
  for (double t : ctx.lambda_prime) {
    const double r2 = 4.0 * (t - eps_a);
    if (r2 > 0.0 && std::sqrt(r2) < 0.95 * rep.ball_radius)
      rep.excluded_spheres.push_back(std::sqrt(r2));
  }

  std::vector<Eigen::VectorXd> zetas;
  for (int ring = 1; ring <= cfg.zeta_rings; ++ring) {
    const double r = cfg.ring_cap * rep.ball_radius * ring / cfg.zeta_rings;
    bool excluded = false;
    for (double ex : rep.excluded_spheres)
      if (std::abs(r - ex) < 1e-3) excluded = true;
    if (excluded) continue;  // skipped ring, filled by interpolation at report level
    for (int j = 0; j < cfg.zeta_per_ring; ++j) {
      const double th = 2.0 * M_PI * j / cfg.zeta_per_ring;
      Eigen::VectorXd zeta(2);
      zeta << r * std::cos(th), r * std::sin(th);
      zetas.push_back(zeta);
    }
  }

  rep.records.resize(zetas.size());
  parallel_for(zetas.size(), cfg.threads, [&](std::size_t i) {
    ZetaRecord& rec = rep.records[i];
    rec.zeta = zetas[i];
    rec.abs_zeta = zetas[i].norm();
    rec.vhat_true = effective_fourier_direct(truth, *ctx.grid, zetas[i]);
    try {
      ReconstructionPlan plan =
          plan_reconstruction(zetas[i], cfg.interval_lo, cfg.interval_hi, sd, channel,
                              ctx.lambda_prime, cfg.z_samples);

      if (cfg.run_oracle) {
        std::vector<cplx> zlist;
        const double y0 = 5.0 * std::sqrt(-eps_a);
        for (double y : {1.0, 2.0, 4.0, 8.0}) zlist.push_back(cplx(0.0, y0 * y));
        auto vals = oracle_pairing_path(plan, zlist, ctx);
        // tail fit on the ladder
        Eigen::MatrixXcd A(vals.size(), 3);
        Eigen::VectorXcd b(vals.size());
        for (std::size_t k = 0; k < vals.size(); ++k) {
          const double y = vals[k].first.imag();
          A(k, 0) = 1.0;
          A(k, 1) = 1.0 / y;
          A(k, 2) = 1.0 / (y * y);
          b(k) = vals[k].second;
        }
        Eigen::VectorXcd coef = A.colPivHouseholderQr().solve(b);
        rec.vhat_oracle = coef(0);
        double resid = 0.0;
        for (std::size_t k = 0; k < vals.size(); ++k) {
          const double y = vals[k].first.imag();
          resid = std::max(resid,
                           std::abs(b(k) - (coef(0) + coef(1) / y + coef(2) / (y * y))));
        }
        rec.oracle_tail_residual = resid;
        rec.oracle_ran = true;
        rec.rel_err_oracle =
            std::abs(rec.vhat_oracle - rec.vhat_true) / (std::abs(rec.vhat_true) + 1e-300);
      }

      BoundaryData bd = boundary_data(plan, ctx, cfg.mode);
      if (bd.samples.size() < 12) throw solver_error("too few boundary samples survived");
      std::vector<std::pair<double, cplx>> samples;
      for (const auto& s : bd.samples) {
        samples.push_back({s.z, s.value});
        rec.condition_max = std::max(rec.condition_max, s.condition_number);
      }
      ContinuationConfig ccfg = cfg.continuation;
      ccfg.y_min = 5.0 * std::sqrt(-eps_a);
      ccfg.y_max = 40.0 * std::sqrt(-eps_a);
      auto [c0, model] = continue_extrapolate(samples, ccfg);
      rec.vhat_rec = c0;
      rec.model = model;
      rec.trusted = !model.untrusted;
      rec.boundary_ran = true;
      rec.rel_err_rec =
          std::abs(rec.vhat_rec - rec.vhat_true) / (std::abs(rec.vhat_true) + 1e-300);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  return rep;
}

}  // namespace f3

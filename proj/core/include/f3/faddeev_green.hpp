#pragma once

#include "f3/green_operator.hpp"

namespace f3 {

struct RealLimitResult {
  Field limit;
  double error_estimate = 0.0;
  std::vector<double> eta_schedule;
};

/// Evaluates G_a at z + i eta down the schedule and extrapolates to
/// eta -> 0+ (Neville at eta = 0). The averaged-cell set is fixed from
/// the real-axis target so every schedule member integrates the same
/// singular geometry. Throws solver_error when the extrapolation spread
/// exceeds `spread_tol` relative to the result.
RealLimitResult real_limit_green(const ComplexMomentum& mom_real, const SpectralData& sd,
                                 const ChannelCut& cut, const GridPair& grid,
                                 const std::vector<double>& eta_schedule, const Field& f,
                                 const GreenConfig& cfg = {}, double spread_tol = 1e-2);

struct NormProbeDiagnostics {
  std::vector<std::vector<double>> weighted_norms;  // [momentum][probe]
  std::vector<double> closed_channel_bound;         // sup_xi (eps0 - Re F)^{-1}
  std::vector<double> l2_norms_first_probe;
};

/// H_r norms of G_a(rho) f along a momentum path for fixed probes.
/// Requires p > 0, r < 0, r < p - 1.
NormProbeDiagnostics green_norm_probe(const std::vector<ComplexMomentum>& path, double p,
                                      double r, const std::vector<Field>& probes,
                                      const SpectralData& sd, const ChannelCut& cut,
                                      const GridPair& grid, const GreenConfig& cfg = {});

/// Isotropic Gaussian wave packet on X_a with analytic Fourier transform.
struct GaussianPacket {
  Eigen::VectorXd center;
  double width = 1.0;
  Eigen::VectorXd modulation;  // frequency shift; empty means none

  cplx transform(const Eigen::VectorXd& xi) const;
  double value(const Eigen::VectorXd& w) const;  // real envelope (no modulation)
};

struct PoissonSplitReport {
  cplx lhs;       // limiting-absorption pairing minus the +i0 reference pairing
  cplx rhs;       // circle-integral term with the recorded constant
  double rel_diff = 0.0;
  cplx reference_pairing;  // the +i0 (PV + half-residue) pairing
  double circle_radius = 0.0;
  double constant_recorded = 0.0;  // pi * (lambda - eps')^{(m-2)/2}
};

/// Scalar bound-channel check of the real-axis split: the difference
/// between the limiting multiplier (eta-regularized and extrapolated)
/// and the +i0 resolvent multiplier must equal the masked circle term.
/// Pure continuum quadrature on both sides.
PoissonSplitReport verify_poisson_split(const ComplexMomentum& mom_real, double eps_channel,
                                        const GaussianPacket& test_fn,
                                        const std::vector<double>& eta_schedule);

/// Continuum pairing <g, M_lim g> for the scalar channel, by PV plus
/// half-residue quadrature of the split formula (the oracle side of the
/// grid-vs-continuum comparison).
cplx poisson_split_continuum_pairing(const ComplexMomentum& mom_real, double eps_channel,
                                     const GaussianPacket& g);

}  // namespace f3

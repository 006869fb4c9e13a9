#pragma once

#include "f3/faddeev_green.hpp"

namespace f3 {

struct SolveOptions {
  double tol = 1e-10;
  int max_iterations = 200;
  double divergence_ratio = 0.9;
  std::vector<double> eta_schedule{0.02, 0.01, 0.005};
  double spread_tol = 5e-2;
  GreenConfig green;
};

/// The remainder v of an exponential eigenfunction in plane-wave-removed
/// gauge: u_rho = e^{i rho . w_a} (psi_alpha + v). The residual is the
/// discrete eigenfunction equation measured on the range of the
/// conjugated Hamiltonian; `kernel_flux` is the flux carried by its
/// exact-singular modes (the torus stand-in for outgoing radiation),
/// reported but excluded from `residual`.
struct RemainderSolution {
  ComplexMomentum mom;
  Field v;
  int iterations = 0;
  double contraction_estimate = 0.0;
  double residual = 0.0;
  double kernel_flux = 0.0;
  double eta_error_estimate = 0.0;  // nonzero for real-axis solves
};

/// Solves (Id + I_a G_a(rho)) w = I_a psi_alpha by fixed-point iteration
/// and returns v = -G_a(rho) w. Real-axis momenta are handled by solving
/// at z + i eta down the schedule and extrapolating v to eta -> 0.
RemainderSolution solve_remainder(const ComplexMomentum& mom, const RealField& ia,
                                  const SpectralData& sd, const ChannelCut& cut,
                                  const GridPair& grid, const SolveOptions& opt = {},
                                  const Field* warm_start = nullptr);

/// G_{alpha alpha'}(rho, conj(rho) + zeta): the gauge exponentials cancel
/// and the integral reduces to grid quadrature of
/// I_a (psi_alpha + v) conj(psi_alpha') e^{-i zeta . w_a}.
cplx pairing(const RemainderSolution& sol, const RealField& ia, const Eigen::VectorXd& zeta,
             const SpectralData& sd, int alpha_prime, const GridPair& grid);

/// The large-z Born limit: int I_a psi_alpha conj(psi_alpha')
/// e^{-i zeta . w_a}; for alpha' = alpha this is the Fourier transform of
/// the effective interaction.
cplx born_term(const Eigen::VectorXd& zeta, int alpha, int alpha_prime, const RealField& ia,
               const SpectralData& sd, const GridPair& grid);

/// X^a-reduced pairing density: one pass over the product grid, after
/// which each zeta evaluation is an X_a quadrature.
std::vector<cplx> pairing_profile(const RemainderSolution& sol, const RealField& ia,
                                  const SpectralData& sd, int alpha_prime,
                                  const GridPair& grid);

cplx pairing_from_profile(const std::vector<cplx>& profile, const Eigen::VectorXd& zeta,
                          const GridPair& grid);

}  // namespace f3

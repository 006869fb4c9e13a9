#pragma once

#include <Eigen/Dense>

#include "f3/subsystem.hpp"

namespace f3 {

/// Complex momentum rho = z nu + rho_perp with the derived spectral
/// parameter lambda = z^2 + |rho_perp|^2 + eps_alpha and the region flags
/// for the admissible sets.
struct ComplexMomentum {
  cplx z{0.0, 0.0};
  Eigen::VectorXd nu;
  Eigen::VectorXd rho_perp;
  int incident_channel = 0;
  double epsilon_alpha = 0.0;

  cplx lambda{0.0, 0.0};
  bool in_circ = false;        // Im z != 0 and rho_perp admissible
  bool in_plus = false;        // additionally admits real z >= 0 with admissible lambda
  bool s_rho_empty = false;    // characteristic set empty (ellipticity)

  Eigen::VectorXcd rho() const {
    Eigen::VectorXcd r = rho_perp.cast<cplx>();
    for (Eigen::Index d = 0; d < nu.size(); ++d) r(d) += z * nu(d);
    return r;
  }
  Eigen::VectorXd re_rho() const {
    return (rho_perp + z.real() * nu).eval();
  }
};

/// Validates the decomposition and computes region flags.
/// Rejects |rho_perp| >= sqrt(-eps_alpha), rho_perp^2 + eps_alpha outside
/// the open interval (eps_alpha, eps0) or within 1e-9 of Lambda'_a.
ComplexMomentum momentum(cplx z, const Eigen::VectorXd& nu, const Eigen::VectorXd& rho_perp,
                         const SpectralData& sd, const ChannelCut& cut, int channel);

/// F_rho(xi) = eps_alpha - |xi|^2 - 2 rho . xi.
cplx f_rho(const ComplexMomentum& mom, const Eigen::VectorXd& xi);

}  // namespace f3

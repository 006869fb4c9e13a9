#include "f3/momentum.hpp"

#include <cmath>
#include <sstream>

namespace f3 {

ComplexMomentum momentum(cplx z, const Eigen::VectorXd& nu, const Eigen::VectorXd& rho_perp,
                         const SpectralData& sd, const ChannelCut& cut, int channel) {
  if (nu.size() != rho_perp.size()) throw config_error("momentum: nu/rho_perp dimension mismatch");
  if (std::abs(nu.norm() - 1.0) > 1e-12) throw config_error("momentum: |nu| must be 1");
  if (std::abs(nu.dot(rho_perp)) > 1e-12) throw config_error("momentum: nu . rho_perp must vanish");
  if (channel < 0 || channel >= sd.n()) throw config_error("momentum: bad channel index");

  ComplexMomentum m;
  m.z = z;
  m.nu = nu;
  m.rho_perp = rho_perp;
  m.incident_channel = channel;
  m.epsilon_alpha = sd.eigenvalues(channel);

  const double rp2 = rho_perp.squaredNorm();
  if (!(rp2 < -m.epsilon_alpha)) {
    std::ostringstream os;
    os << "momentum: |rho_perp| = " << std::sqrt(rp2) << " must be below sqrt(-eps_alpha) = "
       << std::sqrt(-m.epsilon_alpha);
    throw config_error(os.str());
  }
  m.s_rho_empty = true;  // guaranteed by the bound just enforced

  const double level = rp2 + m.epsilon_alpha;
  if (!(level > m.epsilon_alpha) || !(level < cut.epsilon0)) {
    std::ostringstream os;
    os << "momentum: rho_perp^2 + eps_alpha = " << level
       << " must lie in the open interval (" << m.epsilon_alpha << ", " << cut.epsilon0 << ")";
    throw config_error(os.str());
  }
  if (near_threshold(level, cut.lambda_prime_a, 1e-9))
    throw config_error("momentum: rho_perp^2 + eps_alpha within 1e-9 of Lambda'_a");

  m.lambda = z * z + cplx(rp2 + m.epsilon_alpha, 0.0);

  m.in_circ = (z.imag() != 0.0);
  if (z.imag() > 0.0) {
    m.in_plus = true;
  } else if (z.imag() == 0.0 && z.real() >= 0.0) {
    const double lam = m.lambda.real();
    m.in_plus = lam > m.epsilon_alpha && lam < cut.epsilon0 &&
                !near_threshold(lam, cut.lambda_prime_a, 1e-9);
  }
  return m;
}

cplx f_rho(const ComplexMomentum& mom, const Eigen::VectorXd& xi) {
  cplx rx(0.0, 0.0);
  for (Eigen::Index d = 0; d < xi.size(); ++d)
    rx += (cplx(mom.rho_perp(d), 0.0) + mom.z * mom.nu(d)) * xi(d);
  return cplx(mom.epsilon_alpha - xi.squaredNorm(), 0.0) - 2.0 * rx;
}

}  // namespace f3

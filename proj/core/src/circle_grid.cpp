#include <algorithm>
#include <cmath>

#include "f3/scattering.hpp"

namespace f3 {

namespace {

CircleGrid from_angles(double lambda, double eps, std::vector<double> angles, double weight) {
  CircleGrid g;
  g.lambda = lambda;
  g.channel_energy = eps;
  g.radius = std::sqrt(lambda - eps);
  for (double& th : angles) {
    th = std::fmod(th, 2.0 * M_PI);
    if (th < 0.0) th += 2.0 * M_PI;
  }
  std::sort(angles.begin(), angles.end());
  g.angles = angles;
  for (double th : angles) {
    Eigen::VectorXd p(2);
    p << g.radius * std::cos(th), g.radius * std::sin(th);
    g.nodes.push_back(p);
    g.weights.push_back(weight);
  }
  return g;
}

}  // namespace

int CircleGrid::find_node(const Eigen::VectorXd& p, double tol) const {
  for (int j = 0; j < size(); ++j)
    if ((nodes[j] - p).norm() <= tol) return j;
  return -1;
}

CircleGrid circle_grid(double lambda, double epsilon_prime, int n_nodes) {
  if (!(lambda > epsilon_prime)) throw config_error("circle_grid: requires lambda > eps'");
  if (n_nodes < 16 || n_nodes % 2 != 0)
    throw config_error("circle_grid: n_nodes must be even and >= 16");
  std::vector<double> angles;
  for (int j = 0; j < n_nodes; ++j) angles.push_back(2.0 * M_PI * j / n_nodes);
  return from_angles(lambda, epsilon_prime, angles, 2.0 * M_PI / n_nodes);
}

CircleGrid circle_grid(double lambda, double epsilon_prime, int n_nodes,
                       const Eigen::VectorXd& nu, double cut_level) {
  if (!(lambda > epsilon_prime)) throw config_error("circle_grid: requires lambda > eps'");
  if (n_nodes < 16 || n_nodes % 2 != 0)
    throw config_error("circle_grid: n_nodes must be even and >= 16");
  const double r = std::sqrt(lambda - epsilon_prime);
  if (std::abs(cut_level) >= r) return circle_grid(lambda, epsilon_prime, n_nodes);

  const double theta_nu = std::atan2(nu(1), nu(0));
  const double phi = std::acos(cut_level / r);
  const int half = n_nodes / 2;
  const double step = 2.0 * M_PI / half;

  std::vector<double> a, b;
  for (int j = 0; j < half; ++j) {
    a.push_back(theta_nu + phi + j * step);
    b.push_back(theta_nu - phi + j * step);
  }
  // If the reflected subgrids coincide (2 phi commensurate with the
  // step), one of them already carries both cut points.
  double min_gap = 1e300;
  for (double ta : a)
    for (double tb : b) {
      double d = std::abs(std::remainder(ta - tb, 2.0 * M_PI));
      min_gap = std::min(min_gap, d);
    }
  if (min_gap < 1e-8 * step) return from_angles(lambda, epsilon_prime, a, 2.0 * M_PI / half);

  std::vector<double> angles = a;
  angles.insert(angles.end(), b.begin(), b.end());
  return from_angles(lambda, epsilon_prime, angles, 2.0 * M_PI / n_nodes);
}

HeavisideMask heaviside_mask(const CircleGrid& grid, const Eigen::VectorXd& nu,
                             double cut_level, double tie_tol) {
  HeavisideMask mask;
  const double scale = std::max(1.0, grid.radius);
  for (const auto& p : grid.nodes) {
    const double t = nu.dot(p) - cut_level;
    if (std::abs(t) <= tie_tol * scale)
      mask.values.push_back(0.5);
    else
      mask.values.push_back(t > 0.0 ? 1.0 : 0.0);
  }
  return mask;
}

NodeDecomposition decompose_on_circle(const Eigen::VectorXd& rho, double rho_perp_mag) {
  const double r = rho.norm();
  if (!(rho_perp_mag >= 0.0) || rho_perp_mag >= r)
    throw config_error("decompose_on_circle: need 0 <= |rho_perp| < |rho|");
  NodeDecomposition d;
  const double z = std::sqrt(r * r - rho_perp_mag * rho_perp_mag);
  d.z = z;
  if (rho_perp_mag < 1e-14) {
    d.nu = rho / r;
    d.rho_perp = Eigen::VectorXd::Zero(rho.size());
    return d;
  }
  const double phi = std::atan2(rho(1), rho(0));
  const double beta = std::acos(z / r);
  for (double sign : {+1.0, -1.0}) {
    Eigen::VectorXd nu(2);
    nu << std::cos(phi + sign * beta), std::sin(phi + sign * beta);
    Eigen::VectorXd rp = rho - z * nu;
    Eigen::VectorXd rot(2);  // nu rotated by +90 degrees
    rot << -nu(1), nu(0);
    if (rp.dot(rot) > 0.0) {
      d.nu = nu;
      d.rho_perp = rp;
      return d;
    }
  }
  throw solver_error("decompose_on_circle: orientation selection failed");
}

}  // namespace f3

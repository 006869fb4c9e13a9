#pragma once

#include "f3/exponential.hpp"

namespace f3 {

/// Quadrature grid on the circle |rho'| = sqrt(lambda - eps'). When a cut
/// line nu . rho' = cut_level crosses the circle, the grid is the union
/// of two uniform half-density subgrids reflected about the nu axis so
/// that both intersection points land exactly on nodes (trapezoid
/// exactness then holds through trigonometric degree n/2 - 1). Weights
/// always total 2 pi, the unit-circle volume, for every radius.
struct CircleGrid {
  double radius = 0.0;
  double channel_energy = 0.0;
  double lambda = 0.0;
  std::vector<double> angles;
  std::vector<Eigen::VectorXd> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(angles.size()); }
  /// Index of the node matching p within tol, or -1.
  int find_node(const Eigen::VectorXd& p, double tol = 1e-9) const;
};

CircleGrid circle_grid(double lambda, double epsilon_prime, int n_nodes);
CircleGrid circle_grid(double lambda, double epsilon_prime, int n_nodes,
                       const Eigen::VectorXd& nu, double cut_level);

/// Per-node H(nu . (rho' - Re rho)) with the tie value 1/2 on the cut.
struct HeavisideMask {
  std::vector<double> values;  // 0, 1/2 or 1
};

HeavisideMask heaviside_mask(const CircleGrid& grid, const Eigen::VectorXd& nu,
                             double cut_level, double tie_tol = 1e-12);

/// Decomposition rho = z nu + rho_perp on a circle node with shared
/// |rho_perp| and a fixed orientation convention (matches the
/// reconstruction plan's rotate-by-90-degrees choice).
struct NodeDecomposition {
  double z = 0.0;
  Eigen::VectorXd nu;
  Eigen::VectorXd rho_perp;
};
NodeDecomposition decompose_on_circle(const Eigen::VectorXd& rho, double rho_perp_mag);

/// Discretized relative S-matrix block S#_{alpha' alpha''+}(lambda) over
/// (incoming node, outgoing node) pairs, plus columns for extra outgoing
/// evaluation points. Outgoing node index means geometric exit direction
/// (the antipodal pull-back is absorbed into the indexing).
struct SMatrixKernel {
  double lambda = 0.0;
  int channel_in = 0;
  int channel_out = 0;
  Eigen::MatrixXcd node_values;
  Eigen::MatrixXcd extra_values;
};

/// Pairing data generated from exponential solutions at a fixed energy.
struct IncomingSolveSet {
  int channel = 0;
  std::vector<Eigen::VectorXd> nu;  // per incoming node
  // g[node][out_channel_pos][outgoing point]; outgoing points are the
  // out-circle nodes followed by the extra points.
  std::vector<std::vector<std::vector<cplx>>> g;
};

struct PairingDataSet {
  double lambda = 0.0;
  std::vector<int> open_channels;
  std::vector<CircleGrid> circles;
  std::vector<Eigen::VectorXd> extra_outgoing;
  std::vector<IncomingSolveSet> incoming;
  double max_residual = 0.0;
  double max_contraction = 0.0;
  int total_iterations = 0;
};

struct PairingGenOptions {
  int n_nodes = 16;
  double rho_perp_mag = 0.25;
  SolveOptions solve;
  int threads = 1;
};

/// Runs one eta-extrapolated exponential solve per (open channel,
/// incoming node) and evaluates all pairings. `nu_plan`/`cut_level`
/// place the cut nodes of the incident-channel circle; warm_bank, when
/// provided, carries fixed-point warm starts across calls.
PairingDataSet generate_pairing_data(double lambda, int incident_channel,
                                     const Eigen::VectorXd& nu_plan, double cut_level,
                                     const std::vector<Eigen::VectorXd>& extra_outgoing,
                                     const RealField& ia, const SpectralData& sd,
                                     const ChannelCut& cut, const GridPair& grid,
                                     const PairingGenOptions& opt,
                                     std::vector<std::vector<Field>>* warm_bank = nullptr);

struct ForwardResult {
  std::vector<SMatrixKernel> kernels;
  double kernel_norm = 0.0;     // spectral-norm estimate of K
  double condition_number = 0.0;
};

/// Solves s = g - K s for the relative S-matrix kernels given pairings.
ForwardResult forward_smatrix(const PairingDataSet& data);

struct InvertResult {
  std::vector<int> channels;
  std::vector<std::vector<cplx>> node_values;   // per channel, per node
  std::vector<std::vector<cplx>> extra_values;  // per channel, per extra point
  double condition_number = 0.0;
  bool siblings_excluded = false;  // Theorem-1.2 regime: sibling columns all masked
};

/// Solves (Id - T) Phi = f for the pairing vector at a fixed real
/// incoming momentum; Re rho must be a node of the incident circle.
InvertResult invert_smatrix(const std::vector<SMatrixKernel>& kernels,
                            const std::vector<CircleGrid>& circles,
                            const std::vector<Eigen::VectorXd>& extra_outgoing,
                            const ComplexMomentum& mom, double lambda,
                            double cond_limit = 1e6);

/// Near-forward variant: restricts to nodes with nu . rho' >= nu . Re rho
/// and solves (Id_{V1} - T1) pi1 Phi = pi1 f, which equals pi1 of the
/// full solve because T = T pi1. Off-arc node values are reported as the
/// Nystrom evaluation of f + T Phi (only arc data enters).
InvertResult invert_smatrix_near_forward(const std::vector<SMatrixKernel>& kernels,
                                         const std::vector<CircleGrid>& circles,
                                         const std::vector<Eigen::VectorXd>& extra_outgoing,
                                         const ComplexMomentum& mom, double lambda,
                                         double cond_limit = 1e6);

}  // namespace f3

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "f3/geometry.hpp"
#include "f3/grids.hpp"

namespace f3 {

enum class LaplacianKind { stencil2, stencil4, spectral };

LaplacianKind laplacian_from_string(const std::string& s);
std::string laplacian_to_string(LaplacianKind k);

/// Complete eigendecomposition of the discretized subsystem Hamiltonian
/// H^a = Delta_{X^a} + V_a on the X^a grid. Eigenvectors are Euclidean
/// orthonormal columns; L^2-normalized eigenfunctions are q_k/sqrt(h).
struct SpectralData {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;
  double quad_weight = 0.0;  // product of X^a spacings

  LaplacianKind laplacian = LaplacianKind::stencil4;
  std::vector<double> stencil;    // c_0..c_b for banded kinds, empty otherwise
  std::vector<double> potential;  // V_a on the X^a grid

  double epsilon1 = 0.0;  // default channel cut
  double epsilon0 = 0.0;  // next threshold above epsilon1
  std::vector<int> bound_channels;

  int n() const { return static_cast<int>(eigenvalues.size()); }
  bool has_banded() const { return !stencil.empty(); }
};

struct Channel {
  int index = 0;
  double energy = 0.0;
  Eigen::VectorXd psi;  // L^2-normalized on the grid
  double decay_rate = 0.0;  // fitted exponential rate of |psi|
};

/// The channel cut at a particular epsilon1: bound set, next threshold,
/// and the subsystem threshold list Lambda'_a = {0} u negspec(H^a).
struct ChannelCut {
  double epsilon1 = 0.0;
  double epsilon0 = 0.0;
  std::vector<int> bound;
  std::vector<double> lambda_prime_a;
};

struct EffectiveInteraction {
  std::vector<double> values;  // V_alpha on the X_a grid
  std::vector<cplx> fourier;   // continuum-normalized DFT on the dual grid
  double ball_radius = 0.0;
};

SpectralData eigensolve_subsystem(const PotentialSpec& va, const GridPair& grid,
                                  LaplacianKind kind = LaplacianKind::stencil4,
                                  double truncation_tol = 1e-10);

/// As above with explicit potential samples (used by sibling solves and tests).
SpectralData eigensolve_on_axis(const std::vector<double>& potential, const GridAxis& axis,
                                LaplacianKind kind);

std::pair<std::vector<Channel>, ChannelCut> channel_partition(const SpectralData& sd,
                                                              double epsilon1,
                                                              const GridPair& grid);

Channel make_channel(const SpectralData& sd, int index, const GridPair& grid);

EffectiveInteraction effective_interaction(const Channel& ch, const RealField& ia,
                                           const GridPair& grid);

/// Direct quadrature of the Fourier transform of V_alpha at arbitrary
/// real zeta; the slow oracle used by acceptance tests.
cplx effective_fourier_direct(const EffectiveInteraction& eff, const GridPair& grid,
                              const Eigen::VectorXd& zeta);

struct ThresholdOptions {
  double sibling_box_length = 240.0;
  int sibling_count_1d = 1024;
  int sibling_count_2d = 48;
  double detect_tol = 1e-8;
};

/// Lambda' modeled as the union over 2-clusters of {0} and the negative
/// spectrum of the discretized subsystem Hamiltonians.
std::vector<double> full_thresholds(const ClusterGeometry& geom, const PotentialSpec& va,
                                    const std::vector<PotentialSpec>& vb, const GridPair& grid,
                                    LaplacianKind kind,
                                    const ThresholdOptions& opt = {});

bool near_threshold(double lambda, const std::vector<double>& thresholds, double tol);

/// The hybrid weighted norm: <w_a>^p weights on the bound-channel
/// components, plain L^2 on the remainder.
double weighted_norm(const Field& f, double p, const SpectralData& sd, const ChannelCut& cut,
                     const GridPair& grid);

}  // namespace f3

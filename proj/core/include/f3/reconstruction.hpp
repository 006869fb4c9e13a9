#pragma once

#include <string>

#include "f3/scattering.hpp"

namespace f3 {

struct ReconstructionPlan {
  Eigen::VectorXd zeta;
  Eigen::VectorXd rho_perp;  // -zeta/2
  Eigen::VectorXd nu;        // zeta rotated by +90 degrees, normalized
  double epsilon1 = 0.0;
  double epsilon0 = 0.0;
  double z_lo = 0.0, z_hi = 0.0;
  std::vector<double> z_samples;
  double ball_radius = 0.0;
  int channel = 0;
};

/// Per-zeta plan: rho_perp = -zeta/2, nu orthogonal to zeta, the channel
/// cut chosen above the working interval, and Chebyshev-distributed
/// real-z samples inside the admissible window J.
ReconstructionPlan plan_reconstruction(const Eigen::VectorXd& zeta, double interval_lo,
                                       double interval_hi, const SpectralData& sd, int channel,
                                       const std::vector<double>& lambda_prime,
                                       int n_samples = 24);

struct BoundarySample {
  double z = 0.0;
  cplx value{0.0, 0.0};
  double condition_number = 0.0;
  double solver_residual = 0.0;
};

struct BoundaryData {
  std::vector<BoundarySample> samples;
  std::vector<double> dropped_z;  // lambda too close to Lambda'
  bool siblings_excluded = true;
  double max_contraction = 0.0;
};

enum class ReconstructionMode { full, near_forward };

struct PipelineContext {
  const RealField* ia = nullptr;
  const SpectralData* sd = nullptr;
  const GridPair* grid = nullptr;
  std::vector<double> lambda_prime;
  PairingGenOptions gen;
};

/// Synthesizes relative S-matrix kernels at each sample energy (the
/// standard pipeline) and inverts them back to the pairing samples
/// G_{alpha alpha}(rho(z_k), rho(z_k) + zeta).
BoundaryData boundary_data(const ReconstructionPlan& plan, const PipelineContext& ctx,
                           ReconstructionMode mode);

/// Direct evaluation of the pairing along a complex-z list, bypassing
/// S-matrices entirely (the validation oracle).
std::vector<std::pair<cplx, cplx>> oracle_pairing_path(const ReconstructionPlan& plan,
                                                       const std::vector<cplx>& z_list,
                                                       const PipelineContext& ctx);

struct ContinuationConfig {
  int degree_cap = 10;
  double fit_tol = 1e-12;
  double holdout_tol = 1e-5;
  double tail_tol = 2e-2;
  double cross_tol = 0.25;
  double y_min = 10.0;
  double y_max = 80.0;
  int y_count = 8;
  int inverse_power_terms = 8;
};

struct ContinuationModel {
  std::string method = "rational-barycentric";
  std::vector<cplx> support_z, support_f, weights;
  std::vector<cplx> poles;
  cplx c0{0.0, 0.0}, c1{0.0, 0.0}, c2{0.0, 0.0};
  double holdout_residual = 0.0;
  double tail_residual = 0.0;
  double cross_method_diff = 0.0;
  bool untrusted = false;
  std::vector<std::string> flags;
};

/// Rational-barycentric continuation of the boundary samples with
/// holdout validation, evaluation along z = iy, and an inverse-power
/// tail fit c0 + c1/y + c2/y^2; c0 is the recovered transform value.
/// Ill-posedness surfaces as `untrusted`, never as a hard error.
std::pair<cplx, ContinuationModel> continue_extrapolate(
    const std::vector<std::pair<double, cplx>>& samples, const ContinuationConfig& cfg);

struct ZetaRecord {
  Eigen::VectorXd zeta;
  double abs_zeta = 0.0;
  cplx vhat_true{0.0, 0.0};
  cplx vhat_oracle{0.0, 0.0};
  cplx vhat_rec{0.0, 0.0};
  double rel_err_rec = 0.0;
  double rel_err_oracle = 0.0;
  double oracle_tail_residual = 0.0;
  bool trusted = false;
  bool oracle_ran = false;
  bool boundary_ran = false;
  double condition_max = 0.0;
  ContinuationModel model;
  std::string error;
};

struct ReconstructionReport {
  double ball_radius = 0.0;
  std::vector<double> excluded_spheres;  // |zeta| values skipped
  std::string scenario_hash;
  std::uint64_t seed = 0;
  std::string mode;
  std::vector<ZetaRecord> records;
};

struct SweepConfig {
  double interval_lo = 0.0, interval_hi = 0.0;
  int zeta_rings = 3;
  int zeta_per_ring = 6;
  double ring_cap = 0.8;  // outermost ring at ring_cap * R (sweep capped below 0.95R)
  int z_samples = 24;
  bool run_oracle = true;
  ReconstructionMode mode = ReconstructionMode::full;
  ContinuationConfig continuation;
  int threads = 1;
};

/// Sweeps zeta over a polar grid in the reconstruction ball; per-zeta
/// failures are recorded in the report, never abort the sweep.
ReconstructionReport reconstruct_ball(const PipelineContext& ctx,
                                      const EffectiveInteraction& truth, int channel,
                                      const SweepConfig& cfg);

}  // namespace f3

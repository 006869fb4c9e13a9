#pragma once

#include <optional>

#include "f3/momentum.hpp"

namespace f3 {

/// A bound-channel multiplier entry whose dual cell contains a zero of
/// eps' - F_rho: the point value is replaced by the cell average of
/// (eps' - F)^{-1}. `exact` marks cells where the zero sits on the node
/// itself (always the xi = 0 cell of the incident channel); there the
/// discrete conjugated Hamiltonian annihilates the mode and the pair
/// (P_a, G_a) acts as a mutual pseudo-inverse.
struct MultiplierPatch {
  std::size_t cell = 0;
  int bound_pos = 0;
  int eigen_index = 0;
  cplx avg{0.0, 0.0};
  cplx point{0.0, 0.0};
  bool exact = false;
};

struct MultiplierTable {
  std::vector<cplx> f_values;          // F_rho at each dual node
  std::vector<MultiplierPatch> patches;  // sorted by cell
  std::vector<int> patch_first;        // per cell: index into patches or -1
  std::vector<int> patch_count;
  bool real_limit_set = false;

  bool cell_patched(std::size_t c) const { return patch_first[c] >= 0; }
};

struct MultiplierOptions {
  double avg_quad_tol = 1e-9;
  double exact_tol = 1e-13;
  double underflow_tol = 1e-14;
};

/// Builds F values and the averaged-cell set for a momentum. When
/// `set_rho_real` is present (the eta -> 0 path toward a real momentum),
/// the averaged-cell set is determined from the real-axis target, where
/// the zero set of eps' - F is the full sphere |xi + Re rho|^2 = lambda - eps';
/// the averages themselves are evaluated at the current (regularized)
/// momentum.
MultiplierTable build_multiplier_table(const ComplexMomentum& mom, const SpectralData& sd,
                                       const ChannelCut& cut, const GridPair& grid,
                                       const MultiplierOptions& opt = {},
                                       const std::optional<Eigen::VectorXd>& set_rho_real = {});

/// Cell average of 1/(E - F_rho(.)) over an axis-aligned dual cell.
cplx average_inverse_multiplier(double eigenvalue, const ComplexMomentum& mom,
                                const std::vector<double>& lo, const std::vector<double>& hi,
                                double tol);

}  // namespace f3

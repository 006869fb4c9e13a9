#pragma once

#include <memory>
#include <optional>

#include "f3/multiplier.hpp"
#include "f3/numerics/banded.hpp"

namespace f3 {

struct GreenConfig {
  MultiplierOptions multiplier;
};

/// The conjugated Faddeev-type Green's function G_a(rho): a Fourier
/// multiplier along X_a composed with the subsystem resolvent R^a(F_rho)
/// on X^a. apply() and apply_inverse() are exact mutual inverses on the
/// complement of the exact-singular modes (the kernel of the discrete
/// conjugated Hamiltonian, reported by exact_modes()).
class GreenOperator {
 public:
  GreenOperator(const ComplexMomentum& mom, const SpectralData& sd, const ChannelCut& cut,
                const GridPair& grid, const GreenConfig& cfg = {},
                const std::optional<Eigen::VectorXd>& set_rho_real = {});

  Field apply(const Field& f) const;          // G_a(rho) f
  Field apply_inverse(const Field& f) const;  // P_a(rho) f

  /// Removes the exact-singular Fourier-channel modes from a field.
  void project_out_exact_modes(Field& f) const;

  std::size_t exact_mode_count() const;

  const ComplexMomentum& momentum() const { return mom_; }
  const MultiplierTable& table() const { return table_; }
  const ChannelCut& cut() const { return cut_; }

 private:
  ComplexMomentum mom_;
  const SpectralData* sd_;
  ChannelCut cut_;
  const GridPair* grid_;
  MultiplierTable table_;

  bool banded_ = false;
  std::vector<std::unique_ptr<CyclicBandedSolver>> solvers_;  // per dual cell
  std::vector<char> dense_cell_;  // fallback route when factorization fails

  void cell_apply(std::size_t c, cplx* block, std::vector<cplx>& scratch, bool inverse) const;
  void dense_cell_apply(std::size_t c, cplx* block, std::vector<cplx>& scratch,
                        bool inverse) const;
};

/// Convenience wrapper matching the operation-level contract: requires
/// Im z != 0 and a plane-wave-removed input gauge.
Field apply_green_a(const ComplexMomentum& mom, const SpectralData& sd, const ChannelCut& cut,
                    const GridPair& grid, const Field& f, const GreenConfig& cfg = {});

}  // namespace f3

#include "f3/green_operator.hpp"

#include <cmath>

#include "f3/numerics/fft.hpp"

namespace f3 {

GreenOperator::GreenOperator(const ComplexMomentum& mom, const SpectralData& sd,
                             const ChannelCut& cut, const GridPair& grid,
                             const GreenConfig& cfg,
                             const std::optional<Eigen::VectorXd>& set_rho_real)
    : mom_(mom), sd_(&sd), cut_(cut), grid_(&grid) {
  table_ = build_multiplier_table(mom, sd, cut, grid, cfg.multiplier, set_rho_real);

  const std::size_t na = grid.xa_size();
  banded_ = sd.has_banded() && grid.dim_xperp() == 1;
  dense_cell_.assign(na, banded_ ? 0 : 1);
  if (banded_) {
    solvers_.resize(na);
    for (std::size_t c = 0; c < na; ++c) {
      auto solver = std::make_unique<CyclicBandedSolver>(sd.n(), sd.stencil, sd.potential);
      if (solver->factor(table_.f_values[c])) {
        solvers_[c] = std::move(solver);
      } else {
        dense_cell_[c] = 1;  // shifted matrix numerically singular
      }
    }
  }
}

void GreenOperator::dense_cell_apply(std::size_t c, cplx* block, std::vector<cplx>&,
                                     bool inverse) const {
  const int n = sd_->n();
  const cplx F = table_.f_values[c];
  Eigen::Map<Eigen::VectorXcd> b(block, n);
  Eigen::VectorXcd coef = sd_->eigenvectors.transpose() * b;
  for (int k = 0; k < n; ++k) {
    const MultiplierPatch* patch = nullptr;
    if (table_.cell_patched(c)) {
      for (int j = 0; j < table_.patch_count[c]; ++j) {
        const auto& p = table_.patches[table_.patch_first[c] + j];
        if (p.eigen_index == k) {
          patch = &p;
          break;
        }
      }
    }
    cplx m;
    if (patch) {
      m = inverse ? (patch->exact ? cplx(0.0, 0.0) : 1.0 / patch->avg) : patch->avg;
    } else {
      const cplx d = cplx(sd_->eigenvalues(k), 0.0) - F;
      m = inverse ? d : 1.0 / d;
    }
    coef(k) *= m;
  }
  b = sd_->eigenvectors * coef;
}

void GreenOperator::cell_apply(std::size_t c, cplx* block, std::vector<cplx>& scratch,
                               bool inverse) const {
  const int n = sd_->n();
  if (dense_cell_[c]) {
    dense_cell_apply(c, block, scratch, inverse);
    return;
  }
  const bool patched = table_.cell_patched(c);
  // Bound-channel deflation on patched cells keeps the banded solve away
  // from near-singular directions.
  std::vector<cplx> coefs;
  if (patched) {
    for (int j = 0; j < table_.patch_count[c]; ++j) {
      const auto& p = table_.patches[table_.patch_first[c] + j];
      const auto q = sd_->eigenvectors.col(p.eigen_index);
      cplx dot(0.0, 0.0);
      for (int i = 0; i < n; ++i) dot += q(i) * block[i];
      coefs.push_back(dot);
      for (int i = 0; i < n; ++i) block[i] -= q(i) * dot;
    }
  }

  if (!inverse) {
    solvers_[c]->solve(block);
  } else {
    scratch.assign(n, cplx(0.0, 0.0));
    solvers_[c]->apply(block, scratch.data());
    std::copy(scratch.begin(), scratch.end(), block);
  }

  if (patched) {
    for (int j = 0; j < table_.patch_count[c]; ++j) {
      const auto& p = table_.patches[table_.patch_first[c] + j];
      const auto q = sd_->eigenvectors.col(p.eigen_index);
      // clean any round-off leakage into the deflated direction
      cplx leak(0.0, 0.0);
      for (int i = 0; i < n; ++i) leak += q(i) * block[i];
      const cplx m = inverse ? (p.exact ? cplx(0.0, 0.0) : 1.0 / p.avg) : p.avg;
      const cplx coef = m * coefs[j] - leak;
      for (int i = 0; i < n; ++i) block[i] += q(i) * coef;
    }
  }
}

Field GreenOperator::apply(const Field& f) const {
  Field out = f;
  fft_xa_forward(out.values, *grid_);
  const std::size_t na = grid_->xa_size();
  const std::size_t np = grid_->xperp_size();
  std::vector<cplx> scratch;
  for (std::size_t c = 0; c < na; ++c) cell_apply(c, out.data() + c * np, scratch, false);
  fft_xa_backward(out.values, *grid_);
  const double scale = 1.0 / static_cast<double>(na);
  for (cplx& v : out.values) v *= scale;
  return out;
}

Field GreenOperator::apply_inverse(const Field& f) const {
  Field out = f;
  fft_xa_forward(out.values, *grid_);
  const std::size_t na = grid_->xa_size();
  const std::size_t np = grid_->xperp_size();
  std::vector<cplx> scratch;
  for (std::size_t c = 0; c < na; ++c) cell_apply(c, out.data() + c * np, scratch, true);
  fft_xa_backward(out.values, *grid_);
  const double scale = 1.0 / static_cast<double>(na);
  for (cplx& v : out.values) v *= scale;
  return out;
}

void GreenOperator::project_out_exact_modes(Field& f) const {
  bool any = false;
  for (const auto& p : table_.patches)
    if (p.exact) any = true;
  if (!any) return;
  fft_xa_forward(f.values, *grid_);
  const std::size_t np = grid_->xperp_size();
  const int n = sd_->n();
  for (const auto& p : table_.patches) {
    if (!p.exact) continue;
    cplx* block = f.data() + p.cell * np;
    const auto q = sd_->eigenvectors.col(p.eigen_index);
    cplx dot(0.0, 0.0);
    for (int i = 0; i < n; ++i) dot += q(i) * block[i];
    for (int i = 0; i < n; ++i) block[i] -= q(i) * dot;
  }
  fft_xa_backward(f.values, *grid_);
  const double scale = 1.0 / static_cast<double>(grid_->xa_size());
  for (cplx& v : f.values) v *= scale;
}

std::size_t GreenOperator::exact_mode_count() const {
  std::size_t n = 0;
  for (const auto& p : table_.patches)
    if (p.exact) ++n;
  return n;
}

Field apply_green_a(const ComplexMomentum& mom, const SpectralData& sd, const ChannelCut& cut,
                    const GridPair& grid, const Field& f, const GreenConfig& cfg) {
  if (mom.z.imag() == 0.0)
    throw config_error("apply_green_a requires Im z != 0; use real_limit_green on the axis");
  if (f.gauge != Gauge::plane_wave_removed)
    throw config_error("apply_green_a expects a plane-wave-removed gauge field");
  GreenOperator op(mom, sd, cut, grid, cfg);
  Field out = op.apply(f);
  out.gauge = Gauge::plane_wave_removed;
  return out;
}

}  // namespace f3

#include "f3/numerics/banded.hpp"

#include <cassert>
#include <cmath>

namespace f3 {

void BandedLU::factor(int n, int b, const std::vector<cplx>& band_rows) {
  n_ = n;
  b_ = b;
  ld_ = 3 * b + 1;
  singular_ = false;
  ab_.assign(static_cast<std::size_t>(ld_) * n, cplx(0.0, 0.0));
  piv_.assign(n, 0);

  for (int k = 0; k <= 2 * b; ++k) {
    const int off = k - b;  // column = row + off
    for (int i = 0; i < n; ++i) {
      const int j = i + off;
      if (j < 0 || j >= n || std::abs(off) > b) continue;
      at(i, j) = band_rows[static_cast<std::size_t>(k) * n + i];
    }
  }

  for (int k = 0; k < n; ++k) {
    const int last_row = std::min(k + b_, n - 1);
    int p = k;
    double best = std::abs(at(k, k));
    for (int r = k + 1; r <= last_row; ++r) {
      const double v = std::abs(at(r, k));
      if (v > best) {
        best = v;
        p = r;
      }
    }
    piv_[k] = p;
    if (best == 0.0) {
      singular_ = true;
      return;
    }
    const int last_col = std::min(k + 2 * b_, n - 1);
    if (p != k)
      for (int j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
    const cplx pivot = at(k, k);
    for (int i = k + 1; i <= last_row; ++i) {
      const cplx m = at(i, k) / pivot;
      at(i, k) = m;
      for (int j = k + 1; j <= last_col; ++j) at(i, j) -= m * at(k, j);
    }
  }
}

void BandedLU::solve(cplx* x) const {
  // Forward: apply pivots and multipliers.
  for (int k = 0; k < n_; ++k) {
    if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
    const int last_row = std::min(k + b_, n_ - 1);
    for (int i = k + 1; i <= last_row; ++i) x[i] -= at(i, k) * x[k];
  }
  // Back substitution over the widened upper band.
  for (int i = n_ - 1; i >= 0; --i) {
    const int last_col = std::min(i + 2 * b_, n_ - 1);
    cplx s = x[i];
    for (int j = i + 1; j <= last_col; ++j) s -= at(i, j) * x[j];
    x[i] = s / at(i, i);
  }
}

CyclicBandedSolver::CyclicBandedSolver(int n, const std::vector<double>& stencil,
                                       const std::vector<double>& diag_extra)
    : n_(n), b_(static_cast<int>(stencil.size()) - 1), stencil_(stencil), diag_(diag_extra) {
  assert(n_ >= 4 * b_ + 2);
  assert(static_cast<int>(diag_.size()) == n_);
  urows_.clear();
  for (int i = 0; i < b_; ++i) urows_.push_back(i);
  for (int i = n_ - b_; i < n_; ++i) urows_.push_back(i);
}

void CyclicBandedSolver::corner_w_apply(const cplx* t, cplx* s) const {
  const int m = 2 * b_;
  for (int r = 0; r < m; ++r) {
    const int i = urows_[r];
    cplx acc(0.0, 0.0);
    if (i < b_) {
      // top rows couple to trailing columns, cyclic distance n-(j-i)
      for (int j = n_ - b_ + i; j < n_; ++j) acc += stencil_[n_ - (j - i)] * t[j];
    } else {
      for (int j = 0; j <= i - (n_ - b_); ++j) acc += stencil_[n_ - (i - j)] * t[j];
    }
    s[r] = acc;
  }
}

bool CyclicBandedSolver::factor(cplx sigma) {
  sigma_ = sigma;
  const int m = 2 * b_;

  std::vector<cplx> band_rows(static_cast<std::size_t>(2 * b_ + 1) * n_, cplx(0.0, 0.0));
  for (int k = 0; k <= 2 * b_; ++k) {
    const int off = k - b_;
    for (int i = 0; i < n_; ++i) {
      const int j = i + off;
      if (j < 0 || j >= n_) continue;
      cplx v = stencil_[std::abs(off)];
      if (off == 0) v += diag_[i] - sigma;
      band_rows[static_cast<std::size_t>(k) * n_ + i] = v;
    }
  }
  lu_.factor(n_, b_, band_rows);
  if (lu_.singular()) return false;

  // Y = B^{-1} U
  ycols_.assign(static_cast<std::size_t>(n_) * m, cplx(0.0, 0.0));
  std::vector<cplx> col(n_);
  for (int r = 0; r < m; ++r) {
    std::fill(col.begin(), col.end(), cplx(0.0, 0.0));
    col[urows_[r]] = 1.0;
    lu_.solve(col.data());
    for (int i = 0; i < n_; ++i) ycols_[static_cast<std::size_t>(r) * n_ + i] = col[i];
  }

  // cap = I + W Y
  cap_.assign(static_cast<std::size_t>(m) * m, cplx(0.0, 0.0));
  std::vector<cplx> s(m);
  for (int c = 0; c < m; ++c) {
    corner_w_apply(&ycols_[static_cast<std::size_t>(c) * n_], s.data());
    for (int r = 0; r < m; ++r) cap_[static_cast<std::size_t>(c) * m + r] = s[r];
    cap_[static_cast<std::size_t>(c) * m + c] += 1.0;
  }
  small_lu_factor();
  for (int d = 0; d < m; ++d)
    if (std::abs(cap_[static_cast<std::size_t>(d) * m + d]) < 1e-300) return false;
  return true;
}

void CyclicBandedSolver::small_lu_factor() {
  const int m = 2 * b_;
  cap_piv_.assign(m, 0);
  for (int k = 0; k < m; ++k) {
    int p = k;
    double best = std::abs(cap_[static_cast<std::size_t>(k) * m + k]);
    for (int r = k + 1; r < m; ++r) {
      const double v = std::abs(cap_[static_cast<std::size_t>(k) * m + r]);
      if (v > best) {
        best = v;
        p = r;
      }
    }
    cap_piv_[k] = p;
    if (p != k)
      for (int j = 0; j < m; ++j)
        std::swap(cap_[static_cast<std::size_t>(j) * m + k], cap_[static_cast<std::size_t>(j) * m + p]);
    const cplx pivot = cap_[static_cast<std::size_t>(k) * m + k];
    if (std::abs(pivot) == 0.0) continue;
    for (int i = k + 1; i < m; ++i) {
      const cplx mult = cap_[static_cast<std::size_t>(k) * m + i] / pivot;
      cap_[static_cast<std::size_t>(k) * m + i] = mult;
      for (int j = k + 1; j < m; ++j)
        cap_[static_cast<std::size_t>(j) * m + i] -= mult * cap_[static_cast<std::size_t>(j) * m + k];
    }
  }
}

void CyclicBandedSolver::small_lu_solve(cplx* s) const {
  const int m = 2 * b_;
  for (int k = 0; k < m; ++k) {
    if (cap_piv_[k] != k) std::swap(s[k], s[cap_piv_[k]]);
    for (int i = k + 1; i < m; ++i) s[i] -= cap_[static_cast<std::size_t>(k) * m + i] * s[k];
  }
  for (int i = m - 1; i >= 0; --i) {
    cplx acc = s[i];
    for (int j = i + 1; j < m; ++j) acc -= cap_[static_cast<std::size_t>(j) * m + i] * s[j];
    s[i] = acc / cap_[static_cast<std::size_t>(i) * m + i];
  }
}

void CyclicBandedSolver::solve(cplx* x) const {
  const int m = 2 * b_;
  lu_.solve(x);
  std::vector<cplx> s(m);
  corner_w_apply(x, s.data());
  small_lu_solve(s.data());
  for (int r = 0; r < m; ++r) {
    const cplx sr = s[r];
    if (sr == cplx(0.0, 0.0)) continue;
    const cplx* y = &ycols_[static_cast<std::size_t>(r) * n_];
    for (int i = 0; i < n_; ++i) x[i] -= y[i] * sr;
  }
}

void CyclicBandedSolver::apply(const cplx* x, cplx* y) const {
  for (int i = 0; i < n_; ++i) {
    cplx acc = (diag_[i] - sigma_) * x[i] + stencil_[0] * x[i];
    for (int d = 1; d <= b_; ++d) {
      const int ip = (i + d) % n_;
      const int im = (i - d + n_) % n_;
      acc += stencil_[d] * (x[ip] + x[im]);
    }
    y[i] = acc;
  }
}

}  // namespace f3

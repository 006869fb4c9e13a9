#pragma once

#include <complex>
#include <vector>

#include "f3/grids.hpp"

namespace f3 {

/// LU factorization with partial pivoting of a banded complex matrix
/// (half-bandwidth b; fill widens the upper band to 2b). LAPACK-style
/// column band storage, no external dependency.
class BandedLU {
 public:
  void factor(int n, int b, const std::vector<cplx>& band_rows);
  // band_rows: (2b+1) x n, band_rows[(k)*n + i] = A(i, i + k - b) where
  // out-of-range entries are ignored.

  void solve(cplx* x) const;  // in place, single rhs
  bool singular() const { return singular_; }

 private:
  int n_ = 0, b_ = 0, ld_ = 0;
  std::vector<cplx> ab_;  // column-major, ld_ = 3b+1 rows per column
  std::vector<int> piv_;
  bool singular_ = false;

  cplx& at(int i, int j) { return ab_[static_cast<std::size_t>(j) * ld_ + (2 * b_ + i - j)]; }
  const cplx& at(int i, int j) const {
    return ab_[static_cast<std::size_t>(j) * ld_ + (2 * b_ + i - j)];
  }
};

/// Solver for (H - sigma) x = y where H is a real symmetric periodic
/// stencil operator on a 1-D grid (half-bandwidth b) and sigma is a
/// complex shift. The periodic corner entries are folded in with a
/// rank-2b Woodbury correction on top of the banded LU.
class CyclicBandedSolver {
 public:
  /// stencil: c_0..c_b (c_0 on the diagonal); diag_extra: per-node
  /// addition (the potential).
  CyclicBandedSolver(int n, const std::vector<double>& stencil,
                     const std::vector<double>& diag_extra);

  /// Factor H - sigma. Returns false if the shifted matrix is numerically
  /// singular (caller falls back to the spectral route).
  bool factor(cplx sigma);

  void solve(cplx* x) const;               // in place
  void apply(const cplx* x, cplx* y) const;  // y = (H - sigma) x

  int size() const { return n_; }

 private:
  int n_ = 0, b_ = 0;
  std::vector<double> stencil_;
  std::vector<double> diag_;
  cplx sigma_{0.0, 0.0};

  BandedLU lu_;
  // Woodbury data: columns of Y = B^{-1} U for the 2b corner-selector
  // rows, and the small factored capacitance matrix.
  std::vector<cplx> ycols_;   // n x 2b column-major
  std::vector<cplx> cap_;     // (2b x 2b) LU of I + W Y, column-major
  std::vector<int> cap_piv_;
  std::vector<int> urows_;    // selector row indices

  void small_lu_factor();
  void small_lu_solve(cplx* s) const;
  void corner_w_apply(const cplx* t, cplx* s) const;  // s = W t
};

}  // namespace f3

#pragma once

#include <complex>
#include <vector>

#include "f3/grids.hpp"

namespace f3 {

/// In-place unnormalized DFT along the X_a axes of a product-grid field
/// (X^a axes ride along as the trailing stride). Plans are cached per
/// shape and shared; execution is thread-safe.
void fft_xa_forward(std::vector<cplx>& values, const GridPair& grid);
void fft_xa_backward(std::vector<cplx>& values, const GridPair& grid);

/// Same for a field living on the X_a grid alone.
void fft_xa_only_forward(std::vector<cplx>& values, const GridPair& grid);
void fft_xa_only_backward(std::vector<cplx>& values, const GridPair& grid);

/// (-1)^(k1+k2+...) phase for node offset -L/2, flat dual index k.
double dual_phase(const GridPair& grid, std::size_t flat_xa_index);

}  // namespace f3

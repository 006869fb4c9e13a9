#include "f3/numerics/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace f3 {

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

using PlanKey = std::pair<std::vector<int>, long>;

std::mutex g_plan_mutex;
std::map<PlanKey, PlanPair>& plan_cache() {
  static std::map<PlanKey, PlanPair> cache;
  return cache;
}

PlanPair get_plans(const std::vector<int>& dims, long howmany) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  PlanKey key{dims, howmany};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  long total = howmany;
  for (int d : dims) total *= d;
  fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(total));

  PlanPair p;
  // Row-major X_a axes outermost, trailing stride = howmany, dist = 1.
  p.fwd = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(),
                             static_cast<int>(howmany), buf, nullptr,
                             static_cast<int>(howmany), 1, buf, nullptr,
                             static_cast<int>(howmany), 1, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(),
                             static_cast<int>(howmany), buf, nullptr,
                             static_cast<int>(howmany), 1, buf, nullptr,
                             static_cast<int>(howmany), 1, FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  cache.emplace(key, p);
  return p;
}

void run(std::vector<cplx>& values, const GridPair& grid, long howmany, bool forward) {
  std::vector<int> dims;
  for (const auto& ax : grid.xa) dims.push_back(ax.count);
  PlanPair p = get_plans(dims, howmany);
  auto* ptr = reinterpret_cast<fftw_complex*>(values.data());
  fftw_execute_dft(forward ? p.fwd : p.bwd, ptr, ptr);
}

}  // namespace

void fft_xa_forward(std::vector<cplx>& values, const GridPair& grid) {
  run(values, grid, static_cast<long>(grid.xperp_size()), true);
}
void fft_xa_backward(std::vector<cplx>& values, const GridPair& grid) {
  run(values, grid, static_cast<long>(grid.xperp_size()), false);
}
void fft_xa_only_forward(std::vector<cplx>& values, const GridPair& grid) {
  run(values, grid, 1, true);
}
void fft_xa_only_backward(std::vector<cplx>& values, const GridPair& grid) {
  run(values, grid, 1, false);
}

double dual_phase(const GridPair& grid, std::size_t flat) {
  int parity = 0;
  for (int d = grid.dim_xa() - 1; d >= 0; --d) {
    parity += static_cast<int>(flat % grid.xa[d].count);
    flat /= grid.xa[d].count;
  }
  return (parity % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace f3

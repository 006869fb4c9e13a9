#include "f3/numerics/aaa.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace f3 {

using cd = std::complex<double>;

cd AAAModel::eval(cd z) const {
  const std::size_t m = support_z.size();
  for (std::size_t j = 0; j < m; ++j)
    if (z == support_z[j]) return support_f[j];
  cd num(0.0, 0.0), den(0.0, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const cd c = weights[j] / (z - support_z[j]);
    num += c * support_f[j];
    den += c;
  }
  return num / den;
}

cd AAAModel::value_at_infinity() const {
  cd num(0.0, 0.0), den(0.0, 0.0);
  for (std::size_t j = 0; j < support_z.size(); ++j) {
    num += weights[j] * support_f[j];
    den += weights[j];
  }
  return num / den;
}

std::vector<cd> polynomial_roots(const std::vector<cd>& coeffs) {
  // strip leading (highest-degree) zeros
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) < 1e-300) --deg;
  if (deg < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
  std::vector<cd> roots;
  for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
  return roots;
}

std::vector<cd> AAAModel::poles() const {
  // Poles solve sum_j w_j prod_{k != j} (z - z_k) = 0.
  const std::size_t m = support_z.size();
  if (m < 2) return {};
  std::vector<cd> poly(1, cd(0.0, 0.0));
  poly.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    // w_j * prod_{k != j} (z - z_k)
    std::vector<cd> term{weights[j]};
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      std::vector<cd> next(term.size() + 1, cd(0.0, 0.0));
      for (std::size_t q = 0; q < term.size(); ++q) {
        next[q] += term[q] * (-support_z[k]);
        next[q + 1] += term[q];
      }
      term = std::move(next);
    }
    if (term.size() > poly.size()) poly.resize(term.size(), cd(0.0, 0.0));
    for (std::size_t q = 0; q < term.size(); ++q) poly[q] += term[q];
  }
  return polynomial_roots(poly);
}

AAAModel aaa_fit(const std::vector<cd>& z, const std::vector<cd>& f, int max_degree,
                 double rel_tol) {
  const std::size_t n = z.size();
  AAAModel model;
  if (n == 0) return model;

  double scale = 0.0;
  cd mean(0.0, 0.0);
  for (const cd& v : f) mean += v;
  mean /= static_cast<double>(n);
  for (const cd& v : f) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;

  std::vector<char> used(n, 0);
  std::vector<cd> resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = f[i] - mean;

  const int mmax = std::min<std::size_t>(max_degree + 1, n > 2 ? n - 2 : 1);
  for (int it = 0; it < mmax; ++it) {
    // next support point: largest residual
    std::size_t best = n;
    double best_val = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double v = std::abs(resid[i]);
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    if (best == n) break;
    used[best] = 1;
    model.support_z.push_back(z[best]);
    model.support_f.push_back(f[best]);

    // Loewner matrix over the remaining points.
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i)
      if (!used[i]) rest.push_back(i);
    const std::size_t m = model.support_z.size();
    if (rest.empty()) {
      model.weights.assign(m, cd(1.0, 0.0));
      break;
    }
    Eigen::MatrixXcd L(rest.size(), m);
    for (std::size_t r = 0; r < rest.size(); ++r)
      for (std::size_t c = 0; c < m; ++c)
        L(r, c) = (f[rest[r]] - model.support_f[c]) / (z[rest[r]] - model.support_z[c]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L, Eigen::ComputeFullV);
    Eigen::VectorXcd w = svd.matrixV().col(m - 1);
    model.weights.assign(w.data(), w.data() + m);

    double max_resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) {
        resid[i] = cd(0.0, 0.0);
        continue;
      }
      resid[i] = f[i] - model.eval(z[i]);
      max_resid = std::max(max_resid, std::abs(resid[i]));
    }
    if (max_resid <= rel_tol * scale) break;
  }
  if (model.weights.empty()) model.weights.assign(model.support_z.size(), cd(1.0, 0.0));
  return model;
}

}  // namespace f3

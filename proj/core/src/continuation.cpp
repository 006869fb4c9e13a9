#include <cmath>

#include "f3/numerics/aaa.hpp"
#include "f3/reconstruction.hpp"

namespace f3 {

std::pair<cplx, ContinuationModel> continue_extrapolate(
    const std::vector<std::pair<double, cplx>>& samples, const ContinuationConfig& cfg) {
  ContinuationModel model;
  if (samples.size() < 12) throw config_error("continue_extrapolate: need >= 12 samples");

  double scale = 0.0;
  for (const auto& s : samples) scale = std::max(scale, std::abs(s.second));
  if (scale == 0.0) {
    model.c0 = 0.0;
    return {model.c0, model};
  }

  // Constant data short-circuits the rational machinery.
  bool constant = true;
  for (const auto& s : samples)
    if (std::abs(s.second - samples.front().second) > 1e-13 * scale) constant = false;
  if (constant) {
    model.c0 = samples.front().second;
    return {model.c0, model};
  }

  std::vector<cplx> zfit, ffit, zhold, fhold;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i % 3 == 1) {
      zhold.push_back(cplx(samples[i].first, 0.0));
      fhold.push_back(samples[i].second);
    } else {
      zfit.push_back(cplx(samples[i].first, 0.0));
      ffit.push_back(samples[i].second);
    }
  }

  AAAModel aaa = aaa_fit(zfit, ffit, cfg.degree_cap, cfg.fit_tol);
  model.support_z = aaa.support_z;
  model.support_f = aaa.support_f;
  model.weights = aaa.weights;
  for (std::size_t i = 0; i < zhold.size(); ++i)
    model.holdout_residual =
        std::max(model.holdout_residual, std::abs(aaa.eval(zhold[i]) - fhold[i]) / scale);

  // Tail fit c0 + c1/y + c2/y^2 along the imaginary axis.
  std::vector<double> ys;
  const double g = std::pow(cfg.y_max / cfg.y_min, 1.0 / std::max(1, cfg.y_count - 1));
  for (int k = 0; k < cfg.y_count; ++k) ys.push_back(cfg.y_min * std::pow(g, k));
  Eigen::MatrixXcd A(ys.size(), 3);
  Eigen::VectorXcd b(ys.size());
  for (std::size_t k = 0; k < ys.size(); ++k) {
    A(k, 0) = 1.0;
    A(k, 1) = 1.0 / ys[k];
    A(k, 2) = 1.0 / (ys[k] * ys[k]);
    b(k) = aaa.eval(cplx(0.0, ys[k]));
  }
  Eigen::VectorXcd coef = A.colPivHouseholderQr().solve(b);
  model.c0 = coef(0);
  model.c1 = coef(1);
  model.c2 = coef(2);
  double tail_scale = std::max(std::abs(model.c0), 1e-3 * scale);
  for (std::size_t k = 0; k < ys.size(); ++k)
    model.tail_residual = std::max(
        model.tail_residual,
        std::abs(b(k) - (coef(0) + coef(1) / ys[k] + coef(2) / (ys[k] * ys[k]))) / tail_scale);

  // Pole diagnostics: upper-half-plane poles near the evaluation path.
  model.poles = aaa.poles();
  double z_lo = samples.front().first, z_hi = samples.back().first;
  bool pole_flag = false;
  for (const cplx& p : model.poles) {
    if (p.imag() <= 0.0) continue;  // lower half plane is expected territory
    const double dx = std::max({z_lo - p.real(), p.real() - z_hi, 0.0});
    const double dist_interval = std::hypot(dx, p.imag());
    const double dist_axis = std::abs(p.real());  // distance to the imaginary axis
    if (dist_interval < 0.5 * (z_hi - z_lo) || dist_axis < 0.2 * (1.0 + std::abs(p.imag())))
      pole_flag = true;
  }
  if (pole_flag) model.flags.push_back("pole-near-path");

  // Inverse-power cross fit on the full sample set: basis (z + iC)^{-k}.
  {
    const double C = std::max(1.0, 2.0 * std::abs(z_hi));
    const int K = cfg.inverse_power_terms;
    Eigen::MatrixXcd M(samples.size(), K + 1);
    Eigen::VectorXcd rhs(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const cplx base = 1.0 / (cplx(samples[i].first, 0.0) + cplx(0.0, C));
      cplx pw(1.0, 0.0);
      for (int k = 0; k <= K; ++k) {
        M(i, k) = pw;
        pw *= base;
      }
      rhs(i) = samples[i].second;
    }
    Eigen::VectorXcd a = M.colPivHouseholderQr().solve(rhs);
    model.cross_method_diff = std::abs(a(0) - model.c0) / tail_scale;
  }

  if (model.holdout_residual > cfg.holdout_tol) model.flags.push_back("holdout-misfit");
  if (model.tail_residual > cfg.tail_tol) model.flags.push_back("tail-misfit");
  if (model.cross_method_diff > cfg.cross_tol) model.flags.push_back("cross-method-mismatch");
  model.untrusted = !model.flags.empty();
  return {model.c0, model};
}

}  // namespace f3

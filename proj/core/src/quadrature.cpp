#include "f3/numerics/quadrature.hpp"

#include <cmath>

namespace f3 {

namespace {

// QUADPACK G7/K15 constants.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  std::complex<double> k15;
  double err;
};

PanelResult gk_panel(const std::function<std::complex<double>(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<std::complex<double>, 15> fv;
  std::complex<double> k15(0.0, 0.0), g7(0.0, 0.0);
  for (int i = 0; i < 7; ++i) {
    const double x = h * kKronrodNodes[i];
    const std::complex<double> f1 = f(c - x);
    const std::complex<double> f2 = f(c + x);
    k15 += kKronrodWeights[i] * (f1 + f2);
    if (i % 2 == 1) g7 += kGaussWeights[i / 2] * (f1 + f2);
  }
  const std::complex<double> fc = f(c);
  k15 += kKronrodWeights[7] * fc;
  g7 += kGaussWeights[3] * fc;
  k15 *= h;
  g7 *= h;
  return {k15, std::abs(k15 - g7)};
}

std::complex<double> adapt(const std::function<std::complex<double>(double)>& f, double a,
                           double b, double tol, int depth, int max_depth) {
  PanelResult r = gk_panel(f, a, b);
  if (r.err <= tol || depth >= max_depth) return r.k15;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

std::complex<double> adaptive_gk(const std::function<std::complex<double>(double)>& f, double a,
                                 double b, const QuadOptions& opt) {
  PanelResult whole = gk_panel(f, a, b);
  const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(whole.k15));
  if (whole.err <= tol) return whole.k15;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, 1, opt.max_depth) +
         adapt(f, c, b, 0.5 * tol, 1, opt.max_depth);
}

double adaptive_gk_real(const std::function<double(double)>& f, double a, double b,
                        const QuadOptions& opt) {
  return adaptive_gk([&](double x) { return std::complex<double>(f(x), 0.0); }, a, b, opt)
      .real();
}

std::complex<double> adaptive_rect(
    const std::function<std::complex<double>(double, double)>& f, double ax, double bx,
    double ay, double by, const QuadOptions& outer, const QuadOptions& inner) {
  return adaptive_gk(
      [&](double x) { return adaptive_gk([&](double y) { return f(x, y); }, ay, by, inner); },
      ax, bx, outer);
}

std::complex<double> pv_radial(const std::function<std::complex<double>(double)>& g, double r,
                               double smax, const QuadOptions& opt) {
  // PV int_0^smax g(s)/(s^2-r^2) ds, symmetric window of half-width d about r.
  const double d = std::min(0.5 * r, 0.5 * (smax - r));
  std::complex<double> total(0.0, 0.0);
  // Symmetrized core: the t-integrand is regular at t=0.
  total += adaptive_gk(
      [&](double t) {
        const std::complex<double> gp = g(r + t);
        const std::complex<double> gm = g(r - t);
        return (gp * (2.0 * r - t) - gm * (2.0 * r + t)) /
               (t * (2.0 * r + t) * (2.0 * r - t));
      },
      0.0, d, opt);
  auto plain = [&](double s) { return g(s) / (s * s - r * r); };
  total += adaptive_gk(plain, 0.0, r - d, opt);
  total += adaptive_gk(plain, r + d, smax, opt);
  return total;
}

}  // namespace f3

#pragma once

#include <array>
#include <complex>
#include <functional>

namespace f3 {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_depth = 42;
};

/// Adaptive Gauss-Kronrod (G7/K15) on [a, b] for complex integrands.
std::complex<double> adaptive_gk(const std::function<std::complex<double>(double)>& f,
                                 double a, double b, const QuadOptions& opt = {});

double adaptive_gk_real(const std::function<double(double)>& f, double a, double b,
                        const QuadOptions& opt = {});

/// Iterated adaptive quadrature over an axis-aligned rectangle.
std::complex<double> adaptive_rect(
    const std::function<std::complex<double>(double, double)>& f, double ax, double bx,
    double ay, double by, const QuadOptions& outer = {}, const QuadOptions& inner = {});

/// PV int_0^smax g(s)/(s^2 - r^2) ds plus the optional +-i*pi/(2r) g(r)
/// half-residue term, for smooth decaying g. Used by the limiting
/// absorption oracles.
std::complex<double> pv_radial(const std::function<std::complex<double>(double)>& g, double r,
                               double smax, const QuadOptions& opt = {});

}  // namespace f3

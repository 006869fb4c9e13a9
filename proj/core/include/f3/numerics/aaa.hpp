#pragma once

#include <complex>
#include <vector>

namespace f3 {

/// Adaptive rational interpolation in barycentric form (greedy support
/// selection, Loewner-SVD weights).
struct AAAModel {
  std::vector<std::complex<double>> support_z;
  std::vector<std::complex<double>> support_f;
  std::vector<std::complex<double>> weights;

  std::complex<double> eval(std::complex<double> z) const;
  std::complex<double> value_at_infinity() const;
  std::vector<std::complex<double>> poles() const;
  int degree() const { return static_cast<int>(support_z.size()) - 1; }
};

AAAModel aaa_fit(const std::vector<std::complex<double>>& z,
                 const std::vector<std::complex<double>>& f, int max_degree, double rel_tol);

/// Roots of a complex polynomial (ascending coefficients) by companion
/// matrix eigenvalues.
std::vector<std::complex<double>> polynomial_roots(
    const std::vector<std::complex<double>>& coeffs);

}  // namespace f3

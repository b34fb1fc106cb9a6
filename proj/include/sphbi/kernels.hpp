#pragma once

// Compact polynomial SPH kernels represented as power-series coefficient
// tables. A kernel W(r) = C2/h^2 * k(r/h) is described by the coefficients
// b_k of its shape polynomial k(q) = sum_k b_k q^k on q in [0, 1], the
// normalization constant C2 (chosen so the kernel integrates to one over its
// support disc), and the support radius h. The coefficient table is what the
// closed-form triangle integrals consume: value integrals use b_k directly,
// gradient integrals use the derivative table k * b_k.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sphbi/special_functions.hpp"

namespace sphbi {

struct PolyKernel {
  std::vector<double> coefficients;  // b_k, indexed by power k
  double normalization = 0.0;        // C2
  double support = 1.0;              // h

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }

  // Shape polynomial k(q) = sum_k b_k q^k, evaluated by Horner's scheme.
  double poly(double q) const {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
      acc = acc * q + *it;
    return acc;
  }

  // Shape derivative k'(q) = sum_{k>=1} k b_k q^{k-1}.
  double poly_derivative(double q) const {
    double acc = 0.0;
    for (int k = degree(); k >= 1; --k) acc = acc * q + k * coefficients[k];
    return acc;
  }

  // Point value W(r) = C2/h^2 * k(r/h); zero outside the support.
  double value(double r) const {
    const double q = r / support;
    if (q >= 1.0) return 0.0;
    return normalization / (support * support) * poly(q);
  }

  // Point gradient of W at offset (dx, dy) from the kernel center:
  // grad W = C2/h^3 * k'(r/h) * x/r. Returns zero at the center and outside
  // the support (k'(0) = 0 for kernels with no linear term, and the radial
  // direction is undefined at r = 0 anyway).
  std::array<double, 2> gradient(double dx, double dy) const {
    const double r = std::hypot(dx, dy);
    const double q = r / support;
    if (q >= 1.0 || r == 0.0) return {0.0, 0.0};
    const double scale =
        normalization / (support * support * support) * poly_derivative(q) / r;
    return {scale * dx, scale * dy};
  }
};

// Derivative coefficient table: entry at power k-1 holds k * b_k, i.e. the
// coefficients of k'(q). Empty for constant kernels.
inline std::vector<double> kernel_derivative_coefficients(const PolyKernel& kernel) {
  std::vector<double> out;
  const int deg = kernel.degree();
  if (deg < 1) return out;
  out.resize(static_cast<std::size_t>(deg));
  for (int k = 1; k <= deg; ++k) out[k - 1] = k * kernel.coefficients[k];
  return out;
}

// Wendland C2 kernel of degree 8 in 2D: k(q) = (1-q)^6 (1 + 6q + 35/3 q^2).
// The coefficients are expanded in exact rational arithmetic (every b_k is an
// integer over 3) and rounded to double once, so the table carries no
// accumulated floating-point expansion error:
//   b = {1, 0, -28/3, 0, 70, -448/3, 140, -64, 35/3}.
// The normalization follows from sum_k b_k / (k+2) = 1/18 and
// C2 * 2 pi * (1/18) = 1, giving C2 = 9/pi.
inline PolyKernel wendland4(double support = 1.0) {
  if (!(support > 0.0))
    throw std::domain_error("wendland4: support radius must be positive");
  // (1-q)^6 has integer coefficients C(6,i) (-1)^i; multiply by the factor
  // polynomial 3 + 18 q + 35 q^2 (numerators over the common denominator 3).
  std::array<long long, 7> base{};
  for (int i = 0; i <= 6; ++i) {
    const long long c = static_cast<long long>(binomial(6, i));
    base[static_cast<std::size_t>(i)] = (i % 2 == 0) ? c : -c;
  }
  const std::array<long long, 3> factor{3, 18, 35};
  std::array<long long, 9> numerator{};
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 2; ++j)
      numerator[static_cast<std::size_t>(i + j)] +=
          base[static_cast<std::size_t>(i)] * factor[static_cast<std::size_t>(j)];

  PolyKernel out;
  out.coefficients.resize(numerator.size());
  for (std::size_t k = 0; k < numerator.size(); ++k)
    out.coefficients[k] = static_cast<double>(numerator[k]) / 3.0;
  out.normalization = 9.0 / std::numbers::pi;
  out.support = support;
  return out;
}

// Name-based kernel selection; the extension point for other single-piece
// polynomial kernels.
inline PolyKernel kernel_by_name(std::string_view name, double support = 1.0) {
  if (name == "wendland4") return wendland4(support);
  throw std::invalid_argument("kernel_by_name: unknown kernel '" + std::string(name) +
                              "' (available: wendland4)");
}

}  // namespace sphbi

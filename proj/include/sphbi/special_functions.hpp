#pragma once

// Stable complex-valued evaluation of the closed-form building blocks used by
// the analytic region integrals: the Gauss hypergeometric anchor family, the
// S/T/F auxiliary series, the square-root-power antiderivative, the arcsecant
// power integral, and exact Chebyshev coefficient expansions.
//
// Everything is computed in complex arithmetic end to end. Antiderivatives
// evaluated at a single bound generally carry imaginary parts; callers take
// the real part only after summing all bound evaluations and keep the largest
// discarded imaginary magnitude as a diagnostic.
//
// The evaluation stack is templated on the real type R (double by default,
// deduced from the arguments). The assembly layer instantiates it with
// long double: the assembled integrals multiply these values by weights of
// alternating sign summing to several hundred in magnitude, and evaluating
// the antiderivatives in extended precision keeps that amplified rounding
// below the double-precision noise floor of the final result.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sphbi {

using Complex = std::complex<double>;

// Signals that a closed form exists in general but the requested parameters
// fall outside the families this library generates (kernel powers and
// Chebyshev expansions up to the configured maximum degree).
class UnsupportedForm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Signals a parameter value at which the requested quantity is singular.
class SingularInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Highest polynomial kernel degree the parity/offset tables are sized for.
// The shipped degree-8 kernel needs n up to degree + 2; the headroom covers
// higher-order kernels of the same family.
inline constexpr int kMaxKernelDegree = 16;

// ---------------------------------------------------------------------------
// small exact helpers
// ---------------------------------------------------------------------------

// Binomial coefficient, exact in double for every n this library uses
// (products stay far below 2^53).
inline double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// z^e by binary exponentiation; exact multiplication chain, no exp/log.
template <class R>
std::complex<R> cpow_int(std::complex<R> z, int e) {
  bool inv = e < 0;
  unsigned n = inv ? static_cast<unsigned>(-(long long)e) : static_cast<unsigned>(e);
  std::complex<R> r(R(1), R(0));
  std::complex<R> b = z;
  for (; n; n >>= 1) {
    if (n & 1) r *= b;
    b *= b;
  }
  return inv ? R(1) / r : r;
}

template <class R = double>
R rpow_int(R x, int e) {
  bool inv = e < 0;
  unsigned n = inv ? static_cast<unsigned>(-(long long)e) : static_cast<unsigned>(e);
  R r = R(1), b = x;
  for (; n; n >>= 1) {
    if (n & 1) r *= b;
    b *= b;
  }
  return inv ? R(1) / r : r;
}

// z^(twice/2) through the principal square root and exact integer powers;
// agrees with the principal power function for every branch this library uses.
template <class R>
std::complex<R> cpow_half(std::complex<R> z, int twice) {
  int q = twice / 2;
  int r = twice % 2;
  std::complex<R> out = cpow_int(z, q);
  if (r == 1) out *= std::sqrt(z);
  if (r == -1) out /= std::sqrt(z);
  return out;
}

namespace detail {

// Branch canonicalization: a value that is exactly real keeps a +0 imaginary
// part, so a following sqrt/log/power lands on the upper side of its cut.
// Mixed real/complex arithmetic such as `1.0 - z` otherwise manufactures a
// -0 imaginary part and silently switches the branch.
template <class R>
std::complex<R> upper_branch(std::complex<R> w) {
  if (w.imag() == R(0)) return std::complex<R>(w.real(), R(0));
  return w;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// inverse sine with the odd-extension branch: asin(-z) = -asin(z) exactly,
// including on the real cuts |Re z| > 1
// ---------------------------------------------------------------------------

template <class R>
std::complex<R> complex_asin(std::complex<R> z) {
  if (z.real() > R(0) || (z.real() == R(0) && z.imag() > R(0))) {
    const std::complex<R> i(R(0), R(1));
    // The radicand is formed as (1-z)(1+z): near z = 1 the subtraction is
    // exact, while 1 - z*z would cancel and cost half the digits there.
    return -i * std::log(i * z + std::sqrt(detail::upper_branch((R(1) - z) * (R(1) + z))));
  }
  if (z.real() == R(0) && z.imag() == R(0)) return std::complex<R>(R(0), R(0));
  return -complex_asin(-z);
}

template <class R>
std::complex<R> complex_acos(std::complex<R> z) {
  return std::numbers::pi_v<R> / R(2) - complex_asin(z);
}

// asin(d/x) and acos(d/x) on the real window x >= d > 0. The naive ratio
// loses half the working digits near x = d: d/x rounds at eps while the
// inverse-trig derivative there grows like sqrt(x/(x-d)), so results wobble
// by eps*sqrt(x/(x-d)) however exactly x and d are known. The complementary
// form goes through sqrt((x-d)(x+d))/x, whose subtraction is exact, keeping
// absolute accuracy at eps for arbitrarily small gaps. Away from the edge
// (d/x <= 0.7, where the complement itself would be the ill-conditioned one)
// the plain evaluation is used.
template <class R = double>
std::complex<R> asin_ratio(R d, R x) {
  if (d <= R(0.7) * x) return complex_asin(std::complex<R>(d / x, R(0)));
  return std::complex<R>(
      std::numbers::pi_v<R> / R(2) - std::asin(std::sqrt((x - d) * (x + d)) / x), R(0));
}

template <class R = double>
std::complex<R> acos_ratio(R d, R x) {
  if (d <= R(0.7) * x) return complex_acos(std::complex<R>(d / x, R(0)));
  return std::complex<R>(std::asin(std::sqrt((x - d) * (x + d)) / x), R(0));
}

// ---------------------------------------------------------------------------
// auxiliary series factors
//   S(n) = C(2n,n) / (2 * 4^n)          T(n) = 1 / ((2n+1) S(n))
// ---------------------------------------------------------------------------

template <class R = double>
R series_S(int n) {
  if (n < 0) throw std::domain_error("series_S: n must be >= 0");
  R s = R(0.5);
  for (int i = 1; i <= n; ++i) s *= R(2 * i - 1) / R(2 * i);
  return s;
}

template <class R = double>
R series_T(int n) {
  if (n < 0) throw std::domain_error("series_T: n must be >= 0");
  return R(1) / (R(2 * n + 1) * series_S<R>(n));
}

namespace detail {

// Convergent tail form of F: sum_{i >= n/2} T(i) c^{i+1}; valid for |c| < 1.
template <class R>
std::complex<R> series_F_tail(int n, std::complex<R> c) {
  const int i0 = n / 2;
  R s_i = series_S<R>(i0);
  std::complex<R> p = cpow_int(c, i0 + 1);
  std::complex<R> sum(R(0), R(0));
  for (int i = i0; i < i0 + 4000; ++i) {
    if (i > i0) {
      s_i *= R(2 * i - 1) / R(2 * i);
      p *= c;
    }
    const R t_i = R(1) / (R(2 * i + 1) * s_i);
    const std::complex<R> term = t_i * p;
    sum += term;
    // The cutoff must stay relative to the (possibly tiny, ~c^{i0+1}) sum:
    // callers divide the result by that same small power, so any absolute
    // truncation floor would be amplified right back to O(1).
    if (std::abs(term) < R(1e-17) * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace detail

// Central series term F(n, c) = 2 sqrt(c) asin(sqrt(c)) / sqrt(1-c)
//                             - sum_{i=0}^{n/2-1} T(i) c^{i+1}
// with the polynomial tail evaluated by Horner's scheme.
inline Complex series_F(int n, Complex c) {
  if (n < 0) throw std::domain_error("series_F: n must be >= 0");
  if (c == Complex(1.0, 0.0)) throw SingularInput("series_F: singular at c = 1");
  const Complex sc = std::sqrt(detail::upper_branch(c));
  Complex out = 2.0 * sc * complex_asin(sc) / std::sqrt(detail::upper_branch(1.0 - c));
  Complex horner(0.0, 0.0);
  for (int i = n / 2 - 1; i >= 0; --i) horner = horner * c + series_T(i);
  return out - horner * c;
}

// ---------------------------------------------------------------------------
// hypergeometric anchors A_n(z) = 2F1(-1/2, n/2, n/2 + 1, z)
// ---------------------------------------------------------------------------

// Direct Gauss power series; converges for |z| < 1, used below |z| <= 0.75.
template <class R>
std::complex<R> hyp2f1_gauss_series(int n, std::complex<R> z) {
  const R a = R(-0.5);
  const R b = R(n) / R(2);
  const R c = b + R(1);
  std::complex<R> term(R(1), R(0));
  std::complex<R> sum(R(1), R(0));
  for (int k = 0; k < 2000; ++k) {
    term *= (a + R(k)) * (b + R(k)) / ((c + R(k)) * R(k + 1)) * z;
    sum += term;
    if (std::abs(term) < R(1e-18) * std::max(R(1), std::abs(sum))) break;
  }
  return sum;
}

// Odd anchor, n odd >= 1:
//   A_n = sqrt(1-z) n/(n+1) + S((n+1)/2) z^{-(n+1)/2} B(n-1, z)
// where B(m, z) = sqrt(1-z) F(m, z) stays finite at z = 1:
//   B(m, z) = 2 sqrt(z) asin(sqrt(z)) - sqrt(1-z) * (Horner tail) * z.
template <class R>
std::complex<R> hyp2f1_odd(int n, std::complex<R> z) {
  if (n < 1 || n % 2 == 0) throw std::domain_error("hyp2f1_odd: n must be odd and >= 1");
  if (z == std::complex<R>(R(0), R(0)))
    throw std::domain_error("hyp2f1_odd: z = 0 is the trivial value 1, handled by hyp2f1_special");
  const int big_k = (n + 1) / 2;
  const std::complex<R> ws = std::sqrt(detail::upper_branch(R(1) - z));
  std::complex<R> b_term;
  if (std::abs(z) <= R(0.75)) {
    b_term = ws * detail::series_F_tail(n - 1, z);
  } else {
    const std::complex<R> sz = std::sqrt(detail::upper_branch(z));
    b_term = R(2) * sz * complex_asin(sz);
    std::complex<R> horner(R(0), R(0));
    for (int i = (n - 1) / 2 - 1; i >= 0; --i) horner = horner * z + series_T<R>(i);
    b_term -= ws * horner * z;
  }
  return ws * (R(n) / R(n + 1)) + series_S<R>(big_k) * b_term / cpow_int(z, big_k);
}

// Even anchor, n = 2p >= 2:
//   A_{2p} = 2p z^{-p} sum_j C(p-1,j) (-1)^j (1 - (1-z)^{j+3/2}) / (2j+3)
// The closed form's z^{-p} prefactor amplifies the alternating sum's rounding
// for |z| < 1, so inside |z| < 0.95 the anchor is summed as its (convergent,
// cancellation-free) defining series instead; the closed form takes over
// where the series cannot reach.
template <class R>
std::complex<R> hyp2f1_even(int n, std::complex<R> z) {
  if (n < 2 || n % 2 != 0) throw std::domain_error("hyp2f1_even: n must be even and >= 2");
  if (z == std::complex<R>(R(0), R(0)))
    throw std::domain_error("hyp2f1_even: z = 0 is the trivial value 1, handled by hyp2f1_special");
  if (std::abs(z) < R(0.95)) return hyp2f1_gauss_series(n, z);
  const int p = n / 2;
  const std::complex<R> w = detail::upper_branch(R(1) - z);
  const std::complex<R> ws = std::sqrt(w);
  std::complex<R> wp = w * ws;  // w^{j + 3/2} starting at j = 0
  std::complex<R> sum(R(0), R(0));
  for (int j = 0; j < p; ++j) {
    if (j > 0) wp *= w;
    const R sign = (j % 2 == 0) ? R(1) : R(-1);
    sum += R(binomial(p - 1, j)) * sign * (R(1) - wp) / R(2 * j + 3);
  }
  return R(2 * p) * sum / cpow_int(z, p);
}

// Anchor dispatcher: Gauss series inside |z| <= 0.75 (fast, uniformly
// accurate), parity closed forms outside (valid for all z including z >= 1,
// where the value is complex with the odd-extension branch).
template <class R>
std::complex<R> hyp2f1_anchor(int n, std::complex<R> z) {
  if (n < 0) throw std::domain_error("hyp2f1_anchor: n must be >= 0");
  if (n == 0) return std::complex<R>(R(1), R(0));
  if (std::abs(z) <= R(0.75)) return hyp2f1_gauss_series(n, z);
  return (n % 2 != 0) ? hyp2f1_odd(n, z) : hyp2f1_even(n, z);
}

// One step along the anchor family:  A_{n+2} = (n+2)(A_n - (1-z)^{3/2}) / ((n+3) z)
template <class R>
std::complex<R> hyp2f1_anchor_step(int n, std::complex<R> z, std::complex<R> a_n) {
  if (n < 0) throw std::domain_error("hyp2f1_anchor_step: n must be >= 0");
  if (z == std::complex<R>(R(0), R(0)))
    throw SingularInput("hyp2f1_anchor_step: z = 0 pivot vanishes");
  const std::complex<R> w = detail::upper_branch(R(1) - z);
  return R(n + 2) * (a_n - w * std::sqrt(w)) / (R(n + 3) * z);
}

// ---------------------------------------------------------------------------
// general 2F1 plumbing: exact special patterns and contiguous stepping
// ---------------------------------------------------------------------------

// Exact half-integer rational: value = twice / 2. Keeping the doubled
// numerator makes the special-pattern matching exact.
struct HalfInt {
  int twice = 0;
  constexpr double value() const { return twice / 2.0; }
  friend constexpr bool operator==(HalfInt a, HalfInt b) { return a.twice == b.twice; }
};

// The four exactly representable patterns:
//   2F1(0,b,c,z) = 1        2F1(-1,b,c,z) = (c - b z)/c
//   2F1(a,b,b,z) = (1-z)^{-a}         2F1(a,b,c,0) = 1
// Returns nullopt when no pattern matches, so the caller can fall through to
// the series / contiguous machinery.
inline std::optional<Complex> hyp2f1_special(HalfInt a, HalfInt b, HalfInt c, Complex z) {
  if (a.twice == 0) return Complex(1.0, 0.0);
  if (z == Complex(0.0, 0.0)) return Complex(1.0, 0.0);
  if (b == c) return cpow_half(detail::upper_branch(1.0 - z), -a.twice);
  if (a.twice == -2) {
    if (c.twice == 0) return std::nullopt;
    return (c.value() - b.value() * z) / c.value();
  }
  return std::nullopt;
}

// The four values linked by Gauss' contiguous relations around a base triple:
//   (c-1)(F(a,b,c-1) - F) = b(F(a,b+1,c) - F) = a(F(a+1,b,c) - F)
enum class Hyp2f1Term { base, raise_a, raise_b, lower_c };

// Given any two of {F, F(a+1,b,c), F(a,b+1,c), F(a,b,c-1)} at a fixed z,
// produces a requested third. Refuses the step when a required pivot
// coefficient vanishes (a = 0, b = 0, or c = 1); the caller must re-route
// through a different neighbor in that case.
inline Complex hyp2f1_contiguous_step(HalfInt a, HalfInt b, HalfInt c, Complex /*z*/,
                                      Hyp2f1Term known1_which, Complex known1,
                                      Hyp2f1Term known2_which, Complex known2,
                                      Hyp2f1Term want) {
  if (known1_which == known2_which)
    throw std::domain_error("hyp2f1_contiguous_step: the two known terms must differ");
  if (want == known1_which) return known1;
  if (want == known2_which) return known2;
  const auto pivot = [&](Hyp2f1Term t) -> double {
    switch (t) {
      case Hyp2f1Term::raise_a: return a.value();
      case Hyp2f1Term::raise_b: return b.value();
      case Hyp2f1Term::lower_c: return c.value() - 1.0;
      case Hyp2f1Term::base: break;
    }
    return 0.0;
  };
  const auto refused = [] {
    return std::domain_error("hyp2f1_contiguous_step: vanishing pivot, step refused");
  };

  Complex base_val;
  Complex common;  // the shared value of all three bracketed products
  if (known1_which == Hyp2f1Term::base || known2_which == Hyp2f1Term::base) {
    const bool first_is_base = known1_which == Hyp2f1Term::base;
    base_val = first_is_base ? known1 : known2;
    const Hyp2f1Term nb_which = first_is_base ? known2_which : known1_which;
    const Complex nb_val = first_is_base ? known2 : known1;
    const double p = pivot(nb_which);
    if (p == 0.0) throw refused();
    common = p * (nb_val - base_val);
  } else {
    const double p1 = pivot(known1_which);
    const double p2 = pivot(known2_which);
    if (p1 == 0.0 || p2 == 0.0 || p1 == p2) throw refused();
    common = (known1 - known2) / (1.0 / p1 - 1.0 / p2);
    base_val = known1 - common / p1;
  }
  if (want == Hyp2f1Term::base) return base_val;
  const double p = pivot(want);
  if (p == 0.0) throw refused();
  return base_val + common / p;
}

// ---------------------------------------------------------------------------
// antiderivative of x^k / sqrt(x^2 - d^2), principal branch
//   k = 0: log(x + root)    k = 1: root
//   else:  x^{k-1} root / k + (k-1)/k d^2 * (same at k-2)
// ---------------------------------------------------------------------------

template <class R = double>
std::complex<R> power_over_root_antiderivative(int k, std::complex<R> d, R x) {
  if (k < 0) throw std::domain_error("power_over_root_antiderivative: k must be >= 0");
  const std::complex<R> big_x(x, R(0));
  const std::complex<R> d2 = d * d;
  // (x-d)(x+d) instead of x^2-d^2: exact subtraction keeps the root's
  // relative accuracy when x approaches d.
  const std::complex<R> root = std::sqrt(detail::upper_branch((big_x - d) * (big_x + d)));
  if (k == 0) return std::log(big_x + root);
  if (k == 1) return root;
  return cpow_int(big_x, k - 1) * root / R(k) +
         R(k - 1) / R(k) * d2 * power_over_root_antiderivative(k - 2, d, x);
}

// ---------------------------------------------------------------------------
// antiderivative of x^n (1 - d^2/x^2)^{m/2}
// ---------------------------------------------------------------------------
//
//  m = 0 (or d = 0): plain power rule, log(x) at n = -1
//  m even: binomial expansion into a Laurent polynomial of x
//  m odd >= 3: (1-u)^{m/2} = (1-u)^{m/2-1} (1-u) reduction
//  m = 1, n >= 1: x^n/n * (+-i|d|) * A_n(x^2/d^2), where the rational factor
//      is -i|d| above the singular point x = |d|, +i|d| below, and its right
//      limit -i d exactly at x = |d| (deterministic; avoids nudging x by eps)
//  m = 1, n in {0,-1,-2}: explicit closed forms

template <class R = double>
std::complex<R> sqrt_power_antiderivative(int n, int m, std::complex<R> d, R x) {
  if (!(x > R(0))) throw std::domain_error("sqrt_power_antiderivative: requires x > 0");
  if (m < 0) throw UnsupportedForm("sqrt_power_antiderivative: m must be >= 0");
  const std::complex<R> big_x(x, R(0));
  if (m == 0 || d == std::complex<R>(R(0), R(0))) {
    if (n == -1) return std::log(big_x);
    return cpow_int(big_x, n + 1) / R(n + 1);
  }
  if (m % 2 == 0) {
    std::complex<R> sum(R(0), R(0));
    for (int j = 0; j <= m / 2; ++j) {
      const R sign = (j % 2 == 0) ? R(1) : R(-1);
      const std::complex<R> coef = R(binomial(m / 2, j)) * sign * cpow_int(d, 2 * j);
      const int p = n - 2 * j;
      if (p == -1)
        sum += coef * std::log(big_x);
      else
        sum += coef * cpow_int(big_x, p + 1) / R(p + 1);
    }
    return sum;
  }
  if (m >= 3) {
    return sqrt_power_antiderivative(n, m - 2, d, x) -
           d * d * sqrt_power_antiderivative(n - 2, m - 2, d, x);
  }
  // m == 1
  if (n >= 1) {
    const R edge = std::abs(d);
    if (d.imag() == R(0) && d.real() > R(0) && x > edge && x - edge <= R(0.02) * edge) {
      // Just above the singular point the closed form cancels down to a
      // remainder of order (x-d)^{3/2}; evaluating it directly wastes half
      // the digits. Instead take the exact limit value at x = d plus the
      // local expansion of the integral over the gap,
      //   ∫_d^x t^{n-1} sqrt(t^2-d^2) dt
      //     = d^{n+1} sqrt(2) Σ_k c_k u^{k+3/2}/(k+3/2),  u = (x-d)/d,
      // with Σ c_k u^k = (1+u/2)^{1/2} (1+u)^{n-1}. The gap x-d is exact by
      // Sterbenz subtraction, so the result is relatively accurate for
      // arbitrarily thin gaps.
      const std::complex<R> at_limit = sqrt_power_antiderivative(n, 1, d, edge);
      const R u = (x - edge) / edge;
      constexpr int kMaxLocalTerms = 40;
      std::array<R, kMaxLocalTerms> half_binom{};  // binom(1/2,j)/2^j
      half_binom[0] = R(1);
      for (int j = 1; j < kMaxLocalTerms; ++j)
        half_binom[j] = half_binom[j - 1] * (R(0.5) - R(j - 1)) / R(j) * R(0.5);
      R sum = R(0);
      R upow = R(1);
      for (int k = 0; k < kMaxLocalTerms; ++k) {
        R ck = R(0);
        for (int j = std::max(0, k - (n - 1)); j <= k; ++j)
          ck += half_binom[j] * R(binomial(n - 1, k - j));
        const R term = ck * upow / (R(k) + R(1.5));
        sum += term;
        if (std::abs(term) < R(1e-18) * std::abs(sum)) break;
        upow *= u;
      }
      const R gap_part =
          rpow_int(edge, n + 1) * std::numbers::sqrt2_v<R> * u * std::sqrt(u) * sum;
      return at_limit + gap_part;
    }
    const std::complex<R> z = big_x * big_x / (d * d);
    const R ad = edge;
    std::complex<R> rat;
    if (x == ad)
      rat = std::complex<R>(R(0), R(-1)) * d;  // right limit at the singular point
    else if (x < ad)
      rat = std::complex<R>(R(0), ad);
    else
      rat = std::complex<R>(R(0), -ad);
    return cpow_int(big_x, n) / R(n) * rat * hyp2f1_anchor(n, z);
  }
  const std::complex<R> root = std::sqrt(detail::upper_branch((big_x - d) * (big_x + d)));
  if (n == 0) return root - d * complex_acos(d / big_x);
  if (n == -1) return -root / big_x + std::log(big_x + root);
  if (n == -2) return -root / (R(2) * x * x) + complex_acos(d / big_x) / (R(2) * d);
  throw UnsupportedForm("sqrt_power_antiderivative: unsupported (n, m) pair");
}

// ---------------------------------------------------------------------------
// definite integral of asec(a x) x^m over [lower, upper]
//   antiderivative: (x^{m+1} acos(1/(a x)) - (1/a) R_m(1/a, x)) / (m+1)
// where R_m is power_over_root_antiderivative; complex-valued when a x < 1.
// ---------------------------------------------------------------------------

inline Complex arcsec_power_integral(double a, int m, double lower, double upper) {
  if (a == 0.0) throw std::domain_error("arcsec_power_integral: a must be nonzero");
  if (m < 0) throw std::domain_error("arcsec_power_integral: m must be >= 0");
  if (!(lower > 0.0) || !(upper >= lower))
    throw std::domain_error("arcsec_power_integral: requires 0 < lower <= upper");
  const Complex d(1.0 / a, 0.0);
  const auto anti = [&](double x) {
    const Complex big_x(x, 0.0);
    return (cpow_int(big_x, m + 1) * complex_acos(d / big_x) -
            d * power_over_root_antiderivative(m, d, x)) /
           (m + 1.0);
  };
  return anti(upper) - anti(lower);
}

// ---------------------------------------------------------------------------
// exact Chebyshev coefficient expansions
//   T_n(x) = sum_j (C(n-j,j) + C(n-j-1, n-2j)) (-1)^j 2^{n-2j-1} x^{n-2j}
//   U_n(x) = sum_k (-1)^k C(n-k,k) 2^{n-2k} x^{n-2k}
// ---------------------------------------------------------------------------

enum class ChebKind { first, second };

struct ChebyshevSeries {
  ChebKind kind;
  int degree;
  std::vector<std::pair<int, double>> coefficients;  // (power, coefficient)

  // Coefficients are stored in descending power order (as generated), so the
  // sum is evaluated by Horner's scheme. Monomial Chebyshev coefficients grow
  // to ~2^(n-1) while the value stays in [-1, 1] on the natural interval;
  // extended-precision accumulation keeps that cancellation noise well below
  // the trigonometric-identity tolerance.
  double evaluate(double x) const {
    if (coefficients.empty()) return 0.0;
    const long double lx = x;
    long double acc = 0.0L;
    int power = coefficients.front().first;
    for (const auto& [p, c] : coefficients) {
      for (; power > p; --power) acc *= lx;
      acc += c;
    }
    for (; power > 0; --power) acc *= lx;
    return static_cast<double>(acc);
  }
};

inline ChebyshevSeries chebyshev_coefficients(ChebKind kind, int n) {
  if (n < 0) throw std::domain_error("chebyshev_coefficients: n must be >= 0");
  ChebyshevSeries out{kind, n, {}};
  if (kind == ChebKind::first) {
    if (n == 0) {
      out.coefficients.emplace_back(0, 1.0);
      return out;
    }
    for (int j = 0; j <= n / 2; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      const double c =
          (binomial(n - j, j) + binomial(n - j - 1, n - 2 * j)) * sign *
          std::ldexp(1.0, n - 2 * j - 1);
      out.coefficients.emplace_back(n - 2 * j, c);
    }
    return out;
  }
  for (int k = 0; k <= n / 2; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    out.coefficients.emplace_back(n - 2 * k,
                                  sign * binomial(n - k, k) * std::ldexp(1.0, n - 2 * k));
  }
  return out;
}

}  // namespace sphbi

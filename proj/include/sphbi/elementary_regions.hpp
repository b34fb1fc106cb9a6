#pragma once

// Closed-form definite integrals of the three fundamental integrand families
//
//   f_p = x^n,   f_c = x^n cos(a θ),   f_s = x^n sin(b θ)
//
// over the elementary regions produced by clipping a triangle against the
// unit disc: circular cones/sectors, circular segments, and radial "stub"
// windows (r in [lower, upper], θ in [0, asin(D/r) - β]). All integrals are
// taken in the polar measure dr dθ — the caller folds the area Jacobian r
// into the power n. Results are complex: antiderivatives are evaluated on
// complex branches end to end, and the assembled triangle integral takes the
// real part only after every region contribution is summed.
//
// Like the special-function layer underneath, the integrals are templated on
// the real type R (double by default, deduced from the scalar arguments).
// The triangle assembly instantiates them with long double so that the
// large-weight alternating sums over these values do not amplify evaluation
// rounding into the final double result.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sphbi/special_functions.hpp"

namespace sphbi {

enum class Family { p, c, s };

// One fundamental integrand. `harmonic` is the angular multiplier (a or b);
// it is 0 for family p and >= 1 for families c and s.
struct FundamentalTerm {
  Family family = Family::p;
  int n = 0;
  int harmonic = 0;
};

struct WeightedTerm {
  double weight = 0.0;
  FundamentalTerm term;
};

namespace detail {

inline void validate_term(const FundamentalTerm& t, const char* where) {
  if (t.n < 0)
    throw std::domain_error(std::string(where) + ": radial power must be >= 0");
  if (t.family == Family::p) {
    if (t.harmonic != 0)
      throw std::domain_error(std::string(where) + ": family p carries no harmonic");
  } else if (t.harmonic < 1) {
    throw std::domain_error(std::string(where) + ": families c/s need harmonic >= 1");
  }
}

}  // namespace detail

// Integral over the cone θ in [alpha, beta], r in [0, l]:
//   f_p -> (β-α) l^{n+1}/(n+1)
//   f_c -> (sin(aβ) - sin(aα))/a · l^{n+1}/(n+1)
//   f_s -> (cos(aα) - cos(aβ))/a · l^{n+1}/(n+1)
template <class R = double>
std::complex<R> cone_integral(const FundamentalTerm& term, R alpha, R beta, R l) {
  detail::validate_term(term, "cone_integral");
  if (!(l >= R(0) && l <= R(1) + R(1e-12)))
    throw std::domain_error("cone_integral: radius outside [0, 1]");
  if (!(beta >= alpha)) throw std::domain_error("cone_integral: beta < alpha");
  const R radius = std::min(l, R(1));
  const R base = rpow_int(radius, term.n + 1) / R(term.n + 1);
  const R a = R(term.harmonic);
  switch (term.family) {
    case Family::p:
      return std::complex<R>((beta - alpha) * base, R(0));
    case Family::c:
      return std::complex<R>((std::sin(a * beta) - std::sin(a * alpha)) / a * base, R(0));
    case Family::s:
      return std::complex<R>((std::cos(a * alpha) - std::cos(a * beta)) / a * base, R(0));
  }
  return std::complex<R>(R(0), R(0));  // unreachable
}

// Unit-disc shortcuts (radius 1): the full disc and the half disc
// θ in [-π/2, π/2]. These are the precomputed special cases the assembly
// layer leans on for the no-clipping and through-the-center branches.
template <class R = double>
std::complex<R> full_disc_integral(const FundamentalTerm& term) {
  detail::validate_term(term, "full_disc_integral");
  if (term.family == Family::p)
    return std::complex<R>(R(2) * std::numbers::pi_v<R> / R(term.n + 1), R(0));
  return std::complex<R>(R(0), R(0));  // whole-circle integrals of cos(aθ), sin(aθ) vanish
}

template <class R = double>
std::complex<R> half_disc_integral(const FundamentalTerm& term) {
  detail::validate_term(term, "half_disc_integral");
  const R inv = R(1) / R(term.n + 1);
  switch (term.family) {
    case Family::p:
      return std::complex<R>(std::numbers::pi_v<R> * inv, R(0));
    case Family::c:
      return std::complex<R>(R(2) *
                                 std::sin(R(term.harmonic) * std::numbers::pi_v<R> / R(2)) /
                                 R(term.harmonic) * inv,
                             R(0));
    case Family::s:
      return std::complex<R>(R(0), R(0));  // odd in θ over the symmetric half
  }
  return std::complex<R>(R(0), R(0));  // unreachable
}

// Integral over the circular segment {x >= d} of the unit disc (the chord is
// vertical in the canonical frame; θ is measured from the +x axis, so the
// window at radius r is |θ| <= acos(d/r)).
//
//   f_s -> 0 by odd symmetry.
//   f_p -> 2 ∫_d^1 x^n acos(d/x) dx via the arcsecant antiderivative
//          x^{n+1} acos(d/x)/(n+1) - d R_n(d, x)/(n+1); the antiderivative is
//          formed directly from d rather than through sec^{-1}(x/d)'s
//          reciprocal parameter, so the x = d endpoint stays exact.
//   f_c -> sin(a acos(y)) = sqrt(1-y^2) U_{a-1}(y) at y = d/x, expanded over
//          the Chebyshev coefficients into sqrt-power antiderivatives.
//
// d <= -1 returns the full disc, d >= 1 returns zero, d = 0 the half disc;
// negative d is folded to the mirrored positive-d segment (complement region
// for f_p; harmonic parity flip (-1)^{a+1} for f_c, whose θ origin then sits
// on the opposite side of the circle).
template <class R = double>
std::complex<R> segment_integral(const FundamentalTerm& term, R d) {
  detail::validate_term(term, "segment_integral");
  if (term.family == Family::s) return std::complex<R>(R(0), R(0));
  if (d <= R(-1)) return cone_integral(term, R(0), R(2) * std::numbers::pi_v<R>, R(1));
  if (d >= R(1)) return std::complex<R>(R(0), R(0));
  if (d == R(0)) return half_disc_integral<R>(term);
  if (d < R(0)) {
    const std::complex<R> mirrored = segment_integral(term, -d);
    if (term.family == Family::p) return full_disc_integral<R>(term) - mirrored;
    const R flip = (term.harmonic % 2 == 0) ? R(-1) : R(1);  // (-1)^{a+1}
    return flip * mirrored;
  }
  const std::complex<R> dc(d, R(0));
  if (term.family == Family::p) {
    const int n = term.n;
    const auto anti = [&](R x) {
      return (cpow_int(std::complex<R>(x, R(0)), n + 1) * acos_ratio(d, x) -
              dc * power_over_root_antiderivative(n, dc, x)) /
             R(n + 1);
    };
    return R(2) * (anti(R(1)) - anti(d));
  }
  // family c: 2/a ∫_d^1 x^n sin(a acos(d/x)) dx with the U_{a-1} expansion.
  const int a = term.harmonic;
  std::complex<R> sum(R(0), R(0));
  for (int k = 0; k <= (a - 1) / 2; ++k) {
    const R u_k = ((k % 2 == 0) ? R(1) : R(-1)) * R(binomial(a - 1 - k, k)) *
                  R(std::ldexp(1.0, a - 1 - 2 * k));
    const int power = term.n + 1 + 2 * k - a;
    if (power < 1)
      throw UnsupportedForm("segment_integral: f_c radial power too low for the expansion");
    sum += u_k * rpow_int(d, a - 1 - 2 * k) *
           (sqrt_power_antiderivative(power, 1, dc, R(1)) -
            sqrt_power_antiderivative(power, 1, dc, d));
  }
  return R(2) * sum / R(a);
}

// Integral over the radial stub window r in [lower, upper],
// θ in [0, ω(r)] with ω(r) = asin(D/r) - β. The window is signed: ω may be
// negative, in which case the θ integral is the (negative) oriented one —
// exactly what the cone + radial-window decomposition of a triangle stub
// needs. D defaults to l sin(β); callers that know D to higher accuracy than
// that product (right stubs, obtuse splits) pass it directly as d_over > 0.
template <class R = double>
std::complex<R> stub_integral(const FundamentalTerm& term, R l, R d_over, R beta,
                              R lower, R upper) {
  detail::validate_term(term, "stub_integral");
  if (!(beta >= R(0) && beta < std::numbers::pi_v<R> / R(2)))
    throw std::domain_error("stub_integral: beta must lie in [0, pi/2)");
  if (!(l >= R(0))) throw std::domain_error("stub_integral: l must be >= 0");
  if (!(lower > R(0) && lower <= upper && upper <= R(1) + R(1e-12)))
    throw std::domain_error("stub_integral: need 0 < lower <= upper <= 1");
  const R D = d_over > R(0) ? d_over : l * std::sin(beta);
  if (D == R(0)) return std::complex<R>(R(0), R(0));  // zero angular width everywhere
  const R hi = std::min(upper, R(1));
  const int n = term.n;
  const std::complex<R> dc(D, R(0));

  if (term.family == Family::p) {
    const auto anti = [&](R x) {
      return (cpow_int(std::complex<R>(x, R(0)), n + 1) * asin_ratio(D, x) +
              dc * power_over_root_antiderivative(n, dc, x)) /
                 R(n + 1) -
             beta * rpow_int(x, n + 1) / R(n + 1);
    };
    return anti(hi) - anti(lower);
  }

  // Angle addition splits sin/cos(a asin(D/x) - aβ) into Chebyshev pieces:
  //   sin(a asin y) = y U_{a-1}(sqrt(1-y^2)),  cos(a asin y) = T_a(sqrt(1-y^2))
  // at y = D/x, each expanded over sqrt-power antiderivatives.
  const int a = term.harmonic;
  const ChebyshevSeries t_a = chebyshev_coefficients(ChebKind::first, a);
  const ChebyshevSeries u_am1 = chebyshev_coefficients(ChebKind::second, a - 1);
  const auto cheb_sum_t = [&](R x) {
    std::complex<R> s(R(0), R(0));
    for (const auto& [power, coeff] : t_a.coefficients)
      s += R(coeff) * sqrt_power_antiderivative(n, power, dc, x);
    return s;
  };
  const auto cheb_sum_u = [&](R x) {
    std::complex<R> s(R(0), R(0));
    for (const auto& [power, coeff] : u_am1.coefficients)
      s += R(coeff) * sqrt_power_antiderivative(n - 1, power, dc, x);
    return s;
  };
  const R cos_ab = std::cos(R(a) * beta);
  const R sin_ab = std::sin(R(a) * beta);
  if (term.family == Family::c) {
    const auto anti = [&](R x) {
      return (cos_ab * D * cheb_sum_u(x) - sin_ab * cheb_sum_t(x)) / R(a);
    };
    return anti(hi) - anti(lower);
  }
  const auto anti = [&](R x) {
    return (rpow_int(x, n + 1) / R(n + 1) - cos_ab * cheb_sum_t(x) -
            sin_ab * D * cheb_sum_u(x)) /
           R(a);
  };
  return anti(hi) - anti(lower);
}

// Product reduction cos(aθ) sin(bθ) = ½ sin((a+b)θ) - ½ sin((a-b)θ), with the
// a = b term omitted (sin 0 contributes nothing) and a < b folded through the
// oddness of sine. Returns one or two weighted f_s terms at power n.
inline std::vector<WeightedTerm> reduce_product_term(int n, int a, int b) {
  if (a < 1 || b < 1)
    throw std::domain_error("reduce_product_term: harmonics must be >= 1");
  if (n < 0) throw std::domain_error("reduce_product_term: radial power must be >= 0");
  std::vector<WeightedTerm> out;
  out.push_back({0.5, {Family::s, n, a + b}});
  if (a > b)
    out.push_back({-0.5, {Family::s, n, a - b}});
  else if (a < b)
    out.push_back({0.5, {Family::s, n, b - a}});
  return out;
}

}  // namespace sphbi

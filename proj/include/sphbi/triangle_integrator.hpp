#pragma once

// Exact integrals of a compact polynomial kernel (value and gradient) times a
// barycentric-linear field over arbitrary triangles, assembled from the
// elementary cone / segment / stub integrals.
//
// Pipeline: the triangle is normalized so the kernel support is the unit disc
// centered at the origin, dispatched by the number of vertices inside the
// disc (wedge / two-inside / three-inside decompositions), and every region
// piece is evaluated in a canonical frame (a rotation, possibly composed with
// a mirror) where the closed forms apply. Field weights enter through the
// barycentric tau factors; gradients transform back through the frame as
// covectors. Everything is accumulated in complex arithmetic; the real part
// is taken only after all pieces are summed, and the leftover imaginary
// magnitude is reported as a diagnostic residual.
//
// Region evaluations are computed per *vertex basis* (field = 1 at one vertex,
// 0 at the others): the expensive family antiderivatives depend only on
// geometry, so all three basis results share them, and any field is a linear
// combination of the basis triple afterwards. Callers that sweep many fields
// over fixed geometry (pressure solves) reuse the basis results directly.

#include <algorithm>
#include <array>
#include <cfloat>
#ifdef SPHBI_REGION_TRACE
#include <cstdio>
#endif
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "sphbi/elementary_regions.hpp"
#include "sphbi/geometry.hpp"
#include "sphbi/kernels.hpp"
#include "sphbi/special_functions.hpp"

namespace sphbi {

// ---------------------------------------------------------------------------
// barycentric field weights
// ---------------------------------------------------------------------------

struct TauFactors {
  double tau1 = 0.0;  // coefficient of x in the affine field
  double tau2 = 0.0;  // coefficient of y
  double tau3 = 0.0;  // constant part
  double lambda0 = 0.0, lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0;
  double denom = 0.0;  // barycentric denominator (twice the signed area)
};

inline TauFactors compute_tau(const std::array<Point2, 3>& v,
                              const std::array<double, 3>& a) {
  TauFactors t;
  t.denom = (v[1].y - v[2].y) * (v[0].x - v[2].x) + (v[2].x - v[1].x) * (v[0].y - v[2].y);
  if (std::abs(t.denom) < 2.0 * kGeomEps)
    throw std::domain_error("compute_tau: degenerate triangle");
  t.lambda0 = (v[1].y - v[2].y) * (a[0] - a[2]) / t.denom;
  t.lambda1 = (v[2].x - v[1].x) * (a[0] - a[2]) / t.denom;
  t.lambda2 = (v[2].y - v[0].y) * (a[1] - a[2]) / t.denom;
  t.lambda3 = (v[0].x - v[2].x) * (a[1] - a[2]) / t.denom;
  t.tau1 = t.lambda0 + t.lambda2;
  t.tau2 = t.lambda1 + t.lambda3;
  t.tau3 = a[2] - t.tau1 * v[2].x - t.tau2 * v[2].y;
  return t;
}

inline TauFactors compute_tau(const Triangle& tri, const std::array<double, 3>& a) {
  return compute_tau(std::array<Point2, 3>{tri.v0, tri.v1, tri.v2}, a);
}

struct IntegralResult {
  double value = 0.0;
  std::array<double, 2> gradient{0.0, 0.0};
  double imag_residual = 0.0;  // max |imag| across channels before the real cast
};

// ---------------------------------------------------------------------------
// kernel term table: which fundamental integrals each output channel needs
// ---------------------------------------------------------------------------

// One weighted request: channel 0 = value, 1 = canonical-frame d/dx,
// 2 = canonical-frame d/dy; tau_index selects tau1/tau2/tau3; slot indexes
// the deduplicated fundamental-term list.
struct AssemblyTerm {
  int channel = 0;
  int tau_index = 0;
  double weight = 0.0;
  std::size_t slot = 0;
};

struct KernelTermTable {
  std::vector<FundamentalTerm> slots;  // distinct fundamental integrands
  std::vector<AssemblyTerm> terms;
  double normalization = 0.0;  // kernel C2
  int max_radial_power = 0;
};

// Builds the per-channel term list for a kernel's coefficient table:
//   value   +=  b_k [ tau1 c1@(k+2) + tau2 s1@(k+2) + tau3 p@(k+1) ]
//   d/dx    += -k b_k [ tau1 (p + c2)@(k+1)/2 + tau2 s2@(k+1)/2 + tau3 c1@k ]
//   d/dy    += -k b_k [ tau1 s2@(k+1)/2 + tau2 (p - c2)@(k+1)/2 + tau3 s1@k ]
// The cos^2/sin^2 products of the raw gradient integrands are already reduced
// to the harmonic-2 terms above; no harmonic beyond 2 can appear, and the
// builder enforces that cap.
inline KernelTermTable table1_terms(const PolyKernel& kernel) {
  if (kernel.degree() > kMaxKernelDegree)
    throw std::domain_error("table1_terms: kernel degree exceeds the configured maximum");
  KernelTermTable out;
  out.normalization = kernel.normalization;
  const auto slot_for = [&out](Family f, int harmonic, int n) -> std::size_t {
    if (harmonic > 2)
      throw std::logic_error("table1_terms: harmonic above 2 is never generated");
    for (std::size_t i = 0; i < out.slots.size(); ++i) {
      const FundamentalTerm& s = out.slots[i];
      if (s.family == f && s.harmonic == harmonic && s.n == n) return i;
    }
    out.slots.push_back({f, n, harmonic});
    return out.slots.size() - 1;
  };
  const auto add = [&](int channel, int tau_index, double weight, Family f, int harmonic,
                       int n) {
    if (weight == 0.0) return;
    out.terms.push_back({channel, tau_index, weight, slot_for(f, harmonic, n)});
  };
  for (int k = 0; k <= kernel.degree(); ++k) {
    const double bk = kernel.coefficients[static_cast<std::size_t>(k)];
    if (bk != 0.0) {
      add(0, 1, bk, Family::c, 1, k + 2);
      add(0, 2, bk, Family::s, 1, k + 2);
      add(0, 3, bk, Family::p, 0, k + 1);
      out.max_radial_power = std::max(out.max_radial_power, k + 2);
    }
    const double w = -static_cast<double>(k) * bk;
    if (w != 0.0) {
      add(1, 1, w / 2.0, Family::p, 0, k + 1);
      add(1, 1, w / 2.0, Family::c, 2, k + 1);
      add(1, 2, w / 2.0, Family::s, 2, k + 1);
      add(1, 3, w, Family::c, 1, k);
      add(2, 1, w / 2.0, Family::s, 2, k + 1);
      add(2, 2, w / 2.0, Family::p, 0, k + 1);
      add(2, 2, -w / 2.0, Family::c, 2, k + 1);
      add(2, 3, w, Family::s, 1, k);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// dispatch branch counters (coverage diagnostics for the validation suites)
// ---------------------------------------------------------------------------

struct BranchCounters {
  std::uint64_t dispatch_degenerate = 0;
  std::uint64_t dispatch_wedge_outside = 0;  // no vertex inside the disc
  std::uint64_t dispatch_wedge_single = 0;   // exactly one vertex inside
  std::uint64_t dispatch_two_inside = 0;
  std::uint64_t dispatch_three_inside = 0;
  std::uint64_t wedge_no_crossings_disc = 0;
  std::uint64_t wedge_no_crossings_zero = 0;
  std::uint64_t wedge_single_edge_segment = 0;
  std::uint64_t wedge_lone_touch = 0;
  std::uint64_t wedge_general = 0;
  std::uint64_t wedge_reflex_disc = 0;     // arc sweep > pi: negated sector + disc
  std::uint64_t wedge_cap_subtracted = 0;  // far-edge segment correction
  std::uint64_t stub_direct = 0;
  std::uint64_t stub_split = 0;
  std::uint64_t stub_degenerate = 0;
  std::uint64_t segment_general = 0;
  std::uint64_t segment_half_disc = 0;
  std::uint64_t segment_full_disc = 0;
  std::uint64_t segment_empty = 0;
};

inline BranchCounters& branch_counters() {
  thread_local BranchCounters counters;
  return counters;
}

inline void reset_branch_counters() { branch_counters() = BranchCounters{}; }

namespace detail {

// ---------------------------------------------------------------------------
// canonical-frame assembly
// ---------------------------------------------------------------------------

using Mat2 = std::array<std::array<double, 2>, 2>;

inline constexpr Mat2 kIdentityFrame{{{1.0, 0.0}, {0.0, 1.0}}};

inline Point2 apply_frame(const Mat2& m, Point2 p) {
  return {m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y};
}

// Proper rotation taking `v`'s direction onto the +x axis.
inline Mat2 rotation_taking_to_x(Point2 v) {
  const double n = norm(v);
  if (n < kGeomEps)
    throw std::domain_error("rotation_taking_to_x: zero-length direction");
  return {{{v.x / n, v.y / n}, {-v.y / n, v.x / n}}};
}

inline Mat2 mirrored_y(Mat2 m) {
  m[1][0] = -m[1][0];
  m[1][1] = -m[1][1];
  return m;
}

// Region result per vertex basis: entry i is the integral with the field that
// is 1 at reference vertex i and 0 at the others. Gradients are already
// back-mapped to the reference (normalized) frame.
struct BasisTriple {
  std::array<Complex, 3> value{};
  std::array<Complex, 3> grad_x{};
  std::array<Complex, 3> grad_y{};

  void add_scaled(const BasisTriple& o, double w) {
    for (int i = 0; i < 3; ++i) {
      value[i] += w * o.value[i];
      grad_x[i] += w * o.grad_x[i];
      grad_y[i] += w * o.grad_y[i];
    }
  }
};

// Evaluates every distinct fundamental term once through `fam`, then forms
// the tau-weighted channel sums for all three vertex bases and back-rotates
// the gradient covector g = M^T g'.
//
// The channel sums run in extended precision. Their terms carry weights up to
// a few hundred (kernel coefficients times tau factors) while the assembled
// region values are O(1), and callers cancel whole regions against each other
// on top of that; double-rounding each product would leave noise around
// 1e-13 that rigid-motion invariance tests can see. The fundamental term
// values themselves stay double: they are functions of a few scalar region
// parameters only, so their rounding is a stable eps-level function of the
// geometry rather than frame-dependent noise.
template <class FamEval>
BasisTriple assemble_region(const KernelTermTable& table, const Mat2& frame,
                            const std::array<Point2, 3>& ref, FamEval&& fam) {
  using LD = long double;
  using LC = std::complex<LD>;
  std::array<LD, 3> tvx, tvy;
  for (int i = 0; i < 3; ++i) {
    const auto s = static_cast<std::size_t>(i);
    tvx[s] = static_cast<LD>(frame[0][0]) * ref[s].x + static_cast<LD>(frame[0][1]) * ref[s].y;
    tvy[s] = static_cast<LD>(frame[1][0]) * ref[s].x + static_cast<LD>(frame[1][1]) * ref[s].y;
  }
  // Barycentric plane solve for the three vertex hat fields, shared denominator.
  const LD den = (tvy[1] - tvy[2]) * (tvx[0] - tvx[2]) + (tvx[2] - tvx[1]) * (tvy[0] - tvy[2]);
  if (std::abs(static_cast<double>(den)) < 2.0 * kGeomEps)
    throw std::domain_error("assemble_region: reference triangle is degenerate");
  std::array<LD, 3> t1, t2, t3;
  t1[0] = (tvy[1] - tvy[2]) / den;
  t2[0] = (tvx[2] - tvx[1]) / den;
  t1[1] = (tvy[2] - tvy[0]) / den;
  t2[1] = (tvx[0] - tvx[2]) / den;
  t1[2] = -t1[0] - t1[1];
  t2[2] = -t2[0] - t2[1];
  for (int i = 0; i < 3; ++i) {
    const auto s = static_cast<std::size_t>(i);
    t3[s] = (i == 2 ? 1.0L : 0.0L) - t1[s] * tvx[2] - t2[s] * tvy[2];
  }
  using SlotC = std::decay_t<decltype(fam(table.slots[0]))>;
  std::vector<SlotC> slot_values(table.slots.size());
  for (std::size_t s = 0; s < table.slots.size(); ++s) slot_values[s] = fam(table.slots[s]);

  std::array<LC, 3> v{}, gxp{}, gyp{};
  for (const AssemblyTerm& term : table.terms) {
    const LC sv(static_cast<LD>(slot_values[term.slot].real()),
                static_cast<LD>(slot_values[term.slot].imag()));
    for (int i = 0; i < 3; ++i) {
      const auto s = static_cast<std::size_t>(i);
      const LD t = term.tau_index == 1 ? t1[s] : (term.tau_index == 2 ? t2[s] : t3[s]);
      const LD w = static_cast<LD>(term.weight) * t;
      if (w == 0.0L) continue;
      if (term.channel == 0)
        v[s] += w * sv;
      else if (term.channel == 1)
        gxp[s] += w * sv;
      else
        gyp[s] += w * sv;
    }
  }
  BasisTriple out;
  for (int i = 0; i < 3; ++i) {
    const auto s = static_cast<std::size_t>(i);
    const LC gx = static_cast<LD>(frame[0][0]) * gxp[s] + static_cast<LD>(frame[1][0]) * gyp[s];
    const LC gy = static_cast<LD>(frame[0][1]) * gxp[s] + static_cast<LD>(frame[1][1]) * gyp[s];
    out.value[s] = Complex(static_cast<double>(v[s].real()), static_cast<double>(v[s].imag()));
    out.grad_x[s] = Complex(static_cast<double>(gx.real()), static_cast<double>(gx.imag()));
    out.grad_y[s] = Complex(static_cast<double>(gy.real()), static_cast<double>(gy.imag()));
  }
#ifdef SPHBI_REGION_TRACE
  std::fprintf(stderr, "  -> v=[%.17g %.17g %.17g]\n", out.value[0].real(),
               out.value[1].real(), out.value[2].real());
  {
    std::array<LC, 3> V{};
    for (const AssemblyTerm& term : table.terms) {
      if (term.channel != 0) continue;
      const LC sv(static_cast<LD>(slot_values[term.slot].real()),
                  static_cast<LD>(slot_values[term.slot].imag()));
      V[static_cast<std::size_t>(term.tau_index - 1)] += static_cast<LD>(term.weight) * sv;
    }
    std::fprintf(stderr,
                 "     tau0=[%.17Lg %.17Lg %.17Lg] tau1=[%.17Lg %.17Lg %.17Lg] "
                 "tau2=[%.17Lg %.17Lg %.17Lg]\n     V=[%.17Lg %.17Lg %.17Lg]\n",
                 t1[0], t2[0], t3[0], t1[1], t2[1], t3[1], t1[2], t2[2], t3[2],
                 V[0].real(), V[1].real(), V[2].real());
  }
#endif
  return out;
}

// ---------------------------------------------------------------------------
// region evaluators (normalized frame, complex basis results)
// ---------------------------------------------------------------------------
//
// The elementary integrals are evaluated in long double. Each region value is
// a weighted sum of ~70 slot values with weights alternating in sign up to
// several hundred, so slot rounding at double eps would surface as ~1e-14
// jitter in every piece — and the piece cancellation of thin or multi-region
// configurations amplifies exactly that inconsistent jitter (not the bounded
// geometric sensitivity) by another 10^2..10^4. Extended-precision slots push
// the whole chain back below the double noise floor of the final result.

using EvalReal = long double;

inline BasisTriple region_disc(double l, const KernelTermTable& table,
                               const std::array<Point2, 3>& ref) {
#ifdef SPHBI_REGION_TRACE
  std::fprintf(stderr, "disc l=%.17g\n", l);
#endif
  const double radius = std::min(l, 1.0);
  return assemble_region(table, kIdentityFrame, ref, [&](const FundamentalTerm& t) {
    return radius >= 1.0
               ? full_disc_integral<EvalReal>(t)
               : cone_integral(t, EvalReal(0), EvalReal(2) * std::numbers::pi_v<EvalReal>,
                               EvalReal(radius));
  });
}

inline BasisTriple region_sector(Point2 v1, Point2 v2, double l,
                                 const KernelTermTable& table,
                                 const std::array<Point2, 3>& ref) {
  Mat2 frame = rotation_taking_to_x(v1);
  Point2 w2 = apply_frame(frame, v2);
  if (w2.y < 0.0) {
    frame = mirrored_y(frame);
    w2.y = -w2.y;
  }
  const double gamma = std::atan2(w2.y, w2.x);
  const double radius = std::min(l, 1.0);
#ifdef SPHBI_REGION_TRACE
  std::fprintf(stderr, "sector gamma=%.17g radius=%.17g\n", gamma, radius);
#endif
  return assemble_region(table, frame, ref, [&](const FundamentalTerm& t) {
    return cone_integral(t, EvalReal(0), EvalReal(gamma), EvalReal(radius));
  });
}

// Disc cut by the line through t0 t1, keeping the side containing q_keep.
inline BasisTriple region_segment(Point2 t0, Point2 t1, Point2 q_keep,
                                  const KernelTermTable& table,
                                  const std::array<Point2, 3>& ref) {
  const Point2 e = t1 - t0;
  const double len = norm(e);
  if (len < kGeomEps)
    throw std::domain_error("region_segment: chord endpoints coincide");
  Point2 n{e.y / len, -e.x / len};
  if (dot(q_keep - t0, n) < 0.0) n = {-n.x, -n.y};
  const double d = dot(t0, n);  // > 0 when the origin is outside the kept side
  if (d >= 1.0 - kGeomEps) {
    ++branch_counters().segment_empty;
    return BasisTriple{};
  }
  if (d <= -1.0 + kGeomEps) {
    ++branch_counters().segment_full_disc;
    return region_disc(1.0, table, ref);
  }
  if (std::abs(d) < 1e-9) {
    const Mat2 frame{{{n.x, n.y}, {-n.y, n.x}}};
    ++branch_counters().segment_half_disc;
    return assemble_region(table, frame, ref, [](const FundamentalTerm& t) {
      return half_disc_integral<EvalReal>(t);
    });
  }
  ++branch_counters().segment_general;
  if (d < 0.0) {
    // Origin-side segment: the whole disc minus the complement beyond the
    // chord. Folding at this level (rather than per fundamental term) keeps
    // the disc part identical — same identity frame, same assembly — to any
    // whole-disc region the caller combines it with, so those large pieces
    // cancel exactly instead of leaving frame-dependent assembly noise at
    // the 1e-13 scale on thin reference triangles.
    const Point2 nc{-n.x, -n.y};
    const Mat2 frame{{{nc.x, nc.y}, {-nc.y, nc.x}}};
    const double dc = -d;
#ifdef SPHBI_REGION_TRACE
    std::fprintf(stderr, "segment-fold dc=%.17g\n", dc);
#endif
    BasisTriple out = region_disc(1.0, table, ref);
    out.add_scaled(assemble_region(table, frame, ref,
                                   [&](const FundamentalTerm& t) {
                                     return segment_integral(t, EvalReal(dc));
                                   }),
                   -1.0);
    return out;
  }
  const Mat2 frame{{{n.x, n.y}, {-n.y, n.x}}};
#ifdef SPHBI_REGION_TRACE
  std::fprintf(stderr, "segment d=%.17g\n", d);
#endif
  return assemble_region(table, frame, ref, [&](const FundamentalTerm& t) {
    return segment_integral(t, EvalReal(d));
  });
}

// Triangle (origin, v1, v2) clipped to the unit disc.
inline BasisTriple region_stub(Point2 v1, Point2 v2, const KernelTermTable& table,
                               const std::array<Point2, 3>& ref) {
  double r1 = norm(v1), r2 = norm(v2);
  if (r1 < r2) {
    std::swap(v1, v2);
    std::swap(r1, r2);
  }
  const double area2 = cross(v1, v2);
  if (r2 < kGeomEps || std::abs(area2) < kGeomEps * r1 * std::max(r2, 1.0)) {
    ++branch_counters().stub_degenerate;
    return BasisTriple{};
  }
  const Point2 b = v1 - v2;
  const double dot_a = -(v2.x * b.x + v2.y * b.y);  // angle test at the near vertex
  if (dot_a <= kGeomEps) {
    // Near-vertex angle >= pi/2: single cone + radial window.
    ++branch_counters().stub_direct;
    Mat2 frame = rotation_taking_to_x(v1);
    Point2 w2 = apply_frame(frame, v2);
    if (w2.y < 0.0) {
      frame = mirrored_y(frame);
      w2.y = -w2.y;
    }
    const double gamma = std::atan2(w2.y, w2.x);
    const double D = std::abs(area2) / norm(b);
    const double l = std::min(r2, 1.0);
    const double u = std::min(r1, 1.0);
    // beta is the angle of the far edge at v1. The asin(D/l) - gamma form is
    // exact on paper but catastrophically conditioned for right stubs, where
    // D = l up to rounding; atan2 of the explicit edge vectors is stable.
    const Point2 c = v2 - v1;
    const double beta =
        std::atan2(std::abs(c.y * v1.x - c.x * v1.y), -(c.x * v1.x + c.y * v1.y));
    double lo = std::max(l, D);
    // Snap: at lo = D(1 + ulp) the antiderivatives would evaluate
    // asin(1 - ulp), whose square-root conditioning turns one ulp into
    // sqrt(eps)-level noise. Snapping engages the exact x = d limit branches.
    if (lo - D <= 256.0 * DBL_EPSILON * D) lo = D;
#ifdef SPHBI_REGION_TRACE
    std::fprintf(stderr, "stub gamma=%.17g D=%.17g beta=%.17g l=%.17g lo=%.17g u=%.17g\n",
                 gamma, D, beta, l, lo, u);
#endif
    return assemble_region(table, frame, ref, [&](const FundamentalTerm& t) {
      std::complex<EvalReal> s = cone_integral(t, EvalReal(0), EvalReal(gamma), EvalReal(l));
      if (u > lo + kGeomEps)
        s += stub_integral(t, EvalReal(0), EvalReal(D), EvalReal(beta), EvalReal(lo),
                           EvalReal(u));
      return s;
    });
  }
  // Acute at the near vertex: split at the foot of the origin's perpendicular
  // onto the far edge, producing two right stubs.
  ++branch_counters().stub_split;
  const double t = dot_a / norm2(b);
  const Point2 foot = v2 + t * b;
  BasisTriple out = region_stub(v1, foot, table, ref);
  out.add_scaled(region_stub(v2, foot, table, ref), 1.0);
  return out;
}

// Intersections of the segment pq with the unit circle, in ascending order of
// the segment parameter. Tangencies (discriminant <= 0) are dropped.
struct ChordCrossings {
  int count = 0;
  std::array<Point2, 2> points{};
  Point2 last() const { return points[static_cast<std::size_t>(count - 1)]; }
};

inline ChordCrossings segment_circle_crossings(Point2 p, Point2 q) {
  ChordCrossings out;
  const Point2 d = q - p;
  const double a = norm2(d);
  if (a < kGeomEps * kGeomEps) return out;
  const double b = 2.0 * dot(p, d);
  const double c = norm2(p) - 1.0;
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return out;
  const double rt = std::sqrt(disc);
  for (const double lam : {(-b - rt) / (2.0 * a), (-b + rt) / (2.0 * a)}) {
    if (lam >= -1e-12 && lam <= 1.0 + 1e-12)
      out.points[static_cast<std::size_t>(out.count++)] = p + lam * d;
  }
  return out;
}

// Wedge: triangle (n0, n1, n2) clipped to the unit disc, with at most one
// vertex (n0) inside. Decomposed into an arc sector between the two exit
// crossings, signed stubs against n0, and a far-edge cap correction.
inline BasisTriple region_wedge(Point2 n0, Point2 n1, Point2 n2,
                                const KernelTermTable& table,
                                const std::array<Point2, 3>& ref) {
  if (signed_area(n0, n1, n2) < 0.0) std::swap(n1, n2);
  if (std::abs(signed_area(n0, n1, n2)) < kGeomEps) return BasisTriple{};
  ChordCrossings x01 = segment_circle_crossings(n0, n1);
  ChordCrossings x02 = segment_circle_crossings(n0, n2);
  ChordCrossings x12 = segment_circle_crossings(n1, n2);
  const bool origin_inside =
      point_in_triangle(Point2{0.0, 0.0}, Triangle{n0, n1, n2, std::nullopt});
  if (x01.count == 0 && x02.count == 0 && x12.count == 0) {
    if (origin_inside) {
      ++branch_counters().wedge_no_crossings_disc;
      return region_disc(1.0, table, ref);
    }
    ++branch_counters().wedge_no_crossings_zero;
    return BasisTriple{};
  }
  const int crossing_edges = (x01.count > 0 ? 1 : 0) + (x02.count > 0 ? 1 : 0) +
                             (x12.count > 0 ? 1 : 0);
  if (crossing_edges == 1) {
    Point2 e0 = n0, e1 = n1, opp = n2;
    int count = x01.count;
    if (x02.count > 0) {
      e0 = n0, e1 = n2, opp = n1;
      count = x02.count;
    } else if (x12.count > 0) {
      e0 = n1, e1 = n2, opp = n0;
      count = x12.count;
    }
    if (count == 2) {
      ++branch_counters().wedge_single_edge_segment;
      return region_segment(e0, e1, opp, table, ref);
    }
    // A lone parameter touch (vertex sitting on the circle) is not a genuine
    // chord; treating it as one would add a spurious half-plane cut.
    ++branch_counters().wedge_lone_touch;
    if (origin_inside) return region_disc(1.0, table, ref);
    return BasisTriple{};
  }
  // Make both edges adjacent to n0 carry crossings, relabeling if needed.
  if (x01.count == 0 || x02.count == 0) {
    if (x01.count > 0 && x12.count > 0) {
      const Point2 t0 = n0;
      n0 = n1;
      n1 = n2;
      n2 = t0;
    } else if (x02.count > 0 && x12.count > 0) {
      const Point2 t2 = n2;
      n2 = n1;
      n1 = n0;
      n0 = t2;
    }
    if (signed_area(n0, n1, n2) < 0.0) std::swap(n1, n2);
    x01 = segment_circle_crossings(n0, n1);
    x02 = segment_circle_crossings(n0, n2);
    x12 = segment_circle_crossings(n1, n2);
  }
  ++branch_counters().wedge_general;
  const Point2 s1 = x01.last();  // exit crossing along n0 -> n1
  const Point2 s2 = x02.last();
  const Point2 origin{0.0, 0.0};
  BasisTriple res;
  const double arc_orient = signed_area(origin, s1, s2);
  if (std::abs(arc_orient) > kGeomEps) {
    const BasisTriple sector = region_sector(s1, s2, 1.0, table, ref);
    if (arc_orient > 0.0) {
      res.add_scaled(sector, 1.0);
    } else {
      // Reflex arc (sweep beyond pi): the sector between the crossings is the
      // complement piece, so it is removed from a full disc.
      ++branch_counters().wedge_reflex_disc;
      res.add_scaled(sector, -1.0);
      res.add_scaled(region_disc(1.0, table, ref), 1.0);
    }
  }
  const double stub_a = signed_area(origin, n0, s1);
  if (std::abs(stub_a) > kGeomEps)
    res.add_scaled(region_stub(n0, s1, table, ref), stub_a > 0.0 ? 1.0 : -1.0);
  const double stub_b = signed_area(origin, s2, n0);
  if (std::abs(stub_b) > kGeomEps)
    res.add_scaled(region_stub(s2, n0, table, ref), stub_b > 0.0 ? 1.0 : -1.0);
  if (x12.count == 2) {
    // The far edge n1 n2 carves a cap off the disc on the side away from n0.
    ++branch_counters().wedge_cap_subtracted;
    const Point2 mirror{n1.x + n2.x - n0.x, n1.y + n2.y - n0.y};
    res.add_scaled(region_segment(n1, n2, mirror, table, ref), -1.0);
  }
  return res;
}

// Two vertices (a, b) inside the disc, c outside: difference of two wedges
// anchored at a far auxiliary point along the a -> b direction.
inline BasisTriple region_t2(Point2 a, Point2 b, Point2 c, const KernelTermTable& table,
                             const std::array<Point2, 3>& ref) {
  if (signed_area(a, b, c) < 0.0) std::swap(a, b);
  const Point2 u = b - a;
  const double len = norm(u);
  const Point2 x{a.x + 3.0 * u.x / len, a.y + 3.0 * u.y / len};
  BasisTriple out = region_wedge(a, x, c, table, ref);
  out.add_scaled(region_wedge(b, x, c, table, ref), -1.0);
  return out;
}

// All three vertices inside: one spanning wedge minus a two-inside remainder
// and the far corner wedge.
inline BasisTriple region_t3(Point2 a, Point2 b, Point2 c, const KernelTermTable& table,
                             const std::array<Point2, 3>& ref) {
  if (signed_area(a, b, c) < 0.0) std::swap(b, c);
  const Point2 d1 = b - a;
  const Point2 d2 = c - a;
  const double l1 = norm(d1), l2 = norm(d2);
  const Point2 x1{a.x + 3.0 * d1.x / l1, a.y + 3.0 * d1.y / l1};
  const Point2 x2{a.x + 3.0 * d2.x / l2, a.y + 3.0 * d2.y / l2};
  BasisTriple out = region_wedge(a, x1, x2, table, ref);
  out.add_scaled(region_t2(b, c, x1, table, ref), -1.0);
  out.add_scaled(region_wedge(c, x1, x2, table, ref), -1.0);
  return out;
}

// Dispatch over the number of vertices inside the unit disc. The reference
// triangle for the tau factors is always the full (normalized) triangle in
// its given vertex order; region reorderings only change geometric roles.
inline BasisTriple integrate_normalized(const std::array<Point2, 3>& verts,
                                        const KernelTermTable& table) {
  if (std::abs(signed_area(verts[0], verts[1], verts[2])) < kGeomEps) {
    ++branch_counters().dispatch_degenerate;
    return BasisTriple{};
  }
  const std::array<double, 3> r = {norm(verts[0]), norm(verts[1]), norm(verts[2])};
  std::array<int, 3> inside{};
  int inside_count = 0;
  for (int i = 0; i < 3; ++i)
    if (r[static_cast<std::size_t>(i)] <= 1.0 + kOnCircleTol)
      inside[static_cast<std::size_t>(inside_count++)] = i;
  if (inside_count == 0) {
    ++branch_counters().dispatch_wedge_outside;
    int i0 = 0;
    if (r[1] < r[static_cast<std::size_t>(i0)]) i0 = 1;
    if (r[2] < r[static_cast<std::size_t>(i0)]) i0 = 2;
    return region_wedge(verts[static_cast<std::size_t>(i0)],
                        verts[static_cast<std::size_t>((i0 + 1) % 3)],
                        verts[static_cast<std::size_t>((i0 + 2) % 3)], table, verts);
  }
  if (inside_count == 1) {
    ++branch_counters().dispatch_wedge_single;
    const int i0 = inside[0];
    return region_wedge(verts[static_cast<std::size_t>(i0)],
                        verts[static_cast<std::size_t>((i0 + 1) % 3)],
                        verts[static_cast<std::size_t>((i0 + 2) % 3)], table, verts);
  }
  if (inside_count == 2) {
    ++branch_counters().dispatch_two_inside;
    const int outside = 3 - inside[0] - inside[1];
    return region_t2(verts[static_cast<std::size_t>(inside[0])],
                     verts[static_cast<std::size_t>(inside[1])],
                     verts[static_cast<std::size_t>(outside)], table, verts);
  }
  ++branch_counters().dispatch_three_inside;
  return region_t3(verts[0], verts[1], verts[2], table, verts);
}

// Canonical vertex order: the lexicographically smallest vertex first (by x,
// then y), then counter-clockwise. Any permutation of the same vertex set
// lands on the identical ordering, making orientation invariance exact.
// `perm[i]` reports where original vertex i ended up.
inline void canonicalize_triangle(std::array<Point2, 3>& v, std::array<int, 3>& perm) {
  perm = {0, 1, 2};
  int lead = 0;
  for (int i = 1; i < 3; ++i) {
    const Point2 a = v[static_cast<std::size_t>(i)];
    const Point2 b = v[static_cast<std::size_t>(lead)];
    if (a.x < b.x || (a.x == b.x && a.y < b.y)) lead = i;
  }
  std::rotate(v.begin(), v.begin() + lead, v.end());
  std::rotate(perm.begin(), perm.begin() + lead, perm.end());
  if (signed_area(v[0], v[1], v[2]) < 0.0) {
    std::swap(v[1], v[2]);
    std::swap(perm[1], perm[2]);
  }
}

inline IntegralResult finalize(Complex v, Complex gx, Complex gy, double normalization,
                               double h) {
  IntegralResult out;
  out.imag_residual =
      std::max({std::abs(v.imag()), std::abs(gx.imag()), std::abs(gy.imag())});
  out.value = v.real() * normalization;
  out.gradient = {gx.real() * normalization / h, gy.real() * normalization / h};
  return out;
}

inline IntegralResult combine_basis(const BasisTriple& basis,
                                    const std::array<double, 3>& values,
                                    double normalization, double h) {
  Complex v{}, gx{}, gy{};
  for (int i = 0; i < 3; ++i) {
    const auto s = static_cast<std::size_t>(i);
    v += values[s] * basis.value[s];
    gx += values[s] * basis.grad_x[s];
    gy += values[s] * basis.grad_y[s];
  }
  return finalize(v, gx, gy, normalization, h);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// public entry points (normalized-frame region integrals and the full call)
// ---------------------------------------------------------------------------

// Disc of radius d around the origin; rotation symmetry makes the result
// frame-free, so the field enters directly through its tau factors.
inline IntegralResult integrate_disc(double d, const TauFactors& tau,
                                     const KernelTermTable& table) {
  if (!(d >= 0.0 && d <= 1.0 + kOnCircleTol))
    throw std::domain_error("integrate_disc: radius outside [0, 1]");
  const double radius = std::min(d, 1.0);
  std::vector<Complex> slot_values(table.slots.size());
  for (std::size_t s = 0; s < table.slots.size(); ++s)
    slot_values[s] = radius >= 1.0
                         ? full_disc_integral(table.slots[s])
                         : cone_integral(table.slots[s], 0.0, 2.0 * std::numbers::pi, radius);
  Complex v{}, gx{}, gy{};
  for (const AssemblyTerm& term : table.terms) {
    const double t = term.tau_index == 1 ? tau.tau1
                                         : (term.tau_index == 2 ? tau.tau2 : tau.tau3);
    const double w = term.weight * t;
    if (w == 0.0) continue;
    if (term.channel == 0)
      v += w * slot_values[term.slot];
    else if (term.channel == 1)
      gx += w * slot_values[term.slot];
    else
      gy += w * slot_values[term.slot];
  }
  return detail::finalize(v, gx, gy, table.normalization, 1.0);
}

inline IntegralResult integrate_sector(Point2 v1, Point2 v2, double d, const Triangle& ref,
                                       const std::array<double, 3>& values,
                                       const KernelTermTable& table) {
  if (norm(v1) < kGeomEps || norm(v2) < kGeomEps)
    throw std::domain_error("integrate_sector: zero-length ray");
  const std::array<Point2, 3> r{ref.v0, ref.v1, ref.v2};
  return detail::combine_basis(detail::region_sector(v1, v2, d, table, r), values,
                               table.normalization, 1.0);
}

inline IntegralResult integrate_segment(Point2 keep_side, Point2 t0, Point2 t1,
                                        const Triangle& ref,
                                        const std::array<double, 3>& values,
                                        const KernelTermTable& table) {
  const std::array<Point2, 3> r{ref.v0, ref.v1, ref.v2};
  return detail::combine_basis(detail::region_segment(t0, t1, keep_side, table, r), values,
                               table.normalization, 1.0);
}

inline IntegralResult integrate_stub(Point2 v1, Point2 v2, const Triangle& ref,
                                     const std::array<double, 3>& values,
                                     const KernelTermTable& table) {
  const std::array<Point2, 3> r{ref.v0, ref.v1, ref.v2};
  return detail::combine_basis(detail::region_stub(v1, v2, table, r), values,
                               table.normalization, 1.0);
}

inline IntegralResult integrate_wedge(Point2 n0, Point2 n1, Point2 n2, const Triangle& ref,
                                      const std::array<double, 3>& values,
                                      const KernelTermTable& table) {
  const std::array<Point2, 3> r{ref.v0, ref.v1, ref.v2};
  return detail::combine_basis(detail::region_wedge(n0, n1, n2, table, r), values,
                               table.normalization, 1.0);
}

inline IntegralResult integrate_triangle2(Point2 a, Point2 b, Point2 c, const Triangle& ref,
                                          const std::array<double, 3>& values,
                                          const KernelTermTable& table) {
  const std::array<Point2, 3> r{ref.v0, ref.v1, ref.v2};
  return detail::combine_basis(detail::region_t2(a, b, c, table, r), values,
                               table.normalization, 1.0);
}

inline IntegralResult integrate_triangle3(Point2 a, Point2 b, Point2 c, const Triangle& ref,
                                          const std::array<double, 3>& values,
                                          const KernelTermTable& table) {
  const std::array<Point2, 3> r{ref.v0, ref.v1, ref.v2};
  return detail::combine_basis(detail::region_t3(a, b, c, table, r), values,
                               table.normalization, 1.0);
}

// Full evaluation: normalize the triangle to the unit support disc around the
// query point, dispatch, and scale back (value by C2 — the h^2 of the kernel
// prefactor cancels against the substitution Jacobian — and the gradient by
// C2/h, which carries the extra 1/h of the kernel derivative).
inline IntegralResult integrate_triangle(Point2 query, double h, const Triangle& tri,
                                         const std::array<double, 3>& values,
                                         const KernelTermTable& table) {
  if (!(h > 0.0)) throw std::domain_error("integrate_triangle: support h must be > 0");
  std::array<Point2, 3> v{tri.v0, tri.v1, tri.v2};
  std::array<int, 3> perm{};
  detail::canonicalize_triangle(v, perm);
  std::array<double, 3> a{};
  for (int i = 0; i < 3; ++i)
    a[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
  const std::array<Point2, 3> nv = {(v[0] - query) / h, (v[1] - query) / h,
                                    (v[2] - query) / h};
  const detail::BasisTriple basis = detail::integrate_normalized(nv, table);
  return detail::combine_basis(basis, a, table.normalization, h);
}

// Per-vertex basis results of the full evaluation: entry i is
// integrate_triangle with the field that is 1 at vertex i of `tri` and 0 at
// the other two. Fixed geometry swept by many fields (pressure iterations)
// pays the antiderivative cost once through this.
inline std::array<IntegralResult, 3> integrate_triangle_bases(Point2 query, double h,
                                                              const Triangle& tri,
                                                              const KernelTermTable& table) {
  if (!(h > 0.0)) throw std::domain_error("integrate_triangle_bases: support h must be > 0");
  std::array<Point2, 3> v{tri.v0, tri.v1, tri.v2};
  std::array<int, 3> perm{};
  detail::canonicalize_triangle(v, perm);
  const std::array<Point2, 3> nv = {(v[0] - query) / h, (v[1] - query) / h,
                                    (v[2] - query) / h};
  const detail::BasisTriple basis = detail::integrate_normalized(nv, table);
  std::array<IntegralResult, 3> out;
  for (int i = 0; i < 3; ++i) {
    const auto canonical = static_cast<std::size_t>(i);
    const auto original = static_cast<std::size_t>(perm[canonical]);
    out[original] = detail::finalize(basis.value[canonical], basis.grad_x[canonical],
                                     basis.grad_y[canonical], table.normalization, h);
  }
  return out;
}

// Convenience overload pulling the field from the triangle's vertex values.
inline IntegralResult integrate_triangle(Point2 query, double h, const Triangle& tri,
                                         const KernelTermTable& table) {
  if (!tri.values)
    throw std::invalid_argument("integrate_triangle: triangle carries no vertex values");
  return integrate_triangle(query, h, tri, *tri.values, table);
}

// ---------------------------------------------------------------------------
// gradient-variant field weights
// ---------------------------------------------------------------------------

enum class GradientVariant { basic, difference, symmetric };

// Per-vertex scalars fed to the tau factors for the three SPH gradient
// forms; the integral machinery itself is unchanged.
//   basic:      f_i = A_i
//   difference: f_i = rho_i (A_i - A0)           (constant fields drop out)
//   symmetric:  f_i = rho_i (A_i/rho_i^2 + A0/rho0^2)
inline std::array<double, 3> gradient_variant_weights(
    GradientVariant variant, double a0, double rho0,
    const std::array<double, 3>& vertex_values,
    const std::array<double, 3>& vertex_densities) {
  if (!(rho0 > 0.0))
    throw std::domain_error("gradient_variant_weights: nonpositive density");
  for (const double rho : vertex_densities)
    if (!(rho > 0.0))
      throw std::domain_error("gradient_variant_weights: nonpositive density");
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    const auto s = static_cast<std::size_t>(i);
    switch (variant) {
      case GradientVariant::basic:
        out[s] = vertex_values[s];
        break;
      case GradientVariant::difference:
        out[s] = vertex_densities[s] * (vertex_values[s] - a0);
        break;
      case GradientVariant::symmetric:
        out[s] = vertex_densities[s] *
                 (vertex_values[s] / (vertex_densities[s] * vertex_densities[s]) +
                  a0 / (rho0 * rho0));
        break;
    }
  }
  return out;
}

}  // namespace sphbi

// Tests for the clipped-triangle kernel integrals: frozen reference values
// for every region evaluator and dispatch route, closed-form disc/sector
// checks, and the geometric invariants (additivity, equivariance, scaling,
// exact orientation independence, finite-difference gradients).

#include "sphbi/triangle_integrator.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace {

using sphbi::BranchCounters;
using sphbi::Complex;
using sphbi::compute_tau;
using sphbi::GradientVariant;
using sphbi::IntegralResult;
using sphbi::KernelTermTable;
using sphbi::Point2;
using sphbi::table1_terms;
using sphbi::TauFactors;
using sphbi::Triangle;

const KernelTermTable& table() {
  static const KernelTermTable t = table1_terms(sphbi::wendland4());
  return t;
}

constexpr double kNorm = 9.0 / std::numbers::pi;  // Wendland-4 normalization

// Reference triangle and vertex values shared by the frozen region tests.
const std::array<Point2, 3> kRefVerts{{{0.31, -0.12}, {1.1, 0.55}, {-0.2, 0.9}}};
const Triangle kRefTri{kRefVerts[0], kRefVerts[1], kRefVerts[2], std::nullopt};
const std::array<double, 3> kRefVals{2.0, -0.5, 1.3};

struct RawResult {
  Complex value, gx, gy;
};

RawResult raw_combine(const sphbi::detail::BasisTriple& basis,
                      const std::array<double, 3>& vals) {
  RawResult r{};
  for (int i = 0; i < 3; ++i) {
    const auto s = static_cast<std::size_t>(i);
    r.value += vals[s] * basis.value[s];
    r.gx += vals[s] * basis.grad_x[s];
    r.gy += vals[s] * basis.grad_y[s];
  }
  return r;
}

void expect_raw(const RawResult& got, double v, double gx, double gy,
                double tol = 5e-12, double floor = 1e-3) {
  EXPECT_NEAR(got.value.real(), v, tol * std::max({floor, std::abs(v)}));
  EXPECT_NEAR(got.gx.real(), gx, tol * std::max({floor, std::abs(gx)}));
  EXPECT_NEAR(got.gy.real(), gy, tol * std::max({floor, std::abs(gy)}));
  EXPECT_LE(std::abs(got.value.imag()), 1e-11);
  EXPECT_LE(std::abs(got.gx.imag()), 1e-11);
  EXPECT_LE(std::abs(got.gy.imag()), 1e-11);
}

Triangle make_tri(Point2 a, Point2 b, Point2 c) { return Triangle{a, b, c, std::nullopt}; }

// ---------------------------------------------------------------------------
// tau factors
// ---------------------------------------------------------------------------

TEST(TauFactors, UnitTriangleExamples) {
  const std::array<Point2, 3> unit{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
  const TauFactors hat = compute_tau(unit, {0.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(hat.tau1, 1.0);
  EXPECT_DOUBLE_EQ(hat.tau2, 0.0);
  EXPECT_DOUBLE_EQ(hat.tau3, 0.0);

  const TauFactors c = compute_tau(unit, {2.5, 2.5, 2.5});
  EXPECT_DOUBLE_EQ(c.tau1, 0.0);
  EXPECT_DOUBLE_EQ(c.tau2, 0.0);
  EXPECT_DOUBLE_EQ(c.tau3, 2.5);

  // Vertex values sampled from f(x, y) = 3x - 2y + 0.75 must reproduce the
  // plane's coefficients on a generic triangle.
  const auto f = [](Point2 p) { return 3.0 * p.x - 2.0 * p.y + 0.75; };
  const TauFactors plane =
      compute_tau(kRefVerts, {f(kRefVerts[0]), f(kRefVerts[1]), f(kRefVerts[2])});
  EXPECT_NEAR(plane.tau1, 3.0, 1e-13);
  EXPECT_NEAR(plane.tau2, -2.0, 1e-13);
  EXPECT_NEAR(plane.tau3, 0.75, 1e-13);

  // Values equal to the x coordinate give the plane f = x.
  const TauFactors px = compute_tau(kRefVerts, {0.31, 1.1, -0.2});
  EXPECT_NEAR(px.tau1, 1.0, 1e-13);
  EXPECT_NEAR(px.tau2, 0.0, 1e-13);
  EXPECT_NEAR(px.tau3, 0.0, 1e-13);
}

TEST(TauFactors, DegenerateTriangleThrows) {
  const std::array<Point2, 3> collinear{{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}};
  EXPECT_THROW(compute_tau(collinear, {1.0, 2.0, 3.0}), std::domain_error);
}

// ---------------------------------------------------------------------------
// kernel term table
// ---------------------------------------------------------------------------

TEST(KernelTermTable, ShapeAndHarmonicCap) {
  const KernelTermTable& t = table();
  EXPECT_EQ(t.slots.size(), 35u);
  EXPECT_EQ(t.max_radial_power, 10);
  EXPECT_NEAR(t.normalization, kNorm, 1e-15);
  for (const auto& slot : t.slots) {
    EXPECT_LE(slot.harmonic, 2);
    EXPECT_GE(slot.n, 0);
    EXPECT_LE(slot.n, 10);
  }
  for (const auto& term : t.terms) {
    EXPECT_GE(term.tau_index, 1);
    EXPECT_LE(term.tau_index, 3);
    EXPECT_LT(term.slot, t.slots.size());
  }

  sphbi::PolyKernel too_big;
  too_big.coefficients.assign(18, 1.0);  // degree 17 > supported maximum
  too_big.normalization = 1.0;
  EXPECT_THROW(table1_terms(too_big), std::domain_error);
}

// ---------------------------------------------------------------------------
// disc: closed forms
// ---------------------------------------------------------------------------

TEST(DiscIntegral, UnitConstantField) {
  const TauFactors tau = compute_tau(kRefTri, {1.0, 1.0, 1.0});
  const IntegralResult r = sphbi::integrate_disc(1.0, tau, table());
  EXPECT_NEAR(r.value, 1.0, 5e-12);  // normalized kernel integrates to one
  EXPECT_EQ(r.gradient[0], 0.0);     // only vanishing angular terms contribute
  EXPECT_EQ(r.gradient[1], 0.0);
  EXPECT_LE(r.imag_residual, 1e-14);
}

TEST(DiscIntegral, PartialRadiusMomentSum) {
  const double d = 0.5;
  const TauFactors tau = compute_tau(kRefTri, {1.0, 1.0, 1.0});
  const IntegralResult r = sphbi::integrate_disc(d, tau, table());
  const auto& b = sphbi::wendland4().coefficients;
  double expected = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k)
    expected += b[k] * std::pow(d, static_cast<double>(k) + 2.0) /
                (static_cast<double>(k) + 2.0);
  expected *= 2.0 * std::numbers::pi * kNorm;
  EXPECT_NEAR(r.value, expected, 1e-12 * expected);
}

TEST(DiscIntegral, LinearFieldGradientIsUnit) {
  // f = x over the full support: the value vanishes by symmetry and the
  // gradient recovers the plane's slope exactly in the x direction.
  const TauFactors tau = compute_tau(kRefVerts, {0.31, 1.1, -0.2});
  const IntegralResult r = sphbi::integrate_disc(1.0, tau, table());
  EXPECT_NEAR(r.value, 0.0, 1e-13);
  EXPECT_NEAR(r.gradient[0], 1.0, 5e-12);
  EXPECT_NEAR(r.gradient[1], 0.0, 1e-13);
}

TEST(DiscIntegral, RadiusValidation) {
  const TauFactors tau = compute_tau(kRefTri, {1.0, 1.0, 1.0});
  EXPECT_THROW(sphbi::integrate_disc(-0.1, tau, table()), std::domain_error);
  EXPECT_THROW(sphbi::integrate_disc(1.1, tau, table()), std::domain_error);
  EXPECT_NO_THROW(sphbi::integrate_disc(1.0 + 5e-13, tau, table()));
}

// ---------------------------------------------------------------------------
// frozen region values (raw, before kernel normalization)
// ---------------------------------------------------------------------------

TEST(RegionFrozen, StubGeneric) {
  const auto basis =
      sphbi::detail::region_stub({1.3, 0.2}, {0.25, 0.6}, table(), kRefVerts);
  expect_raw(raw_combine(basis, kRefVals), 0.0965060825237841864824883105146,
             0.342987206048749655470031790416, 0.265762328725383356744583647268);
}

TEST(RegionFrozen, StubRightAngledAtNearVertex) {
  // The perpendicular foot coincides with the near vertex: the radial window
  // starts exactly at the chord distance, exercising the snapped x = d limit
  // of the antiderivatives where conditioning is worst.
  const auto basis = sphbi::detail::region_stub({0.325, -0.1125}, {0.215, 0.1075},
                                                table(), kRefVerts);
  expect_raw(raw_combine(basis, kRefVals), 0.0441777425674923896106867751124,
             0.126475100894302746518469986268, 0.000877841232455906623406307706959);
}

TEST(RegionFrozen, SegmentKeepingOriginSide) {
  const auto basis = sphbi::detail::region_segment({0.9, -0.8}, {0.1, 0.95},
                                                   {0.0, 0.0}, table(), kRefVerts);
  expect_raw(raw_combine(basis, kRefVals), 0.821454717376523059857179321704,
             -0.700731768576198330879810384721, -0.582671470931345783606168079949);
}

TEST(RegionFrozen, SectorBetweenRays) {
  const auto basis = sphbi::detail::region_sector({0.8, 0.3}, {-0.2, 0.7}, 0.75,
                                                  table(), kRefVerts);
  expect_raw(raw_combine(basis, kRefVals), 0.147140051173456532356837844911,
             0.266797598615300894794554504974, 0.583404813917326546825896584491);
}

TEST(RegionFrozen, WedgeWithOneVertexInside) {
  const auto basis = sphbi::detail::region_wedge({0.2, 0.1}, {1.7, 0.3}, {0.4, 1.5},
                                                 table(), kRefVerts);
  expect_raw(raw_combine(basis, kRefVals), 0.025081380293266653842383386927,
             0.147899647678472481738467195803, 0.108366636424932252829443241212);
}

TEST(RegionFrozen, PublicWrappersApplyNormalization) {
  const auto basis =
      sphbi::detail::region_stub({1.3, 0.2}, {0.25, 0.6}, table(), kRefVerts);
  const RawResult raw = raw_combine(basis, kRefVals);
  const IntegralResult r =
      sphbi::integrate_stub({1.3, 0.2}, {0.25, 0.6}, kRefTri, kRefVals, table());
  EXPECT_DOUBLE_EQ(r.value, raw.value.real() * table().normalization);
  EXPECT_DOUBLE_EQ(r.gradient[0], raw.gx.real() * table().normalization);
  EXPECT_DOUBLE_EQ(r.gradient[1], raw.gy.real() * table().normalization);
}

// ---------------------------------------------------------------------------
// frozen dispatch configurations (raw, normalized frame)
// ---------------------------------------------------------------------------

struct FrozenConfig {
  const char* name;
  std::array<Point2, 3> verts;
  double v, gx, gy;
};

TEST(NormalizedDispatch, FrozenConfigurations) {
  const std::array<double, 3> vals{0.3, -1.1, 0.7};
  const FrozenConfig configs[] = {
      {"wedge-basic",
       {{{0.2, 0.1}, {1.7, 0.3}, {0.4, 1.5}}},
       0.00423152058681416679630406795822,
       0.0232054171333140225209493699384,
       0.0207040616125148760904772991589},
      {"wedge-cap",
       {{{0.05, 0.02}, {1.35, -0.6}, {1.3, 0.75}}},
       0.00798514641012126283140626854113,
       0.0385208141750906909693984685499,
       0.0112336632117165272545452743439},
      {"reflex",
       {{{0.9, 0.0}, {-1.2, 1.1}, {-1.2, -1.15}}},
       0.0244099009500137279338702484144,
       0.0677793416999303472239077304798,
       -0.200600211012900044277354623891},
      {"reflex2",
       {{{1.4, 0.2}, {-1.2, 1.3}, {-0.3, -1.6}}},
       -0.0139857845483916124035123475124,
       0.110901413874560115549582657089,
       -0.181674589348371718217093093311},
      {"band",
       {{{-1.8, 0.6}, {-1.8, -0.62}, {2.2, 0.01}}},
       0.0273182461793312176378025812257,
       0.0728797216962755049532758640283,
       0.172692838224193173423741343971},
      {"oneedge",
       {{{-0.4, 1.3}, {-1.5, -0.9}, {1.6, -0.85}}},
       0.0260579863008411998982961723506,
       0.192901411197695882655879041897,
       0.114735754467643618292288618012},
      {"corner",
       {{{1.02, 0.0}, {-0.8, 1.45}, {-0.8, -1.45}}},
       0.0067392042305744087001239485346,
       0.093685574249219962445884613756,
       -0.210460595570031533555760895419},
      {"sliver",
       {{{0.1, 0.05}, {1.9, 0.42}, {1.7, 0.1}}},
       0.00119993773203521408664543953557,
       0.00719802355086088071931477618895,
       0.00155523563587568684448581045847},
      {"t2a",
       {{{0.3, 0.2}, {-0.4, 0.1}, {0.5, 1.4}}},
       -0.0223195092219105422843337812402,
       0.0673570171575667203119230207013,
       -0.0946751016857126600805092628022},
      {"t2b",
       {{{0.6, -0.5}, {-0.1, 0.75}, {-1.9, -1.2}}},
       -0.0861488441274672828685302586481,
       0.133345542591112725540501644595,
       -0.244804049714221749012480677558},
      {"t3a",
       {{{0.2, 0.1}, {0.65, 0.3}, {0.3, 0.55}}},
       0.00139695832600321807177986188392,
       0.00339066295390195674912278777002,
       0.00676757583503399821314514742934},
      {"t3b",
       {{{-0.5, -0.3}, {0.6, -0.2}, {0.05, 0.6}}},
       -0.00354918509268583239293891259193,
       -0.171693352006387944675105519313,
       0.125632743484903865072420545321},
      {"near-tangent-edge",
       {{{0.2, 0.0}, {1.8, 0.997}, {1.9, -0.9}}},
       0.00388160567994797642996213834196,
       0.0280368477564891515665972433828,
       -0.00117378942703695543950391843054},
      {"clockwise-input",
       {{{0.2, 0.1}, {0.4, 1.5}, {1.7, 0.3}}},
       0.0036150211915686878439898841852,
       0.0228125037189292324321407488066,
       0.0125577605383693921552513860134},
  };
  for (const FrozenConfig& cfg : configs) {
    SCOPED_TRACE(cfg.name);
    const auto basis = sphbi::detail::integrate_normalized(cfg.verts, table());
    // Multi-piece assemblies (t2/t3 and capped wedges) cancel O(0.1..1)
    // intermediate pieces, so tiny results carry an absolute rounding floor
    // around 1e-14; scale the floor accordingly while keeping the relative
    // tolerance tight enough to catch any branch mix-up (those shift results
    // by 1e-6 or more).
    expect_raw(raw_combine(basis, vals), cfg.v, cfg.gx, cfg.gy, 5e-12, 2e-2);
  }
}

// ---------------------------------------------------------------------------
// full physical evaluation
// ---------------------------------------------------------------------------

TEST(FullEvaluation, PhysicalFrozenValue) {
  const IntegralResult r =
      sphbi::integrate_triangle({0.05, -0.03}, 0.8, kRefTri, kRefVals, table());
  EXPECT_NEAR(r.value, 0.205764905431204284207329245948, 5e-12 * 0.21);
  EXPECT_NEAR(r.gradient[0], 1.31244878196802651342971672596, 5e-12 * 1.4);
  EXPECT_NEAR(r.gradient[1], 0.992047827773107328591119006664, 5e-12 * 1.0);
  EXPECT_LE(r.imag_residual, 1e-10);
}

TEST(FullEvaluation, SupportValidationAndValueChannel) {
  EXPECT_THROW(sphbi::integrate_triangle({0.0, 0.0}, 0.0, kRefTri, kRefVals, table()),
               std::domain_error);
  EXPECT_THROW(sphbi::integrate_triangle({0.0, 0.0}, -1.0, kRefTri, kRefVals, table()),
               std::domain_error);
  // The overload reading the triangle's value channel matches the explicit one
  // and rejects triangles without values.
  Triangle with_vals = kRefTri;
  with_vals.values = kRefVals;
  const IntegralResult a = sphbi::integrate_triangle({0.05, -0.03}, 0.8, with_vals, table());
  const IntegralResult b =
      sphbi::integrate_triangle({0.05, -0.03}, 0.8, kRefTri, kRefVals, table());
  EXPECT_DOUBLE_EQ(a.value, b.value);
  EXPECT_THROW(sphbi::integrate_triangle({0.05, -0.03}, 0.8, kRefTri, table()),
               std::invalid_argument);
}

TEST(FullEvaluation, VertexBasesMatchUnitFields) {
  const Point2 q{0.05, -0.03};
  const double h = 0.8;
  const auto bases = sphbi::integrate_triangle_bases(q, h, kRefTri, table());
  for (int i = 0; i < 3; ++i) {
    std::array<double, 3> unit{0.0, 0.0, 0.0};
    unit[static_cast<std::size_t>(i)] = 1.0;
    const IntegralResult direct = sphbi::integrate_triangle(q, h, kRefTri, unit, table());
    const auto s = static_cast<std::size_t>(i);
    EXPECT_DOUBLE_EQ(bases[s].value, direct.value);
    EXPECT_DOUBLE_EQ(bases[s].gradient[0], direct.gradient[0]);
    EXPECT_DOUBLE_EQ(bases[s].gradient[1], direct.gradient[1]);
  }
  // Linear combination of the bases reproduces the full evaluation.
  const IntegralResult full = sphbi::integrate_triangle(q, h, kRefTri, kRefVals, table());
  double v = 0.0, gx = 0.0, gy = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto s = static_cast<std::size_t>(i);
    v += kRefVals[s] * bases[s].value;
    gx += kRefVals[s] * bases[s].gradient[0];
    gy += kRefVals[s] * bases[s].gradient[1];
  }
  EXPECT_NEAR(v, full.value, 1e-13);
  EXPECT_NEAR(gx, full.gradient[0], 1e-13);
  EXPECT_NEAR(gy, full.gradient[1], 1e-13);
}

TEST(FullEvaluation, QuarterSectorAndHalfSegment) {
  // Quarter of the full support with a constant unit field.
  const IntegralResult quarter = sphbi::integrate_sector(
      {1.0, 0.0}, {0.0, 1.0}, 1.0, kRefTri, {1.0, 1.0, 1.0}, table());
  EXPECT_NEAR(quarter.value, 0.25, 5e-12);

  // Chord through the center: each side holds half the kernel mass, and for
  // f = x the two sides are exact mirrors.
  const IntegralResult left = sphbi::integrate_segment(
      {-0.7, 0.0}, {0.0, -1.5}, {0.0, 1.5}, kRefTri, {1.0, 1.0, 1.0}, table());
  EXPECT_NEAR(left.value, 0.5, 1e-12);
  const std::array<double, 3> planar_x{0.31, 1.1, -0.2};  // reproduces f = x
  const IntegralResult lx = sphbi::integrate_segment({-0.7, 0.0}, {0.0, -1.5}, {0.0, 1.5},
                                                     kRefTri, planar_x, table());
  const IntegralResult rx = sphbi::integrate_segment({0.7, 0.0}, {0.0, -1.5}, {0.0, 1.5},
                                                     kRefTri, planar_x, table());
  EXPECT_GT(rx.value, 0.0);
  EXPECT_NEAR(lx.value, -rx.value, 1e-12);
}

TEST(FullEvaluation, SectorRayValidation) {
  EXPECT_THROW(sphbi::integrate_sector({0.0, 0.0}, {0.0, 1.0}, 1.0, kRefTri,
                                       {1.0, 1.0, 1.0}, table()),
               std::domain_error);
}

// ---------------------------------------------------------------------------
// invariants
// ---------------------------------------------------------------------------

struct RandomConfig {
  Triangle tri;
  std::array<double, 3> values;
  Point2 query;
  double h;
};

RandomConfig draw_config(std::mt19937& rng) {
  std::uniform_real_distribution<double> coord(-2.2, 2.2);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_real_distribution<double> support(0.5, 2.0);
  std::uniform_real_distribution<double> qc(-0.4, 0.4);
  RandomConfig cfg;
  do {
    cfg.tri = make_tri({coord(rng), coord(rng)}, {coord(rng), coord(rng)},
                       {coord(rng), coord(rng)});
  } while (std::abs(sphbi::signed_area(cfg.tri.v0, cfg.tri.v1, cfg.tri.v2)) < 0.05);
  cfg.values = {val(rng), val(rng), val(rng)};
  cfg.query = {qc(rng), qc(rng)};
  cfg.h = support(rng);
  return cfg;
}

void expect_close(double a, double b, double tol, double scale = 1.0) {
  EXPECT_NEAR(a, b, tol * std::max({1.0, scale, std::abs(a), std::abs(b)}));
}

TEST(Invariants, AdditivityUnderTriangleSplit) {
  std::mt19937 rng(20240811u);
  std::uniform_real_distribution<double> wdist(0.15, 0.7);
  for (int iter = 0; iter < 300; ++iter) {
    const RandomConfig cfg = draw_config(rng);
    // Interior split point with the linear field's own value at it.
    double w0 = wdist(rng), w1 = wdist(rng), w2 = wdist(rng);
    const double ws = w0 + w1 + w2;
    w0 /= ws, w1 /= ws, w2 /= ws;
    const Point2 p{w0 * cfg.tri.v0.x + w1 * cfg.tri.v1.x + w2 * cfg.tri.v2.x,
                   w0 * cfg.tri.v0.y + w1 * cfg.tri.v1.y + w2 * cfg.tri.v2.y};
    const TauFactors plane = compute_tau(cfg.tri, cfg.values);
    const double fp = plane.tau1 * p.x + plane.tau2 * p.y + plane.tau3;

    const IntegralResult whole =
        sphbi::integrate_triangle(cfg.query, cfg.h, cfg.tri, cfg.values, table());
    IntegralResult sum{};
    const std::array<std::pair<Point2, double>, 3> corners{
        {{cfg.tri.v0, cfg.values[0]}, {cfg.tri.v1, cfg.values[1]},
         {cfg.tri.v2, cfg.values[2]}}};
    for (int e = 0; e < 3; ++e) {
      const auto& a = corners[static_cast<std::size_t>(e)];
      const auto& b = corners[static_cast<std::size_t>((e + 1) % 3)];
      const IntegralResult part = sphbi::integrate_triangle(
          cfg.query, cfg.h, make_tri(p, a.first, b.first), {fp, a.second, b.second},
          table());
      sum.value += part.value;
      sum.gradient[0] += part.gradient[0];
      sum.gradient[1] += part.gradient[1];
      EXPECT_LE(part.imag_residual, 1e-10);
    }
    expect_close(sum.value, whole.value, 1e-10);
    expect_close(sum.gradient[0], whole.gradient[0], 1e-10);
    expect_close(sum.gradient[1], whole.gradient[1], 1e-10);
  }
}

TEST(Invariants, RotationEquivariance) {
  std::mt19937 rng(77001u);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int iter = 0; iter < 200; ++iter) {
    const RandomConfig cfg = draw_config(rng);
    const double th = angle(rng);
    const double c = std::cos(th), s = std::sin(th);
    const auto rot = [&](Point2 p) {
      return Point2{c * p.x - s * p.y, s * p.x + c * p.y};
    };
    const IntegralResult base =
        sphbi::integrate_triangle(cfg.query, cfg.h, cfg.tri, cfg.values, table());
    const IntegralResult turned = sphbi::integrate_triangle(
        rot(cfg.query), cfg.h,
        make_tri(rot(cfg.tri.v0), rot(cfg.tri.v1), rot(cfg.tri.v2)), cfg.values,
        table());
    expect_close(turned.value, base.value, 1e-12);
    const double egx = c * base.gradient[0] - s * base.gradient[1];
    const double egy = s * base.gradient[0] + c * base.gradient[1];
    expect_close(turned.gradient[0], egx, 1e-11);
    expect_close(turned.gradient[1], egy, 1e-11);
    EXPECT_LE(turned.imag_residual, 1e-10);
  }
}

TEST(Invariants, TranslationAndSupportScaling) {
  std::mt19937 rng(31337u);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  std::uniform_real_distribution<double> scale(0.3, 3.0);
  for (int iter = 0; iter < 200; ++iter) {
    const RandomConfig cfg = draw_config(rng);
    const Point2 t{shift(rng), shift(rng)};
    const double s = scale(rng);
    const Point2 q2{cfg.query.x + t.x, cfg.query.y + t.y};
    const auto map = [&](Point2 v) {
      return Point2{q2.x + s * (v.x - cfg.query.x), q2.y + s * (v.y - cfg.query.y)};
    };
    const IntegralResult base =
        sphbi::integrate_triangle(cfg.query, cfg.h, cfg.tri, cfg.values, table());
    const IntegralResult moved = sphbi::integrate_triangle(
        q2, s * cfg.h, make_tri(map(cfg.tri.v0), map(cfg.tri.v1), map(cfg.tri.v2)),
        cfg.values, table());
    expect_close(moved.value, base.value, 1e-11);
    expect_close(moved.gradient[0], base.gradient[0] / s, 1e-11);
    expect_close(moved.gradient[1], base.gradient[1] / s, 1e-11);
  }
}

TEST(Invariants, OrientationIndependenceIsExact) {
  std::mt19937 rng(90210u);
  const std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
  for (int iter = 0; iter < 50; ++iter) {
    const RandomConfig cfg = draw_config(rng);
    const std::array<Point2, 3> v{cfg.tri.v0, cfg.tri.v1, cfg.tri.v2};
    const IntegralResult base =
        sphbi::integrate_triangle(cfg.query, cfg.h, cfg.tri, cfg.values, table());
    for (const auto& perm : perms) {
      const Triangle tri = make_tri(v[static_cast<std::size_t>(perm[0])],
                                    v[static_cast<std::size_t>(perm[1])],
                                    v[static_cast<std::size_t>(perm[2])]);
      const std::array<double, 3> vals{
          cfg.values[static_cast<std::size_t>(perm[0])],
          cfg.values[static_cast<std::size_t>(perm[1])],
          cfg.values[static_cast<std::size_t>(perm[2])]};
      const IntegralResult got =
          sphbi::integrate_triangle(cfg.query, cfg.h, tri, vals, table());
      // Canonicalization makes any vertex ordering bitwise identical.
      EXPECT_EQ(got.value, base.value);
      EXPECT_EQ(got.gradient[0], base.gradient[0]);
      EXPECT_EQ(got.gradient[1], base.gradient[1]);
    }
  }
}

TEST(Invariants, FiniteDifferenceGradient) {
  std::mt19937 rng(555888u);
  int checked = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const RandomConfig cfg = draw_config(rng);
    const IntegralResult base =
        sphbi::integrate_triangle(cfg.query, cfg.h, cfg.tri, cfg.values, table());
    const double step = 1e-5 * cfg.h;
    const auto at = [&](double dx, double dy) {
      return sphbi::integrate_triangle({cfg.query.x + dx, cfg.query.y + dy}, cfg.h,
                                       cfg.tri, cfg.values, table())
          .value;
    };
    const double fdx = (at(step, 0.0) - at(-step, 0.0)) / (2.0 * step);
    const double fdy = (at(0.0, step) - at(0.0, -step)) / (2.0 * step);
    const double scale =
        std::max({1e-3, std::abs(base.gradient[0]), std::abs(base.gradient[1])});
    EXPECT_NEAR(base.gradient[0], fdx, 1e-6 * scale);
    EXPECT_NEAR(base.gradient[1], fdy, 1e-6 * scale);
    if (std::abs(base.value) > 1e-6) ++checked;
  }
  EXPECT_GT(checked, 100);  // the sweep must not consist of empty overlaps
}

// ---------------------------------------------------------------------------
// gradient variant weights
// ---------------------------------------------------------------------------

TEST(GradientVariantWeights, FormsAndValidation) {
  const std::array<double, 3> values{1.5, -0.25, 0.75};
  const std::array<double, 3> densities{1000.0, 1100.0, 950.0};
  const double a0 = 0.5, rho0 = 1020.0;

  const auto basic = sphbi::gradient_variant_weights(GradientVariant::basic, a0, rho0,
                                                     values, densities);
  EXPECT_DOUBLE_EQ(basic[0], 1.5);
  EXPECT_DOUBLE_EQ(basic[1], -0.25);
  EXPECT_DOUBLE_EQ(basic[2], 0.75);

  const auto diff = sphbi::gradient_variant_weights(GradientVariant::difference, a0,
                                                    rho0, values, densities);
  for (int i = 0; i < 3; ++i) {
    const auto s = static_cast<std::size_t>(i);
    EXPECT_DOUBLE_EQ(diff[s], densities[s] * (values[s] - a0));
  }
  // A constant field produces identically zero difference weights.
  const auto flat = sphbi::gradient_variant_weights(GradientVariant::difference, 0.5,
                                                    rho0, {0.5, 0.5, 0.5}, densities);
  EXPECT_EQ(flat[0], 0.0);
  EXPECT_EQ(flat[1], 0.0);
  EXPECT_EQ(flat[2], 0.0);

  const auto sym = sphbi::gradient_variant_weights(GradientVariant::symmetric, a0, rho0,
                                                   values, densities);
  for (int i = 0; i < 3; ++i) {
    const auto s = static_cast<std::size_t>(i);
    EXPECT_DOUBLE_EQ(sym[s], densities[s] * (values[s] / (densities[s] * densities[s]) +
                                             a0 / (rho0 * rho0)));
  }

  EXPECT_THROW(sphbi::gradient_variant_weights(GradientVariant::difference, a0, rho0,
                                               values, {1000.0, 0.0, 950.0}),
               std::domain_error);
  EXPECT_THROW(sphbi::gradient_variant_weights(GradientVariant::symmetric, a0, 0.0,
                                               values, densities),
               std::domain_error);
}

// ---------------------------------------------------------------------------
// dispatch branch coverage
// ---------------------------------------------------------------------------

TEST(BranchCoverage, SegmentSpecialChords) {
  const std::array<double, 3> ones{1.0, 1.0, 1.0};
  const BranchCounters before = sphbi::branch_counters();

  // Chord through the center -> half-disc route.
  sphbi::integrate_segment({-0.7, 0.0}, {0.0, -1.5}, {0.0, 1.5}, kRefTri, ones, table());
  // Kept side covers the whole disc.
  const IntegralResult full = sphbi::integrate_segment({1.0, 0.0}, {-1.0, -2.0},
                                                       {-1.0, 2.0}, kRefTri, ones, table());
  EXPECT_NEAR(full.value, 1.0, 5e-12);
  // Kept side misses the disc entirely.
  const IntegralResult empty = sphbi::integrate_segment({2.0, 0.0}, {1.0, -2.0},
                                                        {1.0, 2.0}, kRefTri, ones, table());
  EXPECT_EQ(empty.value, 0.0);

  const BranchCounters& after = sphbi::branch_counters();
  EXPECT_GT(after.segment_half_disc, before.segment_half_disc);
  EXPECT_GT(after.segment_full_disc, before.segment_full_disc);
  EXPECT_GT(after.segment_empty, before.segment_empty);

  EXPECT_THROW(sphbi::integrate_segment({0.0, 0.0}, {0.5, 0.5}, {0.5, 0.5}, kRefTri,
                                        ones, table()),
               std::domain_error);
}

TEST(BranchCoverage, DegenerateStubAndTriangle) {
  const BranchCounters before = sphbi::branch_counters();
  const IntegralResult thin = sphbi::integrate_stub({0.8, 0.4}, {0.4, 0.2}, kRefTri,
                                                    {1.0, 1.0, 1.0}, table());
  EXPECT_EQ(thin.value, 0.0);  // collinear with the origin: no area
  EXPECT_GT(sphbi::branch_counters().stub_degenerate, before.stub_degenerate);

  const IntegralResult flat = sphbi::integrate_triangle(
      {0.0, 0.0}, 1.0, make_tri({0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}), {1.0, 2.0, 3.0},
      table());
  EXPECT_EQ(flat.value, 0.0);
  EXPECT_GT(sphbi::branch_counters().dispatch_degenerate, before.dispatch_degenerate);
}

TEST(BranchCoverage, ContainmentExtremes) {
  const std::array<double, 3> vals{0.4, 1.0, -0.3};
  const BranchCounters before = sphbi::branch_counters();

  // Triangle enclosing the whole support: equals the full disc integral.
  const IntegralResult hull = sphbi::integrate_triangle(
      {0.0, 0.0}, 1.0, make_tri({-9.0, -7.0}, {9.0, -7.0}, {0.0, 11.0}), vals, table());
  const TauFactors tau =
      compute_tau(std::array<Point2, 3>{{{-9.0, -7.0}, {9.0, -7.0}, {0.0, 11.0}}}, vals);
  const IntegralResult disc = sphbi::integrate_disc(1.0, tau, table());
  EXPECT_NEAR(hull.value, disc.value, 1e-11);
  EXPECT_NEAR(hull.gradient[0], disc.gradient[0], 1e-11);
  EXPECT_NEAR(hull.gradient[1], disc.gradient[1], 1e-11);

  // Triangle far from the support: exactly zero.
  const IntegralResult far = sphbi::integrate_triangle(
      {0.0, 0.0}, 1.0, make_tri({5.0, 5.0}, {7.0, 5.5}, {5.5, 7.0}), vals, table());
  EXPECT_EQ(far.value, 0.0);
  EXPECT_EQ(far.gradient[0], 0.0);
  EXPECT_EQ(far.gradient[1], 0.0);

  const BranchCounters& after = sphbi::branch_counters();
  EXPECT_GT(after.wedge_no_crossings_disc, before.wedge_no_crossings_disc);
  EXPECT_GT(after.wedge_no_crossings_zero, before.wedge_no_crossings_zero);
}

TEST(BranchCoverage, LoneParameterTouchIsIgnored) {
  // The vertex at (1 + 1.2e-12, 0) sits just outside the disc, past the
  // on-circle tolerance. The edge running to (5, 0) registers a single
  // crossing parameter a hair below zero but inside the acceptance window,
  // while the other two edges miss the circle entirely. A lone registered
  // touch with every vertex outside must not be treated as a chord: the
  // overlap is empty.
  const BranchCounters before = sphbi::branch_counters();
  const IntegralResult r = sphbi::integrate_triangle(
      {0.0, 0.0}, 1.0, make_tri({1.0 + 1.2e-12, 0.0}, {5.0, 0.0}, {1.5, 0.5}),
      {1.0, 1.0, 1.0}, table());
  EXPECT_EQ(r.value, 0.0);
  EXPECT_GT(sphbi::branch_counters().wedge_lone_touch, before.wedge_lone_touch);
}

// Keep this test last: it checks that the suite as a whole has walked every
// dispatch and region route at least once.
TEST(BranchCoverage, AllRoutesExercised) {
  const BranchCounters& c = sphbi::branch_counters();
  EXPECT_GT(c.dispatch_degenerate, 0u);
  EXPECT_GT(c.dispatch_wedge_outside, 0u);
  EXPECT_GT(c.dispatch_wedge_single, 0u);
  EXPECT_GT(c.dispatch_two_inside, 0u);
  EXPECT_GT(c.dispatch_three_inside, 0u);
  EXPECT_GT(c.wedge_no_crossings_disc, 0u);
  EXPECT_GT(c.wedge_no_crossings_zero, 0u);
  EXPECT_GT(c.wedge_single_edge_segment, 0u);
  EXPECT_GT(c.wedge_lone_touch, 0u);
  EXPECT_GT(c.wedge_general, 0u);
  EXPECT_GT(c.wedge_reflex_disc, 0u);
  EXPECT_GT(c.wedge_cap_subtracted, 0u);
  EXPECT_GT(c.stub_direct, 0u);
  EXPECT_GT(c.stub_split, 0u);
  EXPECT_GT(c.stub_degenerate, 0u);
  EXPECT_GT(c.segment_general, 0u);
  EXPECT_GT(c.segment_half_disc, 0u);
  EXPECT_GT(c.segment_full_disc, 0u);
  EXPECT_GT(c.segment_empty, 0u);
  sphbi::reset_branch_counters();
  EXPECT_EQ(sphbi::branch_counters().dispatch_degenerate, 0u);
}

}  // namespace

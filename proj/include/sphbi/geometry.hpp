#ifndef SPHBI_GEOMETRY_HPP
#define SPHBI_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace sphbi {

// A vertex whose squared radius lies within this band of 1 is treated as on
// the unit circle and classified as inside, so the dispatcher cannot flap
// between branches on roundoff.
inline constexpr double kOnCircleTol = 1e-12;

// Generic geometric degeneracy threshold (zero areas, zero-length edges).
inline constexpr double kGeomEps = 1e-13;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
  friend Point2 operator/(Point2 p, double s) { return {p.x / s, p.y / s}; }
  friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point2 a) { return dot(a, a); }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

struct Triangle {
  Point2 v0, v1, v2;
  std::optional<std::array<double, 3>> values;

  Point2 operator[](int i) const { return i == 0 ? v0 : (i == 1 ? v1 : v2); }
};

// Homogeneous 2D transform. The last row is implicitly (0,0,1); `improper`
// records a determinant of -1 in the linear part (rotation + reflection),
// which matters when mapping gradients back through the inverse.
struct Transform2 {
  // Row-major 2x3: linear part in columns 0..1, translation in column 2.
  std::array<std::array<double, 3>, 2> m{{{1, 0, 0}, {0, 1, 0}}};
  bool improper = false;

  static Transform2 identity() { return {}; }

  static Transform2 translation(Point2 t) {
    Transform2 r;
    r.m[0][2] = t.x;
    r.m[1][2] = t.y;
    return r;
  }

  static Transform2 uniform_scale(double s) {
    Transform2 r;
    r.m[0][0] = s;
    r.m[1][1] = s;
    return r;
  }

  // Proper rotation taking the direction of v onto the positive x-axis.
  static Transform2 rotation_to_x(Point2 v) {
    double n = norm(v);
    if (n < kGeomEps) throw std::domain_error("rotation_to_x: zero vector");
    Transform2 r;
    r.m[0][0] = v.x / n;
    r.m[0][1] = v.y / n;
    r.m[1][0] = -v.y / n;
    r.m[1][1] = v.x / n;
    return r;
  }

  // Compose with a reflection across the x-axis applied after this transform.
  Transform2 mirrored_y() const {
    Transform2 r = *this;
    r.m[1][0] = -m[1][0];
    r.m[1][1] = -m[1][1];
    r.m[1][2] = -m[1][2];
    r.improper = !improper;
    return r;
  }

  Point2 apply(Point2 p) const {
    return {m[0][0] * p.x + m[0][1] * p.y + m[0][2],
            m[1][0] * p.x + m[1][1] * p.y + m[1][2]};
  }

  Point2 apply_linear(Point2 p) const {
    return {m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y};
  }

  // Map a covector (gradient) back to the source frame: g_src = L^T g_dst.
  Point2 apply_transposed(Point2 g) const {
    return {m[0][0] * g.x + m[1][0] * g.y, m[0][1] * g.x + m[1][1] * g.y};
  }

  double det_linear() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

  Transform2 inverse() const {
    double d = det_linear();
    if (std::abs(d) < kGeomEps) throw std::domain_error("Transform2: singular");
    Transform2 r;
    r.m[0][0] = m[1][1] / d;
    r.m[0][1] = -m[0][1] / d;
    r.m[1][0] = -m[1][0] / d;
    r.m[1][1] = m[0][0] / d;
    r.m[0][2] = -(r.m[0][0] * m[0][2] + r.m[0][1] * m[1][2]);
    r.m[1][2] = -(r.m[1][0] * m[0][2] + r.m[1][1] * m[1][2]);
    r.improper = improper;
    return r;
  }

  // this ∘ other (apply `other` first).
  Transform2 compose(const Transform2& other) const {
    Transform2 r;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        r.m[i][j] = m[i][0] * other.m[0][j] + m[i][1] * other.m[1][j];
      }
      r.m[i][2] = m[i][0] * other.m[0][2] + m[i][1] * other.m[1][2] + m[i][2];
    }
    r.improper = improper != other.improper;
    return r;
  }
};

inline double signed_area(Point2 a, Point2 b, Point2 c) {
  return ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)) / 2.0;
}

struct LineCircleHit {
  int count = 0;     // 0, 1 (tangency), or 2
  double lambda_n = 0.0;
  double lambda_p = 0.0;
};

inline LineCircleHit line_circle_intersection(Point2 origin, Point2 dir,
                                              Point2 center, double radius) {
  double a = norm2(dir);
  if (a < kGeomEps * kGeomEps) {
    throw std::domain_error("line_circle_intersection: zero direction");
  }
  Point2 rel = origin - center;
  double b = 2.0 * dot(rel, dir);
  double c = norm2(rel) - radius * radius;
  double disc = b * b - 4.0 * a * c;
  LineCircleHit out;
  if (disc < 0.0) return out;
  if (disc == 0.0) {
    out.count = 1;
    out.lambda_n = out.lambda_p = -b / (2.0 * a);
    return out;
  }
  double rt = std::sqrt(disc);
  out.count = 2;
  out.lambda_n = (-b - rt) / (2.0 * a);
  out.lambda_p = (-b + rt) / (2.0 * a);
  return out;
}

inline double signed_edge_distance(Point2 e0, Point2 e1, bool origin_inside) {
  Point2 e = e1 - e0;
  double len = norm(e);
  if (len < kGeomEps) {
    throw std::domain_error("signed_edge_distance: degenerate edge");
  }
  double d = std::abs(cross(e0, e1)) / len;
  return origin_inside ? -d : d;
}

inline bool point_in_triangle(Point2 p, const Triangle& t) {
  double total = signed_area(t.v0, t.v1, t.v2);
  if (std::abs(total) < kGeomEps) return false;
  double sg = total > 0 ? 1.0 : -1.0;
  double s0 = signed_area(t.v0, t.v1, p);
  double s1 = signed_area(t.v1, t.v2, p);
  double s2 = signed_area(t.v2, t.v0, p);
  return sg * s0 >= -kGeomEps && sg * s1 >= -kGeomEps && sg * s2 >= -kGeomEps;
}

inline Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b) {
  Point2 e = b - a;
  double len2 = norm2(e);
  if (len2 < kGeomEps * kGeomEps) return a;
  double t = dot(p - a, e) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return a + t * e;
}

// Transform taking world coordinates to the unit-support frame: shifted by
// -query and scaled by 1/h so integration happens against support radius 1
// centered at the origin.
inline Transform2 unit_support_transform(Point2 query, double h) {
  if (!(h > 0.0)) throw std::domain_error("unit_support_transform: h <= 0");
  Transform2 r;
  r.m[0][0] = 1.0 / h;
  r.m[1][1] = 1.0 / h;
  r.m[0][2] = -query.x / h;
  r.m[1][2] = -query.y / h;
  return r;
}

inline Triangle normalize_to_unit_support(Point2 query, double h,
                                          const Triangle& t) {
  Transform2 c = unit_support_transform(query, h);
  Triangle out = t;
  out.v0 = c.apply(t.v0);
  out.v1 = c.apply(t.v1);
  out.v2 = c.apply(t.v2);
  return out;
}

}  // namespace sphbi

#endif  // SPHBI_GEOMETRY_HPP

#pragma once

// Far-field blackbody limit of the generalized transmissivity on triangulated
// surfaces: view factors, T^bb(omega) by two independent quadrature routes,
// and the blackbody heat rate.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "nfrad/constants.hpp"
#include "nfrad/materials.hpp"
#include "nfrad/mesh.hpp"
#include "nfrad/quadrature.hpp"
#include "nfrad/spectral.hpp"

namespace nfrad {

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Symmetric triangle rules (Dunavant). Barycentric points, weights sum to 1.

struct TrianglePoint {
  double a, b, c, w;
};

namespace detail {

inline std::vector<TrianglePoint> orbit3(double a, double b, double w) {
  return {{a, b, b, w}, {b, a, b, w}, {b, b, a, w}};
}

inline std::vector<TrianglePoint> orbit6(double a, double b, double c, double w) {
  return {{a, b, c, w}, {a, c, b, w}, {b, a, c, w}, {b, c, a, w}, {c, a, b, w}, {c, b, a, w}};
}

inline void append(std::vector<TrianglePoint>& dst, const std::vector<TrianglePoint>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace detail

inline constexpr int kTriangleRuleOrders[] = {1, 3, 4, 6, 7, 12};

/// Rule with `points` nodes; supported: 1, 3, 4, 6, 7, 12.
inline std::vector<TrianglePoint> triangle_rule(int points) {
  using detail::append;
  std::vector<TrianglePoint> r;
  constexpr double third = 1.0 / 3.0;
  switch (points) {
    case 1:
      r = {{third, third, third, 1.0}};
      break;
    case 3:
      r = detail::orbit3(2.0 / 3.0, 1.0 / 6.0, third);
      break;
    case 4:
      r = {{third, third, third, -27.0 / 48.0}};
      append(r, detail::orbit3(0.6, 0.2, 25.0 / 48.0));
      break;
    case 6:
      r = detail::orbit3(0.108103018168070, 0.445948490915965, 0.223381589678011);
      append(r, detail::orbit3(0.816847572980459, 0.091576213509771, 0.109951743655322));
      break;
    case 7:
      r = {{third, third, third, 0.225}};
      append(r, detail::orbit3(0.059715871789770, 0.470142064105115, 0.132394152788506));
      append(r, detail::orbit3(0.797426985353087, 0.101286507323456, 0.125939180544827));
      break;
    case 12:
      r = detail::orbit3(0.501426509658179, 0.249286745170910, 0.116786275726379);
      append(r, detail::orbit3(0.873821971016996, 0.063089014491502, 0.050844906370207));
      append(r, detail::orbit6(0.053145049844817, 0.310352451033784, 0.636502499121399, 0.082851075618374));
      break;
    default:
      throw GeometryError("unsupported triangle rule order " + std::to_string(points) + " (use 1, 3, 4, 6, 7 or 12)");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Distances between meshes.

namespace detail {

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection 5.1.5).
inline Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));
  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

// Squared distance between segments p1q1 and p2q2 (Ericson 5.1.9).
inline double segment_distance_sq(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
  const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
  double s = 0.0, t = 0.0;
  if (a <= 0.0 && e <= 0.0) return dot(r, r);
  if (a <= 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e <= 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2);
      const double denom = a * e - b * b;
      s = denom != 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  const Vec3 diff = (p1 + d1 * s) - (p2 + d2 * t);
  return dot(diff, diff);
}

// Segment pq against triangle abc, closed on both (Moller-Trumbore).
inline bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 dir = q - p;
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 h = cross(dir, e2);
  const double det = dot(e1, h);
  if (std::abs(det) < 1e-300) return false;  // parallel; coplanar touching is caught by distances
  const double inv = 1.0 / det;
  const Vec3 s = p - a;
  const double u = dot(s, h) * inv;
  if (u < 0.0 || u > 1.0) return false;
  const Vec3 qv = cross(s, e1);
  const double v = dot(dir, qv) * inv;
  if (v < 0.0 || u + v > 1.0) return false;
  const double t = dot(e2, qv) * inv;
  return t >= 0.0 && t <= 1.0;
}

inline double triangle_distance(const std::array<Vec3, 3>& t1, const std::array<Vec3, 3>& t2) {
  for (int i = 0; i < 3; ++i) {
    if (segment_hits_triangle(t1[i], t1[(i + 1) % 3], t2[0], t2[1], t2[2])) return 0.0;
    if (segment_hits_triangle(t2[i], t2[(i + 1) % 3], t1[0], t1[1], t1[2])) return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Vec3 c1 = closest_on_triangle(t1[i], t2[0], t2[1], t2[2]);
    best = std::min(best, dot(c1 - t1[i], c1 - t1[i]));
    const Vec3 c2 = closest_on_triangle(t2[i], t1[0], t1[1], t1[2]);
    best = std::min(best, dot(c2 - t2[i], c2 - t2[i]));
    for (int j = 0; j < 3; ++j)
      best = std::min(best, segment_distance_sq(t1[i], t1[(i + 1) % 3], t2[j], t2[(j + 1) % 3]));
  }
  return std::sqrt(best);
}

inline Vec3 centroid(const std::array<Vec3, 3>& t) { return (t[0] + t[1] + t[2]) * (1.0 / 3.0); }

inline double diameter(const std::array<Vec3, 3>& t) {
  return std::max({norm(t[1] - t[0]), norm(t[2] - t[1]), norm(t[0] - t[2])});
}

inline Vec3 at(const std::array<Vec3, 3>& t, const TrianglePoint& q) { return t[0] * q.a + t[1] * q.b + t[2] * q.c; }

inline void require_nonempty(const TriMesh& m1, const TriMesh& m2) {
  if (m1.size() == 0 || m2.size() == 0) throw GeometryError("view factor: both meshes need at least one triangle");
}

// Pairs closer than this many triangle diameters use the escalated rule.
inline constexpr double kNearPairFactor = 3.0;
inline constexpr int kNearPairOrder = 7;

}  // namespace detail

/// Smallest distance between the two surfaces; 0 if they touch or intersect.
inline double min_separation(const TriMesh& m1, const TriMesh& m2) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m1.size(); ++i) {
    const auto t1 = m1.corners(i);
    for (std::size_t j = 0; j < m2.size(); ++j) {
      best = std::min(best, detail::triangle_distance(t1, m2.corners(j)));
      if (best == 0.0) return 0.0;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// View factor.

/// Kernel (-n1.R)(n2.R) / (pi R^2) with R = r - rt, r on surface 1 and rt on surface 2.
inline double view_factor_kernel(const Vec3& r, const Vec3& n1, const Vec3& rt, const Vec3& n2) {
  const Vec3 d = r - rt;
  const double r2 = dot(d, d);
  return -dot(n1, d) * dot(n2, d) / (std::numbers::pi * r2 * r2);
}

/// Integral of the view-factor kernel over triangle `tri` (normal from its winding)
/// for a differential patch at p with normal n, by the edge-contour formula.
/// Exact for the signed kernel; no visibility clipping.
inline double point_triangle_view_factor(const Vec3& p, const Vec3& n, const std::array<Vec3, 3>& tri) {
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3 a = tri[k] - p;
    const Vec3 b = tri[(k + 1) % 3] - p;
    const Vec3 g = cross(a, b);
    const double gn = norm(g);
    if (gn == 0.0) continue;
    const double angle = std::atan2(gn, dot(a, b));
    sum += angle * dot(n, g) / gn;
  }
  return -sum / (2.0 * std::numbers::pi);
}

struct ViewFactorResult {
  double f12 = 0.0;
  double area1 = 0.0;
  double area2 = 0.0;
  double a1f12 = 0.0;
  std::size_t near_pairs = 0;
};

/// F_{1,2} = (1/A1) double surface integral of the view-factor kernel.
/// Far triangle pairs use the product Gauss rule of `order` points per triangle.
/// Pairs closer than three diameters average the two one-sided integrals
/// (Gauss on one triangle, exact contour integral over the other) with the
/// 7-point rule, which stays accurate down to touching distances and keeps
/// A1 F12 = A2 F21 up to rounding.
inline ViewFactorResult view_factor(const TriMesh& m1, const TriMesh& m2, int order = 4) {
  detail::require_nonempty(m1, m2);
  if (!(min_separation(m1, m2) > 0.0)) throw GeometryError("view factor: meshes touch or overlap");
  const auto rule = triangle_rule(order);
  const auto near_rule = triangle_rule(std::max(order, detail::kNearPairOrder));

  ViewFactorResult out;
  out.area1 = m1.total_area();
  out.area2 = m2.total_area();
  double sum = 0.0;
  for (std::size_t i = 0; i < m1.size(); ++i) {
    const auto t1 = m1.corners(i);
    const Vec3 n1 = m1.normals()[i];
    const double a1 = m1.areas()[i];
    const Vec3 c1 = detail::centroid(t1);
    const double d1 = detail::diameter(t1);
    for (std::size_t j = 0; j < m2.size(); ++j) {
      const auto t2 = m2.corners(j);
      const Vec3 n2 = m2.normals()[j];
      const double a2 = m2.areas()[j];
      const double reach = detail::kNearPairFactor * std::max(d1, detail::diameter(t2));
      if (norm(c1 - detail::centroid(t2)) < reach) {
        ++out.near_pairs;
        double from1 = 0.0, from2 = 0.0;
        for (const auto& q : near_rule) from1 += q.w * point_triangle_view_factor(detail::at(t1, q), n1, t2);
        for (const auto& q : near_rule) from2 += q.w * point_triangle_view_factor(detail::at(t2, q), n2, t1);
        sum += 0.5 * (a1 * from1 + a2 * from2);
      } else {
        double pair = 0.0;
        for (const auto& q1 : rule) {
          const Vec3 x = detail::at(t1, q1);
          double inner = 0.0;
          for (const auto& q2 : rule) inner += q2.w * view_factor_kernel(x, n1, detail::at(t2, q2), n2);
          pair += q1.w * inner;
        }
        sum += a1 * a2 * pair;
      }
    }
  }
  out.a1f12 = sum;
  out.f12 = sum / out.area1;
  return out;
}

/// T^bb(omega) = omega^2 / (2 pi c^2) A1 F12 from a precomputed view factor.
inline double bb_transmissivity(const ViewFactorResult& vf, double omega) {
  if (!std::isfinite(omega) || omega <= 0.0) throw std::invalid_argument("bb_transmissivity: omega must be positive");
  return omega * omega / (2.0 * std::numbers::pi * kSpeedOfLight * kSpeedOfLight) * vf.a1f12;
}

inline double bb_transmissivity(const TriMesh& m1, const TriMesh& m2, double omega, int order = 4) {
  return bb_transmissivity(view_factor(m1, m2, order), omega);
}

// ---------------------------------------------------------------------------
// Direct route through the far-field free-space dyads.

using Mat3c = std::array<std::array<cplx, 3>, 3>;

namespace detail {

inline Mat3c matmul(const Mat3c& a, const Mat3c& b) {
  Mat3c c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline cplx trace(const Mat3c& a) { return a[0][0] + a[1][1] + a[2][2]; }

inline Mat3c conj(Mat3c a) {
  for (auto& row : a)
    for (auto& v : row) v = std::conj(v);
  return a;
}

inline std::array<double, 3> arr(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace detail

/// (n x A)_{ij} = eps_{ikl} n_k A_{lj}.
inline Mat3c cross_dyad(const Vec3& n, const Mat3c& a) {
  const Mat3c skew{{{0.0, -n.z, n.y}, {n.z, 0.0, -n.x}, {-n.y, n.x, 0.0}}};
  return detail::matmul(skew, a);
}

/// Far-field free-space dyad e^{ikR}/(4 pi R) (I - RR) for separation R = r - rt.
inline Mat3c far_field_dyad(const Vec3& separation, double k) {
  const double r = norm(separation);
  const auto u = detail::arr(separation * (1.0 / r));
  const cplx f = std::polar(1.0, k * r) / (4.0 * std::numbers::pi * r);
  Mat3c g{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[i][j] = f * ((i == j ? 1.0 : 0.0) - u[i] * u[j]);
  return g;
}

/// Far-field curl of the free-space dyad, i k e^{ikR}/(4 pi R) (R x I).
inline Mat3c far_field_curl_dyad(const Vec3& separation, double k) {
  const double r = norm(separation);
  const Vec3 u = separation * (1.0 / r);
  const cplx f = cplx(0.0, k) * std::polar(1.0, k * r) / (4.0 * std::numbers::pi * r);
  // (u x I) v = u x v
  const Mat3c ux{{{0.0, -u.z, u.y}, {u.z, 0.0, -u.x}, {-u.y, u.x, 0.0}}};
  Mat3c g{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[i][j] = f * ux[i][j];
  return g;
}

/// Re Tr[(n1 x G(r,rt)) . (n2 x G(rt,r))^*] for the far-field dyad.
inline double electric_trace(const Vec3& r, const Vec3& n1, const Vec3& rt, const Vec3& n2, double k) {
  const Mat3c a = cross_dyad(n1, far_field_dyad(r - rt, k));
  const Mat3c b = cross_dyad(n2, far_field_dyad(rt - r, k));
  return detail::trace(detail::matmul(a, detail::conj(b))).real();
}

/// Re Tr[(n1 x G_M(r,rt)) . (n2 x G_M(rt,r))^*] for the far-field curl dyad.
inline double magnetic_trace(const Vec3& r, const Vec3& n1, const Vec3& rt, const Vec3& n2, double k) {
  const Mat3c a = cross_dyad(n1, far_field_curl_dyad(r - rt, k));
  const Mat3c b = cross_dyad(n2, far_field_curl_dyad(rt - r, k));
  return detail::trace(detail::matmul(a, detail::conj(b))).real();
}

struct DirectTransmissivity {
  double value = 0.0;
  double min_separation = 0.0;
  double min_kr = 0.0;        // omega * min_separation / c
  bool far_field_ok = true;   // min_kr >= 10
};

inline constexpr double kFarFieldGuard = 10.0;

/// T^bb(omega) from the exterior formula with far-field vacuum dyads:
/// 2 Re Tr over S1 x S2 of [k^2 (n1 x G_e)(n2 x G_m)^* + (n1 x G_M)(n2 x G_M)^*].
inline DirectTransmissivity bb_transmissivity_direct(const TriMesh& m1, const TriMesh& m2, double omega, int order = 4) {
  detail::require_nonempty(m1, m2);
  if (!std::isfinite(omega) || omega <= 0.0) throw std::invalid_argument("bb_transmissivity_direct: omega must be positive");
  DirectTransmissivity out;
  out.min_separation = min_separation(m1, m2);
  if (!(out.min_separation > 0.0)) throw GeometryError("direct transmissivity: meshes touch or overlap");
  const double k = omega / kSpeedOfLight;
  out.min_kr = k * out.min_separation;
  out.far_field_ok = out.min_kr >= kFarFieldGuard;

  const auto rule = triangle_rule(order);
  const auto near_rule = triangle_rule(std::max(order, detail::kNearPairOrder));
  double sum = 0.0;
  for (std::size_t i = 0; i < m1.size(); ++i) {
    const auto t1 = m1.corners(i);
    const Vec3 n1 = m1.normals()[i];
    const Vec3 c1 = detail::centroid(t1);
    const double d1 = detail::diameter(t1);
    for (std::size_t j = 0; j < m2.size(); ++j) {
      const auto t2 = m2.corners(j);
      const Vec3 n2 = m2.normals()[j];
      const double reach = detail::kNearPairFactor * std::max(d1, detail::diameter(t2));
      const auto& pts = norm(c1 - detail::centroid(t2)) < reach ? near_rule : rule;
      double pair = 0.0;
      for (const auto& q1 : pts) {
        const Vec3 x = detail::at(t1, q1);
        double inner = 0.0;
        for (const auto& q2 : pts) {
          const Vec3 y = detail::at(t2, q2);
          inner += q2.w * (k * k * electric_trace(x, n1, y, n2, k) + magnetic_trace(x, n1, y, n2, k));
        }
        pair += q1.w * inner;
      }
      sum += m1.areas()[i] * m2.areas()[j] * pair;
    }
  }
  out.value = 2.0 * sum;
  return out;
}

// ---------------------------------------------------------------------------

struct BlackbodyHeatRate {
  double closed_form = 0.0;  // A1 F12 sigma (T1^4 - T2^4), W
  double spectral = 0.0;     // frequency integral of T^bb times the energy difference, W
  double spectral_error = 0.0;
  bool converged = true;
  ViewFactorResult view;
};

/// Net blackbody exchange from surface 1 to surface 2 by the closed form and by
/// integrating T^bb(omega) against the thermal energy difference.
inline BlackbodyHeatRate bb_heat_rate(const TriMesh& m1, const TriMesh& m2, double t1, double t2, int order = 4,
                                      const IntegrationSpec& spec = {}) {
  if (!std::isfinite(t1) || !std::isfinite(t2) || t1 < 0.0 || t2 < 0.0)
    throw std::invalid_argument("bb_heat_rate: temperatures must be finite and >= 0");
  spec.validate();
  BlackbodyHeatRate out;
  out.view = view_factor(m1, m2, order);
  if (t1 == t2) return out;
  out.closed_form = out.view.a1f12 * kStefanBoltzmann * (std::pow(t1, 4) - std::pow(t2, 4));
  const auto window = spec.window.value_or(auto_window(std::max(t1, t2)));
  auto integrand = [&](double omega) {
    const double dtheta = planck_energy_thermal(omega, t1) - planck_energy_thermal(omega, t2);
    return 0.5 / std::numbers::pi * dtheta * bb_transmissivity(out.view, omega);
  };
  const auto breaks = log_breaks(window.first, window.second, 32);
  const auto q = adaptive_integrate(integrand, std::span<const double>(breaks), spec);
  out.spectral = q.value;
  out.spectral_error = q.error;
  out.converged = q.converged;
  return out;
}

}  // namespace nfrad

#include "spdefield/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace spdefield {

Vec3 from_lonlat(double lon_deg, double lat_deg) {
  const double lon = lon_deg * kPi / 180.0;
  const double lat = lat_deg * kPi / 180.0;
  const double c = std::cos(lat);
  return {c * std::cos(lon), c * std::sin(lon), std::sin(lat)};
}

void to_lonlat(const Vec3& p, double& lon_deg, double& lat_deg) {
  lon_deg = std::atan2(p.y, p.x) * 180.0 / kPi;
  const double r = std::sqrt(p.x * p.x + p.y * p.y);
  lat_deg = std::atan2(p.z, r) * 180.0 / kPi;
}

double geodesic(const Vec3& a, const Vec3& b) {
  // atan2 form is stable for both small and near-antipodal separations.
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double domain_distance(DomainKind domain, const Vec3& a, const Vec3& b) {
  return domain == DomainKind::sphere ? geodesic(a, b) : (a - b).norm();
}

double facet_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  // Van Oosterom & Strackee: tan(E/2) = |a.(b x c)| / (1 + a.b + b.c + c.a).
  const double num = std::fabs(a.dot(b.cross(c)));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

// ---------------------------------------------------------------------------

namespace {

// Unwraps a lon-lat loop so consecutive longitude steps are in (-180, 180].
std::vector<std::array<double, 2>> unwrap_loop(const PolygonLoop& loop,
                                               DomainKind domain) {
  std::vector<std::array<double, 2>> out = loop.pts;
  if (domain != DomainKind::sphere) return out;
  for (std::size_t i = 1; i < out.size(); ++i) {
    double d = out[i][0] - out[i - 1][0];
    while (d > 180.0) {
      out[i][0] -= 360.0;
      d -= 360.0;
    }
    while (d <= -180.0) {
      out[i][0] += 360.0;
      d += 360.0;
    }
  }
  return out;
}

bool segments_cross(double ax, double ay, double bx, double by, double cx,
                    double cy, double dx, double dy) {
  auto orient = [](double px, double py, double qx, double qy, double rx,
                   double ry) {
    const double v = (qx - px) * (ry - py) - (qy - py) * (rx - px);
    return (v > 0.0) - (v < 0.0);
  };
  const int o1 = orient(ax, ay, bx, by, cx, cy);
  const int o2 = orient(ax, ay, bx, by, dx, dy);
  const int o3 = orient(cx, cy, dx, dy, ax, ay);
  const int o4 = orient(cx, cy, dx, dy, bx, by);
  return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace

PolygonRegion::PolygonRegion(int id, std::vector<PolygonLoop> loops,
                             DomainKind domain)
    : id_(id), domain_(domain) {
  loops_.reserve(loops.size());
  for (auto& l : loops) {
    PolygonLoop u;
    u.pts = unwrap_loop(l, domain);
    loops_.push_back(std::move(u));
  }
  v_lo_ = 1e300;
  v_hi_ = -1e300;
  u_lo_ = 1e300;
  u_hi_ = -1e300;
  for (const auto& l : loops_) {
    const std::size_t n = l.pts.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = l.pts[i];
      const auto& q = l.pts[(i + 1) % n];
      edges_.push_back({p[0], p[1], q[0], q[1]});
      v_lo_ = std::min({v_lo_, p[1]});
      v_hi_ = std::max({v_hi_, p[1]});
      u_lo_ = std::min({u_lo_, p[0]});
      u_hi_ = std::max({u_hi_, p[0]});
    }
  }
  if (edges_.empty()) return;
  const int nbins = std::clamp<int>(static_cast<int>(edges_.size() / 8), 1, 512);
  bin_height_ = std::max((v_hi_ - v_lo_) / nbins, 1e-12);
  bins_.assign(static_cast<std::size_t>(nbins), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const double lo = std::min(edges_[e].v1, edges_[e].v2);
    const double hi = std::max(edges_[e].v1, edges_[e].v2);
    int b0 = std::clamp<int>(static_cast<int>((lo - v_lo_) / bin_height_), 0, nbins - 1);
    int b1 = std::clamp<int>(static_cast<int>((hi - v_lo_) / bin_height_), 0, nbins - 1);
    for (int b = b0; b <= b1; ++b) bins_[static_cast<std::size_t>(b)].push_back(static_cast<int>(e));
  }
}

bool PolygonRegion::contains_unwrapped(double u, double v) const {
  if (edges_.empty() || v < v_lo_ || v > v_hi_) return false;
  const int nbins = static_cast<int>(bins_.size());
  const int b = std::clamp<int>(static_cast<int>((v - v_lo_) / bin_height_), 0, nbins - 1);
  bool inside = false;
  for (int e : bins_[static_cast<std::size_t>(b)]) {
    const Edge& ed = edges_[static_cast<std::size_t>(e)];
    // Half-open rule; horizontal edges never counted.
    if ((ed.v1 <= v) == (ed.v2 <= v)) continue;
    const double t = (v - ed.v1) / (ed.v2 - ed.v1);
    const double ucross = ed.u1 + t * (ed.u2 - ed.u1);
    if (ucross > u) inside = !inside;
  }
  return inside;
}

bool PolygonRegion::contains_coords(double u, double v) const {
  if (domain_ == DomainKind::plane) return contains_unwrapped(u, v);
  // Test every longitude lift that can fall inside the unwrapped loops.
  for (double shift = -720.0; shift <= 720.0; shift += 360.0) {
    const double uu = u + shift;
    if (uu < u_lo_ || uu > u_hi_) continue;
    if (contains_unwrapped(uu, v)) return true;
  }
  return false;
}

bool PolygonRegion::contains(const Vec3& p) const {
  if (domain_ == DomainKind::plane) return contains_unwrapped(p.x, p.y);
  double lon, lat;
  to_lonlat(p, lon, lat);
  return contains_coords(lon, lat);
}

bool PolygonRegion::is_simple() const {
  for (const auto& l : loops_) {
    const std::size_t n = l.pts.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = l.pts[i];
      const auto& b = l.pts[(i + 1) % n];
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
        const auto& c = l.pts[j];
        const auto& d = l.pts[(j + 1) % n];
        if (segments_cross(a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1]))
          return false;
      }
    }
  }
  return true;
}

double PolygonRegion::area() const {
  double total = 0.0;
  for (const auto& l : loops_) {
    total += domain_ == DomainKind::sphere ? lonlat_loop_sphere_area(l)
                                           : std::fabs(loop_signed_area(l));
  }
  return total;
}

int RegionPartition::region_of(const Vec3& p) const {
  for (const auto& r : regions)
    if (r.contains(p)) return r.id();
  return default_region;
}

bool point_in_loop(const PolygonLoop& loop, double u, double v) {
  bool inside = false;
  const std::size_t n = loop.pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = loop.pts[i];
    const auto& b = loop.pts[(i + 1) % n];
    if ((a[1] <= v) == (b[1] <= v)) continue;
    const double t = (v - a[1]) / (b[1] - a[1]);
    if (a[0] + t * (b[0] - a[0]) > u) inside = !inside;
  }
  return inside;
}

double loop_signed_area(const PolygonLoop& loop) {
  double s = 0.0;
  const std::size_t n = loop.pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = loop.pts[i];
    const auto& b = loop.pts[(i + 1) % n];
    s += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * s;
}

double lonlat_loop_sphere_area(const PolygonLoop& loop) {
  // Green's theorem for dA = cos(lat) dlat dlon: A = -oint sin(lat) dlon.
  // Each lon-lat linear segment integrates in closed form.
  const double d2r = kPi / 180.0;
  double a = 0.0;
  const std::size_t n = loop.pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = loop.pts[i];
    const auto& q = loop.pts[(i + 1) % n];
    const double l1 = p[0] * d2r, f1 = p[1] * d2r;
    const double l2 = q[0] * d2r, f2 = q[1] * d2r;
    const double dl = l2 - l1;
    if (dl == 0.0) continue;
    double seg;
    if (std::fabs(f2 - f1) < 1e-14) {
      seg = std::sin(0.5 * (f1 + f2)) * dl;
    } else {
      seg = dl * (std::cos(f1) - std::cos(f2)) / (f2 - f1);
    }
    a += seg;
  }
  return std::fabs(a);
}

}  // namespace spdefield

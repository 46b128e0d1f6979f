#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace spdefield {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
// Lengths on the sphere are unit-ball radians internally; the Earth radius is
// applied only at I/O boundaries.
inline constexpr double kEarthRadiusKm = 6371.0;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    const double n = norm();
    return {x / n, y / n, z / n};
  }
};

using Point3 = Vec3;

enum class DomainKind { sphere, plane };

// (lon, lat) in degrees <-> unit vector. Planar points embed as (x, y, 0).
Vec3 from_lonlat(double lon_deg, double lat_deg);
void to_lonlat(const Vec3& p, double& lon_deg, double& lat_deg);

// Geodesic distance between unit vectors, in radians.
double geodesic(const Vec3& a, const Vec3& b);

// Distance respecting the domain: geodesic on the sphere, Euclidean on the plane.
double domain_distance(DomainKind domain, const Vec3& a, const Vec3& b);

// Flat-facet area of the triangle (a, b, c) embedded in 3-space.
double facet_area(const Vec3& a, const Vec3& b, const Vec3& c);

// Spherical triangle area (solid angle) for unit vectors, sign-free.
double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

// ---------------------------------------------------------------------------
// Polygons. Coordinates are (lon, lat) degrees on the sphere --- edges linear
// in lon-lat, longitudes unwrapped along each loop --- and (x, y) on the plane.
// Containment is even-odd over all loops of a region.
// ---------------------------------------------------------------------------

struct PolygonLoop {
  std::vector<std::array<double, 2>> pts;  // closed implicitly (last != first)
};

class PolygonRegion {
public:
  PolygonRegion() = default;
  PolygonRegion(int id, std::vector<PolygonLoop> loops, DomainKind domain);

  int id() const { return id_; }
  DomainKind domain() const { return domain_; }
  const std::vector<PolygonLoop>& loops() const { return loops_; }

  bool contains(const Vec3& p) const;
  bool contains_coords(double u, double v) const;  // (lon,lat) or (x,y)

  // Simplicity check on every loop (no self-intersections).
  bool is_simple() const;

  // Area in native units: steradians on the unit sphere (lon-lat linear
  // edges integrated exactly), squared length units on the plane.
  double area() const;

private:
  struct Edge {
    double u1, v1, u2, v2;
  };
  bool contains_unwrapped(double u, double v) const;

  int id_ = 0;
  DomainKind domain_ = DomainKind::plane;
  std::vector<PolygonLoop> loops_;
  std::vector<Edge> edges_;
  // Edges bucketed by v-interval for fast even-odd queries.
  double v_lo_ = 0.0, v_hi_ = 0.0, bin_height_ = 1.0;
  std::vector<std::vector<int>> bins_;
  double u_lo_ = 0.0, u_hi_ = 0.0;
};

struct RegionPartition {
  DomainKind domain = DomainKind::sphere;
  std::vector<PolygonRegion> regions;
  int default_region = 0;

  // First region (in list order) containing p, else default_region.
  int region_of(const Vec3& p) const;
};

// Planar point-in-polygon (even-odd), single loop convenience.
bool point_in_loop(const PolygonLoop& loop, double u, double v);

// Signed area of a planar loop (positive counterclockwise).
double loop_signed_area(const PolygonLoop& loop);

// Exact area on the unit sphere enclosed by a loop with lon-lat linear edges,
// computed by Green's theorem; input degrees, result steradians (unsigned).
double lonlat_loop_sphere_area(const PolygonLoop& loop);

}  // namespace spdefield

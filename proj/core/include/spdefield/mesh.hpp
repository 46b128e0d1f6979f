#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "spdefield/geometry.hpp"

namespace spdefield {

struct TriangleMesh {
  DomainKind domain = DomainKind::sphere;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> triangle_region;  // one region id per triangle
  std::vector<int> vertex_region;    // derived; see derive_vertex_regions()

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  std::size_t edge_count() const;

  // V - E + F: 2 for a closed sphere mesh, 1 for a simply connected planar one.
  long long euler_characteristic() const;

  Vec3 centroid(std::size_t t) const;
  // Flat-facet area on the plane, spherical area on the sphere.
  double triangle_area(std::size_t t) const;
  double total_area() const;

  // Each vertex takes the smallest region id among its incident triangles.
  void derive_vertex_regions();

  // Distinct region ids present, ascending.
  std::vector<int> region_ids() const;

  // Structural checks: index validity, no degenerate triangle, conforming
  // edges (each edge on exactly 2 triangles for sphere, <= 2 for plane).
  void validate() const;
};

struct MeshQuality {
  std::size_t vertices = 0, edges = 0, triangles = 0;
  double min_edge = 0.0, max_edge = 0.0;
  double min_angle_deg = 0.0;
  std::vector<std::pair<int, std::size_t>> triangles_per_region;
};

MeshQuality mesh_quality(const TriangleMesh& mesh);

// n >= 4 points on the unit sphere along a golden-angle spiral, deterministic.
std::vector<Vec3> fibonacci_lattice(int n);

// Spherical Delaunay triangulation as the convex hull of unit vectors.
// Requires >= 4 points, no duplicates, not all coplanar; every input point
// becomes a vertex. Triangles are oriented outward (counterclockwise seen
// from outside).
TriangleMesh triangulate_sphere(const std::vector<Vec3>& points);

// Conforming planar triangulation of boundary minus holes. Every edge is at
// most max_edge long and interior angles are at least min_angle_deg
// (Delaunay refinement); polygons are (x, y) loops.
TriangleMesh triangulate_plane(const PolygonLoop& boundary,
                               const std::vector<PolygonLoop>& holes,
                               double max_edge, double min_angle_deg = 20.0);

// Merge per-region vertex sets over the sphere, deduplicate near-coincident
// vertices (tolerance in radians), then triangulate and label each triangle
// with the region of the nearest contributing vertex set.
TriangleMesh merge_and_retriangulate(
    const std::vector<std::pair<int, std::vector<Vec3>>>& vertex_sets,
    double dedup_tol = 1e-9);

// Label each triangle with the partition region containing its centroid;
// uncovered centroids get the partition default. Re-derives vertex regions.
TriangleMesh assign_regions(TriangleMesh mesh, const RegionPartition& partition);

// Submesh of the triangles whose region passes keep(region); vertices are
// compacted. vertex_of_full maps new vertex index -> original index.
TriangleMesh submesh_by_region(const TriangleMesh& mesh,
                               const std::vector<int>& keep_regions,
                               std::vector<int>* vertex_of_full = nullptr);

// Nearest-vertex / containing-triangle queries backed by a 3-d hash grid.
class MeshLocator {
public:
  explicit MeshLocator(const TriangleMesh& mesh);

  int nearest_vertex(const Vec3& p) const;

  // Containing triangle and barycentric weights; returns false if p is not
  // in any triangle (outside a planar or subset domain). On the sphere the
  // point is radially projected onto the facet.
  bool locate(const Vec3& p, int& triangle, std::array<double, 3>& bary) const;

private:
  const TriangleMesh& mesh_;
  std::vector<std::vector<int>> vertex_triangles_;
  double cell_ = 1.0;
  struct CellKey {
    long long x, y, z;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const;
  };
  std::vector<std::pair<CellKey, int>> cells_;  // sorted (cell, vertex)
  CellKey key_of(const Vec3& p) const;
  bool try_triangle(int t, const Vec3& p, std::array<double, 3>& bary) const;
};

}  // namespace spdefield

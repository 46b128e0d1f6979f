#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "spdefield/errors.hpp"
#include "spdefield/mesh.hpp"

namespace spdefield {

namespace {

constexpr double kVisibleEps = 1e-10;

struct Face {
  int v[3];
  int neighbor[3];  // across edge (v[i], v[(i+1)%3])
  Vec3 normal;      // outward, unit
  double offset;    // normal . x = offset on the plane
  std::vector<int> outside;
  bool alive = true;
};

double plane_dist(const Face& f, const Vec3& p) {
  return f.normal.dot(p) - f.offset;
}

Face make_face(const std::vector<Vec3>& pts, int a, int b, int c) {
  Face f;
  f.v[0] = a;
  f.v[1] = b;
  f.v[2] = c;
  f.neighbor[0] = f.neighbor[1] = f.neighbor[2] = -1;
  const Vec3 n = (pts[static_cast<std::size_t>(b)] - pts[static_cast<std::size_t>(a)])
                     .cross(pts[static_cast<std::size_t>(c)] - pts[static_cast<std::size_t>(a)]);
  const double len = n.norm();
  if (len <= 0.0)
    throw NumericalError("convex hull: degenerate face encountered");
  f.normal = n / len;
  f.offset = f.normal.dot(pts[static_cast<std::size_t>(a)]);
  return f;
}

void check_duplicates(const std::vector<Vec3>& pts, double tol) {
  struct Key {
    long long x, y, z;
    bool operator<(const Key& o) const {
      return std::tie(x, y, z) < std::tie(o.x, o.y, o.z);
    }
  };
  const double cell = std::max(tol, 1e-15) * 4.0;
  std::map<Key, std::vector<int>> grid;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Key k{static_cast<long long>(std::floor(pts[i].x / cell)),
                static_cast<long long>(std::floor(pts[i].y / cell)),
                static_cast<long long>(std::floor(pts[i].z / cell))};
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          auto it = grid.find(Key{k.x + dx, k.y + dy, k.z + dz});
          if (it == grid.end()) continue;
          for (int j : it->second)
            if ((pts[i] - pts[static_cast<std::size_t>(j)]).norm() < tol)
              throw std::invalid_argument(
                  "triangulate_sphere: degenerate geometry, duplicate points " +
                  std::to_string(j) + " and " + std::to_string(i));
        }
    grid[k].push_back(static_cast<int>(i));
  }
}

}  // namespace

TriangleMesh triangulate_sphere(const std::vector<Vec3>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 4)
    throw std::invalid_argument("triangulate_sphere: need at least 4 points");
  check_duplicates(points, 1e-12);

  // Initial tetrahedron from extreme points.
  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (points[static_cast<std::size_t>(i)].x < points[static_cast<std::size_t>(i0)].x) i0 = i;
  auto pt = [&points](int i) -> const Vec3& { return points[static_cast<std::size_t>(i)]; };
  int i1 = -1;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = (pt(i) - pt(i0)).norm();
    if (d > best) {
      best = d;
      i1 = i;
    }
  }
  if (best < 1e-12)
    throw std::invalid_argument("triangulate_sphere: degenerate geometry (all points coincide)");
  const Vec3 dir = (pt(i1) - pt(i0)).normalized();
  int i2 = -1;
  best = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 d = pt(i) - pt(i0);
    const double dist = (d - dir * d.dot(dir)).norm();
    if (dist > best) {
      best = dist;
      i2 = i;
    }
  }
  if (best < 1e-12)
    throw std::invalid_argument("triangulate_sphere: degenerate geometry (collinear points)");
  const Vec3 pn = (pt(i1) - pt(i0)).cross(pt(i2) - pt(i0)).normalized();
  int i3 = -1;
  best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = std::fabs(pn.dot(pt(i) - pt(i0)));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (best < 1e-12)
    throw std::invalid_argument("triangulate_sphere: degenerate geometry (coplanar points)");

  const Vec3 inner = (pt(i0) + pt(i1) + pt(i2) + pt(i3)) / 4.0;
  auto oriented = [&](int a, int b, int c) {
    Face f = make_face(points, a, b, c);
    if (plane_dist(f, inner) > 0.0) f = make_face(points, a, c, b);
    return f;
  };

  std::vector<Face> faces;
  faces.reserve(static_cast<std::size_t>(2 * n));
  faces.push_back(oriented(i0, i1, i2));
  faces.push_back(oriented(i0, i1, i3));
  faces.push_back(oriented(i0, i2, i3));
  faces.push_back(oriented(i1, i2, i3));
  {
    std::map<std::pair<int, int>, std::pair<int, int>> open;
    for (int fi = 0; fi < 4; ++fi) {
      Face& f = faces[static_cast<std::size_t>(fi)];
      for (int e = 0; e < 3; ++e) {
        const int a = f.v[e], b = f.v[(e + 1) % 3];
        auto it = open.find({b, a});
        if (it != open.end()) {
          f.neighbor[e] = it->second.first;
          faces[static_cast<std::size_t>(it->second.first)].neighbor[it->second.second] = fi;
          open.erase(it);
        } else {
          open[{a, b}] = {fi, e};
        }
      }
    }
    if (!open.empty()) throw NumericalError("convex hull: open initial tetrahedron");
  }

  // Conflict lists.
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    for (auto& f : faces) {
      if (plane_dist(f, pt(i)) > kVisibleEps) {
        f.outside.push_back(i);
        break;
      }
    }
  }

  std::vector<int> pending;
  for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi)
    if (!faces[static_cast<std::size_t>(fi)].outside.empty()) pending.push_back(fi);

  std::vector<int> visible, stack;
  std::vector<int> mark(faces.size(), 0);
  int stamp = 0;
  while (!pending.empty()) {
    const int f0 = pending.back();
    Face& front = faces[static_cast<std::size_t>(f0)];
    if (!front.alive || front.outside.empty()) {
      pending.pop_back();
      continue;
    }
    int p = -1;
    double dmax = 0.0;
    for (int q : front.outside) {
      const double d = plane_dist(front, pt(q));
      if (d > dmax) {
        dmax = d;
        p = q;
      }
    }
    if (p < 0) {
      front.outside.clear();
      pending.pop_back();
      continue;
    }

    // Visible region (BFS over face adjacency).
    ++stamp;
    visible.clear();
    stack.assign(1, f0);
    mark[static_cast<std::size_t>(f0)] = stamp;
    while (!stack.empty()) {
      const int fi = stack.back();
      stack.pop_back();
      visible.push_back(fi);
      for (int e = 0; e < 3; ++e) {
        const int g = faces[static_cast<std::size_t>(fi)].neighbor[e];
        if (g < 0 || mark[static_cast<std::size_t>(g)] == stamp) continue;
        if (plane_dist(faces[static_cast<std::size_t>(g)], pt(p)) > kVisibleEps) {
          mark[static_cast<std::size_t>(g)] = stamp;
          stack.push_back(g);
        }
      }
    }

    struct HorizonEdge {
      int a, b, outer_face, outer_slot;
    };
    std::vector<HorizonEdge> horizon;
    for (int fi : visible) {
      const Face& f = faces[static_cast<std::size_t>(fi)];
      for (int e = 0; e < 3; ++e) {
        const int g = f.neighbor[e];
        if (g >= 0 && mark[static_cast<std::size_t>(g)] == stamp) continue;
        const int a = f.v[e], b = f.v[(e + 1) % 3];
        int slot = -1;
        if (g >= 0)
          for (int s = 0; s < 3; ++s)
            if (faces[static_cast<std::size_t>(g)].v[s] == b &&
                faces[static_cast<std::size_t>(g)].v[(s + 1) % 3] == a)
              slot = s;
        horizon.push_back({a, b, g, slot});
      }
    }
    if (horizon.empty())
      throw NumericalError("convex hull: empty horizon (numerically degenerate input)");

    // New fan of faces around p, keeping the visible-side edge orientation.
    std::unordered_map<int, int> face_of_start, face_of_end;
    std::vector<int> fresh;
    fresh.reserve(horizon.size());
    for (const auto& h : horizon) {
      const int nfi = static_cast<int>(faces.size());
      Face nf = make_face(points, h.a, h.b, p);
      nf.neighbor[0] = h.outer_face;
      if (h.outer_face >= 0 && h.outer_slot >= 0)
        faces[static_cast<std::size_t>(h.outer_face)].neighbor[h.outer_slot] = nfi;
      faces.push_back(std::move(nf));
      mark.push_back(0);
      if (!face_of_start.emplace(h.a, nfi).second ||
          !face_of_end.emplace(h.b, nfi).second)
        throw NumericalError("convex hull: pinched horizon (degenerate input)");
      fresh.push_back(nfi);
    }
    for (int nfi : fresh) {
      Face& f = faces[static_cast<std::size_t>(nfi)];
      auto itn = face_of_start.find(f.v[1]);
      auto itp = face_of_end.find(f.v[0]);
      if (itn == face_of_start.end() || itp == face_of_end.end())
        throw NumericalError("convex hull: broken horizon cycle");
      f.neighbor[1] = itn->second;  // edge (b, p)
      f.neighbor[2] = itp->second;  // edge (p, a)
    }

    // Re-home conflict points of the dead region.
    for (int fi : visible) {
      Face& f = faces[static_cast<std::size_t>(fi)];
      f.alive = false;
      for (int q : f.outside) {
        if (q == p) continue;
        for (int nfi : fresh) {
          if (plane_dist(faces[static_cast<std::size_t>(nfi)], pt(q)) > kVisibleEps) {
            faces[static_cast<std::size_t>(nfi)].outside.push_back(q);
            break;
          }
        }
      }
      f.outside.clear();
      f.outside.shrink_to_fit();
    }
    for (int nfi : fresh)
      if (!faces[static_cast<std::size_t>(nfi)].outside.empty()) pending.push_back(nfi);
  }

  TriangleMesh mesh;
  mesh.domain = DomainKind::sphere;
  mesh.vertices = points;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (const auto& f : faces) {
    if (!f.alive) continue;
    mesh.triangles.push_back({f.v[0], f.v[1], f.v[2]});
    used[static_cast<std::size_t>(f.v[0])] = 1;
    used[static_cast<std::size_t>(f.v[1])] = 1;
    used[static_cast<std::size_t>(f.v[2])] = 1;
  }
  for (int i = 0; i < n; ++i)
    if (!used[static_cast<std::size_t>(i)])
      throw std::invalid_argument(
          "triangulate_sphere: degenerate geometry, point " + std::to_string(i) +
          " is not in strictly convex position");
  mesh.triangle_region.assign(mesh.triangles.size(), 0);
  mesh.derive_vertex_regions();
  return mesh;
}

}  // namespace spdefield

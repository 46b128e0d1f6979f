#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "spdefield/errors.hpp"
#include "spdefield/mesh.hpp"

// Planar mesher: incremental Delaunay with Lawson flips, segment recovery by
// edge flipping, and Delaunay refinement (circumcenter insertion with
// encroached-segment splitting) until every triangle inside the domain has
// edges <= max_edge and angles >= min_angle.

namespace spdefield {

namespace {

struct P2 {
  double x, y;
};

double orient(const P2& a, const P2& b, const P2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// > 0 when d is strictly inside the circumcircle of (a, b, c) (ccw).
double incircle(const P2& a, const P2& b, const P2& c, const P2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
         ad * (bdx * cdy - bdy * cdx);
}

double dist_point_segment(const P2& p, const P2& a, const P2& b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double L2 = vx * vx + vy * vy;
  double t = L2 > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = p.x - (a.x + t * vx), dy = p.y - (a.y + t * vy);
  return std::hypot(dx, dy);
}

class Triangulator {
public:
  Triangulator(double eps, double scale) : eps_(eps), scale_(scale) {}

  std::vector<P2> pts;

  struct Tri {
    int v[3];
    int n[3];  // neighbor across edge (v[i], v[(i+1)%3]), -1 on hull
    bool alive = true;
    bool inside = false;
  };
  std::vector<Tri> tris;
  std::set<std::pair<int, int>> constrained;

  static std::pair<int, int> key(int a, int b) {
    return {std::min(a, b), std::max(a, b)};
  }
  bool is_constrained(int a, int b) const {
    return constrained.count(key(a, b)) > 0;
  }

  void bootstrap(double x0, double y0, double x1, double y1) {
    pts = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    tris.push_back({{0, 1, 2}, {-1, 1, -1}, true, false});
    tris.push_back({{0, 2, 3}, {0, -1, -1}, true, false});
    n_aux_ = 4;
  }

  int aux_count() const { return n_aux_; }

  // Containing triangle by visibility walk; -2 with blocking constrained
  // edge reported when the walk would cross one.
  int locate(const P2& p, int hint, int* block_a = nullptr,
             int* block_b = nullptr) const {
    int t = hint;
    if (t < 0 || !tris[static_cast<std::size_t>(t)].alive) {
      t = -1;
      for (int i = static_cast<int>(tris.size()) - 1; i >= 0; --i)
        if (tris[static_cast<std::size_t>(i)].alive) {
          t = i;
          break;
        }
    }
    std::size_t guard = 4 * tris.size() + 64;
    while (guard-- > 0) {
      const Tri& tr = tris[static_cast<std::size_t>(t)];
      int worst = -1;
      double worst_val = -eps_ * scale_;
      for (int e = 0; e < 3; ++e) {
        const double o =
            orient(pts[static_cast<std::size_t>(tr.v[e])],
                   pts[static_cast<std::size_t>(tr.v[(e + 1) % 3])], p);
        if (o < worst_val) {
          worst_val = o;
          worst = e;
        }
      }
      if (worst < 0) return t;
      const int nb = tr.n[worst];
      if (nb < 0) return -1;  // walked off the hull
      if (block_a && is_constrained(tr.v[worst], tr.v[(worst + 1) % 3])) {
        *block_a = tr.v[worst];
        *block_b = tr.v[(worst + 1) % 3];
        return -2;
      }
      t = nb;
    }
    // Fallback scan (degenerate walk cycle).
    for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
      const Tri& tr = tris[static_cast<std::size_t>(i)];
      if (!tr.alive) continue;
      bool in = true;
      for (int e = 0; e < 3 && in; ++e)
        in = orient(pts[static_cast<std::size_t>(tr.v[e])],
                    pts[static_cast<std::size_t>(tr.v[(e + 1) % 3])], p) >=
             -eps_ * scale_;
      if (in) return i;
    }
    return -1;
  }

  int find_vertex_near(const P2& p, double tol) const {
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
      if (std::hypot(pts[static_cast<std::size_t>(i)].x - p.x,
                     pts[static_cast<std::size_t>(i)].y - p.y) < tol)
        return i;
    return -1;
  }

  // Inserts p; returns vertex index, or -1 if it duplicates an existing
  // vertex or cannot be located.
  int insert_point(const P2& p, int hint = -1) {
    const int t = locate(p, hint < 0 ? last_tri_ : hint);
    if (t < 0) return -1;
    const Tri& tr = tris[static_cast<std::size_t>(t)];
    // Duplicate guard.
    for (int e = 0; e < 3; ++e) {
      const P2& q = pts[static_cast<std::size_t>(tr.v[e])];
      if (std::hypot(q.x - p.x, q.y - p.y) < 1e-12 * scale_) return -1;
    }
    int on_edge = -1;
    for (int e = 0; e < 3; ++e) {
      const double o = orient(pts[static_cast<std::size_t>(tr.v[e])],
                              pts[static_cast<std::size_t>(tr.v[(e + 1) % 3])], p);
      if (std::fabs(o) < eps_ * scale_ &&
          dist_point_segment(p, pts[static_cast<std::size_t>(tr.v[e])],
                             pts[static_cast<std::size_t>(tr.v[(e + 1) % 3])]) <
              1e-9 * scale_)
        on_edge = e;
    }
    const int vi = static_cast<int>(pts.size());
    pts.push_back(p);
    if (on_edge < 0)
      split_interior(t, vi);
    else
      split_edge(t, on_edge, vi);
    return vi;
  }

  void set_last(int t) { last_tri_ = t; }

  // Sloan segment recovery: flip crossing edges until (a, b) is an edge.
  void insert_segment(int a, int b) {
    if (a == b) return;
    if (edge_exists(a, b)) {
      constrained.insert(key(a, b));
      return;
    }
    std::deque<std::pair<int, int>> crossing = collect_crossings(a, b);
    std::size_t guard = 100 * (crossing.size() + 4) * (crossing.size() + 4) + 1000;
    std::vector<std::pair<int, int>> fresh;
    while (!crossing.empty()) {
      if (guard-- == 0)
        throw NumericalError("triangulate_plane: segment recovery stalled");
      auto [u, v] = crossing.front();
      crossing.pop_front();
      int t, e;
      if (!find_edge(u, v, t, e)) continue;  // already flipped away
      if (!flippable(t, e)) {
        crossing.emplace_back(u, v);
        continue;
      }
      const auto nv = flip(t, e);
      if (segments_properly_cross(pts[static_cast<std::size_t>(nv.first)],
                                  pts[static_cast<std::size_t>(nv.second)],
                                  pts[static_cast<std::size_t>(a)],
                                  pts[static_cast<std::size_t>(b)]))
        crossing.emplace_back(nv);
      else
        fresh.push_back(nv);
    }
    if (!edge_exists(a, b))
      throw NumericalError("triangulate_plane: failed to recover a boundary segment");
    constrained.insert(key(a, b));
    // Local Delaunay restoration on the new edges.
    for (auto [u, v] : fresh) {
      int t, e;
      if (find_edge(u, v, t, e)) legalize_edge(t, e, 0);
    }
  }

  // --- refinement support -------------------------------------------------

  double min_angle_deg_of(int t) const {
    const Tri& tr = tris[static_cast<std::size_t>(t)];
    double best = 180.0;
    for (int e = 0; e < 3; ++e) {
      const P2& a = pts[static_cast<std::size_t>(tr.v[e])];
      const P2& b = pts[static_cast<std::size_t>(tr.v[(e + 1) % 3])];
      const P2& c = pts[static_cast<std::size_t>(tr.v[(e + 2) % 3])];
      const double ux = b.x - a.x, uy = b.y - a.y;
      const double vx = c.x - a.x, vy = c.y - a.y;
      const double ang = std::atan2(std::fabs(ux * vy - uy * vx),
                                    ux * vx + uy * vy) *
                         180.0 / kPi;
      best = std::min(best, ang);
    }
    return best;
  }

  double longest_edge_of(int t) const {
    const Tri& tr = tris[static_cast<std::size_t>(t)];
    double best = 0.0;
    for (int e = 0; e < 3; ++e) {
      const P2& a = pts[static_cast<std::size_t>(tr.v[e])];
      const P2& b = pts[static_cast<std::size_t>(tr.v[(e + 1) % 3])];
      best = std::max(best, std::hypot(b.x - a.x, b.y - a.y));
    }
    return best;
  }

  P2 circumcenter(int t) const {
    const Tri& tr = tris[static_cast<std::size_t>(t)];
    const P2& a = pts[static_cast<std::size_t>(tr.v[0])];
    const P2& b = pts[static_cast<std::size_t>(tr.v[1])];
    const P2& c = pts[static_cast<std::size_t>(tr.v[2])];
    const double d = 2.0 * orient(a, b, c);
    const double a2 = a.x * a.x + a.y * a.y;
    const double b2 = b.x * b.x + b.y * b.y;
    const double c2 = c.x * c.x + c.y * c.y;
    return {(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
            (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
  }

  P2 centroid(int t) const {
    const Tri& tr = tris[static_cast<std::size_t>(t)];
    const P2& a = pts[static_cast<std::size_t>(tr.v[0])];
    const P2& b = pts[static_cast<std::size_t>(tr.v[1])];
    const P2& c = pts[static_cast<std::size_t>(tr.v[2])];
    return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
  }

  bool edge_exists(int a, int b) const {
    int t, e;
    return find_edge(a, b, t, e);
  }

  // Splits constrained subsegment (a, b) at its midpoint; returns new vertex.
  int split_constrained(int a, int b) {
    const P2& pa = pts[static_cast<std::size_t>(a)];
    const P2& pb = pts[static_cast<std::size_t>(b)];
    const P2 mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    int t, e;
    if (!find_edge(a, b, t, e))
      throw NumericalError("triangulate_plane: lost a constrained edge");
    constrained.erase(key(a, b));
    const int vi = static_cast<int>(pts.size());
    pts.push_back(mid);
    // Edge may be oriented either way in t.
    const Tri& tr = tris[static_cast<std::size_t>(t)];
    int slot = -1;
    for (int s = 0; s < 3; ++s)
      if ((tr.v[s] == a && tr.v[(s + 1) % 3] == b) ||
          (tr.v[s] == b && tr.v[(s + 1) % 3] == a))
        slot = s;
    split_edge(t, slot, vi);
    constrained.insert(key(a, vi));
    constrained.insert(key(vi, b));
    return vi;
  }

  std::vector<std::pair<int, int>> constrained_list() const {
    return {constrained.begin(), constrained.end()};
  }

private:
  double eps_;
  double scale_;
  int n_aux_ = 0;
  int last_tri_ = 0;

  bool find_edge(int a, int b, int& t, int& e) const {
    for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
      const Tri& tr = tris[static_cast<std::size_t>(i)];
      if (!tr.alive) continue;
      for (int s = 0; s < 3; ++s)
        if ((tr.v[s] == a && tr.v[(s + 1) % 3] == b) ||
            (tr.v[s] == b && tr.v[(s + 1) % 3] == a)) {
          t = i;
          e = s;
          return true;
        }
    }
    return false;
  }

  static bool on_segment_1d(double a, double b, double p) {
    return p >= std::min(a, b) && p <= std::max(a, b);
  }

  bool segments_properly_cross(const P2& a, const P2& b, const P2& c,
                               const P2& d) const {
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    const double tol = eps_ * scale_;
    return ((o1 > tol && o2 < -tol) || (o1 < -tol && o2 > tol)) &&
           ((o3 > tol && o4 < -tol) || (o3 < -tol && o4 > tol));
  }

  std::deque<std::pair<int, int>> collect_crossings(int a, int b) const {
    std::deque<std::pair<int, int>> out;
    const P2& pa = pts[static_cast<std::size_t>(a)];
    const P2& pb = pts[static_cast<std::size_t>(b)];
    for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
      const Tri& tr = tris[static_cast<std::size_t>(i)];
      if (!tr.alive) continue;
      for (int s = 0; s < 3; ++s) {
        const int u = tr.v[s], v = tr.v[(s + 1) % 3];
        if (u > v) continue;
        if (u == a || u == b || v == a || v == b) continue;
        if (segments_properly_cross(pts[static_cast<std::size_t>(u)],
                                    pts[static_cast<std::size_t>(v)], pa, pb)) {
          if (is_constrained(u, v))
            throw std::invalid_argument(
                "triangulate_plane: invalid geometry (intersecting boundary segments)");
          out.emplace_back(u, v);
        }
      }
    }
    return out;
  }

  bool flippable(int t, int e) const {
    const Tri& tr = tris[static_cast<std::size_t>(t)];
    const int nb = tr.n[e];
    if (nb < 0) return false;
    const int a = tr.v[e], b = tr.v[(e + 1) % 3], c = tr.v[(e + 2) % 3];
    const Tri& nt = tris[static_cast<std::size_t>(nb)];
    int d = -1;
    for (int s = 0; s < 3; ++s)
      if (nt.v[s] != a && nt.v[s] != b) d = nt.v[s];
    const P2& pa = pts[static_cast<std::size_t>(a)];
    const P2& pb = pts[static_cast<std::size_t>(b)];
    const P2& pc = pts[static_cast<std::size_t>(c)];
    const P2& pd = pts[static_cast<std::size_t>(d)];
    const double tol = eps_ * scale_ * scale_;
    return orient(pc, pa, pd) > tol && orient(pd, pb, pc) > tol;
  }

  // Flips edge e of t; returns the new edge (c, d).
  std::pair<int, int> flip(int t1, int e1) {
    Tri& T1 = tris[static_cast<std::size_t>(t1)];
    const int t2 = T1.n[e1];
    Tri& T2 = tris[static_cast<std::size_t>(t2)];
    const int a = T1.v[e1], b = T1.v[(e1 + 1) % 3], c = T1.v[(e1 + 2) % 3];
    int e2 = -1;
    for (int s = 0; s < 3; ++s)
      if (T2.v[s] == b && T2.v[(s + 1) % 3] == a) e2 = s;
    const int d = T2.v[(e2 + 2) % 3];
    // Outer neighbors.
    const int n_ca = T1.n[(e1 + 2) % 3];  // across (c, a)
    const int n_bc = T1.n[(e1 + 1) % 3];  // across (b, c)
    const int n_ad = T2.n[(e2 + 1) % 3];  // across (a, d)
    const int n_db = T2.n[(e2 + 2) % 3];  // across (d, b)
    // t1 := (c, a, d), t2 := (d, b, c)
    T1.v[0] = c;
    T1.v[1] = a;
    T1.v[2] = d;
    T1.n[0] = n_ca;
    T1.n[1] = n_ad;
    T1.n[2] = t2;
    T2.v[0] = d;
    T2.v[1] = b;
    T2.v[2] = c;
    T2.n[0] = n_db;
    T2.n[1] = n_bc;
    T2.n[2] = t1;
    fix_neighbor(n_ca, t1, t1);
    fix_neighbor(n_ad, t2, t1);
    fix_neighbor(n_db, t1, t2);
    fix_neighbor(n_bc, t1, t2);
    return {c, d};
  }

  void fix_neighbor(int t, int, int self) {
    if (t < 0) return;
    Tri& tr = tris[static_cast<std::size_t>(t)];
    for (int s = 0; s < 3; ++s) {
      const int nb = tr.n[s];
      if (nb < 0) continue;
      const Tri& other = tris[static_cast<std::size_t>(nb)];
      // Repair slots whose edge no longer matches the neighbor.
      const int u = tr.v[s], v = tr.v[(s + 1) % 3];
      bool ok = false;
      for (int w = 0; w < 3; ++w)
        if (other.v[w] == v && other.v[(w + 1) % 3] == u) ok = true;
      if (!ok) {
        // Point at self if self shares this edge.
        const Tri& st = tris[static_cast<std::size_t>(self)];
        for (int w = 0; w < 3; ++w)
          if (st.v[w] == v && st.v[(w + 1) % 3] == u) tr.n[s] = self;
      }
    }
  }

  void split_interior(int t, int vi) {
    Tri old = tris[static_cast<std::size_t>(t)];
    const int t1 = t;
    const int t2 = static_cast<int>(tris.size());
    const int t3 = t2 + 1;
    tris[static_cast<std::size_t>(t1)] = {{old.v[0], old.v[1], vi},
                                          {old.n[0], t2, t3},
                                          true,
                                          false};
    tris.push_back({{old.v[1], old.v[2], vi}, {old.n[1], t3, t1}, true, false});
    tris.push_back({{old.v[2], old.v[0], vi}, {old.n[2], t1, t2}, true, false});
    redirect(old.n[0], old.v[1], old.v[0], t1);
    redirect(old.n[1], old.v[2], old.v[1], t2);
    redirect(old.n[2], old.v[0], old.v[2], t3);
    last_tri_ = t1;
    legalize_edge(t1, 0, 0);
    legalize_edge(t2, 0, 0);
    legalize_edge(t3, 0, 0);
  }

  void split_edge(int t, int e, int vi) {
    Tri old = tris[static_cast<std::size_t>(t)];
    const int a = old.v[e], b = old.v[(e + 1) % 3], c = old.v[(e + 2) % 3];
    const int nb = old.n[e];
    const bool was_constrained = is_constrained(a, b);
    if (was_constrained) constrained.erase(key(a, b));
    const int t1 = t;
    const int t2 = static_cast<int>(tris.size());
    // t1 := (a, vi, c), t2 := (vi, b, c)
    tris[static_cast<std::size_t>(t1)] = {{a, vi, c},
                                          {nb < 0 ? -1 : -9, t2, old.n[(e + 2) % 3]},
                                          true,
                                          false};
    tris.push_back({{vi, b, c}, {nb < 0 ? -1 : -9, old.n[(e + 1) % 3], t1}, true, false});
    redirect(old.n[(e + 2) % 3], old.v[e], old.v[(e + 2) % 3], t1);
    redirect(old.n[(e + 1) % 3], old.v[(e + 1) % 3], old.v[(e + 2) % 3] , t2);
    // Wait for neighbor side before wiring the split edge slots.
    if (nb >= 0) {
      Tri nold = tris[static_cast<std::size_t>(nb)];
      int s = -1;
      for (int w = 0; w < 3; ++w)
        if (nold.v[w] == b && nold.v[(w + 1) % 3] == a) s = w;
      const int d = nold.v[(s + 2) % 3];
      const int t3 = nb;
      const int t4 = static_cast<int>(tris.size());
      // t3 := (b, vi, d), t4 := (vi, a, d)
      tris[static_cast<std::size_t>(t3)] = {{b, vi, d},
                                            {t2, t4, nold.n[(s + 2) % 3]},
                                            true,
                                            false};
      tris.push_back({{vi, a, d}, {t1, nold.n[(s + 1) % 3], t3}, true, false});
      redirect(nold.n[(s + 2) % 3], nold.v[s], nold.v[(s + 2) % 3], t3);
      redirect(nold.n[(s + 1) % 3], nold.v[(s + 1) % 3], nold.v[(s + 2) % 3], t4);
      tris[static_cast<std::size_t>(t1)].n[0] = t4;
      tris[static_cast<std::size_t>(t2)].n[0] = t3;
      if (was_constrained) {
        constrained.insert(key(a, vi));
        constrained.insert(key(vi, b));
      }
      last_tri_ = t1;
      legalize_edge(t1, 2, 0);
      legalize_edge(t2, 1, 0);
      legalize_edge(t3, 2, 0);
      legalize_edge(t4, 1, 0);
    } else {
      tris[static_cast<std::size_t>(t1)].n[0] = -1;
      tris[static_cast<std::size_t>(t2)].n[0] = -1;
      if (was_constrained) {
        constrained.insert(key(a, vi));
        constrained.insert(key(vi, b));
      }
      last_tri_ = t1;
      legalize_edge(t1, 2, 0);
      legalize_edge(t2, 1, 0);
    }
  }

  void redirect(int t, int from_a, int from_b, int to) {
    if (t < 0) return;
    Tri& tr = tris[static_cast<std::size_t>(t)];
    for (int s = 0; s < 3; ++s)
      if (tr.v[s] == from_a && tr.v[(s + 1) % 3] == from_b) {
        tr.n[s] = to;
        return;
      }
    // Slot may be found by the shared undirected edge.
    for (int s = 0; s < 3; ++s) {
      const int u = tr.v[s], v = tr.v[(s + 1) % 3];
      if ((u == from_a && v == from_b) || (u == from_b && v == from_a)) {
        tr.n[s] = to;
        return;
      }
    }
  }

  void legalize_edge(int t, int e, int depth) {
    if (depth > 512) return;
    Tri& tr = tris[static_cast<std::size_t>(t)];
    if (!tr.alive) return;
    const int nb = tr.n[e];
    if (nb < 0) return;
    const int a = tr.v[e], b = tr.v[(e + 1) % 3], c = tr.v[(e + 2) % 3];
    if (is_constrained(a, b)) return;
    const Tri& nt = tris[static_cast<std::size_t>(nb)];
    int d = -1;
    for (int s = 0; s < 3; ++s)
      if (nt.v[s] != a && nt.v[s] != b) d = nt.v[s];
    if (d < 0) return;
    const double ic = incircle(pts[static_cast<std::size_t>(a)],
                               pts[static_cast<std::size_t>(b)],
                               pts[static_cast<std::size_t>(c)],
                               pts[static_cast<std::size_t>(d)]);
    if (ic <= eps_ * scale_ * scale_ * scale_ * scale_) return;
    if (!flippable(t, e)) return;
    flip(t, e);
    // After flip t = (c, a, d), nb = (d, b, c); legalize the far edges.
    legalize_edge(t, 1, depth + 1);   // (a, d)
    legalize_edge(nb, 0, depth + 1);  // (d, b)
  }
};

}  // namespace

TriangleMesh triangulate_plane(const PolygonLoop& boundary,
                               const std::vector<PolygonLoop>& holes,
                               double max_edge, double min_angle_deg) {
  if (boundary.pts.size() < 3)
    throw std::invalid_argument("triangulate_plane: boundary needs >= 3 vertices");
  if (!(max_edge > 0.0))
    throw std::invalid_argument("triangulate_plane: max_edge must be positive");
  {
    PolygonRegion check(0, {boundary}, DomainKind::plane);
    if (!check.is_simple())
      throw std::invalid_argument(
          "triangulate_plane: invalid geometry (self-intersecting boundary)");
  }
  for (const auto& h : holes) {
    PolygonRegion check(0, {h}, DomainKind::plane);
    if (!check.is_simple())
      throw std::invalid_argument(
          "triangulate_plane: invalid geometry (self-intersecting hole)");
  }

  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& p : boundary.pts) {
    x0 = std::min(x0, p[0]);
    y0 = std::min(y0, p[1]);
    x1 = std::max(x1, p[0]);
    y1 = std::max(y1, p[1]);
  }
  const double scale = std::max({x1 - x0, y1 - y0, max_edge});
  const double margin = 0.25 * scale;

  Triangulator tr(1e-12, scale);
  tr.bootstrap(x0 - margin, y0 - margin, x1 + margin, y1 + margin);

  // Subdivide polygon edges to <= max_edge and insert, remembering ids.
  auto insert_polyline = [&](const PolygonLoop& loop) {
    std::vector<int> ids;
    const std::size_t n = loop.pts.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = loop.pts[i];
      const auto& b = loop.pts[(i + 1) % n];
      const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      const int pieces = std::max(1, static_cast<int>(std::ceil(len / max_edge)));
      for (int s = 0; s < pieces; ++s) {
        const double t = static_cast<double>(s) / pieces;
        const P2 p{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
        int vi = tr.insert_point(p);
        if (vi < 0) vi = tr.find_vertex_near(p, 1e-12 * scale);
        if (vi < 0)
          throw NumericalError("triangulate_plane: could not place boundary vertex");
        ids.push_back(vi);
      }
    }
    return ids;
  };

  std::vector<std::vector<int>> rings;
  rings.push_back(insert_polyline(boundary));
  for (const auto& h : holes) rings.push_back(insert_polyline(h));

  // Quasi-uniform interior lattice, pruned near segments.
  {
    std::vector<std::array<P2, 2>> segs;
    auto add_segs = [&segs, max_edge](const PolygonLoop& loop) {
      const std::size_t n = loop.pts.size();
      for (std::size_t i = 0; i < n; ++i) {
        const auto& a = loop.pts[i];
        const auto& b = loop.pts[(i + 1) % n];
        segs.push_back({P2{a[0], a[1]}, P2{b[0], b[1]}});
      }
    };
    add_segs(boundary);
    for (const auto& h : holes) add_segs(h);

    const double s = 0.92 * max_edge;
    const double dy = s * std::sqrt(3.0) / 2.0;
    int row = 0;
    for (double y = y0 + 0.5 * dy; y < y1; y += dy, ++row) {
      const double xoff = (row % 2 == 0) ? 0.5 * s : 0.0;
      for (double x = x0 + xoff; x < x1; x += s) {
        if (!point_in_loop(boundary, x, y)) continue;
        bool in_hole = false;
        for (const auto& h : holes)
          if (point_in_loop(h, x, y)) {
            in_hole = true;
            break;
          }
        if (in_hole) continue;
        bool near = false;
        const P2 p{x, y};
        for (const auto& sg : segs)
          if (dist_point_segment(p, sg[0], sg[1]) < 0.5 * s) {
            near = true;
            break;
          }
        if (!near) tr.insert_point(p);
      }
    }
  }

  // Recover polygon edges as constrained segments.
  for (const auto& ring : rings) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) tr.insert_segment(ring[i], ring[(i + 1) % n]);
  }

  // Inside flags.
  auto classify = [&](int t) {
    const P2 c = tr.centroid(t);
    if (!point_in_loop(boundary, c.x, c.y)) return false;
    for (const auto& h : holes)
      if (point_in_loop(h, c.x, c.y)) return false;
    return true;
  };
  for (int t = 0; t < static_cast<int>(tr.tris.size()); ++t)
    if (tr.tris[static_cast<std::size_t>(t)].alive)
      tr.tris[static_cast<std::size_t>(t)].inside = classify(t);

  // Refinement: split encroached segments / insert circumcenters until all
  // inside triangles meet the size and angle targets.
  std::size_t inserted = 0;
  const std::size_t cap = 500000;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < static_cast<int>(tr.tris.size()); ++t) {
      auto& T = tr.tris[static_cast<std::size_t>(t)];
      if (!T.alive || !T.inside) continue;
      const bool too_big = tr.longest_edge_of(t) > max_edge * (1.0 + 1e-12);
      const bool too_thin = tr.min_angle_deg_of(t) < min_angle_deg;
      if (!too_big && !too_thin) continue;
      if (++inserted > cap)
        throw NumericalError("triangulate_plane: refinement did not terminate");

      const P2 cc = tr.circumcenter(t);
      // Encroached constrained subsegment?
      int enc_a = -1, enc_b = -1;
      for (const auto& [a, b] : tr.constrained_list()) {
        const P2& pa = tr.pts[static_cast<std::size_t>(a)];
        const P2& pb = tr.pts[static_cast<std::size_t>(b)];
        if ((pa.x - cc.x) * (pb.x - cc.x) + (pa.y - cc.y) * (pb.y - cc.y) < 0.0) {
          enc_a = a;
          enc_b = b;
          break;
        }
      }
      int vi = -1;
      if (enc_a >= 0) {
        vi = tr.split_constrained(enc_a, enc_b);
      } else {
        int ba = -1, bb = -1;
        tr.set_last(t);
        const int loc = tr.locate(cc, t, &ba, &bb);
        if (loc == -2) {
          vi = tr.split_constrained(ba, bb);
        } else if (loc >= 0) {
          vi = tr.insert_point(cc, loc);
          if (vi < 0) {
            // Duplicate circumcenter: split the longest edge midpoint instead.
            const Tri mid_of = tr.tris[static_cast<std::size_t>(t)];
            (void)mid_of;
            continue;
          }
        } else {
          continue;  // walked off the hull; triangle left as-is
        }
      }
      if (vi >= 0) {
        for (int q = 0; q < static_cast<int>(tr.tris.size()); ++q)
          if (tr.tris[static_cast<std::size_t>(q)].alive)
            tr.tris[static_cast<std::size_t>(q)].inside = classify(q);
        changed = true;
        break;  // rescan from the start with fresh flags
      }
    }
  }

  // Emit inside triangles with compacted vertices.
  TriangleMesh mesh;
  mesh.domain = DomainKind::plane;
  std::vector<int> remap(tr.pts.size(), -1);
  for (const auto& T : tr.tris) {
    if (!T.alive || !T.inside) continue;
    std::array<int, 3> tv{};
    for (int s = 0; s < 3; ++s) {
      const int v = T.v[s];
      if (remap[static_cast<std::size_t>(v)] < 0) {
        remap[static_cast<std::size_t>(v)] = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(
            {tr.pts[static_cast<std::size_t>(v)].x, tr.pts[static_cast<std::size_t>(v)].y, 0.0});
      }
      tv[static_cast<std::size_t>(s)] = remap[static_cast<std::size_t>(v)];
    }
    // Counterclockwise orientation.
    const Vec3& a = mesh.vertices[static_cast<std::size_t>(tv[0])];
    const Vec3& b = mesh.vertices[static_cast<std::size_t>(tv[1])];
    const Vec3& c = mesh.vertices[static_cast<std::size_t>(tv[2])];
    if ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x) < 0.0)
      std::swap(tv[1], tv[2]);
    mesh.triangles.push_back(tv);
  }
  if (mesh.triangles.empty())
    throw std::invalid_argument("triangulate_plane: empty triangulation (check geometry)");
  mesh.triangle_region.assign(mesh.triangles.size(), 0);
  mesh.derive_vertex_regions();
  return mesh;
}

}  // namespace spdefield

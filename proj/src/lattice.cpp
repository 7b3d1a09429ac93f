#include "qlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qlab {

namespace {

Edge normalized(Edge e) {
  if (e.first > e.second) std::swap(e.first, e.second);
  return e;
}

LatticeGeometry make_chain(int n, Boundary b) {
  if (n < 2) throw std::invalid_argument("chain needs N >= 2");
  if (b == Boundary::periodic && n < 3) {
    throw std::invalid_argument("periodic chain needs N >= 3");
  }
  LatticeGeometry g;
  g.kind = GeometryKind::chain;
  g.boundary = b;
  g.n_sites = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  if (b == Boundary::periodic) g.edges.emplace_back(n - 1, 0);
  if (b == Boundary::open) {
    for (int i = 0; i < n; ++i) g.positions.push_back({double(i), 0.0});
  }
  Permutation inv(n);
  for (int i = 0; i < n; ++i) inv[i] = n - 1 - i;
  g.symmetry_ops.push_back(inv);
  g.symmetry_names.push_back("inversion");
  if (b == Boundary::periodic) {
    Permutation shift(n);
    for (int i = 0; i < n; ++i) shift[i] = (i + 1) % n;
    g.symmetry_ops.push_back(shift);
    g.symmetry_names.push_back("translation");
  }
  return g;
}

LatticeGeometry make_square(int rows, int cols, Boundary b, GeometryKind kind) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("square needs rows, cols >= 2");
  if (b == Boundary::periodic && (rows < 3 || cols < 3)) {
    throw std::invalid_argument("periodic square needs rows, cols >= 3");
  }
  LatticeGeometry g;
  g.kind = kind;
  g.boundary = b;
  g.n_sites = rows * cols;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) g.edges.emplace_back(id(r, c), id(r, c + 1));
    if (b == Boundary::periodic) g.edges.emplace_back(id(r, cols - 1), id(r, 0));
  }
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r + 1 < rows; ++r) g.edges.emplace_back(id(r, c), id(r + 1, c));
    if (b == Boundary::periodic) g.edges.emplace_back(id(rows - 1, c), id(0, c));
  }
  if (b == Boundary::open) {
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) g.positions.push_back({double(c), double(-r)});
    }
  }
  Permutation inv(g.n_sites);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) inv[id(r, c)] = id(rows - 1 - r, cols - 1 - c);
  }
  g.symmetry_ops.push_back(inv);
  g.symmetry_names.push_back("inversion");
  if (rows == cols) {
    Permutation rot(g.n_sites);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) rot[id(r, c)] = id(c, rows - 1 - r);
    }
    g.symmetry_ops.push_back(rot);
    g.symmetry_names.push_back("rotation_c4");
  }
  return g;
}

// Triangular flake of side 4: rows of 4, 3, 2, 1 sites, 18 unit bonds.
LatticeGeometry make_triangular10() {
  LatticeGeometry g;
  g.kind = GeometryKind::triangular10;
  g.boundary = Boundary::open;
  const double h = std::sqrt(3.0) / 2.0;
  std::vector<std::vector<int>> rows;
  int next = 0;
  for (int r = 0; r < 4; ++r) {
    rows.emplace_back();
    for (int c = 0; c < 4 - r; ++c) {
      rows.back().push_back(next++);
      g.positions.push_back({c + 0.5 * r, r * h});
    }
  }
  g.n_sites = next;
  for (int r = 0; r < 4; ++r) {
    const auto& row = rows[r];
    for (std::size_t c = 0; c + 1 < row.size(); ++c) g.edges.emplace_back(row[c], row[c + 1]);
    if (r + 1 < 4) {
      const auto& up = rows[r + 1];
      for (std::size_t c = 0; c < up.size(); ++c) {
        g.edges.emplace_back(row[c], up[c]);
        g.edges.emplace_back(row[c + 1], up[c]);
      }
    }
  }
  // Symmetries found by matching rotated / reflected coordinates about the
  // centroid.
  Position centroid{0.0, 0.0};
  for (const auto& p : g.positions) {
    centroid[0] += p[0] / g.n_sites;
    centroid[1] += p[1] / g.n_sites;
  }
  auto match = [&](auto&& transform) {
    Permutation perm(g.n_sites, -1);
    for (int i = 0; i < g.n_sites; ++i) {
      const Position q = transform(g.positions[i]);
      for (int j = 0; j < g.n_sites; ++j) {
        if (std::hypot(q[0] - g.positions[j][0], q[1] - g.positions[j][1]) < 1e-9) {
          perm[i] = j;
        }
      }
      if (perm[i] < 0) throw std::logic_error("triangular symmetry mismatch");
    }
    return perm;
  };
  const double a = 2.0 * std::numbers::pi / 3.0;
  g.symmetry_ops.push_back(match([&](const Position& p) {
    const double x = p[0] - centroid[0], y = p[1] - centroid[1];
    return Position{centroid[0] + std::cos(a) * x - std::sin(a) * y,
                    centroid[1] + std::sin(a) * x + std::cos(a) * y};
  }));
  g.symmetry_names.push_back("rotation_c3");
  g.symmetry_ops.push_back(match([&](const Position& p) {
    return Position{2.0 * centroid[0] - p[0], p[1]};
  }));
  g.symmetry_names.push_back("reflection");
  return g;
}

LatticeGeometry make_cross(int m) {
  if (m < 0) throw std::invalid_argument("cross arm count m must be >= 0");
  LatticeGeometry g;
  g.kind = GeometryKind::cross;
  g.boundary = Boundary::open;
  const int arm_len = m + 1;
  g.n_sites = 5 + 4 * m;
  g.central_site = 0;
  g.positions.push_back({0.0, 0.0});
  g.site_classes.assign(g.n_sites, site_class::type1);
  g.site_classes[0] = site_class::type2;
  constexpr int dx[4] = {1, 0, -1, 0};
  constexpr int dy[4] = {0, 1, 0, -1};
  auto site = [arm_len](int arm, int j) { return 1 + arm * arm_len + j; };
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < arm_len; ++j) {
      g.positions.push_back({double(dx[k] * (j + 1)), double(dy[k] * (j + 1))});
    }
  }
  for (int k = 0; k < 4; ++k) {
    g.edges.emplace_back(0, site(k, 0));
    g.edge_classes.push_back(edge_class::center_arm);
  }
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j + 1 < arm_len; ++j) {
      g.edges.emplace_back(site(k, j), site(k, j + 1));
      g.edge_classes.push_back(edge_class::outer_arm);
    }
  }
  Permutation rot(g.n_sites), inv(g.n_sites);
  rot[0] = inv[0] = 0;
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < arm_len; ++j) {
      rot[site(k, j)] = site((k + 1) % 4, j);
      inv[site(k, j)] = site((k + 2) % 4, j);
    }
  }
  g.symmetry_ops = {inv, rot};
  g.symmetry_names = {"inversion", "rotation_c4"};
  return g;
}

}  // namespace

int LatticeGeometry::find_edge(int a, int b) const {
  const Edge key = normalized({a, b});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (normalized(edges[i]) == key) return static_cast<int>(i);
  }
  return -1;
}

LatticeGeometry build_geometry(GeometryKind kind, const std::vector<int>& size,
                               Boundary boundary) {
  auto need = [&](std::size_t n) {
    if (size.size() != n) {
      throw std::invalid_argument(to_string(kind) + " expects " + std::to_string(n) +
                                  " size value(s)");
    }
  };
  switch (kind) {
    case GeometryKind::chain:
      need(1);
      return make_chain(size[0], boundary);
    case GeometryKind::square:
      need(2);
      return make_square(size[0], size[1], boundary, GeometryKind::square);
    case GeometryKind::square4x4:
      return make_square(4, 4, boundary, GeometryKind::square4x4);
    case GeometryKind::triangular10:
      if (boundary == Boundary::periodic) {
        throw std::invalid_argument("triangular10 supports open boundary only");
      }
      return make_triangular10();
    case GeometryKind::cross:
      if (boundary == Boundary::periodic) {
        throw std::invalid_argument("cross supports open boundary only");
      }
      need(1);
      return make_cross(size[0]);
  }
  throw std::invalid_argument("unknown geometry kind");
}

LatticeGeometry with_inter_arm_edges(const LatticeGeometry& cross) {
  if (cross.kind != GeometryKind::cross) {
    throw std::invalid_argument("inter-arm edges need a cross geometry");
  }
  LatticeGeometry g = cross;
  const int arm_len = (g.n_sites - 1) / 4;
  for (int k = 0; k < 4; ++k) {
    const int a = 1 + k * arm_len, b = 1 + ((k + 1) % 4) * arm_len;
    if (g.find_edge(a, b) >= 0) continue;
    g.edges.emplace_back(a, b);
    g.edge_classes.push_back(edge_class::inter_arm);
  }
  return g;
}

bool is_edge_automorphism(const LatticeGeometry& g, const Permutation& perm) {
  if (static_cast<int>(perm.size()) != g.n_sites) return false;
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < g.n_sites; ++i) {
    if (sorted[i] != i) return false;
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    const int j = g.find_edge(perm[e.first], perm[e.second]);
    if (j < 0) return false;
    if (!g.edge_classes.empty() && g.edge_classes[i] != g.edge_classes[j]) return false;
  }
  return true;
}

std::vector<Permutation> symmetry_group(const LatticeGeometry& g) {
  Permutation id(g.n_sites);
  for (int i = 0; i < g.n_sites; ++i) id[i] = i;
  std::set<Permutation> seen{id};
  std::vector<Permutation> frontier{id};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& p : frontier) {
      for (const auto& gen : g.symmetry_ops) {
        Permutation q(g.n_sites);
        for (int i = 0; i < g.n_sites; ++i) q[i] = gen[p[i]];
        if (seen.insert(q).second) next.push_back(q);
      }
    }
    frontier = std::move(next);
  }
  std::vector<Permutation> out;
  for (const auto& p : seen) {
    if (p != id) out.push_back(p);
  }
  return out;
}

std::string to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::chain: return "chain";
    case GeometryKind::square: return "square";
    case GeometryKind::triangular10: return "triangular10";
    case GeometryKind::cross: return "cross";
    case GeometryKind::square4x4: return "square4x4";
  }
  return "?";
}

std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

GeometryKind geometry_kind_from_string(const std::string& s) {
  for (auto k : {GeometryKind::chain, GeometryKind::square, GeometryKind::triangular10,
                 GeometryKind::cross, GeometryKind::square4x4}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown geometry kind '" + s + "'");
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "open" || s == "obc") return Boundary::open;
  if (s == "periodic" || s == "pbc") return Boundary::periodic;
  throw std::invalid_argument("unknown boundary '" + s + "'");
}

}  // namespace qlab

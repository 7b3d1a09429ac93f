#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qlab {

enum class GeometryKind { chain, square, triangular10, cross, square4x4 };
enum class Boundary { open, periodic };

using Edge = std::pair<int, int>;
using Position = std::array<double, 2>;
using Permutation = std::vector<int>;

/// Coupling classes on the cross geometry. Edges of other lattices carry
/// no class.
namespace edge_class {
inline constexpr int inter_arm = 0;   // J0
inline constexpr int center_arm = 1;  // J1
inline constexpr int outer_arm = 2;   // J2
}  // namespace edge_class

/// Site labels for mixed-species arrays.
namespace site_class {
inline constexpr int type1 = 1;
inline constexpr int type2 = 2;  // the central atom of the cross
}  // namespace site_class

struct LatticeGeometry {
  GeometryKind kind = GeometryKind::chain;
  Boundary boundary = Boundary::open;
  int n_sites = 0;
  std::vector<Edge> edges;
  /// Same length as `edges` when present.
  std::vector<int> edge_classes;
  /// Lattice-unit coordinates; empty for periodic lattices.
  std::vector<Position> positions;
  /// Generators of the lattice symmetry group, each a site permutation that
  /// maps the edge set onto itself.
  std::vector<Permutation> symmetry_ops;
  std::vector<std::string> symmetry_names;
  std::vector<int> site_classes;
  std::optional<int> central_site;

  /// Index of edge {a, b} (either orientation), or -1.
  int find_edge(int a, int b) const;
};

/// `size` is {N} for chain, {rows, cols} for square, {m} for cross (N = 5 + 4m)
/// and ignored for triangular10 / square4x4.
LatticeGeometry build_geometry(GeometryKind kind, const std::vector<int>& size,
                               Boundary boundary);

/// Adds the class-J0 couplings between the innermost sites of neighbouring
/// cross arms.
LatticeGeometry with_inter_arm_edges(const LatticeGeometry& cross);

/// True when `perm` is a bijection on the sites that maps edges to edges.
bool is_edge_automorphism(const LatticeGeometry& g, const Permutation& perm);

/// Closure of the generator set under composition, identity excluded.
std::vector<Permutation> symmetry_group(const LatticeGeometry& g);

std::string to_string(GeometryKind kind);
std::string to_string(Boundary b);
GeometryKind geometry_kind_from_string(const std::string& s);
Boundary boundary_from_string(const std::string& s);

}  // namespace qlab

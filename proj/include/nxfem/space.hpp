#pragma once

#include <array>
#include <functional>
#include <vector>

#include "nxfem/geometry.hpp"
#include "nxfem/mesh.hpp"

namespace nxfem {

/// A P1 shape function active on one side of an element. Indices below
/// DofMap::num_free() are unknowns; the rest are boundary (Dirichlet) slots.
struct ActiveShape {
  int index = 0;
  int local = 0;       // vertex position in the element, selects the barycentric
  bool enriched = false;
};

/// Extended P1 space: standard nodal hats plus, for every vertex of a cut
/// element that is not on Gamma, the hat restricted to the side opposite the
/// vertex. Boundary vertices carry no unknowns: their standard and cut shapes
/// are prescribed slots (standard slots first, then cut slots).
class DofMap {
public:
  explicit DofMap(const CutGeometry& geometry);

  const CutGeometry& geometry() const { return *geometry_; }
  const Mesh& mesh() const { return geometry_->mesh(); }

  int num_free() const { return num_free_; }
  int num_standard() const { return num_standard_; }
  int num_enriched() const { return num_free_ - num_standard_; }
  int num_constrained() const { return static_cast<int>(constrained_vertices_.size()); }
  int num_shapes() const { return num_free_ + num_constrained(); }

  /// Free index of the standard shape at v, or -1 if v is a boundary vertex.
  int standard_dof(int v) const { return standard_[static_cast<std::size_t>(v)]; }
  /// Free index of the cut shape at v, or -1 if v is not enriched.
  int enriched_dof(int v) const { return enriched_[static_cast<std::size_t>(v)]; }
  /// Slot (offset from num_free()) of a boundary vertex, or -1.
  int constrained_slot(int v) const { return slot_[static_cast<std::size_t>(v)]; }
  /// Slot of the cut shape of a boundary vertex of a cut element, or -1.
  int constrained_enriched_slot(int v) const { return enriched_slot_[static_cast<std::size_t>(v)]; }
  int constrained_vertex(int slot) const {
    return constrained_vertices_[static_cast<std::size_t>(slot)];
  }
  bool constrained_is_enriched(int slot) const {
    return constrained_enriched_[static_cast<std::size_t>(slot)];
  }
  /// Side of the vertex (1 or 2), 0 if it lies on Gamma.
  int home_side(int v) const { return geometry_->vertex_side(v); }

  /// Shapes that are nonzero on side m of element t. For uncut elements the
  /// side argument is ignored.
  const std::vector<ActiveShape>& active(int t, int side) const;

private:
  const CutGeometry* geometry_;
  int num_free_ = 0;
  int num_standard_ = 0;
  std::vector<int> standard_;
  std::vector<int> enriched_;
  std::vector<int> slot_;
  std::vector<int> enriched_slot_;
  std::vector<int> constrained_vertices_;
  std::vector<bool> constrained_enriched_;
  std::vector<std::array<std::vector<ActiveShape>, 2>> active_;
};

/// Discrete function in the extended space, including prescribed boundary
/// values for the Dirichlet slots.
class FeFunction {
public:
  explicit FeFunction(const DofMap& map);
  FeFunction(const DofMap& map, std::vector<double> free_values);

  const DofMap& map() const { return *map_; }
  std::vector<double>& free() { return free_; }
  const std::vector<double>& free() const { return free_; }
  std::vector<double>& constrained() { return constrained_; }
  const std::vector<double>& constrained() const { return constrained_; }

  /// Coefficient of a shape index (free or constrained).
  double coefficient(int index) const;

  /// Sets the boundary slots from side-wise data g(x, side): standard slots
  /// take the home-side value, cut slots the difference other minus home.
  void interpolate_boundary(const std::function<double(Point, int side)>& g);

  double value(int t, int side, const std::array<double, 3>& bary) const;
  Point gradient(int t, int side) const;

private:
  const DofMap* map_;
  std::vector<double> free_;
  std::vector<double> constrained_;
};

struct FeValue {
  double value = 0.0;
  Point gradient;
};

/// Evaluates a discrete function at a physical point of element t on the
/// given side. Throws std::invalid_argument if the point is outside t.
FeValue eval_fe(const FeFunction& fun, int t, int side, Point x);

}  // namespace nxfem

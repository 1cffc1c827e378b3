#pragma once

#include <array>
#include <variant>
#include <vector>

#include "nxfem/mesh.hpp"

namespace nxfem {

/// Interface description by a level-set function. Omega_1 = {phi < 0},
/// Omega_2 = {phi > 0}, Gamma = {phi = 0}.
class LevelSet {
public:
  struct Affine {
    double a, b, c;  // a*x + b*y + c
  };
  struct Circle {
    Point center;
    double radius;
  };

  /// phi = a*x + b*y + c.
  static LevelSet affine(double a, double b, double c);
  /// phi = x2 - k*x1 - b, so Omega_1 lies below the line.
  static LevelSet line(double k, double b);
  /// phi = |x - center|^2 - r^2, so Omega_1 is the open disk.
  static LevelSet circle(Point center, double radius);
  /// phi = c everywhere; no interface.
  static LevelSet constant(double c) { return affine(0.0, 0.0, c); }

  double operator()(Point p) const;
  Point gradient(Point p) const;

  /// Side (1 or 2) containing p; points on Gamma are reported as side 2.
  int side(Point p) const { return (*this)(p) < 0.0 ? 1 : 2; }

  /// Unit normal of the exact interface at p, pointing into Omega_1.
  Point normal(Point p) const;

  const std::variant<Affine, Circle>& shape() const { return shape_; }

private:
  explicit LevelSet(std::variant<Affine, Circle> s) : shape_(s) {}
  std::variant<Affine, Circle> shape_;
};

enum class ElementClass { Inside1, Inside2, Cut };

struct SubTriangle {
  std::array<Point, 3> corners;  // counterclockwise
  int side = 1;
  double area = 0.0;
};

/// Per-element interface geometry. For Inside elements only cls and side are
/// meaningful.
struct CutInfo {
  ElementClass cls = ElementClass::Inside1;
  int side = 1;  // 1 or 2 when not cut, 0 when cut
  std::array<Point, 2> segment{};  // Gamma_{T,h}
  std::vector<SubTriangle> pieces;
  double k1 = 0.0;  // |T_1| / |T|
  double k2 = 0.0;  // |T_2| / |T|
  double length = 0.0;
  Point normal{};   // unit, pointing into Omega_1

  bool is_cut() const { return cls == ElementClass::Cut; }
  double k(int m) const { return m == 1 ? k1 : k2; }
};

/// Classification from (already snapped) vertex level-set values.
ElementClass classify_element(const std::array<double, 3>& phi);

/// Splits a triangle whose snapped vertex values have mixed signs. Edge
/// intersections come from linear interpolation of the vertex values, so the
/// interface inside the element is the straight segment Gamma_{T,h}.
/// Throws std::logic_error if the values do not describe a single crossing.
CutInfo decompose_cut_element(const std::array<Point, 3>& corners,
                              const std::array<double, 3>& phi);

/// Unit normal of Gamma_{T,h}, oriented so that phi decreases along it.
Point interface_normal(const CutInfo& info);

/// Elements whose smaller part falls below this fraction are treated as uncut.
inline constexpr double kSmallCutFraction = 1e-10;
/// Relative tolerance (times h |grad phi|) below which a vertex is put on Gamma.
inline constexpr double kVertexSnapTolerance = 1e-12;

/// Interface geometry over a whole mesh: snapped vertex values and one
/// CutInfo per element.
class CutGeometry {
public:
  CutGeometry(const Mesh& mesh, const LevelSet& levelset);

  const Mesh& mesh() const { return *mesh_; }
  const LevelSet& levelset() const { return levelset_; }

  /// Snapped level-set value at a vertex (exactly 0 for vertices on Gamma).
  double vertex_value(int v) const { return vertex_phi_[static_cast<std::size_t>(v)]; }
  /// 1 or 2 for the side of the vertex, 0 if it lies on Gamma.
  int vertex_side(int v) const;

  const CutInfo& cell(int t) const { return cells_[static_cast<std::size_t>(t)]; }
  const std::vector<CutInfo>& cells() const { return cells_; }
  std::vector<int> cut_elements() const;

private:
  const Mesh* mesh_;
  LevelSet levelset_;
  std::vector<double> vertex_phi_;
  std::vector<CutInfo> cells_;
};

/// Volume quadrature point tagged with the subdomain it belongs to.
struct VolumePoint {
  int side = 1;
  Point x;
  std::array<double, 3> bary{};  // w.r.t. the parent element
  double weight = 0.0;
};

struct InterfacePoint {
  Point x;
  std::array<double, 3> bary{};
  double weight = 0.0;
};

/// Barycentric coordinates of p with respect to the triangle.
std::array<double, 3> barycentric(const std::array<Point, 3>& tri, Point p);

/// Side-tagged volume quadrature over an element. Uncut elements use the
/// rule on the whole triangle; cut elements use it on every sub-triangle.
std::vector<VolumePoint> volume_quadrature(const std::array<Point, 3>& corners,
                                           const CutInfo& info, int degree);

/// Gauss quadrature on Gamma_{T,h}; empty for uncut elements.
std::vector<InterfacePoint> interface_quadrature(const std::array<Point, 3>& corners,
                                                 const CutInfo& info, int num_points = 3);

}  // namespace nxfem

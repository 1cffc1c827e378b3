#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nxfem {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a);

/// Signed area of the triangle (a, b, c); positive for counterclockwise order.
double signed_area(Point a, Point b, Point c);

struct Rectangle {
  Point lo;
  Point hi;

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double area() const { return width() * height(); }
};

using Triangle = std::array<int, 3>;

/// Conforming triangulation of a rectangle. Immutable once built.
class Mesh {
public:
  Mesh(Rectangle domain, std::vector<Point> vertices, std::vector<Triangle> triangles,
       std::vector<bool> boundary);

  const Rectangle& domain() const { return domain_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const Triangle& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }

  bool is_boundary(int i) const { return boundary_[static_cast<std::size_t>(i)]; }

  std::array<Point, 3> corners(int t) const;
  double area(int t) const { return areas_[static_cast<std::size_t>(t)]; }
  /// Diameter h_T (longest edge).
  double diameter(int t) const { return diameters_[static_cast<std::size_t>(t)]; }
  /// Global mesh size h = max h_T.
  double h() const { return h_; }
  /// Constant gradients of the three barycentric (P1 nodal) shape functions.
  const std::array<Point, 3>& shape_gradients(int t) const {
    return gradients_[static_cast<std::size_t>(t)];
  }

private:
  Rectangle domain_;
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<bool> boundary_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  std::vector<std::array<Point, 3>> gradients_;
  double h_ = 0.0;
};

/// N x N uniform triangulation; every cell is split along its lower-left to
/// upper-right diagonal. Vertices are numbered row-major from domain.lo.
Mesh build_uniform_mesh(const Rectangle& domain, int n);

}  // namespace nxfem

#include "nxfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nxfem {

double norm(Point a) { return std::hypot(a.x, a.y); }

double signed_area(Point a, Point b, Point c) { return 0.5 * cross(b - a, c - a); }

Mesh::Mesh(Rectangle domain, std::vector<Point> vertices, std::vector<Triangle> triangles,
           std::vector<bool> boundary)
    : domain_(domain),
      vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_(std::move(boundary)) {
  if (boundary_.size() != vertices_.size()) {
    throw std::invalid_argument("Mesh: boundary flags do not match vertex count");
  }
  areas_.reserve(triangles_.size());
  diameters_.reserve(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto c = corners(static_cast<int>(t));
    const double a = signed_area(c[0], c[1], c[2]);
    if (!(a > 0.0)) {
      throw std::invalid_argument("Mesh: triangle " + std::to_string(t) +
                                  " is not counterclockwise");
    }
    areas_.push_back(a);
    const double d = std::max({norm(c[1] - c[0]), norm(c[2] - c[1]), norm(c[0] - c[2])});
    diameters_.push_back(d);
    std::array<Point, 3> g;
    for (int i = 0; i < 3; ++i) {
      // Rotated opposite edge over twice the area.
      const Point e = c[(i + 2) % 3] - c[(i + 1) % 3];
      g[static_cast<std::size_t>(i)] = (0.5 / a) * Point{-e.y, e.x};
    }
    gradients_.push_back(g);
    h_ = std::max(h_, d);
  }
}

std::array<Point, 3> Mesh::corners(int t) const {
  const auto& tri = triangle(t);
  return {vertex(tri[0]), vertex(tri[1]), vertex(tri[2])};
}

Mesh build_uniform_mesh(const Rectangle& domain, int n) {
  if (n < 1) {
    throw std::invalid_argument("build_uniform_mesh: n must be >= 1");
  }
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw std::invalid_argument("build_uniform_mesh: degenerate rectangle");
  }

  const int nv = n + 1;
  std::vector<Point> vertices;
  std::vector<bool> boundary;
  vertices.reserve(static_cast<std::size_t>(nv * nv));
  boundary.reserve(static_cast<std::size_t>(nv * nv));
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nv; ++i) {
      // Pin the last row/column to the exact domain edge.
      const double x = i == n ? domain.hi.x : domain.lo.x + domain.width() * i / n;
      const double y = j == n ? domain.hi.y : domain.lo.y + domain.height() * j / n;
      vertices.push_back({x, y});
      boundary.push_back(i == 0 || j == 0 || i == n || j == n);
    }
  }

  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * nv + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + nv;
      const int v11 = v01 + 1;
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }
  return Mesh(domain, std::move(vertices), std::move(triangles), std::move(boundary));
}

}  // namespace nxfem

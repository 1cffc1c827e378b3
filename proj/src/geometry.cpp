#include "nxfem/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "nxfem/quadrature.hpp"

namespace nxfem {

LevelSet LevelSet::affine(double a, double b, double c) { return LevelSet(Affine{a, b, c}); }

LevelSet LevelSet::line(double k, double b) { return affine(-k, 1.0, -b); }

LevelSet LevelSet::circle(Point center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("LevelSet::circle: radius must be positive");
  return LevelSet(Circle{center, radius});
}

double LevelSet::operator()(Point p) const {
  if (const auto* a = std::get_if<Affine>(&shape_)) return a->a * p.x + a->b * p.y + a->c;
  const auto& c = std::get<Circle>(shape_);
  const Point d = p - c.center;
  return d.x * d.x + d.y * d.y - c.radius * c.radius;
}

Point LevelSet::gradient(Point p) const {
  if (const auto* a = std::get_if<Affine>(&shape_)) return {a->a, a->b};
  const auto& c = std::get<Circle>(shape_);
  return 2.0 * (p - c.center);
}

Point LevelSet::normal(Point p) const {
  const Point g = gradient(p);
  const double len = nxfem::norm(g);
  if (!(len > 0.0)) throw std::domain_error("LevelSet::normal: vanishing gradient");
  return (-1.0 / len) * g;
}

ElementClass classify_element(const std::array<double, 3>& phi) {
  int neg = 0;
  int pos = 0;
  for (double v : phi) {
    if (v < 0.0) ++neg;
    if (v > 0.0) ++pos;
  }
  if (neg > 0 && pos > 0) return ElementClass::Cut;
  return neg > 0 ? ElementClass::Inside1 : ElementClass::Inside2;
}

namespace {

int side_of(double v) { return v < 0.0 ? 1 : 2; }

Point interpolate_zero(Point a, Point b, double fa, double fb) {
  const double t = fa / (fa - fb);
  return a + t * (b - a);
}

SubTriangle make_piece(Point a, Point b, Point c, int side) {
  double area = signed_area(a, b, c);
  if (area < 0.0) {
    std::swap(b, c);
    area = -area;
  }
  return {{a, b, c}, side, area};
}

}  // namespace

Point interface_normal(const CutInfo& info) {
  if (!info.is_cut()) throw std::logic_error("interface_normal: element is not cut");
  if (!(info.length > 0.0)) throw std::logic_error("interface_normal: zero-length segment");
  return info.normal;
}

CutInfo decompose_cut_element(const std::array<Point, 3>& corners,
                              const std::array<double, 3>& phi) {
  if (classify_element(phi) != ElementClass::Cut) {
    throw std::logic_error("decompose_cut_element: vertex values do not change sign");
  }
  CutInfo info;
  info.cls = ElementClass::Cut;
  info.side = 0;

  int zeros = 0;
  int zero_index = -1;
  for (int i = 0; i < 3; ++i) {
    if (phi[i] == 0.0) {
      ++zeros;
      zero_index = i;
    }
  }

  if (zeros == 0) {
    // The vertex whose sign differs from the other two sits alone on its side.
    int lone = -1;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      const int k = (i + 2) % 3;
      if ((phi[i] < 0.0) != (phi[j] < 0.0) && (phi[i] < 0.0) != (phi[k] < 0.0)) lone = i;
    }
    if (lone < 0) throw std::logic_error("decompose_cut_element: expected two crossing edges");
    const int j = (lone + 1) % 3;
    const int k = (lone + 2) % 3;
    const Point pj = interpolate_zero(corners[lone], corners[j], phi[lone], phi[j]);
    const Point pk = interpolate_zero(corners[lone], corners[k], phi[lone], phi[k]);
    const int lone_side = side_of(phi[lone]);
    const int other_side = 3 - lone_side;
    info.segment = {pj, pk};
    info.pieces.push_back(make_piece(corners[lone], pj, pk, lone_side));
    info.pieces.push_back(make_piece(pj, corners[j], corners[k], other_side));
    info.pieces.push_back(make_piece(pj, corners[k], pk, other_side));
  } else if (zeros == 1) {
    // Gamma passes through a vertex and crosses the opposite edge.
    const int z = zero_index;
    const int i = (z + 1) % 3;
    const int j = (z + 2) % 3;
    const Point q = interpolate_zero(corners[i], corners[j], phi[i], phi[j]);
    info.segment = {corners[z], q};
    info.pieces.push_back(make_piece(corners[z], corners[i], q, side_of(phi[i])));
    info.pieces.push_back(make_piece(corners[z], q, corners[j], side_of(phi[j])));
  } else {
    throw std::logic_error("decompose_cut_element: degenerate crossing");
  }

  double a1 = 0.0;
  double a2 = 0.0;
  for (const auto& piece : info.pieces) {
    if (!(piece.area > 0.0)) throw std::logic_error("decompose_cut_element: empty sub-triangle");
    (piece.side == 1 ? a1 : a2) += piece.area;
  }
  info.k1 = a1 / (a1 + a2);
  info.k2 = a2 / (a1 + a2);

  const Point tangent = info.segment[1] - info.segment[0];
  info.length = nxfem::norm(tangent);
  if (!(info.length > 0.0)) throw std::logic_error("decompose_cut_element: zero-length segment");
  Point n{-tangent.y / info.length, tangent.x / info.length};

  // Gradient of the linear interpolant of phi; phi must decrease along n.
  const double area2 = 2.0 * signed_area(corners[0], corners[1], corners[2]);
  Point grad{0.0, 0.0};
  for (int a = 0; a < 3; ++a) {
    const Point e = corners[(a + 2) % 3] - corners[(a + 1) % 3];
    grad = grad + (phi[a] / area2) * Point{-e.y, e.x};
  }
  if (dot(n, grad) > 0.0) n = -1.0 * n;
  info.normal = n;
  return info;
}

CutGeometry::CutGeometry(const Mesh& mesh, const LevelSet& levelset)
    : mesh_(&mesh), levelset_(levelset) {
  vertex_phi_.reserve(mesh.num_vertices());
  for (const Point& p : mesh.vertices()) {
    double v = levelset(p);
    const double tol = kVertexSnapTolerance * mesh.h() * nxfem::norm(levelset.gradient(p));
    if (std::abs(v) <= tol) v = 0.0;
    vertex_phi_.push_back(v);
  }

  cells_.reserve(mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(static_cast<int>(t));
    const std::array<double, 3> phi{vertex_value(tri[0]), vertex_value(tri[1]),
                                     vertex_value(tri[2])};
    const ElementClass cls = classify_element(phi);
    CutInfo info;
    if (cls == ElementClass::Cut) {
      info = decompose_cut_element(mesh.corners(static_cast<int>(t)), phi);
      if (std::min(info.k1, info.k2) < kSmallCutFraction) {
        const int dominant = info.k1 >= info.k2 ? 1 : 2;
        info = CutInfo{};
        info.cls = dominant == 1 ? ElementClass::Inside1 : ElementClass::Inside2;
        info.side = dominant;
      }
    } else {
      info.cls = cls;
      info.side = cls == ElementClass::Inside1 ? 1 : 2;
    }
    cells_.push_back(std::move(info));
  }
}

int CutGeometry::vertex_side(int v) const {
  const double phi = vertex_value(v);
  if (phi < 0.0) return 1;
  if (phi > 0.0) return 2;
  return 0;
}

std::vector<int> CutGeometry::cut_elements() const {
  std::vector<int> out;
  for (std::size_t t = 0; t < cells_.size(); ++t) {
    if (cells_[t].is_cut()) out.push_back(static_cast<int>(t));
  }
  return out;
}

std::array<double, 3> barycentric(const std::array<Point, 3>& tri, Point p) {
  const double total = signed_area(tri[0], tri[1], tri[2]);
  const double l0 = signed_area(p, tri[1], tri[2]) / total;
  const double l1 = signed_area(tri[0], p, tri[2]) / total;
  return {l0, l1, 1.0 - l0 - l1};
}

std::vector<VolumePoint> volume_quadrature(const std::array<Point, 3>& corners,
                                           const CutInfo& info, int degree) {
  const TriangleRule& rule = triangle_rule(degree);
  std::vector<VolumePoint> out;
  auto add_triangle = [&](const std::array<Point, 3>& tri, double area, int side) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& b = rule.points[q];
      const Point x = b[0] * tri[0] + b[1] * tri[1] + b[2] * tri[2];
      out.push_back({side, x, barycentric(corners, x), rule.weights[q] * area});
    }
  };
  if (!info.is_cut()) {
    add_triangle(corners, signed_area(corners[0], corners[1], corners[2]), info.side);
    return out;
  }
  out.reserve(rule.points.size() * info.pieces.size());
  for (const auto& piece : info.pieces) add_triangle(piece.corners, piece.area, piece.side);
  return out;
}

std::vector<InterfacePoint> interface_quadrature(const std::array<Point, 3>& corners,
                                                 const CutInfo& info, int num_points) {
  const SegmentRule& rule = gauss_rule(num_points);
  std::vector<InterfacePoint> out;
  if (!info.is_cut()) return out;
  const Point a = info.segment[0];
  const Point d = info.segment[1] - a;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point x = a + rule.points[q] * d;
    out.push_back({x, barycentric(corners, x), rule.weights[q] * info.length});
  }
  return out;
}

}  // namespace nxfem

#include "nxfem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nxfem/quadrature.hpp"

namespace nxfem {
namespace {

/// Splits element contributions into the free block and the boundary block.
class TripletSink {
public:
  explicit TripletSink(const DofMap& map) : nf_(map.num_free()), nc_(map.num_constrained()) {}

  void add(int row, int col, double value) {
    if (row >= nf_) return;
    if (col < nf_) {
      free_.push_back({row, col, value});
    } else {
      coupling_.push_back({row, col - nf_, value});
    }
  }

  SystemMatrix finish() {
    return {CsrMatrix::from_triplets(nf_, nf_, std::move(free_)),
            CsrMatrix::from_triplets(nf_, nc_, std::move(coupling_))};
  }

private:
  int nf_;
  int nc_;
  std::vector<Triplet> free_;
  std::vector<Triplet> coupling_;
};

void check_map(const DofMap& map) {
  if (map.num_free() == 0) throw std::invalid_argument("assembly: dof map has no unknowns");
}

/// Shape present on a cut element, with its activity on each side.
struct CutShape {
  ActiveShape shape;
  bool on1 = false;
  bool on2 = false;
};

std::vector<CutShape> cut_shapes(const DofMap& map, int t) {
  std::vector<CutShape> out;
  auto find = [&](const ActiveShape& s) -> CutShape& {
    for (auto& c : out) {
      if (c.shape.index == s.index && c.shape.enriched == s.enriched) return c;
    }
    out.push_back({s, false, false});
    return out.back();
  };
  for (const auto& s : map.active(t, 1)) find(s).on1 = true;
  for (const auto& s : map.active(t, 2)) find(s).on2 = true;
  return out;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DataEvaluationError(std::string("non-finite ") + what);
}

}  // namespace

Vector SystemMatrix::apply(const FeFunction& fun) const {
  Vector y = free * fun.free();
  coupling.multiply_add(1.0, fun.constrained(), y);
  return y;
}

QuadratureCache::QuadratureCache(const CutGeometry& geometry, int degree) : degree_(degree) {
  const Mesh& m = geometry.mesh();
  offsets_.reserve(m.num_triangles() + 1);
  offsets_.push_back(0);
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const int ti = static_cast<int>(t);
    auto pts = volume_quadrature(m.corners(ti), geometry.cell(ti), degree);
    for (auto& p : pts) {
      points_.push_back(p);
      elements_.push_back(ti);
    }
    offsets_.push_back(points_.size());
  }
}

Vector QuadratureCache::sample(const SideFunction& fun) const {
  Vector out(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) out[i] = fun(points_[i].x, points_[i].side);
  return out;
}

Vector QuadratureCache::sample(const FeFunction& fun) const {
  Vector out(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    out[i] = fun.value(elements_[i], points_[i].side, points_[i].bary);
  }
  return out;
}

SystemMatrix assemble_stiffness(const DofMap& map, const Coefficients& coeffs,
                                const NitscheParams& params) {
  check_map(map);
  const Mesh& mesh = map.mesh();
  const CutGeometry& geo = map.geometry();
  TripletSink sink(map);

  for (std::size_t ti = 0; ti < mesh.num_triangles(); ++ti) {
    const int t = static_cast<int>(ti);
    const CutInfo& info = geo.cell(t);
    const auto& grads = mesh.shape_gradients(t);

    if (!info.is_cut()) {
      const double scale = coeffs(info.side) * mesh.area(t);
      const auto& shapes = map.active(t, info.side);
      for (const auto& a : shapes) {
        for (const auto& b : shapes) {
          sink.add(a.index, b.index, scale * dot(grads[a.local], grads[b.local]));
        }
      }
      continue;
    }

    for (int side = 1; side <= 2; ++side) {
      double sub_area = 0.0;
      for (const auto& piece : info.pieces) {
        if (piece.side == side) sub_area += piece.area;
      }
      const double scale = coeffs(side) * sub_area;
      const auto& shapes = map.active(t, side);
      for (const auto& a : shapes) {
        for (const auto& b : shapes) {
          sink.add(a.index, b.index, scale * dot(grads[a.local], grads[b.local]));
        }
      }
    }

    // Interface terms: jump and weighted normal flux of every shape. With
    // [v] = v1 - v2 the consistent flux uses the normal leaving Omega_1.
    const auto shapes = cut_shapes(map, t);
    const Point n = -1.0 * info.normal;
    const double lambda = params.penalty(mesh.diameter(t), coeffs);
    std::vector<double> jump_sign(shapes.size());
    std::vector<double> flux(shapes.size());
    for (std::size_t a = 0; a < shapes.size(); ++a) {
      const auto& s = shapes[a];
      jump_sign[a] = (s.on1 ? 1.0 : 0.0) - (s.on2 ? 1.0 : 0.0);
      const double w = (s.on1 ? info.k1 * coeffs.alpha1 : 0.0) +
                       (s.on2 ? info.k2 * coeffs.alpha2 : 0.0);
      flux[a] = w * dot(grads[s.shape.local], n);
    }
    for (const auto& q : interface_quadrature(mesh.corners(t), info)) {
      for (std::size_t a = 0; a < shapes.size(); ++a) {
        const double ja = jump_sign[a] * q.bary[shapes[a].shape.local];
        for (std::size_t b = 0; b < shapes.size(); ++b) {
          const double jb = jump_sign[b] * q.bary[shapes[b].shape.local];
          const double v = -flux[b] * ja - flux[a] * jb + lambda * ja * jb;
          if (v != 0.0) sink.add(shapes[a].shape.index, shapes[b].shape.index, q.weight * v);
        }
      }
    }
  }
  return sink.finish();
}

SystemMatrix assemble_mass(const DofMap& map) {
  check_map(map);
  const Mesh& mesh = map.mesh();
  const CutGeometry& geo = map.geometry();
  TripletSink sink(map);
  for (std::size_t ti = 0; ti < mesh.num_triangles(); ++ti) {
    const int t = static_cast<int>(ti);
    for (const auto& q : volume_quadrature(mesh.corners(t), geo.cell(t), 2)) {
      const auto& shapes = map.active(t, q.side);
      for (const auto& a : shapes) {
        for (const auto& b : shapes) {
          sink.add(a.index, b.index, q.weight * q.bary[a.local] * q.bary[b.local]);
        }
      }
    }
  }
  return sink.finish();
}

Vector volume_moment(const DofMap& map, const QuadratureCache& cache,
                     std::span<const double> values) {
  if (values.size() != cache.size()) {
    throw std::invalid_argument("volume_moment: value count does not match quadrature");
  }
  const int nf = map.num_free();
  Vector b(static_cast<std::size_t>(nf), 0.0);
  for (std::size_t i = 0; i < cache.size(); ++i) {
    const VolumePoint& q = cache.point(i);
    const double wq = q.weight * values[i];
    for (const auto& s : map.active(cache.element_of(i), q.side)) {
      if (s.index < nf) b[s.index] += wq * q.bary[s.local];
    }
  }
  return b;
}

Vector interface_load(const DofMap& map, const InterfaceFunction& g) {
  const Mesh& mesh = map.mesh();
  const CutGeometry& geo = map.geometry();
  const int nf = map.num_free();
  Vector b(static_cast<std::size_t>(nf), 0.0);
  for (int t : geo.cut_elements()) {
    const CutInfo& info = geo.cell(t);
    for (const auto& q : interface_quadrature(mesh.corners(t), info)) {
      // g is the flux jump along the normal into Omega_1, hence the minus sign.
      const double gv = -g(q.x);
      check_finite(gv, "interface data");
      // Side-1 trace takes k2, side-2 trace takes k1.
      for (int side = 1; side <= 2; ++side) {
        const double w = q.weight * gv * (side == 1 ? info.k2 : info.k1);
        for (const auto& s : map.active(t, side)) {
          if (s.index < nf) b[s.index] += w * q.bary[s.local];
        }
      }
    }
  }

  // Gamma may run exactly along a mesh edge (both end vertices snapped onto
  // it, side 1 on one face and side 2 on the other). Test functions are
  // continuous there, so the data term is (g, v) on the edge, taken once from
  // the side-1 element.
  struct EdgeOnGamma {
    int element, local_a, local_b;
  };
  std::map<std::pair<int, int>, std::vector<EdgeOnGamma>> candidates;
  for (std::size_t ti = 0; ti < mesh.num_triangles(); ++ti) {
    const int t = static_cast<int>(ti);
    const auto& tri = mesh.triangle(t);
    for (int a = 0; a < 3; ++a) {
      const int i = (a + 1) % 3;
      const int j = (a + 2) % 3;
      if (geo.vertex_side(tri[i]) != 0 || geo.vertex_side(tri[j]) != 0) continue;
      candidates[std::minmax(tri[i], tri[j])].push_back({t, i, j});
    }
  }
  const SegmentRule& rule = gauss_rule(3);
  for (const auto& [edge, faces] : candidates) {
    if (faces.size() != 2) continue;
    const int s0 = geo.cell(faces[0].element).side;
    const int s1 = geo.cell(faces[1].element).side;
    if (s0 + s1 != 3) continue;
    const EdgeOnGamma& e = s0 == 1 ? faces[0] : faces[1];
    const auto& tri = mesh.triangle(e.element);
    const Point pa = mesh.vertex(tri[e.local_a]);
    const Point pb = mesh.vertex(tri[e.local_b]);
    const double len = nxfem::norm(pb - pa);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q];
      const double gv = -g(pa + s * (pb - pa));
      check_finite(gv, "interface data");
      std::array<double, 3> bary{};
      bary[e.local_a] = 1.0 - s;
      bary[e.local_b] = s;
      for (const auto& sh : map.active(e.element, 1)) {
        if (sh.index < nf) b[sh.index] += rule.weights[q] * len * gv * bary[sh.local];
      }
    }
  }
  return b;
}

Vector assemble_load(const DofMap& map, const QuadratureCache& cache, const SideFunction& f,
                     const InterfaceFunction& g, std::span<const double> control) {
  if (!control.empty() && control.size() != cache.size()) {
    throw std::invalid_argument("assemble_load: control does not match quadrature");
  }
  Vector source(cache.size(), 0.0);
  for (std::size_t i = 0; i < cache.size(); ++i) {
    const VolumePoint& q = cache.point(i);
    double v = f ? f(q.x, q.side) : 0.0;
    check_finite(v, "source data");
    if (!control.empty()) {
      check_finite(control[i], "control value");
      v += control[i];
    }
    source[i] = v;
  }
  Vector b = volume_moment(map, cache, source);
  if (g) axpy(1.0, interface_load(map, g), b);
  return b;
}

double evaluate_form(const FeFunction& w, const FeFunction& v, const Coefficients& coeffs,
                     const NitscheParams& params) {
  const DofMap& map = w.map();
  const Mesh& mesh = map.mesh();
  const CutGeometry& geo = map.geometry();
  double total = 0.0;
  for (std::size_t ti = 0; ti < mesh.num_triangles(); ++ti) {
    const int t = static_cast<int>(ti);
    const CutInfo& info = geo.cell(t);
    const auto corners = mesh.corners(t);
    for (const auto& q : volume_quadrature(corners, info, 2)) {
      total += q.weight * coeffs(q.side) * dot(w.gradient(t, q.side), v.gradient(t, q.side));
    }
    if (!info.is_cut()) continue;
    const Point n = -1.0 * info.normal;
    const double lambda = params.penalty(mesh.diameter(t), coeffs);
    const double flux_w = info.k1 * coeffs.alpha1 * dot(w.gradient(t, 1), n) +
                          info.k2 * coeffs.alpha2 * dot(w.gradient(t, 2), n);
    const double flux_v = info.k1 * coeffs.alpha1 * dot(v.gradient(t, 1), n) +
                          info.k2 * coeffs.alpha2 * dot(v.gradient(t, 2), n);
    for (const auto& q : interface_quadrature(corners, info)) {
      const double jw = w.value(t, 1, q.bary) - w.value(t, 2, q.bary);
      const double jv = v.value(t, 1, q.bary) - v.value(t, 2, q.bary);
      total += q.weight * (-flux_w * jv - flux_v * jw + lambda * jw * jv);
    }
  }
  return total;
}

}  // namespace nxfem

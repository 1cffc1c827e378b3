#include "nxfem/space.hpp"

#include <stdexcept>

namespace nxfem {

DofMap::DofMap(const CutGeometry& geometry) : geometry_(&geometry) {
  const Mesh& m = geometry.mesh();
  const auto nv = m.num_vertices();
  standard_.assign(nv, -1);
  enriched_.assign(nv, -1);
  slot_.assign(nv, -1);

  for (std::size_t v = 0; v < nv; ++v) {
    if (m.is_boundary(static_cast<int>(v))) {
      slot_[v] = static_cast<int>(constrained_vertices_.size());
      constrained_vertices_.push_back(static_cast<int>(v));
    } else {
      standard_[v] = num_free_++;
    }
  }
  num_standard_ = num_free_;

  std::vector<bool> wants_enrichment(nv, false);
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    if (!geometry.cell(static_cast<int>(t)).is_cut()) continue;
    for (int v : m.triangle(static_cast<int>(t))) {
      if (!m.is_boundary(v) && geometry.vertex_side(v) != 0) {
        wants_enrichment[static_cast<std::size_t>(v)] = true;
      }
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (wants_enrichment[v]) enriched_[v] = num_free_++;
  }

  // Boundary vertices of cut elements keep their cut shape, but as a
  // prescribed slot after the standard boundary slots.
  enriched_slot_.assign(nv, -1);
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    if (!geometry.cell(static_cast<int>(t)).is_cut()) continue;
    for (int v : m.triangle(static_cast<int>(t))) {
      const auto vi = static_cast<std::size_t>(v);
      if (m.is_boundary(v) && geometry.vertex_side(v) != 0 && enriched_slot_[vi] < 0) {
        enriched_slot_[vi] = 0;
      }
    }
  }
  constrained_enriched_.assign(constrained_vertices_.size(), false);
  for (std::size_t v = 0; v < nv; ++v) {
    if (enriched_slot_[v] < 0) continue;
    enriched_slot_[v] = static_cast<int>(constrained_vertices_.size());
    constrained_vertices_.push_back(static_cast<int>(v));
    constrained_enriched_.push_back(true);
  }

  active_.resize(m.num_triangles());
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangle(static_cast<int>(t));
    for (int side = 1; side <= 2; ++side) {
      auto& list = active_[t][static_cast<std::size_t>(side - 1)];
      for (int a = 0; a < 3; ++a) {
        const int v = tri[static_cast<std::size_t>(a)];
        const int s = standard_dof(v);
        list.push_back({s >= 0 ? s : num_free_ + constrained_slot(v), a, false});
      }
      for (int a = 0; a < 3; ++a) {
        const int v = tri[static_cast<std::size_t>(a)];
        if (home_side(v) == side) continue;
        if (enriched_dof(v) >= 0) {
          list.push_back({enriched_dof(v), a, true});
        } else if (constrained_enriched_slot(v) >= 0) {
          list.push_back({num_free_ + constrained_enriched_slot(v), a, true});
        }
      }
    }
  }
}

const std::vector<ActiveShape>& DofMap::active(int t, int side) const {
  const CutInfo& info = geometry_->cell(t);
  const int s = info.is_cut() ? side : info.side;
  if (s != 1 && s != 2) throw std::invalid_argument("DofMap::active: side must be 1 or 2");
  return active_[static_cast<std::size_t>(t)][static_cast<std::size_t>(s - 1)];
}

FeFunction::FeFunction(const DofMap& map)
    : map_(&map),
      free_(static_cast<std::size_t>(map.num_free()), 0.0),
      constrained_(static_cast<std::size_t>(map.num_constrained()), 0.0) {}

FeFunction::FeFunction(const DofMap& map, std::vector<double> free_values)
    : map_(&map),
      free_(std::move(free_values)),
      constrained_(static_cast<std::size_t>(map.num_constrained()), 0.0) {
  if (free_.size() != static_cast<std::size_t>(map.num_free())) {
    throw std::invalid_argument("FeFunction: coefficient vector has wrong length");
  }
}

double FeFunction::coefficient(int index) const {
  const int nf = map_->num_free();
  return index < nf ? free_[static_cast<std::size_t>(index)]
                    : constrained_[static_cast<std::size_t>(index - nf)];
}

void FeFunction::interpolate_boundary(const std::function<double(Point, int side)>& g) {
  for (int s = 0; s < map_->num_constrained(); ++s) {
    const int v = map_->constrained_vertex(s);
    const Point x = map_->mesh().vertex(v);
    const int home = map_->home_side(v) == 0 ? 1 : map_->home_side(v);
    double value = g(x, home);
    if (map_->constrained_is_enriched(s)) value = g(x, 3 - home) - value;
    constrained_[static_cast<std::size_t>(s)] = value;
  }
}

double FeFunction::value(int t, int side, const std::array<double, 3>& bary) const {
  double sum = 0.0;
  for (const auto& sh : map_->active(t, side)) {
    sum += coefficient(sh.index) * bary[static_cast<std::size_t>(sh.local)];
  }
  return sum;
}

Point FeFunction::gradient(int t, int side) const {
  const auto& grads = map_->mesh().shape_gradients(t);
  Point g{0.0, 0.0};
  for (const auto& sh : map_->active(t, side)) {
    g = g + coefficient(sh.index) * grads[static_cast<std::size_t>(sh.local)];
  }
  return g;
}

FeValue eval_fe(const FeFunction& fun, int t, int side, Point x) {
  const auto bary = barycentric(fun.map().mesh().corners(t), x);
  for (double b : bary) {
    if (b < -1e-10) throw std::invalid_argument("eval_fe: point outside element");
  }
  return {fun.value(t, side, bary), fun.gradient(t, side)};
}

}  // namespace nxfem

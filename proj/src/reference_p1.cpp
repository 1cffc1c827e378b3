#include "nxfem/reference_p1.hpp"

namespace nxfem::reference {
namespace {

std::vector<int> interior_numbering(const Mesh& mesh, int& count) {
  std::vector<int> id(mesh.num_vertices(), -1);
  count = 0;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (!mesh.is_boundary(static_cast<int>(v))) id[v] = count++;
  }
  return id;
}

template <typename Local>
CsrMatrix assemble(const Mesh& mesh, bool interior_only, Local&& local) {
  int n = 0;
  std::vector<int> id = interior_numbering(mesh, n);
  if (!interior_only) {
    n = static_cast<int>(mesh.num_vertices());
    for (std::size_t v = 0; v < id.size(); ++v) id[v] = static_cast<int>(v);
  }
  std::vector<Triplet> trip;
  for (const auto& tri : mesh.triangles()) {
    const Point p0 = mesh.vertex(tri[0]);
    const Point p1 = mesh.vertex(tri[1]);
    const Point p2 = mesh.vertex(tri[2]);
    // b_i = y_j - y_k, c_i = x_k - x_j for cyclic (i, j, k).
    const double b[3] = {p1.y - p2.y, p2.y - p0.y, p0.y - p1.y};
    const double c[3] = {p2.x - p1.x, p0.x - p2.x, p1.x - p0.x};
    const double area = 0.5 * (c[2] * b[1] - c[1] * b[2]);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int gi = id[static_cast<std::size_t>(tri[i])];
        const int gj = id[static_cast<std::size_t>(tri[j])];
        if (gi < 0 || gj < 0) continue;
        trip.push_back({gi, gj, local(i, j, b, c, area)});
      }
    }
  }
  return CsrMatrix::from_triplets(n, n, std::move(trip));
}

}  // namespace

CsrMatrix p1_stiffness(const Mesh& mesh, double alpha) {
  return assemble(mesh, true, [alpha](int i, int j, const double* b, const double* c, double area) {
    return alpha * (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
  });
}

CsrMatrix p1_mass(const Mesh& mesh) {
  return assemble(mesh, true, [](int i, int j, const double*, const double*, double area) {
    return area / 12.0 * (i == j ? 2.0 : 1.0);
  });
}

CsrMatrix p1_full_mass(const Mesh& mesh) {
  return assemble(mesh, false, [](int i, int j, const double*, const double*, double area) {
    return area / 12.0 * (i == j ? 2.0 : 1.0);
  });
}

Vector p1_constant_load(const Mesh& mesh, double c) {
  int n = 0;
  const std::vector<int> id = interior_numbering(mesh, n);
  Vector out(static_cast<std::size_t>(n), 0.0);
  for (const auto& tri : mesh.triangles()) {
    const auto a = signed_area(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]));
    for (int v : tri) {
      const int g = id[static_cast<std::size_t>(v)];
      if (g >= 0) out[static_cast<std::size_t>(g)] += c * a / 3.0;
    }
  }
  return out;
}

}  // namespace nxfem::reference

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nxfem/geometry.hpp"

using namespace nxfem;

namespace {

const std::array<Point, 3> kRef{Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.0, 1.0}};

std::array<double, 3> sample(const LevelSet& ls, const std::array<Point, 3>& c) {
  return {ls(c[0]), ls(c[1]), ls(c[2])};
}

double side_area(const CutInfo& info, int side) {
  double a = 0.0;
  for (const auto& p : info.pieces) {
    if (p.side == side) a += p.area;
  }
  return a;
}

double interface_length(int n, double r) {
  const Mesh mesh = build_uniform_mesh({{-1.0, -1.0}, {1.0, 1.0}}, n);
  const CutGeometry geo(mesh, LevelSet::circle({0.0, 0.0}, r));
  double len = 0.0;
  for (int t : geo.cut_elements()) len += geo.cell(t).length;
  return len;
}

}  // namespace

TEST(Classify, UniformAndMixedSigns) {
  EXPECT_EQ(classify_element({-1.0, -1.0, -1.0}), ElementClass::Inside1);
  EXPECT_EQ(classify_element({2.0, 1.0, 3.0}), ElementClass::Inside2);
  EXPECT_EQ(classify_element({-1.0, 1.0, 1.0}), ElementClass::Cut);
}

TEST(Classify, ZeroVertexWithUniformSignIsInside) {
  EXPECT_EQ(classify_element({0.0, 1.0, 2.0}), ElementClass::Inside2);
  EXPECT_EQ(classify_element({-1.0, 0.0, -2.0}), ElementClass::Inside1);
}

TEST(Decompose, ReferenceTriangleVerticalLine) {
  const LevelSet ls = LevelSet::affine(1.0, 0.0, -0.5);
  const CutInfo info = decompose_cut_element(kRef, sample(ls, kRef));
  ASSERT_TRUE(info.is_cut());
  EXPECT_EQ(info.pieces.size(), 3u);
  EXPECT_NEAR(info.k2, 0.25, 1e-15);
  EXPECT_NEAR(info.k1, 0.75, 1e-15);
  EXPECT_NEAR(side_area(info, 2), 0.125, 1e-15);
  EXPECT_NEAR(info.length, 0.5, 1e-15);
  const Point a = info.segment[0];
  const Point b = info.segment[1];
  const bool order = a.y < b.y;
  const Point lo = order ? a : b;
  const Point hi = order ? b : a;
  EXPECT_NEAR(lo.x, 0.5, 1e-15);
  EXPECT_NEAR(lo.y, 0.0, 1e-15);
  EXPECT_NEAR(hi.x, 0.5, 1e-15);
  EXPECT_NEAR(hi.y, 0.5, 1e-15);
  for (const auto& p : info.pieces) {
    EXPECT_GT(p.area, 0.0);
    EXPECT_GT(signed_area(p.corners[0], p.corners[1], p.corners[2]), 0.0);
  }
}

TEST(Decompose, CutThroughVertexGivesTwoPieces) {
  // phi = x2 - x1 vanishes at (0,0) and crosses the opposite edge at (0.5,0.5).
  const LevelSet ls = LevelSet::affine(-1.0, 1.0, 0.0);
  const CutInfo info = decompose_cut_element(kRef, sample(ls, kRef));
  ASSERT_TRUE(info.is_cut());
  EXPECT_EQ(info.pieces.size(), 2u);
  EXPECT_NEAR(info.k1, 0.5, 1e-15);
  EXPECT_NEAR(info.k2, 0.5, 1e-15);
  EXPECT_NEAR(info.length, std::sqrt(0.5), 1e-15);
}

TEST(Decompose, VertexTouchingInterfaceIsNotCut) {
  const LevelSet ls = LevelSet::affine(1.0, 1.0, 0.0);
  EXPECT_EQ(classify_element(sample(ls, kRef)), ElementClass::Inside2);
  EXPECT_THROW(decompose_cut_element(kRef, sample(ls, kRef)), std::logic_error);
}

TEST(Decompose, RejectsUncutValues) {
  EXPECT_THROW(decompose_cut_element(kRef, {-1.0, -2.0, -3.0}), std::logic_error);
}

TEST(Decompose, RelabelingInvariance) {
  const LevelSet ls = LevelSet::affine(0.7, 1.3, -0.6);
  const std::array<Point, 3> tri{Point{0.1, 0.0}, Point{1.0, 0.2}, Point{0.3, 0.9}};
  const CutInfo base = decompose_cut_element(tri, sample(ls, tri));
  for (int shift = 1; shift < 3; ++shift) {
    std::array<Point, 3> rotated{};
    for (int i = 0; i < 3; ++i) rotated[i] = tri[(i + shift) % 3];
    const CutInfo info = decompose_cut_element(rotated, sample(ls, rotated));
    EXPECT_NEAR(side_area(info, 1), side_area(base, 1), 1e-13);
    EXPECT_NEAR(side_area(info, 2), side_area(base, 2), 1e-13);
    EXPECT_NEAR(info.length, base.length, 1e-13);
    EXPECT_NEAR(info.normal.x, base.normal.x, 1e-13);
    EXPECT_NEAR(info.normal.y, base.normal.y, 1e-13);
  }
}

TEST(Normal, VerticalAndHorizontalCuts) {
  const CutInfo v = decompose_cut_element(kRef, sample(LevelSet::affine(1.0, 0.0, -0.5), kRef));
  EXPECT_NEAR(interface_normal(v).x, -1.0, 1e-15);
  EXPECT_NEAR(interface_normal(v).y, 0.0, 1e-15);
  const CutInfo h = decompose_cut_element(kRef, sample(LevelSet::affine(0.0, 1.0, -0.3), kRef));
  EXPECT_NEAR(interface_normal(h).x, 0.0, 1e-15);
  EXPECT_NEAR(interface_normal(h).y, -1.0, 1e-15);
}

TEST(Normal, UncutElementThrows) {
  CutInfo info;
  EXPECT_THROW(interface_normal(info), std::logic_error);
}

TEST(Normal, CircleSegmentsFollowExactNormal) {
  const double r = 0.5;
  const LevelSet ls = LevelSet::circle({0.0, 0.0}, r);
  for (int n : {16, 32, 64}) {
    const Mesh mesh = build_uniform_mesh({{-1.0, -1.0}, {1.0, 1.0}}, n);
    const CutGeometry geo(mesh, ls);
    double worst = 0.0;
    for (int t : geo.cut_elements()) {
      const CutInfo& c = geo.cell(t);
      const Point mid = 0.5 * (c.segment[0] + c.segment[1]);
      worst = std::max(worst, norm(c.normal - ls.normal(mid)));
      EXPECT_NEAR(norm(c.normal), 1.0, 1e-14);
    }
    EXPECT_LT(worst, mesh.h()) << "n=" << n;
  }
  const Mesh mesh = build_uniform_mesh({{-1.0, -1.0}, {1.0, 1.0}}, 64);
  const CutGeometry geo(mesh, ls);
  for (int t : geo.cut_elements()) {
    const CutInfo& c = geo.cell(t);
    const Point mid = 0.5 * (c.segment[0] + c.segment[1]);
    if (norm(mid - Point{r, 0.0}) < mesh.h()) {
      // The midpoint sits up to h away from (r, 0): the angle is at most ~h / r.
      EXPECT_NEAR(c.normal.x, -1.0, 3.0 * mesh.h());
      EXPECT_NEAR(c.normal.y, 0.0, 3.0 * mesh.h());
    }
  }
}

TEST(CutGeometry, SnapsVerticesOnInterface) {
  const Mesh mesh = build_uniform_mesh({{0.0, 0.0}, {1.0, 1.0}}, 4);
  const CutGeometry geo(mesh, LevelSet::affine(1.0, 0.0, -0.5 - 1e-16));
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const double x = mesh.vertex(static_cast<int>(v)).x;
    if (x == 0.5) {
      EXPECT_EQ(geo.vertex_side(static_cast<int>(v)), 0);
      EXPECT_EQ(geo.vertex_value(static_cast<int>(v)), 0.0);
    }
  }
  EXPECT_TRUE(geo.cut_elements().empty());
}

TEST(CutGeometry, SmallCutsAreAbsorbed) {
  const Mesh mesh = build_uniform_mesh({{0.0, 0.0}, {1.0, 1.0}}, 4);
  const CutGeometry geo(mesh, LevelSet::affine(1.0, 0.0, -0.25 - 1e-7));
  int cut = 0;
  for (int t : geo.cut_elements()) {
    const CutInfo& c = geo.cell(t);
    EXPECT_GE(std::min(c.k1, c.k2), kSmallCutFraction);
    ++cut;
  }
  // Only the triangles with two vertices on x = 0.25 keep a usable cut.
  EXPECT_EQ(cut, 4);
}

TEST(CutGeometry, FractionsAndAreasOnExamples) {
  const LevelSet shapes[] = {LevelSet::line(-std::sqrt(3.0) / 3.0, 0.6), LevelSet::circle({0, 0}, 0.5),
                             LevelSet::circle({0.1, -0.2}, std::sqrt(3.0) / 4.0)};
  for (const LevelSet& ls : shapes) {
    const Mesh mesh = build_uniform_mesh({{-1.0, -1.0}, {1.0, 1.0}}, 32);
    const CutGeometry geo(mesh, ls);
    ASSERT_FALSE(geo.cut_elements().empty());
    for (int t : geo.cut_elements()) {
      const CutInfo& c = geo.cell(t);
      EXPECT_NEAR(c.k1 + c.k2, 1.0, 1e-14);
      EXPECT_GT(c.k1, 0.0);
      EXPECT_GT(c.k2, 0.0);
      EXPECT_NEAR(c.k1 * mesh.area(t), side_area(c, 1), 1e-12 * mesh.area(t));
      for (const auto& p : c.pieces) EXPECT_GT(p.area, 0.0);
    }
  }
}

TEST(CutGeometry, DiskAreaConvergesToExactAndPixelCount) {
  const double r = 0.5;
  const LevelSet ls = LevelSet::circle({0.0, 0.0}, r);
  // Pixel-counting oracle for the disk area.
  const int pixels = 2000;
  const double dx = 2.0 / pixels;
  long inside = 0;
  for (int i = 0; i < pixels; ++i) {
    for (int j = 0; j < pixels; ++j) {
      if (ls({-1.0 + (i + 0.5) * dx, -1.0 + (j + 0.5) * dx}) < 0.0) ++inside;
    }
  }
  const double pixel_area = static_cast<double>(inside) * dx * dx;
  EXPECT_NEAR(pixel_area, std::numbers::pi * r * r, 1e-3);

  const int n = 64;
  const Mesh mesh = build_uniform_mesh({{-1.0, -1.0}, {1.0, 1.0}}, n);
  const CutGeometry geo(mesh, ls);
  double a1 = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const CutInfo& c = geo.cell(static_cast<int>(t));
    if (c.is_cut()) {
      a1 += side_area(c, 1);
    } else if (c.side == 1) {
      a1 += mesh.area(static_cast<int>(t));
    }
  }
  const double h = mesh.h();
  EXPECT_LT(std::abs(a1 - std::numbers::pi * r * r), h * h);
  EXPECT_LT(std::abs(a1 - pixel_area), h * h + 1e-3);
}

TEST(CutGeometry, PolygonalLengthConvergesAtSecondOrder) {
  const double r = 0.5;
  const double exact = 2.0 * std::numbers::pi * r;
  const double e16 = std::abs(interface_length(16, r) - exact);
  const double e32 = std::abs(interface_length(32, r) - exact);
  const double e64 = std::abs(interface_length(64, r) - exact);
  EXPECT_NEAR(e16 / e32, 4.0, 0.8);
  EXPECT_NEAR(e32 / e64, 4.0, 0.8);
}

TEST(VolumeQuadrature, UncutElementUsesStandardRule) {
  CutInfo info;
  info.side = 1;
  const auto q = volume_quadrature(kRef, info, 2);
  EXPECT_EQ(q.size(), 3u);
  double w = 0.0;
  for (const auto& p : q) w += p.weight;
  EXPECT_NEAR(w, 0.5, 1e-15);
}

TEST(VolumeQuadrature, CutWeightsMatchSideAreas) {
  const CutInfo info = decompose_cut_element(kRef, sample(LevelSet::affine(1.0, 0.0, -0.5), kRef));
  for (int degree : {2, 4, 6}) {
    double w1 = 0.0;
    double w2 = 0.0;
    for (const auto& p : volume_quadrature(kRef, info, degree)) {
      (p.side == 1 ? w1 : w2) += p.weight;
      EXPECT_EQ(p.side, p.x.x > 0.5 ? 2 : 1);
    }
    EXPECT_NEAR(w2, 0.125, 1e-14);
    EXPECT_NEAR(w1, 0.375, 1e-14);
  }
  EXPECT_THROW(volume_quadrature(kRef, info, 3), std::invalid_argument);
}

TEST(VolumeQuadrature, PartitionOfTheDomain) {
  const Mesh mesh = build_uniform_mesh({{-1.0, -1.0}, {1.0, 1.0}}, 24);
  const CutGeometry geo(mesh, LevelSet::circle({0.0, 0.0}, 0.5));
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    for (const auto& p : volume_quadrature(mesh.corners(static_cast<int>(t)), geo.cell(static_cast<int>(t)), 4)) {
      total += p.weight;
    }
  }
  EXPECT_NEAR(total, 4.0, 4.0 * 1e-13);
}

TEST(InterfaceQuadrature, WeightsSumToSegmentLength) {
  const Mesh mesh = build_uniform_mesh({{-1.0, -1.0}, {1.0, 1.0}}, 16);
  const LevelSet ls = LevelSet::circle({0.0, 0.0}, 0.5);
  const CutGeometry geo(mesh, ls);
  for (int t : geo.cut_elements()) {
    const CutInfo& c = geo.cell(t);
    for (int np : {2, 3}) {
      double w = 0.0;
      for (const auto& q : interface_quadrature(mesh.corners(t), c, np)) {
        w += q.weight;
        EXPECT_NEAR(q.bary[0] + q.bary[1] + q.bary[2], 1.0, 1e-14);
        // Points lie on the linear interpolant's zero line.
        const auto& tri = mesh.triangle(t);
        const double phi_h = q.bary[0] * geo.vertex_value(tri[0]) + q.bary[1] * geo.vertex_value(tri[1]) +
                             q.bary[2] * geo.vertex_value(tri[2]);
        EXPECT_NEAR(phi_h, 0.0, 1e-13);
      }
      EXPECT_NEAR(w, c.length, 1e-14);
    }
  }
  CutInfo uncut;
  EXPECT_TRUE(interface_quadrature(kRef, uncut).empty());
}

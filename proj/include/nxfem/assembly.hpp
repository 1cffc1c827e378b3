#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nxfem/geometry.hpp"
#include "nxfem/linalg.hpp"
#include "nxfem/space.hpp"

namespace nxfem {

struct Coefficients {
  double alpha1 = 1.0;
  double alpha2 = 1.0;

  double operator()(int side) const { return side == 1 ? alpha1 : alpha2; }
  double max() const { return alpha1 > alpha2 ? alpha1 : alpha2; }
};

/// Interface penalty lambda|_T = ctilde * max(alpha1, alpha2) / h_T.
struct NitscheParams {
  double ctilde = 10.0;

  double penalty(double h_t, const Coefficients& c) const { return ctilde * c.max() / h_t; }
};

/// Operator restricted to the unknowns, together with the block that couples
/// them to the Dirichlet slots.
struct SystemMatrix {
  CsrMatrix free;      // num_free x num_free
  CsrMatrix coupling;  // num_free x num_constrained

  /// Rows of the full operator applied to fun (unknowns and boundary values).
  Vector apply(const FeFunction& fun) const;
};

class DataEvaluationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Data given per subdomain; side is 1 or 2.
using SideFunction = std::function<double(Point, int side)>;
/// Data given on the interface.
using InterfaceFunction = std::function<double(Point)>;

/// Side-tagged volume quadrature points of every element, stored contiguously
/// so that fields sampled at them (for example the control) can be kept as
/// plain vectors.
class QuadratureCache {
public:
  QuadratureCache(const CutGeometry& geometry, int degree);

  int degree() const { return degree_; }
  std::size_t size() const { return points_.size(); }
  const VolumePoint& point(std::size_t i) const { return points_[i]; }
  int element_of(std::size_t i) const { return elements_[i]; }
  std::size_t begin(int t) const { return offsets_[static_cast<std::size_t>(t)]; }
  std::size_t end(int t) const { return offsets_[static_cast<std::size_t>(t) + 1]; }

  /// Samples a side function at every point.
  Vector sample(const SideFunction& fun) const;
  /// Samples a discrete function at every point.
  Vector sample(const FeFunction& fun) const;

private:
  int degree_;
  std::vector<VolumePoint> points_;
  std::vector<int> elements_;
  std::vector<std::size_t> offsets_;
};

/// Nitsche-XFEM stiffness
///   (alpha grad w, grad v)_{O1 u O2} - ({alpha d_n w}, [v]) - ({alpha d_n v}, [w])
///   + lambda ([w], [v])
/// with {q} = k1 q1 + k2 q2, [v] = v1 - v2 on Gamma_{T,h} and d_n taken along
/// the segment normal leaving Omega_1 (the opposite of CutInfo::normal).
SystemMatrix assemble_stiffness(const DofMap& map, const Coefficients& coeffs,
                                const NitscheParams& params);

/// Extended mass matrix, integrated on the cut sub-triangles.
SystemMatrix assemble_mass(const DofMap& map);

/// Entries (q, v_i) for a field q given by its values at the cache points.
Vector volume_moment(const DofMap& map, const QuadratureCache& cache,
                     std::span<const double> values);

/// -(k2 g, v_1)_Gamma - (k1 g, v_2)_Gamma for g = [alpha d_n y] along the
/// normal into Omega_1. The side-1 trace is weighted by k2 and the side-2
/// trace by k1.
Vector interface_load(const DofMap& map, const InterfaceFunction& g);

/// Right-hand side (u + f, v) plus interface_load(g). The
/// control is given at the cache points; an empty span means u = 0. A null
/// g skips the interface terms.
Vector assemble_load(const DofMap& map, const QuadratureCache& cache, const SideFunction& f,
                     const InterfaceFunction& g, std::span<const double> control);

/// a_h(w, v) evaluated directly by quadrature from the two discrete
/// functions, without the assembled matrix.
double evaluate_form(const FeFunction& w, const FeFunction& v, const Coefficients& coeffs,
                     const NitscheParams& params);

}  // namespace nxfem

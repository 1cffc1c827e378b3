#pragma once

#include <vector>

#include "nxfem/linalg.hpp"
#include "nxfem/mesh.hpp"

namespace nxfem::reference {

/// Textbook conforming P1 matrices on the interior vertices of a mesh,
/// numbered in increasing vertex order. Written from the classical element
/// formulas, independently of the cut-element assembly, to serve as an
/// oracle on meshes without an interface.
CsrMatrix p1_stiffness(const Mesh& mesh, double alpha = 1.0);
CsrMatrix p1_mass(const Mesh& mesh);
/// Full mass matrix including boundary vertices, indexed by vertex.
CsrMatrix p1_full_mass(const Mesh& mesh);
/// Load vector of a constant source c: sum of c |T| / 3 over touching elements.
Vector p1_constant_load(const Mesh& mesh, double c);

}  // namespace nxfem::reference

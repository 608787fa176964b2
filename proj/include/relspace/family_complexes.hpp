#pragma once

#include <string>
#include <vector>

#include "relspace/arrangement.hpp"
#include "relspace/complexes.hpp"
#include "relspace/lattice.hpp"

namespace relspace {

/// A relation complex for one of the infinite Coxeter families, built from
/// explicit basis-and-sign formulas instead of kernel computations, together
/// with a contracting homotopy in closed form.
///
/// For family "A" the complex lives on the partition lattice: the bottom
/// piece is the ambient space and every flat whose partition has a unique
/// non-singleton block carries a one-dimensional piece.  For "B", "D" and
/// "Phi" the pieces sit on signed-partition flats: flats with a unique signed
/// block carry a line, and fully-collapsed flats carry an explicit kernel
/// inside the span of the signed basis vectors on their support.
struct ClosedFormComplex {
  std::string family;
  int n = 0;
  int m = 0;
  Arrangement arr;
  ArrLattice lattice;
  GradedComplex complex;
  LHomotopy homotopy;
  /// Piece dimension each flat should have by the closed-form counting
  /// rules; the constructed complex is compared against this in
  /// check_closed_form.
  std::vector<std::size_t> formula_dim;
};

/// Builds the closed-form complex for family "A" (n >= 1), "B" (n >= 1),
/// "D" (n >= 2) or "Phi" (0 <= m <= n).  For "B" and "D" the parameter m is
/// ignored and fixed to n and 0 respectively.
ClosedFormComplex closed_form_complex(const std::string& family, int n, int m = 0);

/// Verifies everything the closed form promises: the boundary squares to
/// zero and the complex is exact, the piece dimensions follow the counting
/// formulas and agree flat-by-flat with the relation complex of the same
/// arrangement, and the stored homotopy contracts the full complex.
CheckReport check_closed_form(const ClosedFormComplex& c);

}  // namespace relspace

#ifndef SPECGLUE_CORE_CYLINDER_HPP
#define SPECGLUE_CORE_CYLINDER_HPP

#include <string>
#include <vector>

#include "core/oracle.hpp"
#include "core/spectra.hpp"

namespace sg {

// Square of the model operator on the cylinder [0, r] x Y acting on degree-q
// forms, with `bc` at the near end and Dirichlet at the far end.
struct CylinderProblem {
  int q = 0;
  double r = 1.0;
  Bc bc = Bc::Rel;
  const BoundarySpectrum* spectrum = nullptr;

  void validate() const;
};

// One per-eigenvalue family {base + ladder} of the separated cylinder
// spectrum. base = 0 encodes the kernel ladders.
struct ModeFamily {
  double base = 0.0;
  Series series = Series::Integer;
  int mult = 1;
  int source_q = -1;          // boundary degree feeding the family
  Sector sector = Sector::Plus;
  bool tan_slot = true;       // trace component: degree q (tan) or q-1 (nor)
};

// Exact family decomposition of the cylinder spectrum for the requested
// boundary condition, kernel ladders included.
std::vector<ModeFamily> cylinder_spectrum(const CylinderProblem& p);

// End condition seen by one (slot, sector) component at an end carrying `bc`.
End slot_end(Bc bc, bool tan_slot, Sector sector);

// -zeta'(0) of the cylinder problem assembled from the per-family closed
// forms; the divergent parts are routed through the zeta engine.
Bounded logdet_closed_form(const CylinderProblem& p);

struct OracleOptions {
  bool fd_check = true;       // cross-check sampled factors by finite differences
  double fd_tol = 5e-6;
};

// The same quantity by the independent route: every one-dimensional factor
// is evaluated numerically (fundamental solution; finite-difference
// determinants on sampled factors), with the regularized divergent sums
// r sqrt(lambda) and log lambda shared with the closed form through the
// zeta engine.
Bounded logdet_mode_oracle(const CylinderProblem& p, const OracleOptions& opt = {});

// Dirichlet condition at both ends (the middle piece of a gluing).
Bounded logdet_dirichlet_piece(const BoundarySpectrum& s, int q, double len);

// The same boundary condition at both ends of the cylinder (used by the
// gluing arithmetic); requires an acyclic spectrum.
Bounded logdet_both_ends(const BoundarySpectrum& s, int q, double len, Bc bc);

// log of prod (1 + 2 e^{-r mu} / (e^{r mu} - e^{-r mu})) over the plus
// sector of degree q; equals sum log coth(r mu).
double coth_product_log(const BoundarySpectrum& s, int q, double r);

// sum_q (-1)^{q+1} q logdet(q) over form degrees 0..m for a fixed bc.
Bounded alternating_sum(const BoundarySpectrum& s, double r, Bc bc);
// Same with the parity-alternating condition (variant 0: pminus on even
// degrees; variant 1: pplus on even degrees).
Bounded alternating_sum_tilde(const BoundarySpectrum& s, double r, int variant);

struct IdentityReport {
  std::string quantity;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double bound = 0.0;
  std::string notes;
};

// Closed-form difference identities between boundary conditions at fixed
// degree (pminus vs rel, pplus vs rel) and for the alternating sums.
IdentityReport bc_difference_identity(const BoundarySpectrum& s, int q, double r,
                                      Bc a);
IdentityReport alternating_difference_identity(const BoundarySpectrum& s, double r,
                                               int item);  // 3, 4 or 5

// Derivative-free check of the Neumann/Dirichlet ladder gap on the plus
// sector of one degree: continued product zetas against
// 1/2 log Det + log coth-product.
IdentityReport series_gap_identity(const BoundarySpectrum& s, int q, double r,
                                   double ladder_cutoff = 2500.0);

}  // namespace sg

#endif

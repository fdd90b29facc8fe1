#ifndef SPECGLUE_CORE_DTN_HPP
#define SPECGLUE_CORE_DTN_HPP

#include <functional>
#include <string>
#include <vector>

#include "core/cylinder.hpp"
#include "core/spectra.hpp"

namespace sg {

enum class DtnBranch { Coth, Tanh };

// One per-mode scalar block of the two-sided Neumann-jump operator.
struct DtnEntry {
  double mu = 0.0;  // sqrt of the boundary eigenvalue
  DtnBranch branch = DtnBranch::Coth;
  double q2 = 0.0;     // far-side jump value
  double value = 0.0;  // q2 + mu + branch correction
  int mult = 1;
  int source_q = 0;
  Sector sector = Sector::Plus;
  bool tan_slot = true;
};

struct DtnZeroEntry {
  double value = 0.0;  // 1/r or 0 per the kernel case split
  int mult = 0;
};

struct DtnOperator {
  int q = 0;
  double r = 1.0;
  Bc bc = Bc::Rel;
  std::vector<DtnEntry> entries;
  std::vector<DtnZeroEntry> zero_entries;
};

// Hermitian positive-definite overlap matrix of boundary traces of a kernel
// basis. Only the empty (acyclic) state is exercised by the operations.
struct KernelOverlapMatrix {
  int dim = 0;
  std::vector<double> entries;  // row-major dim x dim
  bool empty() const { return dim == 0; }
  void validate() const;
};

// Neumann jump of the harmonic extension into a length-L cylinder with a
// Dirichlet far end: mu coth(mu L), with the mu -> 0 limit 1/L.
double q2_cylinder(double mu, double L);
// The same value from a numerical two-point boundary value solve.
double q2_cylinder_bvp(double mu, double L);

using FarProvider = std::function<double(double mu)>;

// Per-mode assembly of the jump operator for trace degree q with `bc` at the
// near end of the length-r cylinder and far data from `far`.
DtnOperator dtn_assemble(const BoundarySpectrum& s, int q, double r, Bc bc,
                         const FarProvider& far);

// log Det of the assembled operator, split as log Det(2|A|) plus an
// absolutely convergent correction sum.
Bounded logdet_dtn(const DtnOperator& op, const BoundarySpectrum& s);

struct GluingReport {
  std::string quantity;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double bound = 0.0;
  std::string notes;
};

// Surgery identity for the cylinder-union-cylinder model: determinant of the
// joined problem against pieces + jump operator + universal constant.
GluingReport bfk_check(const BoundarySpectrum& s, int q, double r, double L, Bc bc);

// Twisted-circle variant: the closed product geometry cut along one copy of
// the cross-section; the cut jump operator acts on a single copy with the
// holonomy phase folded in. Flagged: this extends the separating-hypersurface
// setting.
double circle_jump_value(double mu, double circumference, double twist);
// The 2x2 one-cut block (coth diagonal, -csch off-diagonal); its determinant
// is exactly mu^2.
void circle_cut_block(double mu, double circumference, double& diag, double& off);
GluingReport circle_bfk_check(const BoundarySpectrum& s, int q, double circumference,
                              double twist, double ladder_cutoff = 2500.0);

struct AdiabaticRow {
  double r = 0.0;
  double diff[4] = {0, 0, 0, 0};  // tilde0-rel, tilde1-rel, pminus-rel, pplus-abs
  double bound[4] = {0, 0, 0, 0};
};

struct AdiabaticReport {
  std::vector<AdiabaticRow> rows;
  double limits[4] = {0, 0, 0, 0};
  double fitted_rate[4] = {0, 0, 0, 0};  // 0 when the defect is below noise
  double residual_at_rmax[4] = {0, 0, 0, 0};
};

AdiabaticReport adiabatic_sweep(const BoundarySpectrum& s,
                                const std::vector<double>& r_grid);

}  // namespace sg

#endif

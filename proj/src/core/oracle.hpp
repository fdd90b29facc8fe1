#ifndef SPECGLUE_CORE_ORACLE_HPP
#define SPECGLUE_CORE_ORACLE_HPP

#include "core/common.hpp"

namespace sg {

// End condition of a one-dimensional factor -d^2/du^2 + lambda on [0, r].
enum class End { Dirichlet, Neumann };

// log of the canonical determinant factor of -d^2/du^2 + lambda on [0, r]
// with the given end conditions, computed by integrating the fundamental
// solution with a Taylor-series stepper (machine precision, no closed-form
// hyperbolics). Factor conventions: 2 y(r) for a Dirichlet far end, 2 y'(r)
// for a Neumann far end, with y the solution selected by the near end.
double gy_log_factor(double lambda, double r, End near, End far);

// Same quantity from finite-difference matrix determinants, Richardson
// extrapolated over grids N in {256 .. 4096}. Supports
// (Dirichlet,Dirichlet) and (Neumann,Dirichlet) factors.
double fd_log_factor(double lambda, double r, End near);

// Jointly rescaled entries (A, B) of the transfer matrix of
// -d^2/du^2 + lambda over [0, r]: (y(r), y'(r)) = (A y0 + B y0', lambda B y0
// + A y0'). Only ratios of A and B are meaningful.
void transfer_entries(double lambda, double r, double& A, double& B);

}  // namespace sg

#endif

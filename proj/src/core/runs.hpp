#ifndef SPECGLUE_CORE_RUNS_HPP
#define SPECGLUE_CORE_RUNS_HPP

#include <cstdint>
#include <vector>

#include "core/report.hpp"
#include "core/spectra.hpp"

namespace sg {

// Worker count: SPECGLUE_THREADS when set, else the hardware concurrency.
int thread_count();

// Closed form against the mode oracle over a (bc, q, r) grid.
Report run_det(const BoundarySpectrum& s, const std::vector<Bc>& bcs,
               const std::vector<int>& qs, const std::vector<double>& rs, double tol);

// Surgery identity over (bc, q) at one cut geometry.
Report run_glue(const BoundarySpectrum& s, const std::vector<Bc>& bcs,
                const std::vector<int>& qs, double r, double L, double tol);

Report run_adiabatic(const BoundarySpectrum& s, const std::vector<double>& r_grid,
                     double tol);

Report run_flow(int dim, int paths, std::uint64_t seed, double tol);

Report run_torsion(const BoundarySpectrum& s, double r, double L, double twist,
                   double tol);

}  // namespace sg

#endif

#ifndef SPECGLUE_CORE_QUADRATURE_HPP
#define SPECGLUE_CORE_QUADRATURE_HPP

#include <functional>

#include "core/common.hpp"

namespace sg {

// Tanh-sinh quadrature on a finite interval (a, b). Handles integrable
// endpoint singularities. The returned bound is the level-to-level
// difference, a practical (not rigorous) error estimate.
Bounded integrate_finite(const std::function<double(double)>& f, double a,
                         double b, double tol);

// Exp-sinh quadrature on (a, infinity) for integrands with (super)exponential
// decay.
Bounded integrate_semi_infinite(const std::function<double(double)>& f,
                                double a, double tol);

}  // namespace sg

#endif

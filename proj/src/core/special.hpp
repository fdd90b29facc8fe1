#ifndef SPECGLUE_CORE_SPECIAL_HPP
#define SPECGLUE_CORE_SPECIAL_HPP

#include "core/common.hpp"

namespace sg {

// Upper incomplete gamma Gamma(a, x) for real a (any sign, integer or not)
// and x > 0. Relative accuracy ~1e-14 over the parameter ranges used by the
// continuation engine (|a| <= ~8, x up to ~700).
double upper_gamma(double a, double x);

// Exponential integral E1(x) = Gamma(0, x), x > 0.
double exp1(double x);

// coth(x) for x > 0 without overflow for large x.
double coth_safe(double x);

// log(1 - e^{-y}) and log(1 + e^{-y}) for y > 0, accurate for small and
// large y.
double log1m_exp_neg(double y);
double log1p_exp_neg(double y);

// Scaled complementary error function e^{x^2} erfc(x) for x >= 0.
double erfcx(double x);

}  // namespace sg

#endif

#ifndef SPECGLUE_CORE_ZETA_HPP
#define SPECGLUE_CORE_ZETA_HPP

#include <limits>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace sg {

// One eigenvalue with a (possibly fractional) weight. Fractional weights let
// half-lattices reuse full-lattice heat expansions.
struct Mode {
  double lambda = 0.0;
  double weight = 1.0;
};

// One term of a small-t heat-trace representation: coeff * t^power *
// exp(-bgap/t), with bgap >= 0. Terms with bgap = 0 are the power-law
// asymptotics; terms with bgap > 0 come from dual (Poisson) sums and are
// exponentially small as t -> 0.
struct ThetaTerm {
  double coeff = 0.0;
  double power = 0.0;
  double bgap = 0.0;
};

struct ZetaResult {
  double value = 0.0;
  double error_bound = 0.0;
  double s = 0.0;
  std::string method;  // direct-sum | theta-split | exact-identity
};

// Heat trace theta(t) = sum w e^{-lambda t} of a positive spectrum, carried
// in two forms: an explicit mode list (complete below lambda_max) and, when
// available, a small-t representation by ThetaTerms. The continuation engine
// works off both.
class ThetaModel {
 public:
  enum class Tail {
    None,    // mode list is the whole spectrum
    Exact,   // terms represent theta exactly up to the recorded remainder
    Fitted,  // terms are a Weyl-type fit; bounds are estimates, not rigorous
  };

  ThetaModel() = default;

  // Finite spectrum given in full.
  static ThetaModel finite(std::vector<Mode> modes);

  // Positive spectrum of the product lattice with eigenvalues
  //   sum_i (2 pi / lengths[i])^2 (n_i + shifts[i])^2,  n in Z^d,
  // scaled by `weight`, enumerated up to `cutoff`. A zero eigenvalue (all
  // shifts integral) is excluded from the spectrum and accounted for in the
  // heat expansion.
  static ThetaModel shifted_lattice(const std::vector<double>& lengths,
                                    const std::vector<double>& shifts,
                                    double weight, double cutoff);

  // Truncated spectrum of unknown structure; the heat expansion is fitted
  // from the counting function assuming Weyl growth of dimension heat_dim.
  static ThetaModel fitted(std::vector<Mode> modes, int heat_dim);

  // Spectral sum-set {lambda + nu}: heat traces multiply.
  ThetaModel product(const ThetaModel& other) const;

  // Spectrum scaled by c > 0 (eigenvalues multiplied).
  ThetaModel scaled(double c) const;

  // All weights scaled by w (theta multiplied).
  ThetaModel weighted(double w) const;

  // Keep only modes with lambda <= cap (tail bounds grow accordingly).
  ThetaModel truncated(double cap) const;

  bool empty() const { return modes_.empty() && terms_.empty(); }
  const std::vector<Mode>& modes() const { return modes_; }
  double lambda_min() const;
  double lambda_max() const { return lambda_max_; }
  double total_weight() const;
  Tail tail() const { return tail_; }

  double theta_direct(double t) const;
  double theta_terms(double t) const;
  // Estimate of sum_{lambda > lambda_max} w e^{-lambda t}.
  Bounded heat_tail(double t) const;

  // Analytic continuation via the incomplete-gamma split of the Mellin
  // integral. Fails at detected poles, and when required_tol is given, when
  // the achievable error bound exceeds it.
  ZetaResult zeta_at(double s, double required_tol =
                                   std::numeric_limits<double>::infinity()) const;
  // Same quantity with the small-t piece integrated numerically; used as an
  // independent cross-check of zeta_at.
  ZetaResult zeta_at_quadrature(double s, double tol) const;

  Bounded zeta0() const;
  Bounded zeta_prime0() const;
  Bounded zeta_neg_half() const;
  // log Det = -zeta'(0).
  Bounded log_det() const;

 private:
  Tail tail_ = Tail::None;
  std::vector<Mode> modes_;           // sorted by lambda
  double lambda_max_ = 0.0;           // completeness bound of modes_
  std::vector<ThetaTerm> terms_;
  double terms_tmax_ = 1e300;         // term representation valid for t <= terms_tmax_
  double rest_scale_ = 0.0;           // dropped-dual remainder ~ rest_scale * e^{-rest_bgap/(2t)}
  double rest_bgap_ = 0.0;
  double taylor_rem_scale_ = 0.0;     // product-expansion remainder ~ scale * t^power
  double taylor_rem_power_ = 0.0;
  int heat_dim_ = 0;                  // Fitted only

  ZetaResult zeta_at_impl(double s) const;
  double split_point() const;
  Bounded bracket(double s, double T) const;  // Gamma(s) zeta(s) pieces
  double dual_rest_bound(double t) const;
  double terms_abs_scale() const;
};

// Finite signed spectrum for eta invariants.
struct SignedSpectrum {
  struct Entry {
    double mu = 0.0;  // nonzero
    double weight = 1.0;
  };
  std::vector<Entry> entries;
  int kernel_dim = 0;

  void validate() const;
  bool sign_symmetric(double tol = 1e-12) const;
};

// eta = (sum of signs + kernel dimension) / 2.
double eta_invariant(const SignedSpectrum& spec);

// Derivative at zero of xi(s) = Gamma(s-1/2) / (2 sqrt(pi) Gamma(s)) *
// zeta(s-1/2), reduced to -zeta(-1/2). The reduction is checked against
// numerical differentiation in the test suite before anything relies on it.
Bounded xi_prime_zero(const ThetaModel& model);

// Series zeta oracles for the two cylinder ladders, from the closed forms
// zeta1'(0) = -log 2r and zeta2'(0) = -log 2.
double ladder_logdet_closed(Series series, double r);

// Theta model of one cylinder ladder: {(k pi / r)^2} (Integer) or
// {((k - 1/2) pi / r)^2} (Half), k >= 1, enumerated up to `cutoff`.
ThetaModel ladder_theta_model(Series series, double r, double cutoff);

}  // namespace sg

#endif

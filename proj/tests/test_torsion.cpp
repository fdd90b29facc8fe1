#include <cmath>
#include <complex>
#include <random>

#include "core/torsion.hpp"
#include "doctest.h"

using namespace sg;

namespace {

const std::complex<double> kImag(0.0, 1.0);

BoundarySpectrum torus(double cutoff = 1200.0) {
  return BoundarySpectrum::twisted_torus(1.0, 1.0, 0.5, 0.5, cutoff, true);
}

TorsionLedger zero_ledger() {
  TorsionLedger l;
  l.m = 3;
  for (const char* tag : {"tilde0", "tilde1", "rel", "abs", "pminus", "pplus"})
    l.logdets[tag] = std::vector<double>(4, 0.0);
  return l;
}

}  // namespace

TEST_CASE("graded determinant on synthetic ledgers") {
  auto l = zero_ledger();
  CHECK(graded_logdet(l, Bc::PMinusL0) == std::complex<double>(0.0, 0.0));

  // acyclic ledger with eta = 0: imaginary part is +-(pi/2)(zeta0_sum/4)
  l.zeta0_sum = 1.32;
  auto gm = graded_logdet(l, Bc::PMinusL0);
  auto gp = graded_logdet(l, Bc::PPlusL1);
  CHECK(gm.real() == 0.0);
  CHECK(gm.imag() == doctest::Approx(kPi / 2.0 * 0.25 * 1.32).epsilon(1e-15));
  CHECK(gp.imag() == doctest::Approx(-kPi / 2.0 * 0.25 * 1.32).epsilon(1e-15));
  // the sum cancels the corrections identically
  CHECK(gm + gp == std::complex<double>(0.0, 0.0));

  // linearity in eta with coefficient -i pi
  l.eta = 0.4;
  auto g2 = graded_logdet(l, Bc::PMinusL0);
  CHECK((g2 - gm) == -kImag * kPi * 0.4);

  // determinant sums weighted by (-1)^{q+1} q / 2
  auto l2 = zero_ledger();
  l2.logdets["tilde0"] = {7.0, 2.0, 3.0, 5.0};  // q = 0..3
  auto g3 = graded_logdet(l2, Bc::PMinusL0);
  CHECK(g3.real() == doctest::Approx(0.5 * (2.0 - 2.0 * 3.0 + 3.0 * 5.0)).epsilon(1e-15));

  // missing degrees are rejected
  TorsionLedger bad;
  bad.m = 3;
  bad.logdets["tilde0"] = {0.0, 0.0};
  CHECK_THROWS_AS((void)graded_logdet(bad, Bc::PMinusL0), Error);
}

TEST_CASE("refined torsion normalization") {
  auto l = zero_ledger();
  l.zeta0_sum = 0.6;
  l.eta = 0.25;
  l.eta_trivial = 0.0;
  l.rank_E = 1;
  auto tv = refined_torsion(l, Bc::PMinusL0);
  CHECK(tv.log_t == graded_logdet(l, Bc::PMinusL0));
  // components sum to the total
  CHECK(tv.det_part + tv.eta_part + tv.zeta0_part == tv.log_t);
  // rank doubles the trivial-eta correction
  l.eta_trivial = 0.3;
  auto t1 = refined_torsion(l, Bc::PMinusL0);
  l.rank_E = 2;
  auto t2 = refined_torsion(l, Bc::PMinusL0);
  CHECK((t2.log_t - t1.log_t) == kImag * (kPi / 2.0) * 0.3);
}

TEST_CASE("congruence mod 2 pi i") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> ki(-3, 3);
  for (int i = 0; i < 30; ++i) {
    std::complex<double> a(u(rng), u(rng));
    std::complex<double> b = a + 2.0 * kPi * kImag * static_cast<double>(ki(rng));
    CHECK(congruent_mod_2pi_i(a, a));                      // reflexive
    CHECK(congruent_mod_2pi_i(a, b));
    CHECK(congruent_mod_2pi_i(b, a));                      // symmetric
    std::complex<double> c = b + 2.0 * kPi * kImag * static_cast<double>(ki(rng));
    if (congruent_mod_2pi_i(a, b) && congruent_mod_2pi_i(b, c))
      CHECK(congruent_mod_2pi_i(a, c));                    // transitive
    CHECK(!congruent_mod_2pi_i(a, a + std::complex<double>(0.37, 0.0)));
    CHECK(!congruent_mod_2pi_i(a, a + std::complex<double>(0.0, 1.1)));
  }
}

TEST_CASE("cylinder ledger") {
  auto s = torus();
  auto ledger = make_cylinder_ledger(s, 1.5);
  CHECK(ledger.eta == 0.0);
  CHECK(ledger.eta_trivial == 0.0);
  CHECK(ledger.l_correction == 0.0);
  CHECK(std::abs(ledger.zeta0_sum) < 1e-10);
  // ledger determinants match the direct closed forms
  CHECK(ledger.logdets.at("rel")[1] ==
        doctest::Approx(logdet_closed_form({1, 1.5, Bc::Rel, &s}).value));
  auto tv = refined_torsion(ledger, Bc::PMinusL0);
  CHECK(std::isfinite(tv.log_t.real()));
}

TEST_CASE("alternating-sum equalities on the torus") {
  auto s = torus();
  for (double r : {2.0, 3.0, 4.0}) {
    auto eq = alternating_sum_equalities(s, r);
    CHECK(eq.eq_tilde0.residual < 1e-6);
    CHECK(eq.eq_tilde1.residual < 1e-6);
    CHECK(eq.eq_flat.residual < 1e-8);
  }
}

TEST_CASE("torsion gluing on the closed product model") {
  auto s = torus(2000.0);
  auto rep = gluing_torsion_check(s, 1.0, 1.0, 0.5);
  CHECK(rep.real_residual < 1e-5);
  CHECK(rep.spectra_symmetric);
  CHECK(rep.eta_closed == 0.0);
  CHECK(rep.eta_pieces == 0.0);
  CHECK(rep.imaginary_congruent);
  CHECK(rep.ledger_cancellation_exact);

  // scaling r + L at a fixed total leaves both sides unchanged
  auto repa = gluing_torsion_check(s, 0.5, 1.5, 0.5);
  CHECK(std::abs(repa.real_lhs - rep.real_lhs) < 1e-9);
  CHECK(std::abs(repa.real_rhs - rep.real_rhs) < 1e-6);
  CHECK(repa.real_residual < 1e-5);
}

TEST_CASE("gluing guards") {
  auto s = BoundarySpectrum::twisted_torus(1, 1, 0, 0, 100.0, false);
  CHECK_THROWS_AS((void)gluing_torsion_check(s, 1.0, 1.0, 0.5), Error);
  auto a = torus(300.0);
  CHECK_THROWS_AS((void)gluing_torsion_check(a, 1.0, 1.0, 0.0), Error);
}

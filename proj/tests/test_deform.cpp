#include <cmath>
#include <random>

#include "core/deform.hpp"
#include "core/quadrature.hpp"
#include "core/special.hpp"
#include "doctest.h"

using namespace sg;

namespace {
const std::complex<double> kI(0.0, 1.0);
}

TEST_CASE("block construction invariants") {
  for (double mu : {0.3, 1.0, 4.7, 30.0}) {
    ModeBlock b = build_block(mu);
    BlockChecks c = block_identity_checks(b, 0.4);
    CHECK(c.gamma_square < 1e-14);
    CHECK(c.gamma_anticommute < 1e-13 * (1.0 + mu));
    CHECK(c.spectrum_gap < 1e-13 * (1.0 + mu));
    CHECK(c.graph_half < 1e-13);
    CHECK(c.graph_sector < 1e-13);
    CHECK(c.unitary_anticommute < 1e-14);
  }
}

TEST_CASE("path identities on a (mu, theta) grid") {
  std::vector<double> mus = {0.5, 1.0, 2.0, 5.0, 11.0};
  std::vector<double> thetas;
  for (int i = 0; i <= 40; ++i) thetas.push_back(0.5 * kPi * i / 40.0);
  int points = 0;
  for (double mu : mus) {
    ModeBlock b = build_block(mu);
    for (double th : thetas) {
      BlockChecks c = block_identity_checks(b, th);
      CHECK(c.proj_idempotent < 1e-13);
      CHECK(c.proj_hermitian < 1e-13);
      CHECK(c.proj_gamma_swap < 1e-13);
      CHECK(c.compress_A < 1e-12 * (1.0 + mu));
      CHECK(c.pi_p_pi_half < 1e-13);
      CHECK(c.generator_identity < 1e-12);
      CHECK(c.gamma_T_commute < 1e-12);
      CHECK(c.conjugation < 1e-12);
      CHECK(c.exp_unitary < 1e-12);
      CHECK(c.trace_gamma_Tprime < 1e-13);
      CHECK(c.w_sign_trace < 1e-12);
      ++points;
    }
  }
  CHECK(points >= 200);
}

TEST_CASE("path endpoints") {
  ModeBlock b = build_block(1.7);
  PathObjects p0 = path_objects(b, 0.0);
  CHECK(p0.T.norm() < 1e-14);
  CHECK((p0.U - Mat4::Identity()).norm() < 1e-14);
  CHECK((p0.proj - b.proj_half).norm() < 1e-13);
  PathObjects p1 = path_objects(b, 0.5 * kPi);
  CHECK((p1.proj - b.proj_sector).norm() < 1e-13);
}

TEST_CASE("eigenspace trace table") {
  ModeBlock b = build_block(2.0);
  // B = i gamma T'(theta): every d(lambda) vanishes.
  Mat2 k = b.u_p.adjoint() * b.u_pi;
  (void)k;
  PathObjects po = path_objects(b, 0.7);
  Mat4 Tp = po.T / 0.7;  // T is linear in theta
  Mat4 B = kI * b.gamma * Tp;
  auto t = eigenspace_traces(b, B);
  REQUIRE(t.rows.size() == 1);
  CHECK(std::abs(t.rows[0].second) < 1e-13);

  // B = projector onto the positive eigenspace of A: d = its dimension.
  auto t2 = eigenspace_traces(b, b.proj_half);
  CHECK(t2.rows[0].second.real() == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(t2.eta_sum(0.0) - 2.0 / 2.0) < 1e-13);  // d(mu) mu^{-1}

  // non-commuting input is rejected: use a rank-one that mixes A-eigenspaces
  // ... A^2 is scalar here, so every matrix commutes; the guard is exercised
  // with a doctored block instead.
  ModeBlock bad = b;
  bad.A(0, 0) += 5.0;  // no longer scalar square
  Mat4 mix = Mat4::Zero();
  mix(0, 1) = 1.0;
  CHECK_THROWS_AS((void)eigenspace_traces(bad, mix), Error);
}

TEST_CASE("half-line heat kernel") {
  ModeBlock b = build_block(1.3);
  for (double th : {0.0, 0.4, 0.25 * kPi, 0.5 * kPi}) {
    PathObjects po = path_objects(b, th);
    // boundary condition: proj K(0, y) = 0
    for (double t : {0.05, 0.3, 1.0}) {
      for (double y : {0.0, 0.4, 1.3}) {
        Mat4 K = heat_kernel_halfline(b, th, t, 0.0, y);
        CHECK((po.proj * K).norm() < 1e-6);
      }
    }
    // short-time diagonal: (4 pi t)^{-1/2} I leading term
    double t0 = 1e-5;
    Mat4 K = heat_kernel_halfline(b, th, t0, 0.7, 0.7);
    double lead = 1.0 / std::sqrt(4.0 * kPi * t0);
    CHECK((K / lead - Mat4::Identity()).norm() < 1e-3);
    // hermitian symmetry K(x,y)^* = K(y,x)
    Mat4 K1 = heat_kernel_halfline(b, th, 0.2, 0.3, 0.9);
    Mat4 K2 = heat_kernel_halfline(b, th, 0.2, 0.9, 0.3);
    CHECK((K1.adjoint() - K2).norm() < 1e-12);
  }
}

TEST_CASE("heat kernel satisfies the heat equation") {
  ModeBlock b = build_block(0.9);
  double th = 0.35;
  double ht = 1e-4, hx = 1e-3;
  for (double t : {0.2, 0.6}) {
    for (double x : {0.5, 1.1}) {
      double y = 0.8;
      auto K = [&](double tt, double xx) { return heat_kernel_halfline(b, th, tt, xx, y); };
      Mat4 dt = (K(t + ht, x) - K(t - ht, x)) / (2.0 * ht);
      Mat4 dxx = (K(t, x + hx) - 2.0 * K(t, x) + K(t, x - hx)) / (hx * hx);
      Mat4 resid = dt - dxx + b.mu * b.mu * K(t, x);
      CHECK(resid.norm() < 1e-4);
    }
  }
}

TEST_CASE("heat kernel z-integral closed form against quadrature") {
  ModeBlock b = build_block(1.6);
  double th = 0.5, t = 0.3, x = 0.4, y = 0.7;
  double c = std::cos(th), mu = b.mu;
  // closed form amplitude extracted from the kernel assembly
  double w0 = (x + y) / (2.0 * std::sqrt(t)) + c * mu * std::sqrt(t);
  double closed = -c * mu * std::exp(-mu * mu * t - (x + y) * (x + y) / (4.0 * t)) *
                  erfcx(w0);
  // direct quadrature of -(cos th) mu e^{-t mu^2 (sin^2)} int e^{-(x+y+z)^2/4t}
  // e^{-cos(th) mu z} dz / sqrt(pi t) ... assembled as in the kernel:
  Bounded quad = integrate_semi_infinite(
      [&](double z) {
        return std::exp(-(x + y + z) * (x + y + z) / (4.0 * t) - c * mu * z);
      },
      0.0, 1e-12);
  // the kernel term is (pi t)^{-1/2} (-cos mu) e^{-t mu^2}
  // int_0^inf e^{-(x+y+z)^2/4t} e^{-c mu z} dz (I - P)
  double direct = -c * mu * std::exp(-t * mu * mu) * quad.value / std::sqrt(kPi * t);
  CHECK(closed == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("f_theta and its Mellin transform") {
  // F(0) = 0
  CHECK(f_theta(0.3, 0.0).value == 0.0);
  // theta = pi/2: F(x) = x e^{-x^2} / sqrt(pi)
  for (double x : {0.2, 1.0, 2.5}) {
    Bounded v = f_theta(0.5 * kPi, x);
    CHECK(v.value == doctest::Approx(x * std::exp(-x * x) / std::sqrt(kPi)).epsilon(1e-9));
  }
  // quadrature agrees with the erfc-identity closed form elsewhere
  for (double th : {0.0, 0.25 * kPi, 1.0}) {
    for (double x : {0.3, 1.0, 3.0}) {
      CHECK(f_theta(th, x).value == doctest::Approx(f_theta_closed(th, x)).epsilon(1e-9));
    }
  }
  // MF_theta(1) finite and stable under tolerance halving
  for (double th : {0.0, 0.25 * kPi, 0.5 * kPi}) {
    Bounded a = mellin_f_theta(th, 1.0, 1e-8);
    Bounded b = mellin_f_theta(th, 1.0, 5e-9);
    CHECK(std::isfinite(a.value));
    CHECK(std::abs(a.value - b.value) < 1e-7);
  }
  // exact values of MF(1) at the path ends
  double mf0 = std::sqrt(kPi) / 4.0 - 0.5 / std::sqrt(kPi);
  CHECK(mellin_f_theta(0.0, 1.0).value == doctest::Approx(mf0).epsilon(1e-7));
  double mf2 = 0.5 / std::sqrt(kPi);
  CHECK(mellin_f_theta(0.5 * kPi, 1.0).value == doctest::Approx(mf2).epsilon(1e-7));
  // slope coefficient: -1/pi at theta = 0, -1/2 at theta = pi/2
  CHECK(eta_slope_coefficient(0.0).value == doctest::Approx(-1.0 / kPi).epsilon(1e-7));
  CHECK(eta_slope_coefficient(0.5 * kPi).value == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("spectral flow basics") {
  // diag(theta - 1/2): one upward crossing
  HermitianPath p1{[](double th) {
                     Eigen::MatrixXcd m(1, 1);
                     m(0, 0) = th - 0.5;
                     return m;
                   },
                   0.0, 1.0, 1e-9};
  CHECK(spectral_flow(p1) == 1);
  auto rep = sf_eta_check(p1);
  CHECK(rep.match);

  // constant invertible path
  HermitianPath p2{[](double) {
                     Eigen::MatrixXcd m(2, 2);
                     m << 1.0, 0.0, 0.0, -2.0;
                     return m;
                   },
                   0.0, 1.0, 1e-9};
  CHECK(spectral_flow(p2) == 0);

  // downward crossing
  HermitianPath p3{[](double th) {
                     Eigen::MatrixXcd m(1, 1);
                     m(0, 0) = 0.5 - th;
                     return m;
                   },
                   0.0, 1.0, 1e-9};
  CHECK(spectral_flow(p3) == -1);

  // avoided crossing (symbolic 2x2 family): no flow
  HermitianPath p4{[](double th) {
                     Eigen::MatrixXcd m(2, 2);
                     m << th - 0.5, 0.05, 0.05, -(th - 0.5);
                     return m;
                   },
                   0.0, 1.0, 1e-9};
  CHECK(spectral_flow(p4) == 0);

  // non-invertible endpoint rejected
  HermitianPath p5{[](double th) {
                     Eigen::MatrixXcd m(1, 1);
                     m(0, 0) = th;
                     return m;
                   },
                   0.0, 1.0, 1e-9};
  CHECK_THROWS_AS((void)spectral_flow(p5), Error);
}

TEST_CASE("spectral flow equals eta difference on random paths") {
  std::mt19937_64 rng(2026);
  std::normal_distribution<double> g(0.0, 1.0);
  auto random_hermitian = [&](int n) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = std::complex<double>(g(rng), g(rng));
    return Eigen::MatrixXcd((m + m.adjoint()) / 2.0);
  };
  int trials = 0;
  for (int it = 0; it < 100; ++it) {
    int n = 6;
    Eigen::MatrixXcd A = random_hermitian(n), B = random_hermitian(n);
    HermitianPath path{[A, B](double th) { return Eigen::MatrixXcd(A + th * (B - A)); },
                       0.0, 1.0, 1e-9};
    // skip the rare near-singular endpoint draw
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(A), eb(B);
    if (ea.eigenvalues().cwiseAbs().minCoeff() < 1e-6 ||
        eb.eigenvalues().cwiseAbs().minCoeff() < 1e-6)
      continue;
    auto rep = sf_eta_check(path);
    CHECK(rep.match);
    // brute-force tracking oracle at 10x resolution
    int fine = 0;
    int N = 640;
    auto nneg = [&](double th) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(path.H(th));
      int c = 0;
      for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) < 0) ++c;
      return c;
    };
    int prev = nneg(0.0);
    int first = prev;
    for (int i = 1; i <= N; ++i) {
      int cur = nneg(static_cast<double>(i) / N);
      fine += prev - cur;
      prev = cur;
    }
    CHECK(fine == rep.sf);
    CHECK(first - prev == rep.sf);
    ++trials;
  }
  CHECK(trials >= 90);
}

TEST_CASE("homotopy invariance between discretization resolutions") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int it = 0; it < 10; ++it) {
    int n = 5;
    Eigen::MatrixXcd A(n, n), B(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        A(i, j) = std::complex<double>(g(rng), g(rng));
        B(i, j) = std::complex<double>(g(rng), g(rng));
      }
    A = (A + A.adjoint()) / 2.0;
    B = (B + B.adjoint()) / 2.0;
    HermitianPath path{[A, B](double th) { return Eigen::MatrixXcd(A + th * (B - A)); },
                       0.0, 1.0, 1e-9};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(A), eb(B);
    if (ea.eigenvalues().cwiseAbs().minCoeff() < 1e-6 ||
        eb.eigenvalues().cwiseAbs().minCoeff() < 1e-6)
      continue;
    CHECK(spectral_flow(path, 32) == spectral_flow(path, 256));
  }
}

#ifndef SPECGLUE_CORE_DEFORM_HPP
#define SPECGLUE_CORE_DEFORM_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "core/common.hpp"

namespace sg {

using Mat4 = Eigen::Matrix4cd;
using Mat2 = Eigen::Matrix2cd;

// Four-dimensional single-mode realization of the boundary-projection
// algebra: an anti-involution gamma, a tangential operator A with spectrum
// {+mu, -mu}, and the two graph unitaries from the +i to the -i eigenspace
// of gamma (spectral half-space and image-sector projections).
struct ModeBlock {
  double mu = 1.0;
  Mat4 gamma;   // gamma^2 = -I, unitary, gamma A = -A gamma
  Mat4 A;       // Hermitian, eigenvalues +-mu with multiplicity 2
  Mat4 U_pi;    // full-space extension of the half-space graph unitary
  Mat4 U_p;     // full-space extension of the sector graph unitary
  Mat4 basis;   // unitary; columns 0,1 span E_{+i}(gamma), columns 2,3 E_{-i}
  Mat2 u_pi;    // 2x2 block of U_pi restricted E_{+i} -> E_{-i}
  Mat2 u_p;     // same for U_p
  Mat4 proj_half;    // spectral projection onto A > 0
  Mat4 proj_sector;  // projection onto the exact-type sector
};

ModeBlock build_block(double mu);

struct PathObjects {
  Mat2 p_block;  // P(theta) = u_pi cos + u_p sin
  Mat4 proj;     // orthogonal projection deformed along the path
  Mat4 T;        // Hermitian generator
  Mat4 U;        // exp(i T)
};

PathObjects path_objects(const ModeBlock& b, double theta);

// Residual norms of the block identities; all should be at machine scale.
struct BlockChecks {
  double gamma_square = 0;       // gamma^2 + I
  double gamma_anticommute = 0;  // gamma A + A gamma
  double spectrum_gap = 0;       // eigenvalues of A vs {+mu, -mu}
  double graph_half = 0;         // Im of half-space projection vs graph of u_pi
  double graph_sector = 0;       // Im of sector projection vs graph of u_p
  double unitary_anticommute = 0;  // u_pi^* u_p + u_p^* u_pi
  double proj_idempotent = 0;
  double proj_hermitian = 0;
  double proj_gamma_swap = 0;    // gamma proj - (I - proj) gamma
  double compress_A = 0;         // proj A proj - cos(theta) |A| proj
  double pi_p_pi_half = 0;       // half.sector.half - half/2
  double generator_identity = 0; // T' proj - (I-proj) T' + (i/2) W block
  double gamma_T_commute = 0;    // gamma T - T gamma
  double conjugation = 0;        // U proj(0) U^* - proj(theta)
  double exp_unitary = 0;        // U^* U - I
  double trace_gamma_Tprime = 0; // max_t |Tr(i gamma T' e^{-t A^2})|
  double w_sign_trace = 0;       // assembled sector-trace pattern residual
};

BlockChecks block_identity_checks(const ModeBlock& b, double theta);

// Per-eigenvalue trace table of B over the eigenspaces of |A| (B must
// commute with A^2), with the finite-rank eta-style sum sum d(l) |l|^{-s-1}.
struct TraceTable {
  std::vector<std::pair<double, std::complex<double>>> rows;
  std::complex<double> eta_sum(double s) const;
};

TraceTable eigenspace_traces(const ModeBlock& b, const Mat4& B);

// Half-line heat kernel of the model square operator with the deformed
// boundary projection; the z-integral term is in closed erfc form.
Mat4 heat_kernel_halfline(const ModeBlock& b, double theta, double t, double x,
                          double y);

// F_theta(x) = x int_0^inf erfc(z) e^{-2 cos(theta) x z - x^2} dz by adaptive
// quadrature, and its Mellin transform.
Bounded f_theta(double theta, double x, double tol = 1e-11);
// erfc-identity closed form, used as a cross-check (theta bounded away from
// pi/2 uses the Laplace-transform identity; at pi/2 the Gaussian form).
double f_theta_closed(double theta, double x);
Bounded mellin_f_theta(double theta, double s, double tol = 1e-10);
// -1/2 + (2 cos(theta) / sqrt(pi)) MF_theta(1).
Bounded eta_slope_coefficient(double theta, double tol = 1e-10);

// Continuous family of Hermitian matrices on [a, b].
struct HermitianPath {
  std::function<Eigen::MatrixXcd(double)> H;
  double a = 0.0;
  double b = 1.0;
  double crossing_tol = 1e-9;
};

// Net signed count of eigenvalue crossings through zero, by eigenvalue
// tracking with adaptive refinement; endpoints must be invertible.
int spectral_flow(const HermitianPath& path, int initial_samples = 64);

struct SfEtaReport {
  int sf = 0;
  double eta_start = 0.0;
  double eta_end = 0.0;
  bool match = false;  // eta_end - eta_start == sf exactly
};

SfEtaReport sf_eta_check(const HermitianPath& path);

}  // namespace sg

#endif

#include "core/deform.hpp"

#include <cmath>

#include "core/quadrature.hpp"
#include "core/special.hpp"

namespace sg {

namespace {

using cplx = std::complex<double>;
const cplx kI(0.0, 1.0);

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

Mat4 kron2(const Eigen::Matrix2cd& p, const Eigen::Matrix2cd& q) {
  Mat4 out;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int v = 0; v < 2; ++v)
        for (int w = 0; w < 2; ++w) out(2 * a + v, 2 * c + w) = p(a, c) * q(v, w);
  return out;
}

// Projection with the given graph block in the split basis:
// (1/2) [[I, p^*], [p, I]] conjugated back to the standard basis.
Mat4 proj_from_block(const Mat4& basis, const Mat2& p) {
  Mat4 blk = Mat4::Zero();
  blk.block<2, 2>(0, 0) = 0.5 * Mat2::Identity();
  blk.block<2, 2>(2, 2) = 0.5 * Mat2::Identity();
  blk.block<2, 2>(0, 2) = 0.5 * p.adjoint();
  blk.block<2, 2>(2, 0) = 0.5 * p;
  return basis * blk * basis.adjoint();
}

Mat4 generator_from_block(const Mat4& basis, const Mat2& k, double theta) {
  Mat4 blk = Mat4::Zero();
  blk.block<2, 2>(0, 0) = -kI * theta * k;
  return basis * blk * basis.adjoint();
}

Mat4 hermitian_exp_i(const Mat4& T) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(T);
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) phases(i) = std::exp(kI * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

int negative_count(const Eigen::VectorXd& evals) {
  int n = 0;
  for (int i = 0; i < evals.size(); ++i)
    if (evals(i) < 0.0) ++n;
  return n;
}

double min_abs_eval(const Eigen::VectorXd& evals) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < evals.size(); ++i) m = std::min(m, std::abs(evals(i)));
  return m;
}

}  // namespace

ModeBlock build_block(double mu) {
  if (!(mu > 0.0)) fail(ErrorCode::InvalidArgument, "mu must be positive");
  ModeBlock b;
  b.mu = mu;
  Eigen::Matrix2cd X = pauli_x(), Z = pauli_z(), I2 = Eigen::Matrix2cd::Identity();
  b.gamma = -kI * kron2(Z, X);
  b.A = -mu * kron2(X, X);
  b.U_pi = -kron2(X, X);
  b.U_p = -kron2(I2, Z);

  // Split basis: columns 0,1 span the +i eigenspace of gamma, columns 2,3
  // the -i eigenspace.
  double s = 1.0 / std::sqrt(2.0);
  b.basis = Mat4::Zero();
  b.basis.col(0) << s, -s, 0, 0;   // tan (x) (e0 - e1)
  b.basis.col(1) << 0, 0, s, s;    // nor (x) (e0 + e1)
  b.basis.col(2) << s, s, 0, 0;    // tan (x) (e0 + e1)
  b.basis.col(3) << 0, 0, s, -s;   // nor (x) (e0 - e1)

  auto block_of = [&](const Mat4& U) {
    Mat2 blk;
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i)
        blk(j, i) = (b.basis.col(2 + j).adjoint() * (U * b.basis.col(i)))(0, 0);
    return blk;
  };
  b.u_pi = block_of(b.U_pi);
  b.u_p = block_of(b.U_p);

  b.proj_half = proj_from_block(b.basis, b.u_pi);
  Eigen::Matrix2cd e11 = Eigen::Matrix2cd::Zero();
  e11(1, 1) = 1.0;
  b.proj_sector = kron2(I2, e11);

  // Construction-time invariant checks.
  BlockChecks c = block_identity_checks(b, 0.3);
  double worst = std::max({c.gamma_square, c.gamma_anticommute, c.spectrum_gap,
                           c.graph_half, c.graph_sector, c.unitary_anticommute});
  if (worst > 1e-12 * (1.0 + mu))
    fail(ErrorCode::Internal, "mode block construction violated an invariant");
  return b;
}

PathObjects path_objects(const ModeBlock& b, double theta) {
  PathObjects po;
  po.p_block = b.u_pi * std::cos(theta) + b.u_p * std::sin(theta);
  po.proj = proj_from_block(b.basis, po.p_block);
  Mat2 k = b.u_p.adjoint() * b.u_pi;
  po.T = generator_from_block(b.basis, k, theta);
  po.U = hermitian_exp_i(po.T);
  return po;
}

BlockChecks block_identity_checks(const ModeBlock& b, double theta) {
  BlockChecks c;
  Mat4 I = Mat4::Identity();
  c.gamma_square = (b.gamma * b.gamma + I).norm();
  c.gamma_anticommute = (b.gamma * b.A + b.A * b.gamma).norm();

  Eigen::SelfAdjointEigenSolver<Mat4> es(b.A);
  Eigen::Vector4d expect;
  expect << -b.mu, -b.mu, b.mu, b.mu;
  c.spectrum_gap = (es.eigenvalues() - expect).norm();

  // Graph properties: x + U x spans the image of the projection.
  double g1 = 0.0, g2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    Eigen::Vector4cd x = b.basis.col(i);
    Eigen::Vector4cd v1 = x + b.U_pi * x;
    g1 += ((I - b.proj_half) * v1).norm();
    Eigen::Vector4cd v2 = x + b.U_p * x;
    g2 += ((I - b.proj_sector) * v2).norm();
  }
  c.graph_half = g1 + std::abs(b.proj_half.trace().real() - 2.0);
  c.graph_sector = g2 + std::abs(b.proj_sector.trace().real() - 2.0);
  c.unitary_anticommute = (b.u_pi.adjoint() * b.u_p + b.u_p.adjoint() * b.u_pi).norm();

  PathObjects po = path_objects(b, theta);
  c.proj_idempotent = (po.proj * po.proj - po.proj).norm();
  c.proj_hermitian = (po.proj - po.proj.adjoint()).norm();
  c.proj_gamma_swap = (b.gamma * po.proj - (I - po.proj) * b.gamma).norm();
  c.compress_A =
      (po.proj * b.A * po.proj - std::cos(theta) * b.mu * po.proj).norm();
  c.pi_p_pi_half =
      (b.proj_half * b.proj_sector * b.proj_half - 0.5 * b.proj_half).norm();

  Mat2 k = b.u_p.adjoint() * b.u_pi;
  Mat4 Tp = generator_from_block(b.basis, k, 1.0);  // dT/dtheta
  Mat2 w = -b.u_pi * std::sin(theta) + b.u_p * std::cos(theta);
  Mat4 wmat_blk = Mat4::Zero();
  wmat_blk.block<2, 2>(0, 2) = w.adjoint();
  wmat_blk.block<2, 2>(2, 0) = -w;
  Mat4 wmat = b.basis * wmat_blk * b.basis.adjoint();
  c.generator_identity =
      (Tp * po.proj - (I - po.proj) * Tp + 0.5 * kI * wmat).norm();
  c.gamma_T_commute = (b.gamma * po.T - po.T * b.gamma).norm();

  PathObjects p0 = path_objects(b, 0.0);
  c.conjugation = (po.U * p0.proj * po.U.adjoint() - po.proj).norm();
  c.exp_unitary = (po.U.adjoint() * po.U - I).norm();

  for (double t : {0.1, 1.0, 10.0}) {
    double tr = std::abs((kI * b.gamma * Tp * std::exp(-t * b.mu * b.mu)).trace());
    c.trace_gamma_Tprime = std::max(c.trace_gamma_Tprime, tr);
  }

  Mat4 sign_a = b.A / b.mu;
  cplx tr = (b.gamma * wmat * sign_a * po.proj).trace();
  cplx expect_tr = -2.0 * kI * std::sin(theta);
  c.w_sign_trace = std::abs(tr - expect_tr);
  return c;
}

std::complex<double> TraceTable::eta_sum(double s) const {
  cplx acc = 0.0;
  for (const auto& [lam, d] : rows) acc += d * std::pow(lam, -s - 1.0);
  return acc;
}

TraceTable eigenspace_traces(const ModeBlock& b, const Mat4& B) {
  Mat4 A2 = b.A * b.A;
  if ((B * A2 - A2 * B).norm() > 1e-10 * (1.0 + A2.norm()) * (1.0 + B.norm()))
    fail(ErrorCode::InvalidArgument, "trace table requires [B, A^2] = 0");
  TraceTable t;
  t.rows.push_back({b.mu, B.trace()});
  return t;
}

Mat4 heat_kernel_halfline(const ModeBlock& b, double theta, double t, double x,
                          double y) {
  if (!(t > 0.0) || x < 0.0 || y < 0.0)
    fail(ErrorCode::InvalidArgument, "heat kernel needs t > 0 and x, y >= 0");
  PathObjects po = path_objects(b, theta);
  Mat4 I = Mat4::Identity();
  double mu = b.mu;
  double c = std::cos(theta);
  double pref = 1.0 / std::sqrt(4.0 * kPi * t);
  double gl = std::exp(-(x - y) * (x - y) / (4.0 * t));
  double gr = std::exp(-(x + y) * (x + y) / (4.0 * t));
  Mat4 K = pref * std::exp(-t * mu * mu) * (gl * I + gr * (I - 2.0 * po.proj));
  // z-integral term in closed form: -cos(theta) mu e^{-mu^2 t - (x+y)^2/4t}
  // erfcx((x+y)/(2 sqrt t) + cos(theta) mu sqrt t) (I - proj).
  double w0 = (x + y) / (2.0 * std::sqrt(t)) + c * mu * std::sqrt(t);
  if (w0 >= 0.0) {
    double amp = -c * mu * std::exp(-mu * mu * t - (x + y) * (x + y) / (4.0 * t)) *
                 erfcx(w0);
    K += amp * (I - po.proj);
  } else {
    // only possible for theta > pi/2; not used by the model paths
    double amp = -c * mu * std::exp(-mu * mu * t * (1.0 - c * c) +
                                    c * mu * (x + y)) *
                 std::erfc(w0);
    K += amp * (I - po.proj);
  }
  return K;
}

Bounded f_theta(double theta, double x, double tol) {
  if (x < 0.0) fail(ErrorCode::InvalidArgument, "f_theta requires x >= 0");
  if (x == 0.0) return {0.0, 0.0};
  double c = std::cos(theta);
  Bounded integral = integrate_semi_infinite(
      [&](double z) { return std::erfc(z) * std::exp(-2.0 * c * x * z - x * x); }, 0.0,
      tol);
  return {x * integral.value, x * integral.bound};
}

double f_theta_closed(double theta, double x) {
  double c = std::cos(theta);
  if (std::abs(c) < 1e-8) return x * std::exp(-x * x) / std::sqrt(kPi);
  double s2 = 1.0 - c * c;
  return (std::exp(-x * x) - std::exp(-x * x * s2) * std::erfc(c * x)) / (2.0 * c);
}

Bounded mellin_f_theta(double theta, double s, double tol) {
  if (!(s > 0.0))
    fail(ErrorCode::InvalidArgument, "Mellin transform requires Re s > 0 here");
  auto f = [&](double x) {
    Bounded v = f_theta(theta, x, tol * 0.1);
    return std::pow(x, s - 1.0) * v.value;
  };
  Bounded a = integrate_finite(f, 0.0, 1.0, tol);
  Bounded b = integrate_semi_infinite(f, 1.0, tol);
  return a + b;
}

Bounded eta_slope_coefficient(double theta, double tol) {
  Bounded mf = mellin_f_theta(theta, 1.0, tol);
  double c = 2.0 * std::cos(theta) / std::sqrt(kPi);
  return Bounded{-0.5, 0.0} + c * mf;
}

int spectral_flow(const HermitianPath& path, int initial_samples) {
  if (!(path.b > path.a)) fail(ErrorCode::InvalidArgument, "empty parameter interval");
  auto evals_at = [&](double th) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(path.H(th));
    return Eigen::VectorXd(es.eigenvalues());
  };
  double tol = path.crossing_tol;
  Eigen::VectorXd ea = evals_at(path.a), eb = evals_at(path.b);
  if (min_abs_eval(ea) <= 10.0 * tol || min_abs_eval(eb) <= 10.0 * tol)
    fail(ErrorCode::InvalidArgument, "endpoints must be invertible");

  // Adaptive scan: isolate every sign change and confirm transversality.
  struct Node {
    double th;
    int n_neg;
    double min_abs;
  };
  std::vector<Node> grid;
  for (int i = 0; i <= initial_samples; ++i) {
    double th = path.a + (path.b - path.a) * i / initial_samples;
    Eigen::VectorXd ev = evals_at(th);
    grid.push_back({th, negative_count(ev), min_abs_eval(ev)});
  }
  double min_step = (path.b - path.a) * 1e-6;
  for (size_t i = 0; i + 1 < grid.size();) {
    const Node& l = grid[i];
    const Node& r = grid[i + 1];
    bool needs_split = false;
    if (std::abs(l.n_neg - r.n_neg) > 1 && (r.th - l.th) > min_step) needs_split = true;
    if ((l.min_abs < tol || r.min_abs < tol) && (r.th - l.th) > min_step)
      needs_split = true;
    if (!needs_split) {
      ++i;
      continue;
    }
    double mid = 0.5 * (l.th + r.th);
    Eigen::VectorXd ev = evals_at(mid);
    grid.insert(grid.begin() + i + 1, {mid, negative_count(ev), min_abs_eval(ev)});
  }
  // An eigenvalue pinned at zero across a fully refined interval is a
  // non-transversal crossing; an isolated zero sample with clean neighbors is
  // a crossing that landed on the grid.
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (grid[i].min_abs < tol && grid[i + 1].min_abs < tol &&
        grid[i + 1].th - grid[i].th <= 2.0 * min_step)
      fail(ErrorCode::Tolerance, "non-transversal eigenvalue crossing");
  }
  return grid.front().n_neg - grid.back().n_neg;
}

SfEtaReport sf_eta_check(const HermitianPath& path) {
  SfEtaReport rep;
  rep.sf = spectral_flow(path);
  auto eta_at = [&](double th) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(path.H(th));
    double s = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      s += (es.eigenvalues()(i) > 0.0) ? 1.0 : -1.0;
    return 0.5 * s;
  };
  rep.eta_start = eta_at(path.a);
  rep.eta_end = eta_at(path.b);
  rep.match = (rep.eta_end - rep.eta_start) == static_cast<double>(rep.sf);
  return rep;
}

}  // namespace sg

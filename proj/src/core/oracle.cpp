#include "core/oracle.hpp"

#include <cmath>
#include <vector>

namespace sg {

namespace {

// Advance (y, y') for y'' = lambda y by one step of size h via the local
// Taylor series; exact to machine precision for sqrt(lambda) h <~ 1.
void taylor_step(double lambda, double h, double& y, double& yp) {
  // y(u+h) = A(h) y + B(h) y',  y'(u+h) = lambda B(h) y + A(h) y'
  // with A = sum h^{2n} lambda^n / (2n)!, B = sum h^{2n+1} lambda^n / (2n+1)!.
  double A = 1.0, B = h;
  double ta = 1.0, tb = h;
  for (int n = 1; n <= 40; ++n) {
    ta *= lambda * h * h / ((2 * n - 1) * (2 * n));
    tb *= lambda * h * h / ((2 * n) * (2 * n + 1));
    A += ta;
    B += tb;
    if (std::abs(ta) < 1e-18 * std::abs(A) && std::abs(tb) < 1e-18 * std::abs(B)) break;
  }
  double ny = A * y + B * yp;
  double nyp = lambda * B * y + A * yp;
  y = ny;
  yp = nyp;
}

}  // namespace

double gy_log_factor(double lambda, double r, End near, End far) {
  if (!(r > 0.0) || lambda < 0.0)
    fail(ErrorCode::InvalidArgument, "gy_log_factor requires r > 0, lambda >= 0");
  double y = (near == End::Dirichlet) ? 0.0 : 1.0;
  double yp = (near == End::Dirichlet) ? 1.0 : 0.0;
  double mu = std::sqrt(lambda);
  int steps = static_cast<int>(std::ceil(std::max(2.0, 2.0 * r * std::max(mu, 1.0))));
  double h = r / steps;
  double logscale = 0.0;
  for (int i = 0; i < steps; ++i) {
    taylor_step(lambda, h, y, yp);
    double m = std::max(std::abs(y), std::abs(yp));
    if (m > 1e120) {
      y /= m;
      yp /= m;
      logscale += std::log(m);
    }
  }
  double val = (far == End::Dirichlet) ? y : yp;
  if (!(val > 0.0)) fail(ErrorCode::Internal, "fundamental solution lost positivity");
  return std::log(2.0 * val) + logscale;
}

void transfer_entries(double lambda, double r, double& A, double& B) {
  // Compose single-step transfer matrices [A, B; lambda B, A] with joint
  // rescaling; ratios survive the rescale.
  double a = 1.0, b = 0.0;  // accumulated first row
  double c = 0.0, d = 1.0;  // accumulated second row
  double mu = std::sqrt(std::max(lambda, 0.0));
  int steps = static_cast<int>(std::ceil(std::max(2.0, 2.0 * r * std::max(mu, 1.0))));
  double h = r / steps;
  for (int i = 0; i < steps; ++i) {
    double y0 = a, yp0 = c;
    taylor_step(lambda, h, y0, yp0);
    double y1 = b, yp1 = d;
    taylor_step(lambda, h, y1, yp1);
    a = y0;
    c = yp0;
    b = y1;
    d = yp1;
    double m = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (m > 1e120) {
      a /= m;
      b /= m;
      c /= m;
      d /= m;
    }
  }
  A = a;
  B = b;
}

double fd_log_factor(double lambda, double r, End near) {
  if (!(r > 0.0) || lambda < 0.0)
    fail(ErrorCode::InvalidArgument, "fd_log_factor requires r > 0, lambda >= 0");

  // log det of the tridiagonal second-difference matrix for the given grid,
  // relative to lambda = 0, plus the exact lambda = 0 determinant.
  auto log_ratio = [&](int N) {
    double h = r / N;
    double hl = lambda * h * h;
    // Determinant recurrences with joint rescaling for the lambda and the
    // reference (lambda = 0) matrices.
    double d1, d0, e1, e0;  // current/previous minors: lambda and reference
    int rows;
    if (near == End::Dirichlet) {
      // interior vertex points 1..N-1, diagonal 2 + hl
      rows = N - 1;
      d0 = 1.0;
      e0 = 1.0;
      d1 = 2.0 + hl;
      e1 = 2.0;
    } else {
      // cell-centered points with a mirrored ghost at 0: first diagonal 1+hl,
      // last diagonal 3 + hl (Dirichlet mirror), interior 2 + hl
      rows = N;
      d0 = 1.0;
      e0 = 1.0;
      d1 = 1.0 + hl;
      e1 = 1.0;
    }
    for (int i = 2; i <= rows; ++i) {
      double diag = 2.0 + hl;
      double rdiag = 2.0;
      if (near == End::Neumann && i == rows) {
        diag = 3.0 + hl;
        rdiag = 3.0;
      }
      double nd = diag * d1 - d0;
      double ne = rdiag * e1 - e0;
      d0 = d1;
      e0 = e1;
      d1 = nd;
      e1 = ne;
      double m = std::max(std::abs(d1), std::abs(e1));
      if (m > 1e120) {
        d1 /= m;
        d0 /= m;
        e1 /= m;
        e0 /= m;
      }
    }
    return std::log(d1 / e1);
  };

  // Reference values at lambda = 0: 2r for the (D,D) factor (the reference
  // matrix is the discrete Dirichlet Laplacian), 2 for (N,D).
  double base = (near == End::Dirichlet) ? std::log(2.0 * r) : std::log(2.0);

  std::vector<double> vals;
  for (int N : {256, 512, 1024, 2048, 4096}) vals.push_back(log_ratio(N));
  // Richardson elimination of h^2, h^4, ... (grid halving).
  std::vector<double> cur = vals;
  double factor = 4.0;
  while (cur.size() > 1) {
    std::vector<double> next;
    for (size_t i = 0; i + 1 < cur.size(); ++i)
      next.push_back((factor * cur[i + 1] - cur[i]) / (factor - 1.0));
    cur = next;
    factor *= 4.0;
  }
  return base + cur[0];
}

}  // namespace sg

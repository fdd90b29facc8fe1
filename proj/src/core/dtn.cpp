#include "core/dtn.hpp"

#include <algorithm>
#include <cmath>

#include "core/oracle.hpp"
#include "core/special.hpp"

namespace sg {

namespace {

double branch_correction(DtnBranch b, double mu, double r) {
  double e = std::exp(-2.0 * mu * r);
  if (b == DtnBranch::Coth) return 2.0 * mu * e / (-std::expm1(-2.0 * mu * r));
  return -2.0 * mu * e / (1.0 + e);
}

// Bound on the dropped part of sum w log(value / (2 mu)); the correction
// decays like e^{-2 mu min(r, L)} and the far side is assumed at least as
// tame as the cylinder provider.
double correction_tail_bound(const ThetaModel& model, double r) {
  if (model.tail() == ThetaModel::Tail::None || !std::isfinite(model.lambda_max()))
    return 0.0;
  double lam = model.lambda_max();
  if (!(lam > 0.0)) return 0.0;
  double t = std::min(r / std::sqrt(lam), 4.0);
  Bounded h = model.heat_tail(t);
  return 2.0 * std::exp(-r * std::sqrt(lam)) * (h.value + h.bound);
}

}  // namespace

void KernelOverlapMatrix::validate() const {
  if (dim < 0 || entries.size() != static_cast<size_t>(dim) * dim)
    fail(ErrorCode::Invariant, "kernel overlap matrix shape mismatch");
  for (int i = 0; i < dim; ++i) {
    if (!(entries[i * dim + i] > 0.0))
      fail(ErrorCode::Invariant, "kernel overlap matrix must be positive definite");
    for (int j = 0; j < i; ++j)
      if (entries[i * dim + j] != entries[j * dim + i])
        fail(ErrorCode::Invariant, "kernel overlap matrix must be Hermitian");
  }
}

double q2_cylinder(double mu, double L) {
  if (!(L > 0.0)) fail(ErrorCode::InvalidArgument, "cylinder length must be positive");
  if (mu < 0.0) fail(ErrorCode::InvalidArgument, "mu must be non-negative");
  if (mu * L < 1e-8) return 1.0 / L + mu * mu * L / 3.0;
  return mu * coth_safe(mu * L);
}

double q2_cylinder_bvp(double mu, double L) {
  // Solve y'' = mu^2 y with y(0) = 1, y(L) = 0 and return -y'(0) = A/B from
  // the transfer entries.
  double A = 0.0, B = 0.0;
  transfer_entries(mu * mu, L, A, B);
  if (B == 0.0) fail(ErrorCode::Internal, "degenerate transfer matrix");
  return A / B;
}

DtnOperator dtn_assemble(const BoundarySpectrum& s, int q, double r, Bc bc,
                         const FarProvider& far) {
  if (q < 0 || q > s.dimension())
    fail(ErrorCode::InvalidArgument, "trace degree out of range");
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "length must be positive");
  DtnOperator op;
  op.q = q;
  op.r = r;
  op.bc = bc;
  for (const auto& md : s.modes()) {
    bool tan_slot;
    if (md.q == q)
      tan_slot = true;
    else if (md.q == q - 1)
      tan_slot = false;
    else
      continue;
    End e = slot_end(bc, tan_slot, md.sector);
    DtnBranch branch = (e == End::Dirichlet) ? DtnBranch::Coth : DtnBranch::Tanh;
    double mu = std::sqrt(md.lambda);
    DtnEntry entry;
    entry.mu = mu;
    entry.branch = branch;
    entry.q2 = far(mu);
    entry.value = entry.q2 + mu + branch_correction(branch, mu, r);
    entry.mult = md.mult;
    entry.source_q = md.q;
    entry.sector = md.sector;
    entry.tan_slot = tan_slot;
    if (!(entry.value > 0.0))
      fail(ErrorCode::Invariant, "jump operator lost positivity");
    op.entries.push_back(entry);
  }
  // Kernel blocks: 1/r on the near-condition image, 0 on the complement.
  int inv_mult = 0, zero_mult = 0;
  switch (bc) {
    case Bc::PMinusL0:
      inv_mult = s.l_plus(q) + s.l_plus(q - 1);
      zero_mult = s.l_minus(q) + s.l_minus(q - 1);
      break;
    case Bc::PPlusL1:
      inv_mult = s.l_minus(q) + s.l_minus(q - 1);
      zero_mult = s.l_plus(q) + s.l_plus(q - 1);
      break;
    case Bc::Rel:
      inv_mult = s.l(q);
      zero_mult = s.l(q - 1);
      break;
    case Bc::Abs:
      inv_mult = s.l(q - 1);
      zero_mult = s.l(q);
      break;
  }
  if (inv_mult > 0) op.zero_entries.push_back({1.0 / r, inv_mult});
  if (zero_mult > 0) op.zero_entries.push_back({0.0, zero_mult});
  return op;
}

Bounded logdet_dtn(const DtnOperator& op, const BoundarySpectrum& s) {
  Bounded acc{0.0, 0.0};
  // Leading 2|A| part via the zeta engine over the full degree spectra.
  for (int deg : {op.q, op.q - 1}) {
    ThetaModel dm = s.degree_model(deg);
    if (dm.empty()) continue;
    acc += std::log(2.0) * dm.zeta0();
    acc += 0.5 * dm.log_det();
  }
  acc += Bounded{std::log(2.0) * (s.l(op.q) + s.l(op.q - 1)), 0.0};
  // Trace-class correction sum.
  double corr = 0.0;
  for (const auto& e : op.entries) {
    if (!(e.value > 0.0)) fail(ErrorCode::Invariant, "nonpositive jump entry");
    corr += e.mult * std::log(e.value / (2.0 * e.mu));
  }
  double tail = correction_tail_bound(s.degree_model(op.q), std::min(op.r, 1e6)) +
                correction_tail_bound(s.degree_model(op.q - 1), std::min(op.r, 1e6));
  acc += Bounded{corr, tail};
  for (const auto& z : op.zero_entries) {
    if (z.value == 0.0)
      fail(ErrorCode::Unsupported,
           "kernel blocks with vanishing jump need the overlap-matrix term");
    acc += Bounded{z.mult * std::log(z.value), 0.0};
  }
  return acc;
}

GluingReport bfk_check(const BoundarySpectrum& s, int q, double r, double L, Bc bc) {
  if (!s.acyclic())
    fail(ErrorCode::Unsupported,
         "gluing check requires an acyclic spectrum (overlap matrix unsupported)");
  GluingReport rep;
  rep.quantity = "bfk[q=" + std::to_string(q) + ",bc=" + bc_name(bc) + "]";
  Bounded lhs = logdet_closed_form({q, r + L, bc, &s});
  Bounded piece1 = logdet_closed_form({q, r, bc, &s});
  Bounded piece2 = logdet_dirichlet_piece(s, q, L);
  DtnOperator op = dtn_assemble(s, q, r, bc, [&](double mu) { return q2_cylinder(mu, L); });
  Bounded dtn = logdet_dtn(op, s);
  Bounded corr{0.0, 0.0};
  for (int deg : {q, q - 1}) {
    ThetaModel dm = s.degree_model(deg);
    if (!dm.empty()) corr += dm.zeta0();
  }
  Bounded rhs = piece1 + piece2 + dtn - std::log(2.0) * corr;
  rep.lhs = lhs.value;
  rep.rhs = rhs.value;
  rep.residual = std::abs(lhs.value - rhs.value);
  rep.bound = lhs.bound + rhs.bound;
  return rep;
}

double circle_jump_value(double mu, double circumference, double twist) {
  if (!(mu > 0.0) || !(circumference > 0.0))
    fail(ErrorCode::InvalidArgument, "circle jump needs mu, circumference > 0");
  double x = mu * circumference;
  double cphi = std::cos(2.0 * kPi * twist);
  double e = std::exp(-x);
  // 2 mu (cosh x - cos phi) / sinh x, in decay-stable form.
  return 2.0 * mu * (1.0 + e * e - 2.0 * cphi * e) / (-std::expm1(-2.0 * x));
}

void circle_cut_block(double mu, double circumference, double& diag, double& off) {
  double x = mu * circumference;
  diag = mu * coth_safe(x);
  off = -2.0 * mu * std::exp(-x) / (-std::expm1(-2.0 * x));
}

GluingReport circle_bfk_check(const BoundarySpectrum& s, int q, double circumference,
                              double twist, double ladder_cutoff) {
  if (!s.acyclic()) fail(ErrorCode::Unsupported, "circle gluing requires acyclicity");
  if (twist == 0.0)
    fail(ErrorCode::InvalidArgument,
         "an untwisted circle has kernel modes; the cut needs a nontrivial twist");
  GluingReport rep;
  rep.quantity = "circle_bfk[q=" + std::to_string(q) + "]";
  rep.notes = "non-separating cut; beyond the separating-hypersurface setting";

  // Closed side: product continuation of {lambda + circle ladder}.
  ThetaModel circle =
      ThetaModel::shifted_lattice({circumference}, {twist}, 1.0, ladder_cutoff);
  Bounded lhs{0.0, 0.0};
  for (int deg : {q, q - 1}) {
    ThetaModel dm = s.degree_model(deg);
    if (dm.empty()) continue;
    lhs += dm.product(circle).log_det();
  }
  // Cut side: Dirichlet cylinder of length c, single-copy jump operator with
  // the holonomy phase, and the universal constant.
  Bounded piece = logdet_dirichlet_piece(s, q, circumference);
  Bounded jump{0.0, 0.0};
  Bounded zeta0s{0.0, 0.0};
  for (int deg : {q, q - 1}) {
    ThetaModel dm = s.degree_model(deg);
    if (dm.empty()) continue;
    jump += std::log(2.0) * dm.zeta0();
    jump += 0.5 * dm.log_det();
    zeta0s += dm.zeta0();
  }
  double corr = 0.0;
  for (const auto& md : s.modes()) {
    if (md.q != q && md.q != q - 1) continue;
    double mu = std::sqrt(md.lambda);
    corr += md.mult * std::log(circle_jump_value(mu, circumference, twist) / (2.0 * mu));
  }
  jump += Bounded{corr, correction_tail_bound(s.degree_model(q), circumference) +
                            correction_tail_bound(s.degree_model(q - 1), circumference)};
  Bounded rhs = piece + jump - std::log(2.0) * zeta0s;
  rep.lhs = lhs.value;
  rep.rhs = rhs.value;
  rep.residual = std::abs(lhs.value - rhs.value);
  rep.bound = lhs.bound + rhs.bound;
  return rep;
}

AdiabaticReport adiabatic_sweep(const BoundarySpectrum& s,
                                const std::vector<double>& r_grid) {
  if (r_grid.empty()) fail(ErrorCode::InvalidArgument, "empty r grid");
  if (!s.acyclic()) fail(ErrorCode::Unsupported, "adiabatic sweep requires acyclicity");
  AdiabaticReport rep;
  // Limits: +- (1/4) sum_q log Det over the full boundary degrees, then zero.
  Bounded quarter{0.0, 0.0};
  for (int deg = 0; deg < s.dimension(); ++deg) {
    ThetaModel dm = s.degree_model(deg);
    if (!dm.empty()) quarter += 0.25 * dm.log_det();
  }
  rep.limits[0] = quarter.value;
  rep.limits[1] = -quarter.value;
  rep.limits[2] = 0.0;
  rep.limits[3] = 0.0;

  for (double r : r_grid) {
    AdiabaticRow row;
    row.r = r;
    Bounded rel = alternating_sum(s, r, Bc::Rel);
    Bounded abs = alternating_sum(s, r, Bc::Abs);
    Bounded t0 = alternating_sum_tilde(s, r, 0);
    Bounded t1 = alternating_sum_tilde(s, r, 1);
    Bounded pm = alternating_sum(s, r, Bc::PMinusL0);
    Bounded pp = alternating_sum(s, r, Bc::PPlusL1);
    Bounded d0 = t0 - rel, d1 = t1 - rel, d2 = pm - rel, d3 = pp - abs;
    row.diff[0] = d0.value;
    row.diff[1] = d1.value;
    row.diff[2] = d2.value;
    row.diff[3] = d3.value;
    row.bound[0] = d0.bound;
    row.bound[1] = d1.bound;
    row.bound[2] = d2.bound;
    row.bound[3] = d3.bound;
    rep.rows.push_back(row);
  }
  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const AdiabaticRow& a, const AdiabaticRow& b) { return a.r < b.r; });

  for (int c = 0; c < 4; ++c) {
    rep.residual_at_rmax[c] = std::abs(rep.rows.back().diff[c] - rep.limits[c]);
    // Least-squares slope of log |diff - limit| over the points above noise.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& row : rep.rows) {
      double d = std::abs(row.diff[c] - rep.limits[c]);
      if (d < 1e-12) continue;
      double x = row.r, y = std::log(d);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n >= 2 && sxx * n - sx * sx > 1e-12)
      rep.fitted_rate[c] = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    else
      rep.fitted_rate[c] = 0.0;
  }
  return rep;
}

}  // namespace sg

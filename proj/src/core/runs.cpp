#include "core/runs.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "core/cylinder.hpp"
#include "core/deform.hpp"
#include "core/dtn.hpp"
#include "core/torsion.hpp"

namespace sg {

namespace {

void spectrum_meta(Report& rep, const BoundarySpectrum& s) {
  if (s.torus()) {
    const auto& t = *s.torus();
    std::ostringstream os;
    os << "torus L1=" << format_double(t.L1) << " L2=" << format_double(t.L2)
       << " alpha=" << format_double(t.alpha) << " beta=" << format_double(t.beta);
    rep.set_meta("model", os.str());
    rep.set_meta("normalization",
                 "eigenvalues 4 pi^2 ((j+alpha)^2/L1^2 + (k+beta)^2/L2^2)");
  } else {
    rep.set_meta("model", "spectrum-file");
  }
  rep.set_meta("cutoff", format_double(s.cutoff()));
  rep.set_meta("tail_estimate", format_double(s.tail_estimate()));
  rep.set_meta("mode_count", std::to_string(s.mode_count()));
}

template <class Task>
void run_tasks(std::vector<Task>& tasks) {
  int workers = std::min<int>(thread_count(), static_cast<int>(tasks.size()));
  if (workers <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        tasks[i]();
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

int thread_count() {
  if (const char* env = std::getenv("SPECGLUE_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

Report run_det(const BoundarySpectrum& s, const std::vector<Bc>& bcs,
               const std::vector<int>& qs, const std::vector<double>& rs, double tol) {
  if (bcs.empty() || qs.empty() || rs.empty())
    fail(ErrorCode::InvalidArgument, "empty grid in determinant run");
  Report rep;
  rep.set_tolerance(tol);
  spectrum_meta(rep, s);
  rep.set_meta("run", "det");

  struct Row {
    Bc bc;
    int q;
    double r;
    Bounded closed, oracle;
    std::string error;
  };
  std::vector<Row> rows;
  for (Bc bc : bcs)
    for (int q : qs)
      for (double r : rs) rows.push_back({bc, q, r, {}, {}, ""});
  std::vector<std::function<void()>> tasks;
  for (auto& row : rows) {
    tasks.push_back([&row, &s] {
      try {
        row.closed = logdet_closed_form({row.q, row.r, row.bc, &s});
        row.oracle = logdet_mode_oracle({row.q, row.r, row.bc, &s});
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    });
  }
  run_tasks(tasks);
  for (const auto& row : rows) {
    if (!row.error.empty()) fail(ErrorCode::Internal, row.error);
    double resid = std::abs(row.closed.value - row.oracle.value);
    rep.add_row("cylinder_logdet", row.closed.value, row.oracle.value, resid,
                row.closed.bound + row.oracle.bound, row.r, row.q, bc_name(row.bc));
  }
  return rep;
}

Report run_glue(const BoundarySpectrum& s, const std::vector<Bc>& bcs,
                const std::vector<int>& qs, double r, double L, double tol) {
  if (bcs.empty() || qs.empty())
    fail(ErrorCode::InvalidArgument, "empty grid in gluing run");
  Report rep;
  rep.set_tolerance(tol);
  spectrum_meta(rep, s);
  rep.set_meta("run", "glue");
  rep.set_meta("L", format_double(L));
  for (Bc bc : bcs) {
    for (int q : qs) {
      auto g = bfk_check(s, q, r, L, bc);
      rep.add_row("bfk_identity", g.lhs, g.rhs, g.residual, g.bound, r, q,
                  bc_name(bc), g.notes);
    }
  }
  return rep;
}

Report run_adiabatic(const BoundarySpectrum& s, const std::vector<double>& r_grid,
                     double tol) {
  Report rep;
  rep.set_tolerance(tol);
  spectrum_meta(rep, s);
  rep.set_meta("run", "adiabatic");
  AdiabaticReport ar = adiabatic_sweep(s, r_grid);
  const char* names[4] = {"adiabatic_diff[tilde0-rel]", "adiabatic_diff[tilde1-rel]",
                          "adiabatic_diff[pminus-rel]", "adiabatic_diff[pplus-abs]"};
  for (const auto& row : ar.rows) {
    for (int c = 0; c < 4; ++c) {
      // sweep data rows are informational; the limit rows carry the checks
      rep.add_row(names[c], row.diff[c], ar.limits[c], 0.0, row.bound[c], row.r, -1,
                  "", "sweep");
    }
  }
  double mu_min = std::sqrt(s.min_eigenvalue());
  for (int c = 0; c < 4; ++c) {
    rep.add_row(std::string("adiabatic_limit[") + names[c] + "]",
                ar.rows.back().diff[c], ar.limits[c], ar.residual_at_rmax[c],
                ar.rows.back().bound[c], ar.rows.back().r, -1, "");
    if (ar.fitted_rate[c] > 0.0) {
      double target = 1.8 * mu_min;
      double resid = std::max(0.0, target - ar.fitted_rate[c]);
      rep.add_row(std::string("adiabatic_rate[") + names[c] + "]", ar.fitted_rate[c],
                  target, resid, 0.0, ar.rows.back().r, -1, "",
                  "fitted decay rate >= 1.8 sqrt(lambda_min)");
    }
  }
  return rep;
}

Report run_flow(int dim, int paths, std::uint64_t seed, double tol) {
  if (dim < 1 || paths < 1)
    fail(ErrorCode::InvalidArgument, "flow run needs dim >= 1, paths >= 1");
  Report rep;
  rep.set_tolerance(tol);
  rep.set_meta("run", "flow");
  rep.set_meta("dim", std::to_string(dim));
  rep.set_meta("seed", std::to_string(seed));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto random_hermitian = [&]() {
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = std::complex<double>(g(rng), g(rng));
    return Eigen::MatrixXcd((m + m.adjoint()) / 2.0);
  };
  int produced = 0;
  while (produced < paths) {
    Eigen::MatrixXcd A = random_hermitian(), B = random_hermitian();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(A), eb(B);
    if (ea.eigenvalues().cwiseAbs().minCoeff() < 1e-6 ||
        eb.eigenvalues().cwiseAbs().minCoeff() < 1e-6)
      continue;
    HermitianPath path{[A, B](double th) { return Eigen::MatrixXcd(A + th * (B - A)); },
                       0.0, 1.0, 1e-9};
    auto repo = sf_eta_check(path);
    double eta_diff = repo.eta_end - repo.eta_start;
    rep.add_row("spectral_flow_vs_eta", static_cast<double>(repo.sf), eta_diff,
                std::abs(repo.sf - eta_diff), 0.0, 0.0, produced, "");
    ++produced;
  }
  return rep;
}

Report run_torsion(const BoundarySpectrum& s, double r, double L, double twist,
                   double tol) {
  Report rep;
  rep.set_tolerance(tol);
  spectrum_meta(rep, s);
  rep.set_meta("run", "torsion");
  rep.set_meta("L", format_double(L));
  rep.set_meta("twist", format_double(twist));

  auto eq = alternating_sum_equalities(s, r + L);
  for (const IdentityReport* ir : {&eq.eq_tilde0, &eq.eq_tilde1, &eq.eq_flat})
    rep.add_row(ir->quantity, ir->lhs, ir->rhs, ir->residual, ir->bound, r + L, -1, "",
                ir->notes);

  auto g = gluing_torsion_check(s, r, L, twist);
  rep.add_row("torsion_real_additivity", g.real_lhs, g.real_rhs, g.real_residual,
              g.real_bound, r, -1, "", g.notes);
  rep.add_row("torsion_eta_closed", g.eta_closed, 0.0, std::abs(g.eta_closed), 0.0, r,
              -1, "", "sign-symmetric model");
  rep.add_row("torsion_eta_pieces", g.eta_pieces, 0.0, std::abs(g.eta_pieces), 0.0, r,
              -1, "");
  rep.add_row("torsion_congruence_mod_2pii", g.imaginary_congruent ? 1.0 : 0.0, 1.0,
              g.imaginary_congruent ? 0.0 : 1.0, 0.0, r, -1, "");
  rep.add_row("ledger_cancellation_exact", g.ledger_cancellation_exact ? 1.0 : 0.0,
              1.0, g.ledger_cancellation_exact ? 0.0 : 1.0, 0.0, r, -1, "");

  TorsionLedger ledger = make_cylinder_ledger(s, r + L);
  TorsionValue tm = refined_torsion(ledger, Bc::PMinusL0);
  TorsionValue tp = refined_torsion(ledger, Bc::PPlusL1);
  rep.set_meta("log_T_pminus",
               format_double(tm.log_t.real()) + (tm.log_t.imag() < 0 ? "-" : "+") +
                   format_double(std::abs(tm.log_t.imag())) + "i");
  rep.set_meta("log_T_pplus",
               format_double(tp.log_t.real()) + (tp.log_t.imag() < 0 ? "-" : "+") +
                   format_double(std::abs(tp.log_t.imag())) + "i");
  return rep;
}

}  // namespace sg

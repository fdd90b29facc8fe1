#include "core/spectra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace sg {

namespace {

bool sector_from_word(const std::string& w, Sector& out) {
  if (w == "plus") {
    out = Sector::Plus;
    return true;
  }
  if (w == "minus") {
    out = Sector::Minus;
    return true;
  }
  return false;
}

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  fail(ErrorCode::Parse, path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void BoundarySpectrum::sort_modes() {
  std::sort(modes_.begin(), modes_.end(), [](const BoundaryMode& a, const BoundaryMode& b) {
    if (a.q != b.q) return a.q < b.q;
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.sector == Sector::Plus && b.sector == Sector::Minus;
  });
}

void BoundarySpectrum::validate() const {
  if (m_ < 1 || m_ % 2 == 0) fail(ErrorCode::Invariant, "ambient dimension m must be odd");
  int nb = m_;  // degrees 0 .. m-1
  if (static_cast<int>(l_plus_.size()) != nb || static_cast<int>(l_minus_.size()) != nb)
    fail(ErrorCode::Invariant, "kernel dimension arrays must cover degrees 0..m-1");
  for (const auto& md : modes_) {
    if (md.q < 0 || md.q > m_ - 1)
      fail(ErrorCode::Invariant, "mode degree out of range 0..m-1");
    if (!(md.lambda > 0.0)) fail(ErrorCode::Invariant, "eigenvalue must be positive");
    if (md.mult <= 0) fail(ErrorCode::Invariant, "multiplicity must be positive");
  }
  for (int q = 0; q < nb; ++q) {
    if (l_plus_[q] < 0 || l_minus_[q] < 0)
      fail(ErrorCode::Invariant, "kernel dimensions must be non-negative");
    if (l_minus_[q] != l_plus_[m_ - 1 - q])
      fail(ErrorCode::Invariant, "l_q^- != l_{m-1-q}^+");
  }
}

int BoundarySpectrum::l(int q) const { return l_plus(q) + l_minus(q); }
int BoundarySpectrum::l_plus(int q) const {
  return (q < 0 || q >= m_) ? 0 : l_plus_[q];
}
int BoundarySpectrum::l_minus(int q) const {
  return (q < 0 || q >= m_) ? 0 : l_minus_[q];
}

bool BoundarySpectrum::acyclic() const {
  for (int q = 0; q < m_; ++q)
    if (l(q) != 0) return false;
  return true;
}

double BoundarySpectrum::min_eigenvalue() const {
  double mn = std::numeric_limits<double>::infinity();
  for (const auto& md : modes_) mn = std::min(mn, md.lambda);
  return mn;
}

BoundarySpectrum BoundarySpectrum::twisted_torus(double L1, double L2, double alpha,
                                                 double beta, double cutoff,
                                                 bool require_acyclic) {
  if (!(L1 > 0.0) || !(L2 > 0.0))
    fail(ErrorCode::InvalidArgument, "torus side lengths must be positive");
  alpha -= std::floor(alpha);
  beta -= std::floor(beta);
  bool twisted = (alpha != 0.0 || beta != 0.0);
  if (require_acyclic && !twisted)
    fail(ErrorCode::InvalidArgument,
         "untwisted torus has harmonic forms; acyclic model requires a nontrivial twist");

  ThetaModel lattice = ThetaModel::shifted_lattice({L1, L2}, {alpha, beta}, 1.0, cutoff);
  if (lattice.modes().empty())
    fail(ErrorCode::InvalidArgument, "cutoff below the first eigenvalue");

  BoundarySpectrum s;
  s.m_ = 3;
  s.cutoff_ = cutoff;
  s.torus_ = TorusParams{L1, L2, alpha, beta, cutoff};
  for (const auto& md : lattice.modes()) {
    int mult = static_cast<int>(std::lround(md.weight));
    s.modes_.push_back({0, md.lambda, mult, Sector::Plus});
    s.modes_.push_back({1, md.lambda, mult, Sector::Plus});
    s.modes_.push_back({1, md.lambda, mult, Sector::Minus});
    s.modes_.push_back({2, md.lambda, mult, Sector::Minus});
  }
  if (twisted) {
    s.l_plus_ = {0, 0, 0};
    s.l_minus_ = {0, 0, 0};
  } else {
    // Harmonic forms of the flat torus: Betti numbers (1, 2, 1). The constant
    // function sits in the Lagrangian K; duality fixes the rest.
    s.l_plus_ = {1, 1, 0};
    s.l_minus_ = {0, 1, 1};
  }
  s.sort_modes();
  // Heat-sum estimate of the dropped tail at t = 1, counting all four form
  // copies per scalar eigenvalue.
  Bounded tail = lattice.heat_tail(1.0);
  s.tail_estimate_ = 4.0 * (tail.value + tail.bound);
  s.validate();
  return s;
}

BoundarySpectrum BoundarySpectrum::from_parts(int m, std::vector<BoundaryMode> modes,
                                              std::vector<int> l_plus,
                                              std::vector<int> l_minus,
                                              double tail_estimate) {
  BoundarySpectrum s;
  s.m_ = m;
  s.modes_ = std::move(modes);
  s.l_plus_ = std::move(l_plus);
  s.l_minus_ = std::move(l_minus);
  s.tail_estimate_ = tail_estimate;
  double mx = 0.0;
  for (const auto& md : s.modes_) mx = std::max(mx, md.lambda);
  s.cutoff_ = mx;
  s.sort_modes();
  s.validate();
  return s;
}

BoundarySpectrum BoundarySpectrum::truncated(double cap) const {
  if (!(cap > 0.0)) fail(ErrorCode::InvalidArgument, "truncation cap must be positive");
  BoundarySpectrum s = *this;
  if (cap >= cutoff_) return s;  // +inf or above the current cutoff: identity
  s.modes_.clear();
  double dropped = 0.0;
  for (const auto& md : modes_) {
    if (md.lambda <= cap)
      s.modes_.push_back(md);
    else
      dropped += md.mult * std::exp(-md.lambda);
  }
  s.tail_estimate_ = tail_estimate_ + dropped;
  s.cutoff_ = cap;
  if (s.torus_) s.torus_->cutoff = cap;
  return s;
}

ThetaModel BoundarySpectrum::model_from_mode_list(std::vector<Mode> list) const {
  if (list.empty()) return ThetaModel();
  if (tail_estimate_ == 0.0 && !torus_) return ThetaModel::finite(std::move(list));
  return ThetaModel::fitted(std::move(list), boundary_dim());
}

ThetaModel BoundarySpectrum::sector_model(int q, Sector sector) const {
  std::vector<Mode> list;
  for (const auto& md : modes_) {
    if (md.q != q || md.sector != sector) continue;
    list.push_back({md.lambda, static_cast<double>(md.mult)});
  }
  if (list.empty()) return ThetaModel();
  if (torus_) {
    // Populated torus slots are exact copies of the scalar lattice.
    const TorusParams& tp = *torus_;
    return ThetaModel::shifted_lattice({tp.L1, tp.L2}, {tp.alpha, tp.beta}, 1.0,
                                       tp.cutoff);
  }
  return model_from_mode_list(std::move(list));
}

ThetaModel BoundarySpectrum::degree_model(int q) const {
  if (q < 0 || q > m_ - 1) return ThetaModel();
  if (torus_) {
    int w = (q == 1) ? 2 : 1;
    const TorusParams& tp = *torus_;
    return ThetaModel::shifted_lattice({tp.L1, tp.L2}, {tp.alpha, tp.beta},
                                       static_cast<double>(w), tp.cutoff);
  }
  std::vector<Mode> list;
  for (const auto& md : modes_)
    if (md.q == q) list.push_back({md.lambda, static_cast<double>(md.mult)});
  return model_from_mode_list(std::move(list));
}

void BoundarySpectrum::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << "# boundary spectrum\n";
  if (torus_) {
    out << "# generator: torus L1=" << format_double(torus_->L1)
        << " L2=" << format_double(torus_->L2)
        << " alpha=" << format_double(torus_->alpha)
        << " beta=" << format_double(torus_->beta)
        << " cutoff=" << format_double(torus_->cutoff) << "\n";
  }
  out << "# tail-estimate: " << format_double(tail_estimate_) << "\n";
  out << "m=" << m_ << "\n";
  for (int q = 0; q < m_; ++q)
    out << "l" << q << "=" << l_plus_[q] << "," << l_minus_[q] << "\n";
  for (const auto& md : modes_) {
    out << "q=" << md.q << " lambda=" << format_double(md.lambda) << " mult=" << md.mult
        << " sector=" << (md.sector == Sector::Plus ? "plus" : "minus") << "\n";
  }
  if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

BoundarySpectrum BoundarySpectrum::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  BoundarySpectrum s;
  s.m_ = -1;
  std::optional<TorusParams> torus;
  double tail = 0.0;
  std::vector<std::pair<int, std::pair<int, int>>> lrows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Recognized metadata comments; all other comments are ignored.
    if (!line.empty() && line[0] == '#') {
      std::istringstream c(line.substr(1));
      std::string word;
      c >> word;
      if (word == "generator:") {
        std::string kind;
        c >> kind;
        if (kind == "torus") {
          TorusParams tp;
          std::string kv;
          bool ok = true;
          while (c >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) {
              ok = false;
              break;
            }
            std::string key = kv.substr(0, eq);
            double val = std::strtod(kv.c_str() + eq + 1, nullptr);
            if (key == "L1") tp.L1 = val;
            else if (key == "L2") tp.L2 = val;
            else if (key == "alpha") tp.alpha = val;
            else if (key == "beta") tp.beta = val;
            else if (key == "cutoff") tp.cutoff = val;
            else ok = false;
          }
          if (ok && tp.cutoff > 0.0) torus = tp;
        }
      } else if (word == "tail-estimate:") {
        c >> tail;
      }
      continue;
    }
    std::string stripped = line;
    stripped.erase(0, stripped.find_first_not_of(" \t"));
    if (stripped.empty()) continue;

    if (stripped.rfind("m=", 0) == 0) {
      s.m_ = std::atoi(stripped.c_str() + 2);
      continue;
    }
    if (stripped[0] == 'l' && std::isdigit(static_cast<unsigned char>(stripped[1]))) {
      int q = -1, lp = -1, lm = -1;
      if (std::sscanf(stripped.c_str(), "l%d=%d,%d", &q, &lp, &lm) != 3)
        parse_fail(path, lineno, "expected 'l<q>=<plus>,<minus>'");
      lrows.push_back({q, {lp, lm}});
      continue;
    }
    if (stripped.rfind("q=", 0) == 0) {
      BoundaryMode md;
      char sector_word[16] = {0};
      double lambda = 0.0;
      int n = std::sscanf(stripped.c_str(), "q=%d lambda=%lf mult=%d sector=%15s",
                          &md.q, &lambda, &md.mult, sector_word);
      if (n != 4) parse_fail(path, lineno, "expected 'q=.. lambda=.. mult=.. sector=..'");
      if (!(lambda > 0.0)) parse_fail(path, lineno, "eigenvalue must be positive");
      if (md.mult <= 0) parse_fail(path, lineno, "multiplicity must be positive");
      md.lambda = lambda;
      if (!sector_from_word(sector_word, md.sector))
        parse_fail(path, lineno, "sector must be 'plus' or 'minus'");
      s.modes_.push_back(md);
      continue;
    }
    parse_fail(path, lineno, "unrecognized record");
  }
  if (s.m_ < 0) fail(ErrorCode::Parse, path + ": missing 'm=' header");
  s.l_plus_.assign(s.m_, 0);
  s.l_minus_.assign(s.m_, 0);
  for (auto& [q, lv] : lrows) {
    if (q < 0 || q >= s.m_) fail(ErrorCode::Parse, path + ": kernel degree out of range");
    s.l_plus_[q] = lv.first;
    s.l_minus_[q] = lv.second;
  }
  s.tail_estimate_ = tail;
  s.torus_ = torus;
  double mx = 0.0;
  for (const auto& md : s.modes_) mx = std::max(mx, md.lambda);
  s.cutoff_ = torus ? torus->cutoff : mx;
  s.sort_modes();
  try {
    s.validate();
  } catch (const Error& e) {
    fail(ErrorCode::Invariant, path + ": " + e.what());
  }
  return s;
}

}  // namespace sg

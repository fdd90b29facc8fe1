#include "core/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/quadrature.hpp"
#include "core/special.hpp"

namespace sg {

namespace {

constexpr double kDualCap = 96.0;   // duals enumerated up to bgap <= kDualCap
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Mode> normalize_modes(std::vector<Mode> modes) {
  for (const auto& m : modes) {
    if (!(m.lambda > 0.0)) fail(ErrorCode::InvalidArgument, "eigenvalue must be positive");
    if (!(m.weight > 0.0)) fail(ErrorCode::InvalidArgument, "mode weight must be positive");
  }
  std::sort(modes.begin(), modes.end(),
            [](const Mode& a, const Mode& b) { return a.lambda < b.lambda; });
  std::vector<Mode> out;
  for (const auto& m : modes) {
    if (!out.empty() &&
        std::abs(m.lambda - out.back().lambda) <= 1e-9 * (1.0 + out.back().lambda)) {
      out.back().weight += m.weight;
    } else {
      out.push_back(m);
    }
  }
  return out;
}

// Enumerate n in Z^d with sum_i a_i (n_i + d_i)^2 <= cap, calling f(q, ndotd)
// where ndotd feeds the character cos(2 pi m.delta) on the dual side.
template <class F>
void enumerate_ellipsoid(const std::vector<double>& coeff,
                         const std::vector<double>& shift, double cap,
                         const F& f) {
  const int d = static_cast<int>(coeff.size());
  std::vector<int> n(d, 0);
  std::vector<double> partial(d + 1, 0.0);
  // Recursive descent without recursion: simple nested loop via lambda.
  auto rec = [&](auto&& self, int axis) -> void {
    if (axis == d) {
      f(partial[d], n);
      return;
    }
    double rem = cap - partial[axis];
    if (rem < 0.0) return;
    double half = std::sqrt(rem / coeff[axis]);
    int lo = static_cast<int>(std::ceil(-shift[axis] - half - 1e-12));
    int hi = static_cast<int>(std::floor(-shift[axis] + half + 1e-12));
    for (int k = lo; k <= hi; ++k) {
      double x = (k + shift[axis]);
      double q = coeff[axis] * x * x;
      if (partial[axis] + q > cap * (1.0 + 1e-14)) continue;
      n[axis] = k;
      partial[axis + 1] = partial[axis] + q;
      self(self, axis + 1);
    }
  };
  rec(rec, 0);
}

bool near_integer(double x) { return std::abs(x - std::lround(x)) < 1e-12; }

}  // namespace

ThetaModel ThetaModel::finite(std::vector<Mode> modes) {
  ThetaModel m;
  m.tail_ = Tail::None;
  m.modes_ = normalize_modes(std::move(modes));
  m.lambda_max_ = kInf;
  return m;
}

ThetaModel ThetaModel::shifted_lattice(const std::vector<double>& lengths,
                                       const std::vector<double>& shifts,
                                       double weight, double cutoff) {
  if (lengths.empty() || lengths.size() != shifts.size())
    fail(ErrorCode::InvalidArgument, "lattice lengths/shifts mismatch");
  for (double l : lengths)
    if (!(l > 0.0)) fail(ErrorCode::InvalidArgument, "lattice length must be positive");
  if (!(cutoff > 0.0)) fail(ErrorCode::InvalidArgument, "cutoff must be positive");
  const int d = static_cast<int>(lengths.size());

  ThetaModel m;
  m.tail_ = Tail::Exact;
  m.lambda_max_ = cutoff;

  std::vector<double> coeff(d);
  for (int i = 0; i < d; ++i) {
    double w = 2.0 * kPi / lengths[i];
    coeff[i] = w * w;
  }
  std::vector<Mode> raw;
  double zero_weight = 0.0;
  enumerate_ellipsoid(coeff, shifts, cutoff, [&](double q, const std::vector<int>&) {
    if (q < 1e-12) {
      zero_weight += weight;
    } else {
      raw.push_back({q, weight});
    }
  });
  m.modes_ = normalize_modes(std::move(raw));

  double base = weight;
  for (int i = 0; i < d; ++i) base *= lengths[i] / (2.0 * std::sqrt(kPi));
  m.terms_.push_back({base, -0.5 * d, 0.0});
  if (zero_weight > 0.0) m.terms_.push_back({-zero_weight, 0.0, 0.0});

  // Dual lattice: b = sum m_i^2 l_i^2 / 4, coefficient base * cos(2 pi m.delta).
  std::vector<double> dual_coeff(d), dual_shift(d, 0.0);
  for (int i = 0; i < d; ++i) dual_coeff[i] = lengths[i] * lengths[i] / 4.0;
  enumerate_ellipsoid(dual_coeff, dual_shift, kDualCap,
                      [&](double b, const std::vector<int>& n) {
                        if (b < 1e-12) return;  // m = 0 is the power term
                        double phase = 0.0;
                        for (int i = 0; i < d; ++i) phase += n[i] * shifts[i];
                        double c = base * std::cos(2.0 * kPi * phase);
                        if (c != 0.0) m.terms_.push_back({c, -0.5 * d, b});
                      });
  double lmin = *std::min_element(lengths.begin(), lengths.end());
  m.rest_bgap_ = kDualCap;
  m.rest_scale_ = std::abs(base) * std::pow(8.0 * std::sqrt(kDualCap) / lmin + 4.0, d);
  return m;
}

ThetaModel ThetaModel::fitted(std::vector<Mode> modes, int heat_dim) {
  ThetaModel m;
  m.tail_ = Tail::Fitted;
  m.heat_dim_ = heat_dim;
  m.modes_ = normalize_modes(std::move(modes));
  if (m.modes_.empty()) {
    m.tail_ = Tail::None;
    m.lambda_max_ = kInf;
    return m;
  }
  m.lambda_max_ = m.modes_.back().lambda;
  double count = 0.0;
  for (const auto& md : m.modes_) count += md.weight;
  double a = 0.5 * heat_dim;
  double cw = count / std::pow(m.lambda_max_, a);
  m.terms_.push_back({cw * std::tgamma(a + 1.0), -a, 0.0});
  // Fit instability, recorded as a pseudo-remainder: difference of the Weyl
  // constant fitted at the full and at the half cutoff.
  double half_count = 0.0;
  for (const auto& md : m.modes_)
    if (md.lambda <= 0.5 * m.lambda_max_) half_count += md.weight;
  double cw_half = half_count / std::pow(0.5 * m.lambda_max_, a);
  m.rest_scale_ = std::abs(cw - cw_half) * std::tgamma(a + 1.0);
  m.rest_bgap_ = 0.0;
  return m;
}

ThetaModel ThetaModel::product(const ThetaModel& other) const {
  const ThetaModel& A = *this;
  const ThetaModel& B = other;
  if (A.empty() || B.empty()) fail(ErrorCode::InvalidArgument, "product of empty spectra");
  if (A.tail_ == Tail::Fitted || B.tail_ == Tail::Fitted)
    fail(ErrorCode::Unsupported, "product with fitted tail models");

  ThetaModel m;
  double capA = A.lambda_max_, capB = B.lambda_max_;
  double cap = std::min(capA + B.lambda_min(), capB + A.lambda_min());
  std::vector<Mode> raw;
  for (const auto& a : A.modes_) {
    if (a.lambda + B.lambda_min() > cap) break;
    for (const auto& b : B.modes_) {
      double l = a.lambda + b.lambda;
      if (l > cap) break;
      raw.push_back({l, a.weight * b.weight});
    }
  }
  m.modes_ = normalize_modes(std::move(raw));
  m.lambda_max_ = cap;

  if (A.tail_ == Tail::None && B.tail_ == Tail::None) {
    m.tail_ = Tail::None;
    return m;
  }
  m.tail_ = Tail::Exact;

  auto cross_terms = [&m](const std::vector<ThetaTerm>& x, const std::vector<ThetaTerm>& y) {
    for (const auto& tx : x)
      for (const auto& ty : y)
        m.terms_.push_back({tx.coeff * ty.coeff, tx.power + ty.power, tx.bgap + ty.bgap});
  };

  // Term representation of a finite factor: Taylor-expand each e^{-lambda t}.
  auto taylor_terms = [](const ThetaModel& f, double& tmax, double& rem_scale) {
    constexpr int J = 18;
    std::vector<ThetaTerm> out;
    double lmax = f.modes_.back().lambda;
    tmax = 0.7 / lmax;
    double wsum = 0.0;
    for (const auto& md : f.modes_) {
      double c = md.weight;
      wsum += md.weight;
      for (int j = 0; j < J; ++j) {
        out.push_back({c, static_cast<double>(j), 0.0});
        c *= -md.lambda / (j + 1);
      }
    }
    // |remainder| <= sum w (lambda t)^J / J! <= wsum (lmax t)^J / J!.
    double fact = 1.0;
    for (int j = 1; j <= J; ++j) fact *= j;
    rem_scale = wsum * std::pow(lmax, J) / fact;  // times t^J
    (void)tmax;
    return out;
  };

  if (A.tail_ == Tail::Exact && B.tail_ == Tail::Exact) {
    cross_terms(A.terms_, B.terms_);
    m.terms_tmax_ = std::min(A.terms_tmax_, B.terms_tmax_);
    double ma = A.terms_abs_scale(), mb = B.terms_abs_scale();
    m.rest_scale_ = A.rest_scale_ * mb + ma * B.rest_scale_ + A.rest_scale_ * B.rest_scale_;
    m.rest_bgap_ = std::min(A.rest_bgap_, B.rest_bgap_);
    m.taylor_rem_scale_ = A.taylor_rem_scale_ * mb + ma * B.taylor_rem_scale_;
    m.taylor_rem_power_ = std::max(A.taylor_rem_power_, B.taylor_rem_power_);
    return m;
  }

  const ThetaModel& fin = (A.tail_ == Tail::None) ? A : B;
  const ThetaModel& ex = (A.tail_ == Tail::None) ? B : A;
  if (fin.modes_.size() > 64)
    fail(ErrorCode::Unsupported, "finite factor too large for product expansion");
  double tmax = 0.0, rem = 0.0;
  auto ft = taylor_terms(fin, tmax, rem);
  cross_terms(ft, ex.terms_);
  m.terms_tmax_ = std::min(tmax, ex.terms_tmax_);
  double me = ex.terms_abs_scale();
  double wsum = fin.total_weight();
  m.rest_scale_ = wsum * ex.rest_scale_;
  m.rest_bgap_ = ex.rest_bgap_;
  m.taylor_rem_scale_ = rem * me + wsum * ex.taylor_rem_scale_;
  m.taylor_rem_power_ = 18.0;
  return m;
}

ThetaModel ThetaModel::scaled(double c) const {
  if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "scale must be positive");
  ThetaModel m = *this;
  for (auto& md : m.modes_) md.lambda *= c;
  if (std::isfinite(m.lambda_max_)) m.lambda_max_ *= c;
  for (auto& t : m.terms_) {
    t.coeff *= std::pow(c, t.power);
    t.bgap /= c;
  }
  m.rest_bgap_ /= c;
  m.rest_scale_ *= std::pow(c, -4.0);  // generous for the powers in range
  m.terms_tmax_ /= c;
  if (m.taylor_rem_scale_ > 0.0) m.taylor_rem_scale_ *= std::pow(c, m.taylor_rem_power_);
  return m;
}

ThetaModel ThetaModel::weighted(double w) const {
  if (!(w > 0.0)) fail(ErrorCode::InvalidArgument, "weight must be positive");
  ThetaModel m = *this;
  for (auto& md : m.modes_) md.weight *= w;
  for (auto& t : m.terms_) t.coeff *= w;
  m.rest_scale_ *= w;
  m.taylor_rem_scale_ *= w;
  return m;
}

ThetaModel ThetaModel::truncated(double cap) const {
  ThetaModel m = *this;
  if (!(cap > 0.0)) fail(ErrorCode::InvalidArgument, "truncation cap must be positive");
  if (cap >= m.lambda_max_) return m;
  std::vector<Mode> kept;
  for (const auto& md : m.modes_)
    if (md.lambda <= cap) kept.push_back(md);
  m.modes_ = std::move(kept);
  m.lambda_max_ = cap;
  if (m.tail_ == Tail::None) m.tail_ = Tail::Fitted;  // no structure left for the tail
  return m;
}

double ThetaModel::lambda_min() const {
  if (modes_.empty()) return kInf;
  return modes_.front().lambda;
}

double ThetaModel::total_weight() const {
  double s = 0.0;
  for (const auto& m : modes_) s += m.weight;
  return s;
}

double ThetaModel::terms_abs_scale() const {
  // sum |c| t^p e^{-b/t} at t = 1, a crude magnitude for remainder composition
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff) * std::exp(-t.bgap);
  return std::max(s, 1.0);
}

double ThetaModel::theta_direct(double t) const {
  double s = 0.0;
  for (const auto& m : modes_) {
    double x = m.lambda * t;
    if (x > 745.0) break;
    s += m.weight * std::exp(-x);
  }
  return s;
}

double ThetaModel::theta_terms(double t) const {
  double s = 0.0;
  for (const auto& tm : terms_) {
    double e = (tm.bgap > 0.0) ? std::exp(-tm.bgap / t) : 1.0;
    s += tm.coeff * std::pow(t, tm.power) * e;
  }
  return s;
}

double ThetaModel::dual_rest_bound(double t) const {
  double s = 0.0;
  if (rest_scale_ > 0.0) {
    s += (rest_bgap_ > 0.0) ? rest_scale_ * std::exp(-0.5 * rest_bgap_ / t) : rest_scale_;
  }
  if (taylor_rem_scale_ > 0.0) s += taylor_rem_scale_ * std::pow(t, taylor_rem_power_);
  return s;
}

Bounded ThetaModel::heat_tail(double t) const {
  if (tail_ == Tail::None) return {0.0, 0.0};
  if (tail_ == Tail::Exact) {
    if (t > terms_tmax_) t = terms_tmax_;  // caller-side estimates only
    double v = theta_terms(t) - theta_direct(t);
    double b = dual_rest_bound(t);
    if (v < 0.0) v = 0.0;
    return {v, b};
  }
  // Fitted: Weyl tail estimate.
  double a = 0.5 * heat_dim_;
  double cw = terms_.empty() ? 0.0 : terms_[0].coeff / std::tgamma(a + 1.0);
  double v = cw * a * std::pow(t, -a) * upper_gamma(a, lambda_max_ * t) * std::tgamma(a);
  return {v, v + rest_scale_ * std::pow(t, -a)};
}

double ThetaModel::split_point() const {
  double T = 1.0;
  if (!modes_.empty() && std::isfinite(lambda_max_))
    T = std::clamp(34.0 / lambda_max_, 0.02, 1.0);
  T = std::min(T, terms_tmax_);
  return T;
}

// Pieces of Gamma(s) zeta(s) = F(s) for Re s away from poles, plus bounds.
Bounded ThetaModel::bracket(double s, double T) const {
  Bounded F{0.0, 0.0};
  // Mode side.
  for (const auto& m : modes_) {
    double x = m.lambda * T;
    if (x > 745.0) break;
    F.value += m.weight * std::pow(m.lambda, -s) * upper_gamma(s, x);
  }
  // Mode tail: Gamma(s,x) <= K x^{s-1} e^{-x}.
  Bounded H = heat_tail(T);
  if (H.value + H.bound > 0.0 && std::isfinite(lambda_max_)) {
    double K = 1.0;
    if (s > 1.0) {
      double x0 = lambda_max_ * T;
      K = (x0 > 2.0 * (s - 1.0)) ? 2.0 : 1e6;
    }
    F.bound += K * std::pow(T, s - 1.0) / lambda_max_ * (H.value + H.bound);
  }
  // Term side.
  for (const auto& tm : terms_) {
    if (tm.bgap == 0.0) {
      double denom = s + tm.power;
      if (std::abs(denom) < 1e-9)
        fail(ErrorCode::InvalidArgument, "zeta evaluated at a pole");
      F.value += tm.coeff * std::pow(T, denom) / denom;
    } else {
      F.value += tm.coeff * std::pow(tm.bgap, s + tm.power) *
                 upper_gamma(-s - tm.power, tm.bgap / T);
    }
  }
  // Dropped-dual / Taylor remainder, integrated against t^{s-1} over (0, T].
  double rb = dual_rest_bound(T);
  F.bound += rb * std::pow(T, s) * 4.0;
  return F;
}

ZetaResult ThetaModel::zeta_at(double s, double required_tol) const {
  ZetaResult r = zeta_at_impl(s);
  if (r.error_bound > required_tol)
    fail(ErrorCode::Tolerance, "zeta error bound " + format_double(r.error_bound) +
                                   " exceeds the requested tolerance");
  return r;
}

ZetaResult ThetaModel::zeta_at_impl(double s) const {
  ZetaResult r;
  r.s = s;
  if (empty()) {
    r.method = "direct-sum";
    return r;
  }
  if (tail_ == Tail::None) {
    double v = 0.0;
    for (const auto& m : modes_) v += m.weight * std::pow(m.lambda, -s);
    r.value = v;
    r.error_bound = 1e-15 * std::abs(v) * (1.0 + std::abs(s));
    r.method = "direct-sum";
    return r;
  }
  // Nonpositive integer s: zeta(-n) = (-1)^n n! Res_{s=-n} F, and only pure
  // power terms contribute to the residue.
  if (s <= 1e-12 && near_integer(s)) {
    int n = static_cast<int>(std::lround(-s));
    double res = 0.0;
    for (const auto& tm : terms_)
      if (tm.bgap == 0.0 && std::abs(tm.power - n) < 1e-12) res += tm.coeff;
    double fact = 1.0;
    for (int j = 2; j <= n; ++j) fact *= j;
    r.value = ((n % 2 == 0) ? 1.0 : -1.0) * fact * res;
    r.error_bound = (tail_ == Tail::Fitted) ? rest_scale_ : 1e-14 * (1.0 + std::abs(r.value));
    r.method = "exact-identity";
    return r;
  }
  double T = split_point();
  Bounded F = bracket(s, T);
  double g = std::tgamma(s);
  r.value = F.value / g;
  r.error_bound = F.bound / std::abs(g) + 1e-14 * (1.0 + std::abs(r.value));
  r.method = "exact-identity";
  return r;
}

ZetaResult ThetaModel::zeta_at_quadrature(double s, double tol) const {
  ZetaResult r;
  r.s = s;
  r.method = "theta-split";
  if (empty()) return r;
  if (tail_ == Tail::None) return zeta_at(s);
  if (tail_ == Tail::Fitted)
    fail(ErrorCode::Unsupported, "theta-split route needs an exact heat representation");
  double T = split_point();
  // Power part, analytic.
  Bounded F{0.0, 0.0};
  for (const auto& tm : terms_) {
    if (tm.bgap != 0.0) continue;
    double denom = s + tm.power;
    if (std::abs(denom) < 1e-9) fail(ErrorCode::InvalidArgument, "zeta evaluated at a pole");
    F.value += tm.coeff * std::pow(T, denom) / denom;
  }
  // Dual part, numerically on (0, T].
  auto dual = [&](double t) {
    double sum = 0.0;
    for (const auto& tm : terms_)
      if (tm.bgap > 0.0) sum += tm.coeff * std::pow(t, tm.power) * std::exp(-tm.bgap / t);
    return std::pow(t, s - 1.0) * sum;
  };
  F += integrate_finite(dual, 0.0, T, tol);
  // Large-t part, numerically on [T, Tend].
  double lmin = lambda_min();
  double t_end = std::max(2.0 * T, 52.0 / lmin);
  auto direct = [&](double t) { return std::pow(t, s - 1.0) * theta_direct(t); };
  F += integrate_finite(direct, T, t_end, tol);
  F.bound += theta_direct(t_end) / lmin * std::pow(t_end, s - 1.0);  // beyond t_end
  Bounded H = heat_tail(T);
  F.bound += (H.value + H.bound) * std::pow(T, s - 1.0) / std::max(lambda_max_, 1.0);
  F.bound += dual_rest_bound(T) * std::pow(T, s) * 4.0;
  double g = std::tgamma(s);
  r.value = F.value / g;
  r.error_bound = F.bound / std::abs(g) + 1e-13 * (1.0 + std::abs(r.value));
  return r;
}

Bounded ThetaModel::zeta0() const {
  ZetaResult r = zeta_at(0.0);
  return {r.value, r.error_bound};
}

Bounded ThetaModel::zeta_prime0() const {
  if (empty()) return {0.0, 0.0};
  if (tail_ == Tail::None) {
    double v = 0.0;
    for (const auto& m : modes_) v -= m.weight * std::log(m.lambda);
    return {v, 1e-15 * std::abs(v)};
  }
  double T = split_point();
  Bounded f0{0.0, 0.0};
  double c0 = 0.0;
  for (const auto& m : modes_) {
    double x = m.lambda * T;
    if (x > 745.0) break;
    f0.value += m.weight * exp1(x);
  }
  Bounded H = heat_tail(T);
  if (std::isfinite(lambda_max_))
    f0.bound += (H.value + H.bound) / (lambda_max_ * T);
  for (const auto& tm : terms_) {
    if (tm.bgap == 0.0) {
      if (std::abs(tm.power) < 1e-12) {
        c0 += tm.coeff;
        f0.value += tm.coeff * std::log(T);
      } else {
        f0.value += tm.coeff * std::pow(T, tm.power) / tm.power;
      }
    } else {
      f0.value += tm.coeff * std::pow(tm.bgap, tm.power) * upper_gamma(-tm.power, tm.bgap / T);
    }
  }
  f0.bound += dual_rest_bound(T) * 4.0;
  if (tail_ == Tail::Fitted) f0.bound += rest_scale_ * (1.0 + std::abs(std::log(T)));
  return {f0.value + kEulerGamma * c0, f0.bound};
}

Bounded ThetaModel::zeta_neg_half() const {
  if (empty()) return {0.0, 0.0};
  if (tail_ == Tail::None) {
    double v = 0.0;
    for (const auto& m : modes_) v += m.weight * std::sqrt(m.lambda);
    return {v, 1e-15 * std::abs(v)};
  }
  ZetaResult r = zeta_at(-0.5);
  return {r.value, r.error_bound};
}

Bounded ThetaModel::log_det() const {
  Bounded zp = zeta_prime0();
  return {-zp.value, zp.bound};
}

void SignedSpectrum::validate() const {
  for (const auto& e : entries) {
    if (e.mu == 0.0) fail(ErrorCode::Invariant, "signed spectrum entries must be nonzero");
    if (!(e.weight > 0.0)) fail(ErrorCode::Invariant, "signed spectrum weights must be positive");
  }
  if (kernel_dim < 0) fail(ErrorCode::Invariant, "kernel dimension must be non-negative");
}

bool SignedSpectrum::sign_symmetric(double tol) const {
  std::vector<std::pair<double, double>> pos, neg;
  for (const auto& e : entries) {
    if (e.mu > 0.0)
      pos.push_back({e.mu, e.weight});
    else
      neg.push_back({-e.mu, e.weight});
  }
  auto cmp = [](const auto& a, const auto& b) { return a.first < b.first; };
  std::sort(pos.begin(), pos.end(), cmp);
  std::sort(neg.begin(), neg.end(), cmp);
  if (pos.size() != neg.size()) return false;
  for (size_t i = 0; i < pos.size(); ++i) {
    if (std::abs(pos[i].first - neg[i].first) > tol * (1.0 + pos[i].first)) return false;
    if (std::abs(pos[i].second - neg[i].second) > tol) return false;
  }
  return true;
}

double eta_invariant(const SignedSpectrum& spec) {
  spec.validate();
  double s = 0.0;
  for (const auto& e : spec.entries) s += (e.mu > 0.0 ? e.weight : -e.weight);
  return 0.5 * (s + spec.kernel_dim);
}

Bounded xi_prime_zero(const ThetaModel& model) {
  Bounded z = model.zeta_neg_half();
  return {-z.value, z.bound};
}

double ladder_logdet_closed(Series series, double r) {
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "cylinder length must be positive");
  return series == Series::Integer ? std::log(2.0 * r) : std::log(2.0);
}

ThetaModel ladder_theta_model(Series series, double r, double cutoff) {
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "cylinder length must be positive");
  double shift = (series == Series::Integer) ? 0.0 : 0.5;
  return ThetaModel::shifted_lattice({2.0 * r}, {shift}, 0.5, cutoff);
}

}  // namespace sg

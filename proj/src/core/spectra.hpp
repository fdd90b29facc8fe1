#ifndef SPECGLUE_CORE_SPECTRA_HPP
#define SPECGLUE_CORE_SPECTRA_HPP

#include <optional>
#include <string>
#include <vector>

#include "core/zeta.hpp"

namespace sg {

// One eigenvalue of the boundary operator square on the degree-q form sector,
// tagged by which image sector (exact / coexact type) it lives in.
struct BoundaryMode {
  int q = 0;
  double lambda = 0.0;
  int mult = 1;
  Sector sector = Sector::Plus;
};

struct TorusParams {
  double L1 = 1.0, L2 = 1.0;
  double alpha = 0.0, beta = 0.0;
  double cutoff = 0.0;
};

// Positive boundary spectral data plus per-degree kernel dimensions; the sole
// input of every determinant formula in the library.
class BoundarySpectrum {
 public:
  // Flat twisted-torus model: eigenvalues
  //   4 pi^2 ((j + alpha)^2 / L1^2 + (k + beta)^2 / L2^2) <= cutoff,
  // with form-degree multiplicities (1, 2, 1); the degree-1 copy splits one
  // into each sector. Nontrivial twist kills all harmonic forms.
  static BoundarySpectrum twisted_torus(double L1, double L2, double alpha,
                                        double beta, double cutoff,
                                        bool require_acyclic);

  // Synthetic spectrum for tests and file ingestion.
  static BoundarySpectrum from_parts(int m, std::vector<BoundaryMode> modes,
                                     std::vector<int> l_plus,
                                     std::vector<int> l_minus,
                                     double tail_estimate = 0.0);

  static BoundarySpectrum load(const std::string& path);
  void save(const std::string& path) const;

  // Modes with lambda <= cap retained; kernel data preserved; the dropped
  // part is folded into the tail estimate.
  BoundarySpectrum truncated(double cap) const;

  int dimension() const { return m_; }           // ambient odd dimension m
  int boundary_dim() const { return m_ - 1; }
  const std::vector<BoundaryMode>& modes() const { return modes_; }
  int l(int q) const;
  int l_plus(int q) const;
  int l_minus(int q) const;
  bool acyclic() const;
  double tail_estimate() const { return tail_estimate_; }
  double cutoff() const { return cutoff_; }
  const std::optional<TorusParams>& torus() const { return torus_; }

  std::size_t mode_count() const { return modes_.size(); }
  double min_eigenvalue() const;

  // Weighted mode list of one (degree, sector) slot; empty model when the
  // slot is unpopulated. Degrees outside [0, m-1] give empty slots.
  ThetaModel sector_model(int q, Sector sector) const;
  // All sectors of one degree.
  ThetaModel degree_model(int q) const;

  // Direct sums over a slot: sum mult * f(sqrt(lambda)).
  template <class F>
  double sum_sector(int q, Sector sector, const F& f) const {
    double s = 0.0;
    for (const auto& md : modes_)
      if (md.q == q && md.sector == sector) s += md.mult * f(std::sqrt(md.lambda));
    return s;
  }
  template <class F>
  double sum_degree(int q, const F& f) const {
    return sum_sector(q, Sector::Plus, f) + sum_sector(q, Sector::Minus, f);
  }

 private:
  int m_ = 3;
  std::vector<BoundaryMode> modes_;  // sorted by (q, lambda, sector)
  std::vector<int> l_plus_, l_minus_;
  double tail_estimate_ = 0.0;
  double cutoff_ = 0.0;
  std::optional<TorusParams> torus_;

  void validate() const;
  void sort_modes();
  ThetaModel model_from_mode_list(std::vector<Mode> modes) const;
};

}  // namespace sg

#endif

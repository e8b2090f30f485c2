#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "optomech/model.hpp"
#include "optomech/numerics.hpp"
#include "optomech/two_qubit.hpp"

namespace optomech {

/// Coherent cavity field times a thermal (geometric) mirror distribution.
struct InitialState {
  std::complex<double> alpha;
  double nbar = 0.0;
  std::vector<double> mirror_weights;  // p_mu, mu in [0, mir_max]

  static InitialState make(const SystemParams& params, const Truncation& trunc);
  /// Probability of mirror levels above the cutoff.
  double tail_mass() const;
};

/// rho_{mu nu n m} on the truncated lattice mu, nu in [0, mir_max],
/// n, m in [0, cav_max], stored row-major over (mu, nu, n, m).
class DensityBlock {
 public:
  DensityBlock(const Truncation& trunc, const SystemParams& params,
               ScaledTime theta);

  int mirror_dim() const { return trunc_.mir_max + 1; }
  int cavity_dim() const { return trunc_.cav_max + 1; }
  const Truncation& truncation() const { return trunc_; }
  const SystemParams& params() const { return params_; }
  ScaledTime theta() const { return theta_; }
  bool normalized() const { return normalized_; }

  std::complex<double>& operator()(int mu, int nu, int n, int m) {
    return values_[index(mu, nu, n, m)];
  }
  const std::complex<double>& operator()(int mu, int nu, int n, int m) const {
    return values_[index(mu, nu, n, m)];
  }
  std::span<const std::complex<double>> data() const { return values_; }

  std::complex<double> trace() const;
  /// Divides by the trace and sets the normalized flag.
  void normalize();

  /// Full (mirror x cavity) matrix, row index mu * cavity_dim + n.
  Eigen::MatrixXcd flattened() const;
  Eigen::MatrixXcd cavity_reduced() const;
  Eigen::MatrixXcd mirror_reduced() const;
  double purity() const;
  /// max |rho_{mu nu n m} - conj(rho_{nu mu m n})|
  double hermiticity_defect() const;

  /// Debug dumps. JSON: index ranges, parameters and an interleaved
  /// [re, im, re, im, ...] array. Binary: see state.cpp for the record layout.
  void write_json(std::ostream& out) const;
  void write_binary(std::ostream& out) const;
  static DensityBlock read_binary(std::istream& in);

 private:
  std::size_t index(int mu, int nu, int n, int m) const {
    const std::size_t md = static_cast<std::size_t>(mirror_dim());
    const std::size_t cd = static_cast<std::size_t>(cavity_dim());
    return ((static_cast<std::size_t>(mu) * md + nu) * cd + n) * cd + m;
  }

  Truncation trunc_;
  SystemParams params_;
  ScaledTime theta_;
  bool normalized_ = false;
  std::vector<std::complex<double>> values_;
};

/// Cutoffs from the tail rule: the Poisson tail of |alpha|^2 beyond cav_max
/// and the mirror mass (including displaced components) beyond mir_max are
/// each below tail_tol / 2. The mirror cutoff is verified against the exact
/// diagonal and grown until it holds.
Truncation choose_truncation(const SystemParams& params, ScaledTime theta,
                             double tail_tol = 1e-12);

/// Density-matrix element of the evolved state, in log form. Normalized
/// thermal weights are used, so the elements of the infinite lattice sum
/// to unit trace.
LogComplex rho_element_log(const SystemParams& params, ScaledTime theta,
                           int mu, int nu, int n, int m);
std::complex<double> rho_element(const SystemParams& params, ScaledTime theta,
                                 int mu, int nu, int n, int m);

/// Block of rho_element values, trace-normalized. Throws ConfigError when
/// more than trunc.tail_tol of the probability lies outside the cutoffs.
DensityBlock build_rho(const SystemParams& params, ScaledTime theta,
                       const Truncation& trunc, unsigned workers = 1);

/// Brute-force construction from the closed-form evolution operator:
/// sum_mu p_mu U (|alpha><alpha| (x) |mu><mu|) U^dag, using displaced
/// number-state matrix elements. Initial thermal levels are summed well past
/// mir_max so that the truncated block is exact up to the output cutoff.
DensityBlock oracle_rho(const SystemParams& params, ScaledTime theta,
                        const Truncation& trunc);

/// Element from the Gaussian integral over the mirror's coherent-state
/// P-function, evaluated by a product Gauss-Hermite rule. Requires nbar > 0.
std::complex<double> rho_element_integral(const SystemParams& params,
                                          ScaledTime theta, int mu, int nu,
                                          int n, int m, int quadrature_order);

/// (|0> + |1>) (x) |0>_m evolved: |0>|0>_m + e^{i f}|1>|k eta>_m with
/// f = k^2 Lambda(theta). The mirror pair is the orthonormalized span of
/// {|0>_m, |k eta>_m}; the cavity pair is {|0>, |1>}.
TwoQubitState demo_qubit_photon(ScaledTime theta, double k);

}  // namespace optomech

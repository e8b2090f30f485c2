#pragma once

#include <complex>
#include <optional>

namespace optomech {

/// Physical configuration of the cavity + movable-mirror system.
///
/// The dynamics depend only on the scaled coupling k = g / w_m, the coherent
/// amplitude and the thermal occupancy. `cavity_freq` only contributes the
/// free phase exp(-i w0 a^dag a t) and defaults to zero.
struct SystemParams {
  double mirror_freq = 1.0;               // rad/s
  double coupling_k = 0.0;                // g / w_m
  std::complex<double> alpha{1.0, 0.0};   // coherent amplitude
  double nbar = 0.0;                      // mean thermal occupancy
  std::optional<double> temperature;      // K, source of nbar when set
  double cavity_freq = 0.0;               // rad/s

  /// Builds parameters with nbar taken from the Bose factor at `temperature`.
  static SystemParams from_temperature(double temperature, double mirror_freq,
                                       double coupling_k,
                                       std::complex<double> alpha);

  /// Throws ConfigError on invalid fields or on a temperature / nbar mismatch
  /// larger than 1e-9 relative.
  void validate() const;

  /// x = nbar / (1 + nbar), the Boltzmann ratio exp(-hbar w_m / k_B T).
  double boltzmann_ratio() const { return nbar / (1.0 + nbar); }
};

/// Dimensionless phase theta = w_m t, reduced into [0, 2 pi].
class ScaledTime {
 public:
  ScaledTime() = default;
  explicit ScaledTime(double theta);

  double value() const { return theta_; }
  /// True at theta = 0 or theta = 2 pi exactly, where the mirror has
  /// returned to its initial state.
  bool at_period_boundary() const;

 private:
  double theta_ = 0.0;
};

/// Fock-space cutoffs. Indices run over [0, cav_max] and [0, mir_max].
struct Truncation {
  int cav_max = 1;
  int mir_max = 1;
  double tail_tol = 1e-12;

  void validate() const;
};

/// Reduces an angle into [0, 2 pi]; values already inside are untouched.
double reduce_phase(double theta);

/// Bose occupation 1 / (exp(hbar w_m / k_B T) - 1).
double thermal_occupancy(double temperature, double mirror_freq);

/// k = g / w_m with g = w0 sqrt(hbar) / (L sqrt(m w_m)).
double coupling_from_geometry(double cavity_freq, double length, double mass,
                              double mirror_freq);

// Elementary time functions of the closed-form evolution operator.
double phase_lambda(double theta);                // theta - sin(theta)
std::complex<double> eta(double theta);           // 1 - exp(-i theta)
double xi(double theta);                          // 1 - cos(theta)
double displacement_scale(double theta, double k);  // sqrt(2) k sqrt(xi)

}  // namespace optomech

#include "optomech/model.hpp"

#include <cmath>
#include <string>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech {

SystemParams SystemParams::from_temperature(double temperature,
                                            double mirror_freq,
                                            double coupling_k,
                                            std::complex<double> alpha) {
  SystemParams p;
  p.mirror_freq = mirror_freq;
  p.coupling_k = coupling_k;
  p.alpha = alpha;
  p.temperature = temperature;
  p.nbar = thermal_occupancy(temperature, mirror_freq);
  return p;
}

void SystemParams::validate() const {
  if (!(mirror_freq > 0.0) || !std::isfinite(mirror_freq))
    throw ConfigError("mirror_freq must be positive");
  if (!(coupling_k >= 0.0) || !std::isfinite(coupling_k))
    throw ConfigError("coupling_k must be non-negative");
  if (!(nbar >= 0.0) || !std::isfinite(nbar))
    throw ConfigError("nbar must be non-negative");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw ConfigError("alpha must be finite");
  if (!std::isfinite(cavity_freq))
    throw ConfigError("cavity_freq must be finite");
  if (temperature) {
    const double expected = thermal_occupancy(*temperature, mirror_freq);
    if (std::abs(expected - nbar) > 1e-9 * std::max(expected, 1e-300))
      throw ConfigError("nbar " + std::to_string(nbar) +
                        " disagrees with temperature-derived value " +
                        std::to_string(expected));
  }
}

ScaledTime::ScaledTime(double theta) : theta_(reduce_phase(theta)) {}

bool ScaledTime::at_period_boundary() const {
  return theta_ == 0.0 || theta_ == constants::two_pi;
}

void Truncation::validate() const {
  if (cav_max < 1) throw ConfigError("cav_max must be >= 1");
  if (mir_max < 1) throw ConfigError("mir_max must be >= 1");
  if (!(tail_tol > 0.0 && tail_tol < 1.0))
    throw ConfigError("tail_tol must lie in (0, 1)");
}

double reduce_phase(double theta) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  if (theta >= 0.0 && theta <= constants::two_pi) return theta;
  double r = std::fmod(theta, constants::two_pi);
  if (r < 0.0) r += constants::two_pi;
  return r;
}

double thermal_occupancy(double temperature, double mirror_freq) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  if (!(mirror_freq > 0.0)) throw DomainError("mirror_freq must be positive");
  const double ratio =
      constants::hbar * mirror_freq / (constants::boltzmann * temperature);
  return 1.0 / std::expm1(ratio);
}

double coupling_from_geometry(double cavity_freq, double length, double mass,
                              double mirror_freq) {
  if (!(cavity_freq > 0.0) || !(length > 0.0) || !(mass > 0.0) ||
      !(mirror_freq > 0.0))
    throw DomainError("coupling_from_geometry: all inputs must be positive");
  const double g = cavity_freq * std::sqrt(constants::hbar) /
                   (length * std::sqrt(mass * mirror_freq));
  return g / mirror_freq;
}

double phase_lambda(double theta) {
  const double t = reduce_phase(theta);
  return t - std::sin(t);
}

std::complex<double> eta(double theta) {
  const double t = reduce_phase(theta);
  // 1 - e^{-it} = 2 sin^2(t/2) + i sin t, written to avoid cancellation near 0
  const double s = std::sin(0.5 * t);
  return {2.0 * s * s, std::sin(t)};
}

double xi(double theta) {
  const double s = std::sin(0.5 * reduce_phase(theta));
  return 2.0 * s * s;
}

double displacement_scale(double theta, double k) {
  return std::sqrt(2.0) * k * std::sqrt(xi(theta));
}

}  // namespace optomech

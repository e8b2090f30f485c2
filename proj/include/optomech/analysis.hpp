#pragma once

#include <utility>
#include <vector>

#include "optomech/entanglement.hpp"
#include "optomech/model.hpp"

namespace optomech {

/// Positive root of -1 + 14 k^2 + 24 k^4 = 0; no critical coupling lies below it.
double kc_lower_bound();

/// LHS - RHS of the critical-coupling condition
/// -1 + 14k^2 + 24k^4 = 2 alpha^2 (1 + 4k^2 + 96k^4) exp(-12 k^2).
double kc_residual(double k, double alpha);

struct CriticalCouplingResult {
  double k_c = 0.0;
  double residual = 0.0;
  std::pair<double, double> bracket;  // final bisection interval
  double alpha = 0.0;
  /// Every sign-change interval found by the scan (the smallest is solved).
  std::vector<std::pair<double, double>> sign_changes;
};

/// Smallest root above kc_lower_bound(), by sign scan on [k_lb, 5] and
/// bisection down to adjacent doubles.
CriticalCouplingResult solve_kc(double alpha);

struct AlphaMax {
  double value = 0.0;
  bool valid = false;  // k >= 1/2
};

/// Amplitude maximizing the tangle at theta = pi on [1,2;1,2]:
/// e^{6k^2} sqrt(1 + 2k^2) / (sqrt 2 sqrt(1 + 8k^2)).
AlphaMax alpha_max(double k);

/// Amplitude at which k_c(alpha) = k. Throws DomainError for k < k_lb.
double alpha_c(double k);

/// Tangle at nbar = 0 or negativity otherwise, on the given subspace.
/// A projection that vanishes identically carries no entanglement and
/// yields 0.
double subspace_measure(const SystemParams& params, ScaledTime theta,
                        SubspaceSelector sel);

struct AsymptoticSlopes {
  double slope_low = 0.0;
  double slope_high = 0.0;
  double alpha_max = 0.0;
  std::pair<double, double> low_range;   // alpha interval of the low fit
  std::pair<double, double> high_range;  // alpha interval of the high fit
  bool peak_is_local_max = false;        // tau(alpha_max) >= tau(alpha_max (1 +- 5%))
};

struct AsymptoticsGrid {
  std::pair<double, double> low{0.05, 0.3};  // in units of alpha_max
  std::pair<double, double> high{3.0, 10.0};
  int points = 16;
};

/// Log-log slopes of tau(theta = pi) against |alpha| at nbar = 0 on both
/// sides of alpha_max(k).
AsymptoticSlopes tangle_asymptotics(double k, SubspaceSelector sel,
                                    const AsymptoticsGrid& grid = {});

/// Grid point theta in (0, pi] (grid theta_j = pi j / grid_size) maximizing
/// subspace_measure. First maximum wins on ties.
double argmax_time_scan(double k, double alpha, double nbar,
                        SubspaceSelector sel, int grid_size);

}  // namespace optomech

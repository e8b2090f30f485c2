#pragma once

#include "optomech/model.hpp"

namespace optomech {

enum class Subsystem { mirror, cavity };
enum class EntropyMethod { exact_series, asymptotic, automatic };

/// Linear entropies (1 - tr rho^2) and the normalized mutual information
/// I = (S1 + S2 - S) / (S1 + S2).
struct EntropyReport {
  double s_mirror = 0.0;
  double s_cavity = 0.0;
  double s_total = 0.0;
  double mutual = 0.0;
  double mutual_excess = 0.0;  // I - 1/2, computed from the purity deficits
  bool araki_lieb_quantum = false;  // I > 1/2
  EntropyMethod method = EntropyMethod::exact_series;
};

/// Largest |alpha|^2 handled by the exact double sum, smallest handled by
/// the asymptotic evaluation. Both paths are valid at the crossover.
inline constexpr double kExactSeriesMaxIntensity = 1e4;
inline constexpr double kAsymptoticMinIntensity = 1e4;

/// Coefficient g_i in exp(-g_i (p - q)^2):
/// cavity 2 k^2 xi (2 nbar + 1), mirror 2 k^2 xi / (2 nbar + 1).
double purity_exponent(Subsystem which, const SystemParams& params, double theta);
/// f_i: cavity 1, mirror 1 / (2 nbar + 1).
double purity_prefactor(Subsystem which, double nbar);

/// S_i = 1 - f_i e^{-2|a|^2} sum_{p,q} |a|^{2(p+q)}/(p! q!) e^{-g_i (p-q)^2}
/// by direct summation. term_cap bounds the photon index (<= 0: automatic).
double linear_entropy_series(Subsystem which, const SystemParams& params,
                             double theta, int term_cap = 0);

/// Same quantity for |alpha|^2 >= 1e4, written as a Skellam average of
/// exp(-g d^2). Relative error on the deficit 1 - S_i is below 1e-3
/// (in practice ~1/|alpha|^4).
double linear_entropy_asymptotic(Subsystem which, const SystemParams& params,
                                 double theta);

/// 1 - 1 / (2 nbar + 1); time independent.
double total_linear_entropy(double nbar);

EntropyReport mutual_information(const SystemParams& params, double theta,
                                 EntropyMethod method = EntropyMethod::automatic);

}  // namespace optomech

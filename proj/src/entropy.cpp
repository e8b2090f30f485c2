#include "optomech/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"
#include "optomech/numerics.hpp"

namespace optomech {

namespace {

// Above this threshold the direct sum over d = p - q is used; below it the
// Skellam distribution is effectively Gaussian and a closed form applies.
constexpr double kContinuumThreshold = 0.05;

void require_interior(double theta, const char* who) {
  if (ScaledTime(theta).at_period_boundary())
    throw DomainError(std::string(who) +
                      ": theta at a period boundary; the state is a product "
                      "state (use mutual_information)");
}

// e^{-2 lam} sum_{p,q} lam^{p+q}/(p! q!) e^{-g (p-q)^2}, by direct summation
// over the Poisson window, grouped by d = p - q.
double skellam_average_series(double lam, double g, int term_cap) {
  if (lam == 0.0) return 1.0;
  int cap = term_cap;
  if (cap <= 0) cap = static_cast<int>(std::ceil(lam + 40.0 * std::sqrt(lam) + 60.0));
  const double log_lam = std::log(lam);
  std::vector<double> w(static_cast<std::size_t>(cap) + 1);
  int lo = cap;
  for (int p = 0; p <= cap; ++p) {
    const double lw = -lam + p * log_lam - log_factorial(p);
    w[p] = lw < -745.0 ? 0.0 : std::exp(lw);
    if (w[p] > 0.0 && p < lo) lo = p;
  }
  int dmax = cap - lo;
  if (g > 0.0) dmax = std::min(dmax, static_cast<int>(std::ceil(std::sqrt(745.0 / g))) + 1);
  double total = 0.0;
  for (int d = 0; d <= dmax; ++d) {
    double c = 0.0;
    for (int p = lo; p + d <= cap; ++p) c += w[p] * w[p + d];
    total += (d == 0 ? 1.0 : 2.0) * std::exp(-g * d * static_cast<double>(d)) * c;
  }
  return total;
}

// e^{-x} I_d(x) for x >> d^2 by the Hankel expansion.
double scaled_bessel_i(int d, double x) {
  const double mu = 4.0 * d * static_cast<double>(d);
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j <= 8; ++j) {
    const double odd = 2.0 * j - 1.0;
    term *= -(mu - odd * odd) / (j * 8.0 * x);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * constants::pi * x);
}

double skellam_average_asymptotic(double lam, double g) {
  const double a = g + 1.0 / (4.0 * lam);
  if (a >= kContinuumThreshold) {
    const int dmax = static_cast<int>(std::ceil(std::sqrt(40.0 / a))) + 1;
    double total = scaled_bessel_i(0, 2.0 * lam);
    for (int d = 1; d <= dmax; ++d)
      total += 2.0 * std::exp(-g * d * static_cast<double>(d)) * scaled_bessel_i(d, 2.0 * lam);
    return total;
  }
  // Gaussian average of exp(-g d^2) over variance 2 lam, with the leading
  // kurtosis correction of the Skellam law.
  const double s = 1.0 / std::sqrt(1.0 + 4.0 * g * lam);
  const double q = 1.0 - s * s;
  return s * (1.0 + q * q / (16.0 * lam));
}

}  // namespace

double purity_exponent(Subsystem which, const SystemParams& params, double theta) {
  const double base = 2.0 * params.coupling_k * params.coupling_k * xi(theta);
  const double thermal = 2.0 * params.nbar + 1.0;
  return which == Subsystem::cavity ? base * thermal : base / thermal;
}

double purity_prefactor(Subsystem which, double nbar) {
  return which == Subsystem::cavity ? 1.0 : 1.0 / (2.0 * nbar + 1.0);
}

double linear_entropy_series(Subsystem which, const SystemParams& params,
                             double theta, int term_cap) {
  require_interior(theta, "linear_entropy_series");
  const double lam = std::norm(params.alpha);
  if (lam > kExactSeriesMaxIntensity)
    throw RegimeError("linear_entropy_series: |alpha|^2 above 1e4; use the asymptotic path");
  const double g = purity_exponent(which, params, theta);
  return 1.0 - purity_prefactor(which, params.nbar) * skellam_average_series(lam, g, term_cap);
}

double linear_entropy_asymptotic(Subsystem which, const SystemParams& params,
                                 double theta) {
  require_interior(theta, "linear_entropy_asymptotic");
  const double lam = std::norm(params.alpha);
  if (lam < kAsymptoticMinIntensity)
    throw RegimeError("linear_entropy_asymptotic: |alpha|^2 below 1e4; use the exact series");
  const double g = purity_exponent(which, params, theta);
  return 1.0 - purity_prefactor(which, params.nbar) * skellam_average_asymptotic(lam, g);
}

double total_linear_entropy(double nbar) {
  if (!(nbar >= 0.0)) throw DomainError("total_linear_entropy: nbar must be >= 0");
  return 2.0 * nbar / (2.0 * nbar + 1.0);
}

EntropyReport mutual_information(const SystemParams& params, double theta,
                                 EntropyMethod method) {
  if (!(params.nbar >= 0.0)) throw DomainError("mutual_information: nbar must be >= 0");
  const double lam = std::norm(params.alpha);
  EntropyReport r;
  r.method = method;
  if (method == EntropyMethod::automatic)
    r.method = lam <= kExactSeriesMaxIntensity ? EntropyMethod::exact_series
                                               : EntropyMethod::asymptotic;

  const double t = 1.0 / (2.0 * params.nbar + 1.0);  // total purity
  double d_mirror = t;  // purities; product state at period boundaries
  double d_cavity = 1.0;
  if (r.method == EntropyMethod::exact_series && lam > kExactSeriesMaxIntensity)
    throw RegimeError("mutual_information: exact series requested above |alpha|^2 = 1e4");
  if (r.method == EntropyMethod::asymptotic && lam < kAsymptoticMinIntensity)
    throw RegimeError("mutual_information: asymptotic path requested below |alpha|^2 = 1e4");
  if (!ScaledTime(theta).at_period_boundary()) {
    auto purity = [&](Subsystem which) {
      const double g = purity_exponent(which, params, theta);
      const double avg = r.method == EntropyMethod::exact_series
                             ? skellam_average_series(lam, g, 0)
                             : skellam_average_asymptotic(lam, g);
      return purity_prefactor(which, params.nbar) * avg;
    };
    d_mirror = purity(Subsystem::mirror);
    d_cavity = purity(Subsystem::cavity);
  }
  r.s_mirror = 1.0 - d_mirror;
  r.s_cavity = 1.0 - d_cavity;
  r.s_total = 1.0 - t;
  const double denom = r.s_mirror + r.s_cavity;
  if (!(denom > 1e-300))
    throw UndefinedError("mutual_information: S1 + S2 vanishes; normalized measure undefined");
  r.mutual = (denom - r.s_total) / denom;
  // S1 + S2 - 2S = 2t - d1 - d2 without cancellation against 1
  r.mutual_excess = (2.0 * t - d_mirror - d_cavity) / (2.0 * denom);
  r.araki_lieb_quantum = r.mutual_excess > 0.0;
  return r;
}

}  // namespace optomech

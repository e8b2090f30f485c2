#include "optomech/analysis.hpp"

#include <cmath>
#include <string>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech {

namespace {

constexpr double kScanUpper = 5.0;
constexpr int kScanSteps = 4000;

double lhs_of(double k) {
  const double k2 = k * k;
  return -1.0 + 14.0 * k2 + 24.0 * k2 * k2;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double tangle_at_pi(double k, double alpha, SubspaceSelector sel) {
  SystemParams p;
  p.coupling_k = k;
  p.alpha = alpha;
  p.nbar = 0.0;
  return tangle(project_elements(p, ScaledTime(constants::pi), sel));
}

}  // namespace

double kc_lower_bound() {
  // y = k^2 solves 24 y^2 + 14 y - 1 = 0; rationalized root 2 / (14 + sqrt 292)
  return std::sqrt(2.0 / (14.0 + std::sqrt(292.0)));
}

double kc_residual(double k, double alpha) {
  const double k2 = k * k;
  return lhs_of(k) -
         2.0 * alpha * alpha * (1.0 + 4.0 * k2 + 96.0 * k2 * k2) * std::exp(-12.0 * k2);
}

CriticalCouplingResult solve_kc(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("solve_kc: alpha must be positive");
  CriticalCouplingResult r;
  r.alpha = alpha;
  const double lo = kc_lower_bound();
  const double step = (kScanUpper - lo) / kScanSteps;
  double prev_k = lo;
  double prev_f = kc_residual(lo, alpha);
  for (int i = 1; i <= kScanSteps; ++i) {
    const double k = (i == kScanSteps) ? kScanUpper : lo + step * i;
    const double f = kc_residual(k, alpha);
    if ((prev_f < 0.0) != (f < 0.0) || f == 0.0) r.sign_changes.emplace_back(prev_k, k);
    prev_k = k;
    prev_f = f;
  }
  if (r.sign_changes.empty()) {
    std::string table = "solve_kc: no sign change on [k_lb, 5]; scan:";
    for (int i = 0; i <= 10; ++i) {
      const double k = lo + (kScanUpper - lo) * i / 10.0;
      table += " (" + std::to_string(k) + ", " + std::to_string(kc_residual(k, alpha)) + ")";
    }
    throw NoRootError(table);
  }
  auto [a, b] = r.sign_changes.front();
  double fa = kc_residual(a, alpha);
  while (true) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = kc_residual(mid, alpha);
    if (fm == 0.0) {
      a = b = mid;
      break;
    }
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  const double ra = std::abs(kc_residual(a, alpha));
  const double rb = std::abs(kc_residual(b, alpha));
  r.k_c = ra <= rb ? a : b;
  r.residual = std::min(ra, rb);
  r.bracket = {a, b};
  return r;
}

AlphaMax alpha_max(double k) {
  if (!(k > 0.0)) throw DomainError("alpha_max: k must be positive");
  const double k2 = k * k;
  AlphaMax out;
  out.value = std::exp(6.0 * k2) * std::sqrt(1.0 + 2.0 * k2) /
              (std::sqrt(2.0) * std::sqrt(1.0 + 8.0 * k2));
  out.valid = k >= 0.5;
  return out;
}

double alpha_c(double k) {
  if (!(k >= kc_lower_bound()))
    throw DomainError("alpha_c: k below the critical-coupling lower bound");
  const double k2 = k * k;
  const double lhs = std::max(0.0, lhs_of(k));
  return std::sqrt(lhs / (2.0 * (1.0 + 4.0 * k2 + 96.0 * k2 * k2) *
                          std::exp(-12.0 * k2)));
}

double subspace_measure(const SystemParams& params, ScaledTime theta,
                        SubspaceSelector sel) {
  TwoQubitState s;
  try {
    s = project_elements(params, theta, sel);
  } catch (const DegenerateSubspaceError&) {
    return 0.0;
  }
  return params.nbar == 0.0 ? tangle(s) : negativity(s);
}

AsymptoticSlopes tangle_asymptotics(double k, SubspaceSelector sel,
                                    const AsymptoticsGrid& grid) {
  if (grid.points < 2) throw DomainError("tangle_asymptotics: need >= 2 points");
  AsymptoticSlopes out;
  out.alpha_max = alpha_max(k).value;
  auto fit = [&](std::pair<double, double> range) {
    std::vector<double> xs, ys;
    const double l0 = std::log(range.first * out.alpha_max);
    const double l1 = std::log(range.second * out.alpha_max);
    for (int i = 0; i < grid.points; ++i) {
      const double la = l0 + (l1 - l0) * i / (grid.points - 1);
      const double tau = tangle_at_pi(k, std::exp(la), sel);
      if (!(tau > 0.0) || !std::isfinite(tau))
        throw RangeError("tangle_asymptotics: tangle underflow at alpha = " +
                         std::to_string(std::exp(la)) + "; usable range ends before it");
      xs.push_back(la);
      ys.push_back(std::log(tau));
    }
    return fit_slope(xs, ys);
  };
  out.low_range = {grid.low.first * out.alpha_max, grid.low.second * out.alpha_max};
  out.high_range = {grid.high.first * out.alpha_max, grid.high.second * out.alpha_max};
  out.slope_low = fit(grid.low);
  out.slope_high = fit(grid.high);
  const double peak = tangle_at_pi(k, out.alpha_max, sel);
  out.peak_is_local_max = peak >= tangle_at_pi(k, 0.95 * out.alpha_max, sel) &&
                          peak >= tangle_at_pi(k, 1.05 * out.alpha_max, sel);
  return out;
}

double argmax_time_scan(double k, double alpha, double nbar,
                        SubspaceSelector sel, int grid_size) {
  if (grid_size < 64) throw DomainError("argmax_time_scan: grid_size must be >= 64");
  SystemParams p;
  p.coupling_k = k;
  p.alpha = alpha;
  p.nbar = nbar;
  double best = -1.0;
  double best_theta = constants::pi;
  for (int j = 1; j <= grid_size; ++j) {
    const double theta = (j == grid_size) ? constants::pi : constants::pi * j / grid_size;
    const double v = subspace_measure(p, ScaledTime(theta), sel);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }
  return best_theta;
}

}  // namespace optomech

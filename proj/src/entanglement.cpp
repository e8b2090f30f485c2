#include "optomech/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "optomech/errors.hpp"
#include "optomech/numerics.hpp"

namespace optomech {

namespace {

constexpr double kDegenerateWeight = 1e-300;
constexpr double kPureTolerance = 1e-8;

struct Levels {
  std::array<int, 2> mirror;
  std::array<int, 2> cavity;
};

Levels levels_of(SubspaceSelector sel) {
  return {{sel.mu, sel.nu}, {sel.n, sel.m}};
}

Eigen::Vector4d pt_eigenvalues(const TwoQubitState& state) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(
      partial_transpose(state.matrix), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Eigen::Matrix2cd mirror_marginal(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix2cd out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out(a, b) = rho(2 * a, 2 * b) + rho(2 * a + 1, 2 * b + 1);
  return out;
}

double raw_subspace_det(std::complex<double> alpha, double k, double nbar,
                        ScaledTime theta, int s) {
  SystemParams p;
  p.coupling_k = k;
  p.alpha = alpha;
  p.nbar = nbar;
  const TwoQubitState raw = project_elements(p, theta, {0, 1, 0, s}, false);
  return partial_transpose(raw.matrix).determinant().real();
}

}  // namespace

void SubspaceSelector::validate() const {
  if (mu < 0 || n < 0) throw DomainError("subspace: negative level");
  if (!(mu < nu) || !(n < m))
    throw DomainError("subspace: pairs must be strictly ordered");
}

TwoQubitState project_subspace(const DensityBlock& block, SubspaceSelector sel) {
  sel.validate();
  if (sel.nu >= block.mirror_dim() || sel.m >= block.cavity_dim())
    throw DomainError("project_subspace: selector outside block cutoffs");
  const Levels lv = levels_of(sel);
  TwoQubitState s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      s.matrix(i, j) = block(lv.mirror[i / 2], lv.mirror[j / 2],
                             lv.cavity[i % 2], lv.cavity[j % 2]);
  s.weight = s.matrix.trace().real();
  if (!(s.weight >= kDegenerateWeight))
    throw DegenerateSubspaceError("project_subspace: projection weight " +
                                  std::to_string(s.weight));
  s.log_weight = std::log(s.weight);
  s.matrix /= s.weight;
  s.normalized = true;
  return s;
}

TwoQubitState project_elements(const SystemParams& params, ScaledTime theta,
                               SubspaceSelector sel, bool normalize) {
  sel.validate();
  params.validate();
  const Levels lv = levels_of(sel);
  std::array<LogComplex, 16> logs{};
  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      LogComplex v = rho_element_log(params, theta, lv.mirror[i / 2],
                                     lv.mirror[j / 2], lv.cavity[i % 2],
                                     lv.cavity[j % 2]);
      if (i == j) shift = std::max(shift, v.log_magnitude());
      logs[4 * i + j] = v;
    }
  TwoQubitState s;
  if (!normalize) {
    for (int k = 0; k < 16; ++k) s.matrix(k / 4, k % 4) = logs[k].value();
    s.weight = s.matrix.trace().real();
    s.log_weight = std::log(s.weight);
    return s;
  }
  if (!std::isfinite(shift))
    throw DegenerateSubspaceError("project_elements: projection vanishes");
  for (int k = 0; k < 16; ++k) s.matrix(k / 4, k % 4) = logs[k].scaled(shift);
  const double scaled_trace = s.matrix.trace().real();
  s.log_weight = std::log(scaled_trace) + shift;
  s.weight = std::exp(s.log_weight);
  s.matrix /= scaled_trace;
  // the diagonal is real and the block Hermitian; remove rounding asymmetry
  s.matrix = 0.5 * (s.matrix + s.matrix.adjoint()).eval();
  s.normalized = true;
  return s;
}

Eigen::Matrix4cd partial_transpose(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd out;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 2; ++b)
        for (int d = 0; d < 2; ++d)
          out(2 * a + c, 2 * b + d) = rho(2 * a + d, 2 * b + c);
  return out;
}

double concurrence(const TwoQubitState& state) {
  Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
  // sigma_y (x) sigma_y
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const Eigen::Matrix4cd tilde = flip * state.matrix.conjugate() * flip;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(state.matrix * tilde, false);
  std::array<double, 4> l{};
  for (int i = 0; i < 4; ++i)
    l[i] = std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

double tangle(const TwoQubitState& state) {
  if (!state.normalized) throw PreconditionError("tangle: state not normalized");
  const double purity = state.purity();
  if (purity < 1.0 - kPureTolerance)
    throw PreconditionError("tangle: mixed input (purity " +
                            std::to_string(purity) + ")");
  const double tau =
      std::clamp(4.0 * mirror_marginal(state.matrix).determinant().real(), 0.0, 1.0);
  const double c = concurrence(state);
  if (std::abs(c * c - tau) > 1e-6)
    throw std::logic_error("tangle: concurrence cross-check failed");
  return tau;
}

double negativity(const TwoQubitState& state) {
  if (!state.normalized) throw PreconditionError("negativity: state not normalized");
  const Eigen::Vector4d ev = pt_eigenvalues(state);
  const double value = 0.5 * (ev.cwiseAbs().sum() - 1.0);
  if (value < 0.0 && value >= -1e-12) return 0.0;
  return std::max(value, 0.0);
}

namespace {

// det(D A D) = det(D)^2 det(A): balance by the (positive) diagonal so the
// sign survives even when the entries span many orders of magnitude.
// Returns the balanced determinant and log det(D)^{-2}.
std::pair<double, double> balanced_peres_det(const TwoQubitState& state) {
  const Eigen::Matrix4cd pt = partial_transpose(state.matrix);
  Eigen::Vector4d scale;
  double log_prod = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = pt(i, i).real();
    scale(i) = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
    if (d > 0.0) log_prod += std::log(d);
  }
  const Eigen::Matrix4cd balanced = scale.asDiagonal() * pt * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(balanced, Eigen::EigenvaluesOnly);
  double det = 1.0;
  for (int i = 0; i < 4; ++i) det *= solver.eigenvalues()(i);
  return {det, log_prod};
}

}  // namespace

double peres_det(const TwoQubitState& state) {
  const auto [det, log_prod] = balanced_peres_det(state);
  return det * std::exp(log_prod);
}

MarkerSign peres_sign(const TwoQubitState& state) {
  return sign_of(balanced_peres_det(state).first);
}

MarkerSign peres_sign_elements(const SystemParams& params, ScaledTime theta,
                               SubspaceSelector sel) {
  sel.validate();
  params.validate();
  const Levels lv = levels_of(sel);
  std::array<LogComplex, 16> pt{};
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 2; ++b)
        for (int d = 0; d < 2; ++d)
          pt[4 * (2 * a + c) + 2 * b + d] = rho_element_log(
              params, theta, lv.mirror[a], lv.mirror[b], lv.cavity[d], lv.cavity[c]);
  for (int i = 0; i < 4; ++i)
    if (pt[5 * i].is_zero()) throw DegenerateSubspaceError("peres_sign_elements: zero diagonal");
  Eigen::Matrix4cd balanced;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      balanced(i, j) = pt[4 * i + j].scaled(
          0.5 * (pt[5 * i].log_magnitude() + pt[5 * j].log_magnitude()));
  balanced = 0.5 * (balanced + balanced.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(balanced, Eigen::EigenvaluesOnly);
  double det = 1.0;
  for (int i = 0; i < 4; ++i) det *= solver.eigenvalues()(i);
  return sign_of(det);
}

MarkerSign sign_of(double value) {
  if (value > 0.0) return MarkerSign::positive;
  if (value < 0.0) return MarkerSign::negative;
  return MarkerSign::zero;
}

EntanglementReport assess(const TwoQubitState& state) {
  EntanglementReport r;
  r.weight = state.weight;
  r.negativity = negativity(state);
  r.peres_det = peres_det(state);
  r.marker_sign = peres_sign(state);
  if (state.purity() >= 1.0 - kPureTolerance) r.tangle = tangle(state);
  return r;
}

namespace {
void check_marker_domain(double b, double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("marker: x must lie in (0, 1)");
  if (!(b >= 0.0)) throw DomainError("marker: b must be >= 0");
}
}  // namespace

double marker_g(std::complex<double> alpha, double b, double x) {
  check_marker_domain(b, x);
  const double a2 = std::norm(alpha);
  // x^4 / (16 nbar^4) = (1 - x)^4 / 16
  const double omx = 1.0 - x;
  return omx * omx * omx * omx * a2 * a2 *
         std::exp(b * b * (x - 2.0) - 4.0 * a2) / 16.0;
}

double marker_h(double b, double x) {
  check_marker_domain(b, x);
  const double b2 = b * b;
  const double sh = std::sinh(0.5 * b2 * x);
  // 16 [b^4 - x^2 (e^{b^2 x} - 2 + e^{-b^2 x})]
  return 16.0 * (b2 * b2 - 4.0 * x * x * sh * sh);
}

double marker_h_printed(double b, double x) {
  check_marker_domain(b, x);
  const double b2 = b * b;
  const double e_half = std::exp(b2 / 2.0);
  const double xm2 = x - 2.0;
  const double t1 = 16.0 * x * x * std::exp(b2 * x);
  const double inner = -4.0 + b2 * xm2 * (e_half - 1.0);
  const double t2 = x * x * inner * inner;
  const double t3 =
      std::exp(b2 * x / 2.0) *
      (b2 * b2 * std::pow(xm2, 4) + 32.0 * x * x +
       4.0 * b2 * x * x * (e_half - 1.0) * (4.0 + (e_half - 3.0) * x));
  return t1 + t2 - t3;
}

double marker_upsilon(std::complex<double> alpha, double b, double x) {
  check_marker_domain(b, x);
  const double a2 = std::norm(alpha);
  if (a2 == 0.0 || b == 0.0) return 0.0;
  // -G H in log form: sinh overflows long before the product does.
  const double log_g = 4.0 * std::log1p(-x) + 2.0 * std::log(a2) +
                       b * b * (x - 2.0) - 4.0 * a2 - std::log(16.0);
  const double s = 0.5 * b * b * x;
  const double log_quartic = 4.0 * std::log(b);
  const double log_sinh = s + std::log1p(-std::exp(-2.0 * s)) - std::log(2.0);
  const double log_cross = std::log(4.0) + 2.0 * std::log(x) + 2.0 * log_sinh;
  if (log_quartic == log_cross) return 0.0;
  const double hi = std::max(log_quartic, log_cross);
  const double lo = std::min(log_quartic, log_cross);
  const double log_abs_h = std::log(16.0) + hi + std::log1p(-std::exp(lo - hi));
  const double sign = log_quartic > log_cross ? -1.0 : 1.0;  // -sign(H)
  return sign * std::exp(log_g + log_abs_h);
}

double ScalingCheck::relative_gap() const {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

ScalingCheck scaling_check(std::complex<double> alpha, double k, double nbar,
                           ScaledTime theta, int s) {
  if (s < 2) throw DomainError("scaling_check: s must be >= 2");
  const double a = std::abs(alpha);
  const double factorial_s = std::exp(log_factorial(s));
  ScalingCheck out;
  out.lhs = std::pow(a, -2.0 * s) * factorial_s *
            raw_subspace_det(alpha, k / s, nbar, theta, s);
  out.rhs = std::pow(a, -2.0) * raw_subspace_det(alpha, k, nbar, theta, 1);
  return out;
}

ScalingCheck scaling_check_quartic(std::complex<double> alpha, double k,
                                   double nbar, ScaledTime theta, int s) {
  if (s < 2) throw DomainError("scaling_check: s must be >= 2");
  const double a = std::abs(alpha);
  const double factorial_s = std::exp(log_factorial(s));
  ScalingCheck out;
  out.lhs = std::pow(a, -4.0 * s) * factorial_s * factorial_s *
            raw_subspace_det(alpha, k / s, nbar, theta, s);
  out.rhs = std::pow(a, -4.0) * raw_subspace_det(alpha, k, nbar, theta, 1);
  return out;
}

}  // namespace optomech

#include "optomech/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Keeps phases in (-pi, pi] so they don't drift after many products.
double wrap(double phase) {
  if (phase > -kPi && phase <= kPi) return phase;
  double r = std::remainder(phase, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}


}  // namespace

LogComplex LogComplex::from(std::complex<double> z) {
  if (z == 0.0) return {};
  return {std::log(std::abs(z)), std::arg(z)};
}

LogComplex LogComplex::from_real(double x) {
  if (x == 0.0) return {};
  return {std::log(std::abs(x)), x < 0.0 ? kPi : 0.0};
}

double LogComplex::log_magnitude() const { return zero_ ? -kInf : log_mag_; }

std::complex<double> LogComplex::value() const { return scaled(0.0); }

std::complex<double> LogComplex::scaled(double log_shift) const {
  if (zero_) return {0.0, 0.0};
  return std::polar(std::exp(log_mag_ - log_shift), phase_);
}

LogComplex LogComplex::conj() const {
  if (zero_) return {};
  return {log_mag_, wrap(-phase_)};
}

LogComplex LogComplex::pow(int exponent) const {
  if (exponent == 0) return one();
  if (zero_) {
    if (exponent < 0) throw RangeError("LogComplex: negative power of zero");
    return {};
  }
  return {log_mag_ * exponent, wrap(phase_ * exponent)};
}

LogComplex& LogComplex::operator*=(const LogComplex& o) {
  if (zero_ || o.zero_) {
    *this = LogComplex{};
    return *this;
  }
  log_mag_ += o.log_mag_;
  phase_ = wrap(phase_ + o.phase_);
  return *this;
}

LogComplex& LogComplex::operator/=(const LogComplex& o) {
  if (o.zero_) throw RangeError("LogComplex: division by zero");
  if (zero_) return *this;
  log_mag_ -= o.log_mag_;
  phase_ = wrap(phase_ - o.phase_);
  return *this;
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  if (n <= 20) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return std::log(static_cast<double>(f));
  }
  return std::lgamma(static_cast<double>(n) + 1.0);
}

std::complex<double> laguerre(int n, double order, std::complex<double> z) {
  if (n < 0) throw DomainError("laguerre: negative degree");
  std::complex<double> prev = 1.0;
  if (n == 0) return prev;
  std::complex<double> cur = 1.0 + order - z;
  for (int j = 1; j < n; ++j) {
    const std::complex<double> next =
        ((2.0 * j + 1.0 + order - z) * cur - (j + order) * prev) /
        static_cast<double>(j + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

LogComplex laguerre_log(int n, double order, std::complex<double> z) {
  if (n < 0) throw DomainError("laguerre: negative degree");
  if (n == 0) return LogComplex::one();
  constexpr double kBig = 1e150;
  double log_scale = 0.0;
  std::complex<double> prev = 1.0;
  std::complex<double> cur = 1.0 + order - z;
  for (int j = 1; j < n; ++j) {
    const std::complex<double> next =
        ((2.0 * j + 1.0 + order - z) * cur - (j + order) * prev) /
        static_cast<double>(j + 1);
    prev = cur;
    cur = next;
    const double mag = std::abs(cur);
    if (mag > kBig) {
      prev /= mag;
      cur /= mag;
      log_scale += std::log(mag);
    }
  }
  LogComplex out = LogComplex::from(cur);
  if (out.is_zero()) return out;
  return {out.log_magnitude() + log_scale, out.phase()};
}

std::complex<double> tricomi_u_negint(int mu, int b_param,
                                      std::complex<double> z) {
  return tricomi_u_negint_log(mu, b_param, z).value();
}

LogComplex tricomi_u_negint_log(int mu, int b_param, std::complex<double> z) {
  if (mu < 0) throw DomainError("tricomi_u_negint: mu must be >= 0");
  LogComplex lag = laguerre_log(mu, static_cast<double>(b_param - 1), z);
  const LogComplex prefactor(log_factorial(mu), (mu % 2) ? kPi : 0.0);
  return prefactor * lag;
}

LogComplex displaced_number_element_log(int row, int col,
                                        std::complex<double> gamma) {
  if (row < 0 || col < 0)
    throw DomainError("displaced_number_element: negative index");
  if (row < col) {
    // <row|D(g)|col> = conj(<col|D(-g)|row>)
    return displaced_number_element_log(col, row, -gamma).conj();
  }
  const int diff = row - col;
  const double g2 = std::norm(gamma);
  if (gamma == 0.0) return diff == 0 ? LogComplex::one() : LogComplex{};
  LogComplex out(0.5 * (log_factorial(col) - log_factorial(row)) - 0.5 * g2,
                 0.0);
  out *= LogComplex::from(gamma).pow(diff);
  out *= laguerre_log(col, static_cast<double>(diff), {g2, 0.0});
  return out;
}

std::complex<double> displaced_number_element(int row, int col,
                                              std::complex<double> gamma) {
  return displaced_number_element_log(row, col, gamma).value();
}

QuadratureRule gauss_hermite(int order) {
  if (order < 1) throw DomainError("gauss_hermite: order must be >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double off = std::sqrt(0.5 * i);
    jacobi(i, i - 1) = off;
    jacobi(i - 1, i) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double mass = std::sqrt(kPi);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mass * v0 * v0;
  }
  return rule;
}

}  // namespace optomech

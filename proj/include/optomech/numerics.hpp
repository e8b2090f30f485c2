#pragma once

#include <complex>
#include <vector>

namespace optomech {

/// A complex number stored as (log|z|, arg z), with a separate encoding for
/// exact zero. Products and integer powers are exact in this representation,
/// so amplitude prefactors like alpha^n / sqrt(n! m!) can be assembled without
/// overflow and exponentiated once at the end.
class LogComplex {
 public:
  /// Exact zero.
  constexpr LogComplex() = default;
  constexpr LogComplex(double log_magnitude, double phase)
      : log_mag_(log_magnitude), phase_(phase), zero_(false) {}

  static LogComplex from(std::complex<double> z);
  static LogComplex from_real(double x);
  static constexpr LogComplex one() { return {0.0, 0.0}; }

  bool is_zero() const { return zero_; }
  /// -infinity for zero.
  double log_magnitude() const;
  double phase() const { return zero_ ? 0.0 : phase_; }

  std::complex<double> value() const;
  /// value() * exp(-log_shift); used to rescale a batch before exponentiating.
  std::complex<double> scaled(double log_shift) const;

  LogComplex conj() const;
  LogComplex pow(int exponent) const;

  LogComplex& operator*=(const LogComplex& o);
  LogComplex& operator/=(const LogComplex& o);
  friend LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }
  friend LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }

 private:
  double log_mag_ = 0.0;
  double phase_ = 0.0;
  bool zero_ = true;
};

/// ln(n!). Exact integer arithmetic for n <= 20, log-gamma beyond.
double log_factorial(int n);

/// Generalized Laguerre polynomial L_n^{(order)}(z) by the three-term
/// recurrence in n. Any real order is accepted, negative integers included.
std::complex<double> laguerre(int n, double order, std::complex<double> z);

/// Same recurrence with periodic rescaling; the result is returned in log
/// form so large degrees and arguments do not overflow.
LogComplex laguerre_log(int n, double order, std::complex<double> z);

/// Tricomi confluent hypergeometric U(-mu, b, z) at a non-positive integer
/// first argument, where it reduces to (-1)^mu mu! L_mu^{(b-1)}(z).
std::complex<double> tricomi_u_negint(int mu, int b_param, std::complex<double> z);
LogComplex tricomi_u_negint_log(int mu, int b_param, std::complex<double> z);

/// Displaced-number-state matrix element <row| D(gamma) |col>.
std::complex<double> displaced_number_element(int row, int col,
                                              std::complex<double> gamma);
LogComplex displaced_number_element_log(int row, int col,
                                        std::complex<double> gamma);

/// Gauss-Hermite rule for weight exp(-t^2) on the real line (Golub-Welsch).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_hermite(int order);

}  // namespace optomech

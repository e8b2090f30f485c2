#pragma once

#include <Eigen/Core>
#include <limits>

namespace optomech {

/// A 2x2 (mirror) x 2x2 (cavity) density matrix obtained by projection.
///
/// Basis order is (mu n, mu m, nu n, nu m): mirror-major, so index
/// 2 * mirror + cavity. `weight` is the trace before normalization (the
/// projection probability); `log_weight` keeps it when it underflows.
struct TwoQubitState {
  Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Zero();
  double weight = 0.0;
  double log_weight = -std::numeric_limits<double>::infinity();
  bool normalized = false;

  double purity() const { return (matrix * matrix).trace().real(); }

  /// |psi><psi| / <psi|psi> for a (mirror-major) amplitude vector.
  static TwoQubitState from_pure(const Eigen::Vector4cd& psi);
};

}  // namespace optomech

#pragma once

#include <complex>
#include <optional>

#include <Eigen/Core>

#include "optomech/model.hpp"
#include "optomech/state.hpp"
#include "optomech/two_qubit.hpp"

namespace optomech {

/// [mu, nu; n, m]: two mirror levels mu < nu and two cavity levels n < m.
struct SubspaceSelector {
  int mu = 0;
  int nu = 1;
  int n = 0;
  int m = 1;

  void validate() const;
};

enum class MarkerSign { negative, zero, positive };

struct EntanglementReport {
  std::optional<double> tangle;  // only for (numerically) pure input
  double negativity = 0.0;
  double peres_det = 0.0;
  MarkerSign marker_sign = MarkerSign::zero;
  double weight = 0.0;
};

TwoQubitState project_subspace(const DensityBlock& block, SubspaceSelector sel);

/// Projection computed straight from rho_element, without a block. Elements
/// are rescaled in log form before exponentiation, so arbitrarily small
/// projection weights (large alpha, large displacement) stay representable.
/// With normalize = false the raw elements are returned.
TwoQubitState project_elements(const SystemParams& params, ScaledTime theta,
                               SubspaceSelector sel, bool normalize = true);

/// Transpose on the cavity factor in the (mirror-major) 2x2 (x) 2x2 basis.
Eigen::Matrix4cd partial_transpose(const Eigen::Matrix4cd& rho);

/// Squared concurrence of a pure state, 4 det(rho_mirror). Throws
/// PreconditionError when purity < 1 - 1e-8.
double tangle(const TwoQubitState& state);
/// Wootters concurrence (spin-flip construction); valid for mixed states.
double concurrence(const TwoQubitState& state);
double negativity(const TwoQubitState& state);
/// det(rho^{T_P}); negative certifies entanglement.
double peres_det(const TwoQubitState& state);
/// Sign of det(rho^{T_P}), kept when the determinant itself underflows.
MarkerSign peres_sign(const TwoQubitState& state);
/// Same sign computed from log-form elements, balanced before
/// exponentiation; resolves projections whose entries underflow.
MarkerSign peres_sign_elements(const SystemParams& params, ScaledTime theta,
                               SubspaceSelector sel);
MarkerSign sign_of(double value);

EntanglementReport assess(const TwoQubitState& state);

// Closed-form marker for the [0,1;0,1] subspace, in the coordinates
// b = sqrt(2) k sqrt(1 - cos theta) and x = nbar / (1 + nbar).
double marker_g(std::complex<double> alpha, double b, double x);
/// Exact H with det(rho^{T_P}) = -G H on the raw projected elements.
double marker_h(double b, double x);
/// H transcribed term by term from the published expression. Kept for
/// comparison only; it does not reproduce the determinant.
double marker_h_printed(double b, double x);
double marker_upsilon(std::complex<double> alpha, double b, double x);

struct ScalingCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_gap() const;
};

/// |alpha|^{-2s} s! det_{[0,1;0,s]}(k/s) against |alpha|^{-2} det_{[0,1;0,1]}(k)
/// on raw (un-normalized) projected elements, prefactors as published.
ScalingCheck scaling_check(std::complex<double> alpha, double k, double nbar,
                           ScaledTime theta, int s);
/// Same comparison with the squared prefactors |alpha|^{-4s} (s!)^2 and
/// |alpha|^{-4} that the quartic determinant actually carries.
ScalingCheck scaling_check_quartic(std::complex<double> alpha, double k,
                                   double nbar, ScaledTime theta, int s);

}  // namespace optomech

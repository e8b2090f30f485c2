#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "optomech/constants.hpp"
#include "optomech/entanglement.hpp"
#include "optomech/errors.hpp"
#include "optomech/state.hpp"
#include "oracles.hpp"

using namespace optomech;
using cd = std::complex<double>;
using constants::pi;

namespace {

SystemParams params(double k, cd alpha, double nbar) {
  SystemParams p;
  p.coupling_k = k;
  p.alpha = alpha;
  p.nbar = nbar;
  return p;
}

TwoQubitState bell() {
  Eigen::Vector4cd psi(1, 0, 0, 1);
  return TwoQubitState::from_pure(psi);
}

TwoQubitState product(cd a0, cd a1, cd b0, cd b1) {
  Eigen::Vector4cd psi(a0 * b0, a0 * b1, a1 * b0, a1 * b1);
  return TwoQubitState::from_pure(psi);
}

// Entanglement of |psi> from its 2x2 coefficient matrix: C = 2 |det|.
double pure_concurrence(const Eigen::Vector4cd& psi) {
  const Eigen::Vector4cd u = psi / psi.norm();
  return 2.0 * std::abs(u(0) * u(3) - u(1) * u(2));
}

}  // namespace

TEST_CASE("reference two-qubit states") {
  const TwoQubitState b = bell();
  CHECK(tangle(b) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(concurrence(b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(negativity(b) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(peres_det(b) == doctest::Approx(-1.0 / 16).epsilon(1e-13));

  const TwoQubitState p = product(0.6, cd(0, 0.8), cd(0.3, 0.1), 1.0);
  CHECK(tangle(p) <= 1e-14);
  CHECK(negativity(p) <= 1e-14);
  CHECK(peres_det(p) >= -1e-16);

  std::mt19937_64 rng(3);
  const Eigen::Matrix4cd m = oracle::random_density(rng);
  CHECK((partial_transpose(partial_transpose(m)) - m).norm() == 0.0);
}

TEST_CASE("pure states: tangle, concurrence and negativity agree") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    Eigen::Vector4cd psi;
    for (int j = 0; j < 4; ++j) psi(j) = {g(rng), g(rng)};
    const TwoQubitState s = TwoQubitState::from_pure(psi);
    const double c = pure_concurrence(psi);
    CHECK(tangle(s) == doctest::Approx(c * c).epsilon(1e-10));
    CHECK(concurrence(s) == doctest::Approx(c).epsilon(1e-8));
    CHECK(4 * negativity(s) * negativity(s) == doctest::Approx(c * c).epsilon(1e-8));
  }
  // mixed input is rejected by the pure-state tangle
  CHECK_THROWS_AS(tangle(oracle::state_of(oracle::random_density(rng))), PreconditionError);
}

TEST_CASE("Peres determinant sign certifies negativity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uk(0.05, 2.0), ua(0.2, 2.0), un(0.0, 3.0),
      ut(0.01, 2 * pi - 0.01);
  std::uniform_int_distribution<int> lvl(0, 3);
  int checked = 0;
  while (checked < 200) {
    SubspaceSelector sel{lvl(rng), 0, lvl(rng), 0};
    sel.nu = sel.mu + 1 + lvl(rng);
    sel.m = sel.n + 1 + lvl(rng);
    TwoQubitState s;
    try {
      s = project_elements(params(uk(rng), ua(rng), un(rng)), ScaledTime(ut(rng)), sel);
    } catch (const DegenerateSubspaceError&) {
      continue;
    }
    ++checked;
    const double d = peres_det(s);
    const double n = negativity(s);
    if (d < -1e-14) {
      CHECK(n > 0.0);
    }
    CHECK(n >= 0.0);
    CHECK(n <= 0.5);
  }
  for (int i = 0; i < 100; ++i) {
    const TwoQubitState s = oracle::state_of(oracle::random_density(rng, 1 + i % 4));
    if (peres_det(s) < -1e-14) CHECK(negativity(s) > 0.0);
    CHECK(std::abs(concurrence(s)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("projection from a block equals projection from elements") {
  const SystemParams p = params(0.7, cd(0.9, 0.3), 0.4);
  const ScaledTime t(2.2);
  const DensityBlock b = build_rho(p, t, Truncation{4, 5, 0.99});
  for (SubspaceSelector sel : {SubspaceSelector{0, 1, 0, 1}, SubspaceSelector{1, 3, 2, 4}}) {
    const TwoQubitState a = project_subspace(b, sel);
    const TwoQubitState e = project_elements(p, t, sel);
    CHECK((a.matrix - e.matrix).norm() <= 1e-12);
    CHECK(a.matrix.trace().real() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(project_subspace(b, {0, 6, 0, 1}), DomainError);
  CHECK_THROWS_AS(project_subspace(b, {1, 1, 0, 1}), DomainError);

  // thermal state at theta = 0: mirror coherences vanish
  const DensityBlock b0 = build_rho(p, ScaledTime(0.0), Truncation{4, 5, 0.99});
  const TwoQubitState s0 = project_subspace(b0, {0, 2, 1, 3});
  CHECK(s0.matrix.block<2, 2>(0, 2).norm() == 0.0);
  CHECK(negativity(s0) <= 1e-15);
}

TEST_CASE("zero-temperature projection is pure and weighs less than one") {
  const TwoQubitState s = project_elements(params(1.0, 1.0, 0.0), ScaledTime(pi), {1, 2, 1, 2});
  CHECK(s.purity() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.weight < 1.0);
  CHECK(s.weight > 0.0);
  const EntanglementReport r = assess(s);
  REQUIRE(r.tangle.has_value());
  CHECK(*r.tangle > 0.0);
  CHECK(r.marker_sign == MarkerSign::negative);
  CHECK(4 * r.negativity * r.negativity == doctest::Approx(*r.tangle).epsilon(1e-8));

  // underflowing weights stay representable in log form
  const TwoQubitState far = project_elements(params(1.0, 40.0, 0.0), ScaledTime(pi), {1, 2, 1, 2});
  CHECK(far.weight == 0.0);
  CHECK(std::isfinite(far.log_weight));
  CHECK(far.purity() == doctest::Approx(1.0).epsilon(1e-10));

  const EntanglementReport mixed = assess(project_elements(params(1.0, 1.0, 1.0), ScaledTime(pi), {0, 1, 0, 1}));
  CHECK_FALSE(mixed.tangle.has_value());
}

TEST_CASE("marker: exact H reproduces the partial-transpose determinant") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uk(0.05, 1.5), ua(0.3, 1.5), un(0.05, 5.0),
      ut(0.1, 2 * pi - 0.1), uph(0, 2 * pi);
  for (int i = 0; i < 40; ++i) {
    const SystemParams p = params(uk(rng), std::polar(ua(rng), uph(rng)), un(rng));
    const double th = ut(rng);
    const double b = displacement_scale(th, p.coupling_k);
    const double x = p.boltzmann_ratio();
    const TwoQubitState raw = project_elements(p, ScaledTime(th), {0, 1, 0, 1}, false);
    const double det = partial_transpose(raw.matrix).determinant().real();
    const double ups = marker_upsilon(p.alpha, b, x);
    CHECK(std::abs(det - ups) <= 1e-9 * std::abs(ups) + 1e-300);
    CHECK(sign_of(peres_det(project_elements(p, ScaledTime(th), {0, 1, 0, 1}))) == sign_of(ups));
  }
  // far from the origin the linear-form block underflows; the log-form sign
  // still follows -H
  for (double b : {8.0, 20.0, 40.0})
    for (double x : {0.05, 0.4, 0.9}) {
      const SystemParams p = params(b / 2, 1.0, x / (1 - x));
      CHECK(std::isfinite(marker_upsilon(1.0, b, x)));
      const double ups = marker_upsilon(1.0, b, x);
      CHECK((ups == 0.0 || sign_of(ups) == sign_of(-marker_h(b, x))));
      CHECK(peres_sign_elements(p, ScaledTime(pi), {0, 1, 0, 1}) == sign_of(-marker_h(b, x)));
    }
  // exact H: H(0, x) = 0 and H -> +16 b^4 as x -> 0
  CHECK(marker_h(0.0, 0.3) == 0.0);
  CHECK(marker_h(0.7, 1e-9) == doctest::Approx(16 * std::pow(0.7, 4)).epsilon(1e-8));
  CHECK(marker_g(1.0, 0.5, 0.5) > 0.0);
  CHECK_THROWS_AS(marker_h(0.5, 1.0), DomainError);
}

TEST_CASE("marker: printed H as published") {
  for (double x : {0.1, 0.5, 0.9}) CHECK(marker_h_printed(0.0, x) == doctest::Approx(0.0));
  for (double b : {0.3, 1.0, 1.7})
    CHECK(marker_h_printed(b, 1e-9) == doctest::Approx(-16 * std::pow(b, 4)).epsilon(1e-6));
}

TEST_CASE("scaling identity on [0,1;0,s]") {
  for (int s : {2, 3}) {
    const ScalingCheck q = scaling_check_quartic(1.0, 1.0, 2.0, ScaledTime(pi / 2), s);
    CHECK(q.relative_gap() <= 1e-8);
    const ScalingCheck printed = scaling_check(1.0, 1.0, 2.0, ScaledTime(pi / 2), s);
    // the published prefactor leaves |alpha|^{2(s-1)} / s!
    CHECK(printed.lhs / printed.rhs == doctest::Approx(1.0 / std::tgamma(s + 1.0)).epsilon(1e-8));
  }
  const ScalingCheck q = scaling_check_quartic(cd(1.3, 0.4), 0.8, 0.7, ScaledTime(2.0), 3);
  CHECK(q.relative_gap() <= 1e-8);
  const ScalingCheck zero = scaling_check(1.0, 0.0, 2.0, ScaledTime(pi / 2), 2);
  CHECK(std::abs(zero.lhs) <= 1e-18);
  CHECK(std::abs(zero.rhs) <= 1e-18);
}

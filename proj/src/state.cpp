#include "optomech/state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include <json.hpp>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"
#include "optomech/parallel.hpp"

namespace optomech {

namespace {

constexpr double kMaxLogMagnitude = 700.0;

// alpha^n alpha*^m e^{-|alpha|^2} / sqrt(n! m!) times the free and Kerr-like
// phases exp(i k^2 Lambda (n^2 - m^2) - i (w0/wm) theta (n - m)).
LogComplex cavity_factor(const SystemParams& p, ScaledTime theta, int n, int m) {
  const double a2 = std::norm(p.alpha);
  LogComplex out(-a2 - 0.5 * (log_factorial(n) + log_factorial(m)), 0.0);
  const LogComplex a = LogComplex::from(p.alpha);
  out *= a.pow(n);
  out *= a.conj().pow(m);
  const double k2 = p.coupling_k * p.coupling_k;
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  const double phase = k2 * phase_lambda(theta.value()) * (nn * nn - mm * mm) -
                       p.cavity_freq / p.mirror_freq * theta.value() * (nn - mm);
  out *= LogComplex(0.0, phase);
  return out;
}

LogComplex amplitude(const SystemParams& p, ScaledTime theta, int n) {
  const double a2 = std::norm(p.alpha);
  LogComplex out(-0.5 * a2 - 0.5 * log_factorial(n), 0.0);
  out *= LogComplex::from(p.alpha).pow(n);
  const double nn = static_cast<double>(n);
  const double k2 = p.coupling_k * p.coupling_k;
  out *= LogComplex(0.0, k2 * phase_lambda(theta.value()) * nn * nn -
                             p.cavity_freq / p.mirror_freq * theta.value() * nn);
  return out;
}

// log((1 - x) x^mu) with x = nbar / (1 + nbar).
LogComplex thermal_weight(double nbar, int mu) {
  if (nbar == 0.0) return mu == 0 ? LogComplex::one() : LogComplex{};
  const double log1p_n = std::log1p(nbar);
  return {-log1p_n + mu * (std::log(nbar) - log1p_n), 0.0};
}

// Smallest N with Poisson(lambda) mass above N below tol. Past the mode the
// terms fall at least geometrically, which bounds the tail without forming
// 1 - cdf.
int poisson_cutoff(double lambda, double tol) {
  if (lambda == 0.0) return 1;
  const double log_lambda = std::log(lambda);
  for (int n = 1; n < 10'000'000; ++n) {
    if (n + 2 <= lambda) continue;
    const double next = std::exp(-lambda + (n + 1) * log_lambda - log_factorial(n + 1));
    const double ratio = lambda / (n + 2);
    if (next / (1.0 - ratio) < tol) return n;
  }
  throw ConfigError("poisson_cutoff: |alpha|^2 too large");
}

double diagonal_mass(const SystemParams& p, ScaledTime theta, int cav_max,
                     int mir_max) {
  double sum = 0.0;
  for (int n = 0; n <= cav_max; ++n)
    for (int mu = 0; mu <= mir_max; ++mu)
      sum += rho_element(p, theta, mu, mu, n, n).real();
  return sum;
}

}  // namespace

// ---------------------------------------------------------------------------

InitialState InitialState::make(const SystemParams& params,
                                const Truncation& trunc) {
  InitialState s;
  s.alpha = params.alpha;
  s.nbar = params.nbar;
  s.mirror_weights.resize(static_cast<std::size_t>(trunc.mir_max) + 1);
  for (int mu = 0; mu <= trunc.mir_max; ++mu)
    s.mirror_weights[mu] = thermal_weight(params.nbar, mu).value().real();
  return s;
}

double InitialState::tail_mass() const {
  if (nbar == 0.0) return 0.0;
  // sum_{mu > M} (1 - x) x^mu = x^{M+1}
  const double x = nbar / (1.0 + nbar);
  return std::pow(x, static_cast<double>(mirror_weights.size()));
}

// ---------------------------------------------------------------------------

DensityBlock::DensityBlock(const Truncation& trunc, const SystemParams& params,
                           ScaledTime theta)
    : trunc_(trunc), params_(params), theta_(theta) {
  trunc_.validate();
  const std::size_t md = static_cast<std::size_t>(mirror_dim());
  const std::size_t cd = static_cast<std::size_t>(cavity_dim());
  values_.assign(md * md * cd * cd, {0.0, 0.0});
}

std::complex<double> DensityBlock::trace() const {
  std::complex<double> t = 0.0;
  for (int mu = 0; mu < mirror_dim(); ++mu)
    for (int n = 0; n < cavity_dim(); ++n) t += (*this)(mu, mu, n, n);
  return t;
}

void DensityBlock::normalize() {
  const std::complex<double> t = trace();
  if (std::abs(t) == 0.0) throw RangeError("DensityBlock: zero trace");
  const double inv = 1.0 / t.real();
  for (auto& v : values_) v *= inv;
  normalized_ = true;
}

Eigen::MatrixXcd DensityBlock::flattened() const {
  const int md = mirror_dim();
  const int cd = cavity_dim();
  Eigen::MatrixXcd out(md * cd, md * cd);
  for (int mu = 0; mu < md; ++mu)
    for (int nu = 0; nu < md; ++nu)
      for (int n = 0; n < cd; ++n)
        for (int m = 0; m < cd; ++m)
          out(mu * cd + n, nu * cd + m) = (*this)(mu, nu, n, m);
  return out;
}

Eigen::MatrixXcd DensityBlock::cavity_reduced() const {
  const int cd = cavity_dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(cd, cd);
  for (int mu = 0; mu < mirror_dim(); ++mu)
    for (int n = 0; n < cd; ++n)
      for (int m = 0; m < cd; ++m) out(n, m) += (*this)(mu, mu, n, m);
  return out;
}

Eigen::MatrixXcd DensityBlock::mirror_reduced() const {
  const int md = mirror_dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(md, md);
  for (int mu = 0; mu < md; ++mu)
    for (int nu = 0; nu < md; ++nu)
      for (int n = 0; n < cavity_dim(); ++n) out(mu, nu) += (*this)(mu, nu, n, n);
  return out;
}

double DensityBlock::purity() const {
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  return sum;
}

double DensityBlock::hermiticity_defect() const {
  double worst = 0.0;
  for (int mu = 0; mu < mirror_dim(); ++mu)
    for (int nu = 0; nu < mirror_dim(); ++nu)
      for (int n = 0; n < cavity_dim(); ++n)
        for (int m = 0; m < cavity_dim(); ++m)
          worst = std::max(worst, std::abs((*this)(mu, nu, n, m) -
                                           std::conj((*this)(nu, mu, m, n))));
  return worst;
}

void DensityBlock::write_json(std::ostream& out) const {
  nlohmann::json j;
  j["format"] = "optomech-density-block";
  j["version"] = 1;
  j["layout"] = "row-major over (mu, nu, n, m); data interleaves re, im";
  j["mir_max"] = trunc_.mir_max;
  j["cav_max"] = trunc_.cav_max;
  j["tail_tol"] = trunc_.tail_tol;
  j["theta"] = theta_.value();
  j["normalized"] = normalized_;
  j["params"] = {{"mirror_freq", params_.mirror_freq},
                 {"coupling_k", params_.coupling_k},
                 {"alpha_re", params_.alpha.real()},
                 {"alpha_im", params_.alpha.imag()},
                 {"nbar", params_.nbar},
                 {"cavity_freq", params_.cavity_freq}};
  std::vector<double> flat;
  flat.reserve(values_.size() * 2);
  for (const auto& v : values_) {
    flat.push_back(v.real());
    flat.push_back(v.imag());
  }
  j["data"] = std::move(flat);
  out << j.dump() << '\n';
}

// Binary record (native endianness):
//   char[8]  magic "OPTODB01"
//   int32    mir_max, cav_max
//   double   tail_tol, theta, mirror_freq, coupling_k, alpha_re, alpha_im,
//            nbar, cavity_freq
//   uint8    normalized, followed by 7 zero bytes
//   double   re, im for each element, row-major over (mu, nu, n, m)
namespace {
constexpr std::array<char, 8> kMagic{'O', 'P', 'T', 'O', 'D', 'B', '0', '1'};

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ConfigError("DensityBlock::read_binary: truncated record");
  return v;
}
}  // namespace

void DensityBlock::write_binary(std::ostream& out) const {
  out.write(kMagic.data(), kMagic.size());
  put<std::int32_t>(out, trunc_.mir_max);
  put<std::int32_t>(out, trunc_.cav_max);
  for (double v : {trunc_.tail_tol, theta_.value(), params_.mirror_freq,
                   params_.coupling_k, params_.alpha.real(),
                   params_.alpha.imag(), params_.nbar, params_.cavity_freq})
    put(out, v);
  const std::array<std::uint8_t, 8> flags{normalized_ ? std::uint8_t{1} : std::uint8_t{0}};
  out.write(reinterpret_cast<const char*>(flags.data()), flags.size());
  for (const auto& v : values_) {
    put(out, v.real());
    put(out, v.imag());
  }
}

DensityBlock DensityBlock::read_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic)
    throw ConfigError("DensityBlock::read_binary: bad magic");
  Truncation t;
  t.mir_max = get<std::int32_t>(in);
  t.cav_max = get<std::int32_t>(in);
  t.tail_tol = get<double>(in);
  const double theta = get<double>(in);
  SystemParams p;
  p.mirror_freq = get<double>(in);
  p.coupling_k = get<double>(in);
  const double are = get<double>(in);
  const double aim = get<double>(in);
  p.alpha = {are, aim};
  p.nbar = get<double>(in);
  p.cavity_freq = get<double>(in);
  std::array<std::uint8_t, 8> flags{};
  in.read(reinterpret_cast<char*>(flags.data()), flags.size());
  DensityBlock block(t, p, ScaledTime(theta));
  block.normalized_ = flags[0] != 0;
  for (auto& v : block.values_) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v = {re, im};
  }
  return block;
}

// ---------------------------------------------------------------------------

LogComplex rho_element_log(const SystemParams& p, ScaledTime theta, int mu,
                           int nu, int n, int m) {
  if (mu < 0 || nu < 0 || n < 0 || m < 0)
    throw DomainError("rho_element: negative index");
  if (mu > nu) return rho_element_log(p, theta, nu, mu, m, n).conj();

  const LogComplex phi =
      cavity_factor(p, theta, n, m) *
      LogComplex(-0.5 * (log_factorial(mu) + log_factorial(nu)), 0.0);

  if (theta.at_period_boundary() || (n == 0 && m == 0)) {
    if (mu != nu) return {};
    return phi * LogComplex(log_factorial(mu), 0.0) * thermal_weight(p.nbar, mu);
  }

  const std::complex<double> e = eta(theta.value());
  const std::complex<double> dn = p.coupling_k * static_cast<double>(n) * e;
  const std::complex<double> dm = p.coupling_k * static_cast<double>(m) * e;
  const double x = p.boltzmann_ratio();

  const std::complex<double> omega =
      x * std::conj(dn) * dm - 0.5 * (std::norm(dn) + std::norm(dm));
  const std::complex<double> w_nm = dn - x * dm;
  const std::complex<double> w_mn_conj = std::conj(dm - x * dn);

  LogComplex out = phi * LogComplex(omega.real(), omega.imag());
  if (x > 1e-280) {
    const std::complex<double> z = -w_nm * w_mn_conj / x;
    out *= LogComplex(0.0, (mu % 2) ? constants::pi : 0.0);  // (-1)^mu
    out *= thermal_weight(p.nbar, mu);
    out *= LogComplex::from(w_mn_conj).pow(nu - mu);
    out *= tricomi_u_negint_log(mu, 1 + nu - mu, z);
  } else {
    // x -> 0 limit: x^mu (-1)^mu U(-mu, .., -W W*/x) -> (W_nm W*_mn)^mu
    out *= LogComplex::from(w_nm).pow(mu);
    out *= LogComplex::from(w_mn_conj).pow(nu);
  }
  if (out.log_magnitude() > kMaxLogMagnitude)
    throw RangeError("rho_element: magnitude overflow");
  return out;
}

std::complex<double> rho_element(const SystemParams& p, ScaledTime theta,
                                 int mu, int nu, int n, int m) {
  return rho_element_log(p, theta, mu, nu, n, m).value();
}

Truncation choose_truncation(const SystemParams& params, ScaledTime theta,
                             double tail_tol) {
  params.validate();
  if (!(tail_tol > 0.0 && tail_tol < 1.0))
    throw ConfigError("tail_tol must lie in (0, 1)");
  Truncation t;
  t.tail_tol = tail_tol;
  t.cav_max = poisson_cutoff(std::norm(params.alpha), 0.5 * tail_tol);

  int geometric = 1;
  if (params.nbar > 0.0) {
    const double x = params.boltzmann_ratio();
    geometric = std::max(1, static_cast<int>(std::ceil(std::log(0.5 * tail_tol) /
                                                       std::log(x))) - 1);
  }
  // Start from the displacement of a typical photon number; the loop below
  // grows the cutoff until the exact diagonal mass meets the tolerance.
  const double lam = std::norm(params.alpha);
  const double typical = std::min<double>(t.cav_max, std::ceil(lam + 3.0 * std::sqrt(lam) + 1.0));
  const double shift = params.coupling_k * typical * std::abs(eta(theta.value()));
  t.mir_max = geometric + static_cast<int>(std::ceil(4.0 * shift + shift * shift));

  constexpr int kMirrorCap = 4096;
  while (1.0 - diagonal_mass(params, theta, t.cav_max, t.mir_max) > tail_tol) {
    if (t.mir_max >= kMirrorCap)
      throw ConfigError("choose_truncation: mirror cutoff exceeds " +
                        std::to_string(kMirrorCap));
    t.mir_max = std::min(kMirrorCap, t.mir_max + t.mir_max / 4 + 1);
  }
  return t;
}

DensityBlock build_rho(const SystemParams& params, ScaledTime theta,
                       const Truncation& trunc, unsigned workers) {
  params.validate();
  trunc.validate();
  DensityBlock block(trunc, params, theta);
  const int md = block.mirror_dim();
  const int cd = block.cavity_dim();
  parallel_for(static_cast<std::size_t>(md), workers, [&](std::size_t row) {
    const int mu = static_cast<int>(row);
    for (int nu = mu; nu < md; ++nu)
      for (int n = 0; n < cd; ++n)
        for (int m = (mu == nu ? n : 0); m < cd; ++m) {
          std::complex<double> v = rho_element(params, theta, mu, nu, n, m);
          if (mu == nu && n == m) v = {v.real(), 0.0};
          block(mu, nu, n, m) = v;
          block(nu, mu, m, n) = std::conj(v);
        }
  });
  const double mass = block.trace().real();
  if (1.0 - mass > trunc.tail_tol)
    throw ConfigError("build_rho: probability outside cutoffs " +
                      std::to_string(1.0 - mass) + " exceeds tail_tol");
  block.normalize();
  return block;
}

DensityBlock oracle_rho(const SystemParams& params, ScaledTime theta,
                        const Truncation& trunc) {
  params.validate();
  trunc.validate();
  const int md = trunc.mir_max + 1;
  const int cd = trunc.cav_max + 1;

  // Initial thermal levels beyond this carry less than 1e-18 of the mass.
  int initial_max = 0;
  if (params.nbar > 0.0) {
    const double x = params.boltzmann_ratio();
    initial_max = std::max(trunc.mir_max,
                           static_cast<int>(std::ceil(std::log(1e-18) / std::log(x))));
    constexpr int kInitialCap = 20000;
    if (initial_max > kInitialCap)
      throw ConfigError("oracle_rho: nbar too large for the brute-force sum");
  }
  const int id = initial_max + 1;

  std::vector<double> sqrt_p(static_cast<std::size_t>(id));
  for (int j = 0; j < id; ++j)
    sqrt_p[j] = std::sqrt(thermal_weight(params.nbar, j).value().real());

  const std::complex<double> e = eta(theta.value());
  // columns[n](mu', mu0) = sqrt(p_mu0) <mu'| D(k n eta) |mu0>
  std::vector<Eigen::MatrixXcd> columns(static_cast<std::size_t>(cd));
  std::vector<std::complex<double>> amp(static_cast<std::size_t>(cd));
  for (int n = 0; n < cd; ++n) {
    const std::complex<double> gamma = params.coupling_k * static_cast<double>(n) * e;
    Eigen::MatrixXcd& a = columns[n];
    a.resize(md, id);
    for (int j = 0; j < id; ++j)
      for (int r = 0; r < md; ++r)
        a(r, j) = sqrt_p[j] * displaced_number_element(r, j, gamma);
    amp[n] = amplitude(params, theta, n).value();
  }

  DensityBlock block(trunc, params, theta);
  for (int n = 0; n < cd; ++n)
    for (int m = 0; m < cd; ++m) {
      const Eigen::MatrixXcd mirror =
          (amp[n] * std::conj(amp[m])) * (columns[n] * columns[m].adjoint());
      for (int mu = 0; mu < md; ++mu)
        for (int nu = 0; nu < md; ++nu) block(mu, nu, n, m) = mirror(mu, nu);
    }
  const double mass = block.trace().real();
  if (1.0 - mass > trunc.tail_tol)
    throw ConfigError("oracle_rho: probability outside cutoffs " +
                      std::to_string(1.0 - mass) + " exceeds tail_tol");
  block.normalize();
  return block;
}

std::complex<double> rho_element_integral(const SystemParams& params,
                                          ScaledTime theta, int mu, int nu,
                                          int n, int m, int quadrature_order) {
  params.validate();
  if (params.nbar <= 0.0)
    throw DomainError("rho_element_integral: requires nbar > 0");
  if (quadrature_order < 20)
    throw DomainError("rho_element_integral: quadrature_order must be >= 20");
  if (mu < 0 || nu < 0 || n < 0 || m < 0)
    throw DomainError("rho_element_integral: negative index");

  const std::complex<double> e = eta(theta.value());
  const std::complex<double> dn = params.coupling_k * static_cast<double>(n) * e;
  const std::complex<double> dm = params.coupling_k * static_cast<double>(m) * e;
  // Substituting z = (u + i v) / sqrt(c), c = 1 + 1/nbar, turns the combined
  // Gaussian exp(-c |z|^2) into the Gauss-Hermite weight.
  const double c = 1.0 + 1.0 / params.nbar;
  const double scale = 1.0 / std::sqrt(c);
  const QuadratureRule rule = gauss_hermite(quadrature_order);

  std::complex<double> sum = 0.0;
  for (int i = 0; i < quadrature_order; ++i)
    for (int j = 0; j < quadrature_order; ++j) {
      const std::complex<double> z(scale * rule.nodes[i], scale * rule.nodes[j]);
      const std::complex<double> fn = z + dn;
      const std::complex<double> fm = z + dm;
      // K_nm(z) + c |z|^2, plus the displacement phase of D(Delta)|z>
      const std::complex<double> exponent =
          std::norm(z) - 0.5 * (std::norm(fn) + std::norm(fm)) +
          0.5 * (dn * std::conj(z) - std::conj(dn) * z) +
          0.5 * (std::conj(dm) * z - dm * std::conj(z));
      std::complex<double> term = std::exp(exponent);
      if (mu > 0) term *= std::pow(fn, mu);
      if (nu > 0) term *= std::pow(std::conj(fm), nu);
      sum += rule.weights[i] * rule.weights[j] * term;
    }
  const std::complex<double> integral = sum / (constants::pi * c);
  const LogComplex phi =
      cavity_factor(params, theta, n, m) *
      LogComplex(-0.5 * (log_factorial(mu) + log_factorial(nu)), 0.0);
  // 1 / nbar normalizes the thermal P-function.
  return phi.value() * integral / params.nbar;
}

TwoQubitState demo_qubit_photon(ScaledTime theta, double k) {
  if (!(k >= 0.0)) throw DomainError("demo_qubit_photon: k must be >= 0");
  const std::complex<double> gamma = k * eta(theta.value());
  const int cutoff = poisson_cutoff(std::norm(gamma), 1e-17);

  // |k eta>_m in the truncated Fock basis, then Gram-Schmidt against |0>_m.
  Eigen::VectorXcd coherent(cutoff + 1);
  for (int r = 0; r <= cutoff; ++r)
    coherent(r) = displaced_number_element(r, 0, gamma);
  const std::complex<double> overlap = coherent(0);
  Eigen::VectorXcd perp = coherent;
  perp(0) = 0.0;
  const double perp_norm = perp.norm();

  const std::complex<double> phase =
      std::polar(1.0, k * k * phase_lambda(theta.value()));
  // mirror pair (|0>_m, e1), cavity pair (|0>, |1>)
  Eigen::Vector4cd psi;
  psi << 1.0, phase * overlap, 0.0, phase * perp_norm;
  return TwoQubitState::from_pure(psi);
}

TwoQubitState TwoQubitState::from_pure(const Eigen::Vector4cd& psi) {
  const double n2 = psi.squaredNorm();
  if (n2 == 0.0) throw DegenerateSubspaceError("from_pure: zero vector");
  TwoQubitState s;
  s.matrix = psi * psi.adjoint() / n2;
  s.weight = 1.0;
  s.log_weight = 0.0;
  s.normalized = true;
  return s;
}

}  // namespace optomech

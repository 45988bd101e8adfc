// Copyright 2026 The qoverlap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qoverlap/errors.hpp"
#include "qoverlap/optics/matrix.hpp"

namespace qoverlap::cv {

using optics::cplx;
using std::numbers::pi;

enum class CvKind { Coherent, Squeezed, Fock, Cat };

/**
 * Product state over M modes from a closed catalogue. Per mode:
 *   Coherent  |beta>
 *   Squeezed  S(r e^{i phi}) |0>, S(z) = exp((z* a^2 - z a^dag^2) / 2)
 *   Fock      |n>
 *   Cat       even cat  (|beta> + |-beta>) / sqrt(2 (1 + e^{-2|beta|^2}))
 */
class CvState {
 public:
  static CvState coherent(std::vector<cplx> beta) {
    CvState s(CvKind::Coherent, beta.size());
    s.beta_ = std::move(beta);
    return s;
  }
  static CvState squeezed(std::vector<double> r, std::vector<double> phi) {
    if (r.size() != phi.size()) throw DimensionError("CvState::squeezed: r and phi differ in length");
    for (double v : r)
      if (!(v >= 0.0)) throw ParameterError("CvState::squeezed: r must be >= 0");
    CvState s(CvKind::Squeezed, r.size());
    s.r_ = std::move(r);
    s.phi_ = std::move(phi);
    return s;
  }
  static CvState fock(std::vector<int> n) {
    for (int v : n)
      if (v < 0) throw ParameterError("CvState::fock: photon number must be >= 0");
    CvState s(CvKind::Fock, n.size());
    s.n_ = std::move(n);
    return s;
  }
  static CvState cat(std::vector<cplx> beta) {
    CvState s(CvKind::Cat, beta.size());
    s.beta_ = std::move(beta);
    return s;
  }

  CvKind kind() const noexcept { return kind_; }
  std::size_t modes() const noexcept { return modes_; }
  const std::vector<cplx>& beta() const noexcept { return beta_; }
  const std::vector<double>& r() const noexcept { return r_; }
  const std::vector<double>& phi() const noexcept { return phi_; }
  const std::vector<int>& n() const noexcept { return n_; }

  /// Mean photon number of mode k (used to sanity-check the energy cut-off).
  double mean_photons(std::size_t k) const {
    switch (kind_) {
      case CvKind::Coherent: return std::norm(beta_.at(k));
      case CvKind::Squeezed: return std::pow(std::sinh(r_.at(k)), 2);
      case CvKind::Fock: return n_.at(k);
      case CvKind::Cat: {
        const double b2 = std::norm(beta_.at(k));
        return b2 * std::tanh(b2);
      }
    }
    return 0.0;
  }

 private:
  CvState(CvKind k, std::size_t m) : kind_(k), modes_(m) {
    if (m == 0) throw DimensionError("CvState: need at least one mode");
  }
  CvKind kind_;
  std::size_t modes_;
  std::vector<cplx> beta_;
  std::vector<double> r_, phi_;
  std::vector<int> n_;
};

/// Every catalogue state is self-reflective; non-catalogue states cannot be built.
inline bool is_self_reflective(const CvState&) noexcept { return true; }

namespace detail {
// <gamma|mu> for coherent states.
inline cplx coherent_inner(cplx gamma, cplx mu) {
  return std::exp(-0.5 * std::norm(gamma) - 0.5 * std::norm(mu) + std::conj(gamma) * mu);
}

inline cplx char_fn_mode(const CvState& s, std::size_t k, cplx a) {
  const double a2 = std::norm(a);
  switch (s.kind()) {
    case CvKind::Coherent: {
      const cplx b = s.beta()[k];
      return std::exp(-0.5 * a2 + a * std::conj(b) - std::conj(a) * b);
    }
    case CvKind::Squeezed: {
      const double r = s.r()[k];
      const double re = std::real(a * a * std::polar(1.0, -s.phi()[k]));
      return std::exp(-0.5 * (std::cosh(2 * r) * a2 + std::sinh(2 * r) * re));
    }
    case CvKind::Fock:
      return std::exp(-0.5 * a2) * std::laguerre(static_cast<unsigned>(s.n()[k]), a2);
    case CvKind::Cat: {
      // <g|D(a)|d> = <g|a + d> e^{(a d* - a* d)/2}
      const cplx b = s.beta()[k];
      const double norm2 = 1.0 / (2.0 * (1.0 + std::exp(-2.0 * std::norm(b))));
      cplx sum{};
      for (cplx g : {b, -b})
        for (cplx d : {b, -b})
          sum += coherent_inner(g, a + d) * std::exp(0.5 * (a * std::conj(d) - std::conj(a) * d));
      return norm2 * sum;
    }
  }
  return {};
}
}  // namespace detail

/// chi(alpha) = Tr[D(alpha) rho], a product over modes.
inline cplx char_fn(const CvState& s, const cplx* alpha, std::size_t m) {
  if (m != s.modes()) throw DimensionError("char_fn: alpha has the wrong number of modes");
  cplx out = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (!std::isfinite(alpha[k].real()) || !std::isfinite(alpha[k].imag())) {
      throw ParameterError("char_fn: non-finite alpha");
    }
    out *= detail::char_fn_mode(s, k, alpha[k]);
  }
  return out;
}
inline cplx char_fn(const CvState& s, const std::vector<cplx>& alpha) {
  return char_fn(s, alpha.data(), alpha.size());
}

/**
 * Truncated single-mode displacement <m|D(alpha)|n>, m, n < cutoff.
 * Built column by column from D|0> = |alpha> and
 * D|n+1> = (a^dag - alpha*) D|n> / sqrt(n+1); the recurrence never reads
 * below the cut-off, so every kept element is exact up to rounding.
 */
inline optics::ComplexMatrix displacement_matrix(cplx alpha, std::size_t cutoff) {
  if (static_cast<double>(cutoff) < 4.0 * (1.0 + std::norm(alpha))) {
    throw CapacityError("displacement_matrix: cutoff " + std::to_string(cutoff) +
                        " below 4 (1 + |alpha|^2)");
  }
  optics::ComplexMatrix d(cutoff, cutoff);
  d(0, 0) = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t m = 1; m < cutoff; ++m) d(m, 0) = d(m - 1, 0) * alpha / std::sqrt(double(m));
  const cplx ac = std::conj(alpha);
  for (std::size_t n = 0; n + 1 < cutoff; ++n) {
    const double s = 1.0 / std::sqrt(double(n + 1));
    for (std::size_t m = 0; m < cutoff; ++m) {
      cplx v = -ac * d(m, n);
      if (m > 0) v += std::sqrt(double(m)) * d(m - 1, n);
      d(m, n + 1) = v * s;
    }
  }
  return d;
}

/// Energy-bounded phase-space region: the 2M-ball |alpha|^2 <= kappa M.
struct HypersphereSpec {
  std::size_t modes = 1;
  double kappa = 1.0;

  double radius() const { return std::sqrt(kappa * static_cast<double>(modes)); }
};

inline double log_hypersphere_volume(std::size_t m, double kappa) {
  if (m < 1) throw ParameterError("hypersphere_volume: need M >= 1");
  if (!(kappa > 0.0)) throw ParameterError("hypersphere_volume: need kappa > 0");
  const double md = static_cast<double>(m);
  return md * std::log(pi * kappa * md) - std::lgamma(md + 1.0);
}

/// (pi kappa M)^M / M!
inline double hypersphere_volume(std::size_t m, double kappa) {
  const double lv = log_hypersphere_volume(m, kappa);
  const double v = std::exp(lv);
  if (!std::isfinite(v)) throw CapacityError("hypersphere_volume: overflow, use log_hypersphere_volume");
  return v;
}

/// L points uniform in the ball, stored point-major (L x M).
inline std::vector<cplx> sample_hypersphere(std::size_t m, double kappa, std::size_t l, std::uint64_t seed) {
  if (l < 1) throw ParameterError("sample_hypersphere: need L >= 1");
  const double rmax = HypersphereSpec{m, kappa}.radius();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> pts(l * m);
  std::vector<double> v(2 * m);
  for (std::size_t i = 0; i < l; ++i) {
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (double& x : v) {
        x = g(rng);
        n2 += x * x;
      }
    } while (n2 == 0.0);
    const double r = rmax * std::pow(u(rng), 1.0 / (2.0 * static_cast<double>(m))) / std::sqrt(n2);
    for (std::size_t k = 0; k < m; ++k) pts[i * m + k] = {r * v[2 * k], r * v[2 * k + 1]};
  }
  return pts;
}

struct McResult {
  double value = 0.0;         ///< real part of the estimator
  double imag = 0.0;          ///< imaginary residual (should vanish)
  double sigma_L = 0.0;       ///< sample spread of f = chi_A(a) chi_B(-a) (complex modulus)
  double std_error = 0.0;     ///< standard error of `value`
  double imag_std_error = 0.0;
  double volume = 0.0;
  std::size_t L = 0;
};

/**
 * Y = Re[(|A| / (pi^M L)) sum_i chi_A(a_i) chi_B(-a_i)] over uniform points.
 * With eps_tilde > 0 each chi value is perturbed by independent noise uniform
 * in the complex disk of that radius.
 */
inline McResult mc_overlap(const CvState& a, const CvState& b, const HypersphereSpec& spec, std::size_t l,
                           double eps_tilde, std::uint64_t seed) {
  if (a.modes() != b.modes() || a.modes() != spec.modes) {
    throw DimensionError("mc_overlap: states and region must have the same number of modes");
  }
  if (l < 2) throw ParameterError("mc_overlap: need L >= 2");
  if (!(eps_tilde >= 0.0)) throw ParameterError("mc_overlap: eps_tilde must be >= 0");
  const std::size_t m = spec.modes;
  const double volume = hypersphere_volume(m, spec.kappa);  // throws before any sampling on overflow
  const auto pts = sample_hypersphere(m, spec.kappa, l, seed);

  std::mt19937_64 noise_rng(seed ^ 0xA5A5A5A5DEADBEEFULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto disk = [&]() -> cplx {
    if (eps_tilde == 0.0) return {};
    const double r = eps_tilde * std::sqrt(u(noise_rng));
    return std::polar(r, 2 * pi * u(noise_rng));
  };

  // Welford accumulation of f, its real and imaginary parts.
  double mean_re = 0.0, mean_im = 0.0, m2_re = 0.0, m2_im = 0.0;
  std::vector<cplx> neg(m);
  for (std::size_t i = 0; i < l; ++i) {
    const cplx* p = &pts[i * m];
    for (std::size_t k = 0; k < m; ++k) neg[k] = -p[k];
    const cplx fa = char_fn(a, p, m) + disk();
    const cplx fb = char_fn(b, neg.data(), m) + disk();
    const cplx f = fa * fb;
    const double n = static_cast<double>(i + 1);
    const double dre = f.real() - mean_re, dim = f.imag() - mean_im;
    mean_re += dre / n;
    mean_im += dim / n;
    m2_re += dre * (f.real() - mean_re);
    m2_im += dim * (f.imag() - mean_im);
  }
  const double ld = static_cast<double>(l);
  const double var_re = m2_re / (ld - 1.0), var_im = m2_im / (ld - 1.0);
  McResult r;
  r.L = l;
  r.volume = volume;
  const double scale = r.volume / std::pow(pi, static_cast<double>(m));
  r.value = scale * mean_re;
  r.imag = scale * mean_im;
  r.sigma_L = std::sqrt(var_re + var_im);
  r.std_error = scale * std::sqrt(var_re / ld);
  r.imag_std_error = scale * std::sqrt(var_im / ld);
  if (!std::isfinite(r.value) || !std::isfinite(r.std_error)) throw NumericalError("mc_overlap: non-finite estimate");
  return r;
}

struct DistributedPlan {
  double eps_tilde = 0.0;
  double L = 0.0;
  double N = 0.0;
  double sigma_L = 0.0;
  double volume = 0.0;
  double log_N = 0.0;  ///< natural log of N, usable when N overflows
};

inline void to_json(nlohmann::json& j, const DistributedPlan& p) {
  j = nlohmann::json{{"eps_tilde", p.eps_tilde}, {"L", p.L},         {"N", p.N},
                     {"sigma_L", p.sigma_L},     {"volume", p.volume}, {"log_N", p.log_N}};
}

/**
 * Resources for distributed estimation to additive error eps:
 *   eps_tilde = pi^M eps / (8 |A|)
 *   L         = (4 sigma_L |A| / (pi^M eps))^2
 *   N         = ceil(c eps_tilde^-4 ln(2 L / delta))
 */
inline DistributedPlan distributed_plan(double eps, double delta, const HypersphereSpec& spec, double sigma_L,
                                        double c = 1.0) {
  if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("distributed_plan: need 0 < eps < 1/2");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("distributed_plan: need 0 < delta < 1");
  if (!(sigma_L > 0.0)) throw ParameterError("distributed_plan: need sigma_L > 0");
  if (!(c > 0.0)) throw ParameterError("distributed_plan: need c > 0");
  const double md = static_cast<double>(spec.modes);
  const double log_ratio = log_hypersphere_volume(spec.modes, spec.kappa) - md * std::log(pi);  // ln(|A|/pi^M)
  DistributedPlan p;
  p.sigma_L = sigma_L;
  p.volume = std::exp(log_hypersphere_volume(spec.modes, spec.kappa));
  const double log_eps_tilde = std::log(eps / 8.0) - log_ratio;
  p.eps_tilde = std::exp(log_eps_tilde);
  const double log_L = 2.0 * (std::log(4.0 * sigma_L / eps) + log_ratio);
  p.L = std::exp(log_L);
  const double log_term = std::log(2.0 / delta) + log_L;
  if (!(log_term > 0.0)) throw ParameterError("distributed_plan: ln(2L/delta) must be positive");
  p.log_N = std::log(c) - 4.0 * log_eps_tilde + std::log(log_term);
  p.N = std::ceil(std::exp(p.log_N));
  return p;
}

/// State descriptor: {"variant": "coherent"|"squeezed"|"fock"|"cat", ...}.
inline CvState cv_state_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("variant")) throw ConfigError("cv state: missing 'variant'");
  const std::string v = j.at("variant").get<std::string>();
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, _] : j.items()) {
      bool ok = k == "variant";
      for (const char* a : keys) ok = ok || k == a;
      if (!ok) throw ConfigError("cv state: unknown key '" + k + "' for variant " + v);
    }
  };
  auto complex_list = [&](const char* key) {
    std::vector<cplx> out;
    if (!j.contains(key)) throw ConfigError(std::string("cv state: missing '") + key + "'");
    for (const auto& e : j.at(key)) {
      if (e.is_number()) out.emplace_back(e.get<double>(), 0.0);
      else if (e.is_array() && e.size() == 2) out.emplace_back(e[0].get<double>(), e[1].get<double>());
      else throw ConfigError(std::string("cv state: '") + key + "' entries must be x or [re, im]");
    }
    return out;
  };
  try {
    if (v == "coherent") {
      allow({"beta"});
      return CvState::coherent(complex_list("beta"));
    }
    if (v == "cat") {
      allow({"beta"});
      return CvState::cat(complex_list("beta"));
    }
    if (v == "squeezed") {
      allow({"r", "phi"});
      auto r = j.at("r").get<std::vector<double>>();
      auto phi = j.contains("phi") ? j.at("phi").get<std::vector<double>>() : std::vector<double>(r.size(), 0.0);
      return CvState::squeezed(std::move(r), std::move(phi));
    }
    if (v == "fock") {
      allow({"n"});
      return CvState::fock(j.at("n").get<std::vector<int>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cv state: ") + e.what());
  }
  throw ConfigError("cv state: unknown variant '" + v + "'");
}

}  // namespace qoverlap::cv

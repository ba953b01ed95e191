#pragma once

// Transfer matrices over the substitution potential, the closed-form
// growth and transport exponents (a_V, zeta, the gamma bracket, the
// alpha and beta lower bounds), empirical verification of the power-law
// norm bound on the spectrum, and local l^2 norms of solutions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"
#include "spectrum_bands.hpp"
#include "trace_map.hpp"

namespace fibspec {

struct Mat2 {
  double m11 = 1.0, m12 = 0.0;
  double m21 = 0.0, m22 = 1.0;

  static Mat2 identity() { return {}; }

  Mat2 operator*(const Mat2& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
            m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
  }

  double det() const { return m11 * m22 - m12 * m21; }
  double trace() const { return m11 + m22; }
};

/// Spectral norm from the closed form for 2x2 matrices: the larger
/// singular value satisfies s^2 = (t + sqrt(t^2 - 4 d^2)) / 2 with
/// t the squared Frobenius norm and d the determinant.
inline double spectral_norm(const Mat2& m) {
  double t = m.m11 * m.m11 + m.m12 * m.m12 + m.m21 * m.m21 + m.m22 * m.m22;
  double d = m.det();
  double disc = t * t - 4.0 * d * d;
  if (disc < 0.0) disc = 0.0;  // rounding; exact value is >= 0
  return std::sqrt(0.5 * (t + std::sqrt(disc)));
}

/// One-step transfer matrix at site n: [[E - v(n), -1], [1, 0]] for the
/// diagonal model, (1/w_n) [[E, -1], [w_n^2, 0]] off-diagonal.
inline Mat2 one_step_transfer(std::int64_t n, double E, const ModelParams& p) {
  if (p.kind == ModelParams::Kind::kDiagonal)
    return {E - site_potential(p, n), -1.0, 1.0, 0.0};
  double w = site_hopping(p, n);
  return {E / w, -1.0 / w, w, 0.0};
}

/// Ordered product M(n) ... M(m+1) over sites m+1..n; the identity for
/// n = m. The off-diagonal model requires m >= 0.
inline Mat2 transfer_product(std::int64_t n, std::int64_t m, double E,
                             const ModelParams& p) {
  if (n < m)
    throw std::invalid_argument("transfer_product: need n >= m");
  if (p.kind == ModelParams::Kind::kOffDiagonal && m < 0)
    throw std::invalid_argument("transfer_product: off-diagonal sites start at 1");
  Mat2 acc = Mat2::identity();
  for (std::int64_t s = m + 1; s <= n; ++s) acc = one_step_transfer(s, E, p) * acc;
  return acc;
}

/// Largest root of x^3 - (2+V) x - 1, the growth base of the trace
/// polynomials off the spectrum. Equals the golden mean at V = 0.
inline double a_V(double V) {
  if (V < 0.0) throw std::invalid_argument("a_V: V must be >= 0");
  // Depressed cubic with p = -(2+V), q = -1: three real roots, the
  // largest from the trigonometric form, then polished by Newton.
  double pc = -(2.0 + V);
  double qc = -1.0;
  double r = 2.0 * std::sqrt(-pc / 3.0);
  double arg = 3.0 * qc / (2.0 * pc) * std::sqrt(-3.0 / pc);
  arg = std::min(1.0, std::max(-1.0, arg));
  double x = r * std::cos(std::acos(arg) / 3.0);
  for (int it = 0; it < 3; ++it) {
    double f = (x * x - (2.0 + V)) * x - 1.0;
    double df = 3.0 * x * x - (2.0 + V);
    x -= f / df;
  }
  return x;
}

/// Power-law exponent zeta(V) = log_phi[ (5+2V)^{1/2} (3+V) a_V ]:
/// transfer matrix norms on the spectrum grow no faster than C n^zeta.
inline double zeta_exponent(double V) {
  double phi = kGoldenMean;
  return std::log(std::sqrt(5.0 + 2.0 * V) * (3.0 + V) * a_V(V)) /
         std::log(phi);
}

/// Two-sided transport bracket [gamma_lower, gamma_upper]: solutions
/// spread at least like t^{gamma_lower} and at most like t^{gamma_upper}.
struct GammaBracket {
  double lower = 0.0;
  double upper = 0.0;
};

inline GammaBracket gamma_bracket(double V) {
  double lnphi = std::log(kGoldenMean);
  double L = std::log1p(1.0 / ((2.0 + 2.0 * V) * (2.0 + 2.0 * V)));
  return {L / (16.0 * lnphi), 1.0 + zeta_exponent(V)};
}

/// Lower bound for the transport exponent alpha_u^-:
/// 2L / (L + 16 ln phi + 16 D) with L = ln(1 + (2+2V)^{-2}) and
/// D = ln[(5+2V)^{1/2} (3+V) a_V].
inline double alpha_lower_bound(double V) {
  double lnphi = std::log(kGoldenMean);
  double L = std::log1p(1.0 / ((2.0 + 2.0 * V) * (2.0 + 2.0 * V)));
  double D = std::log(std::sqrt(5.0 + 2.0 * V) * (3.0 + V) * a_V(V));
  return 2.0 * L / (L + 16.0 * lnphi + 16.0 * D);
}

/// Dynamical lower bounds beta^-(p): for arbitrary initial states the
/// alpha bound applies for every p > 0; for the delta_0 state there is
/// the sharper p-dependent bound tending to ln phi / (ln phi + D).
struct BetaBounds {
  double any_state = 0.0;
  double delta0 = 0.0;
};

inline BetaBounds beta_lower_bounds(double V, double p) {
  if (!(p > 0.0))
    throw std::invalid_argument("beta_lower_bounds: p must be positive");
  double lnphi = std::log(kGoldenMean);
  double D = std::log(std::sqrt(5.0 + 2.0 * V) * (3.0 + V) * a_V(V));
  BetaBounds b;
  b.any_state = alpha_lower_bound(V);
  double limit = lnphi / (lnphi + D);
  double correction = std::isinf(p) ? 0.0 : 3.0 * D / (p * (lnphi + D));
  b.delta0 = std::max(0.0, limit - correction);
  return b;
}

/// All closed-form transport quantities at one coupling.
struct TransportBounds {
  double V = 0.0;
  double p = 0.0;
  double a = 0.0;        // a_V
  double zeta = 0.0;
  double gamma_lower = 0.0;
  double gamma_upper = 0.0;
  double alpha_lower = 0.0;
  double beta_any_state = 0.0;
  double beta_delta0 = 0.0;
};

inline TransportBounds transport_bounds(double V, double p) {
  TransportBounds t;
  t.V = V;
  t.p = p;
  t.a = a_V(V);
  t.zeta = zeta_exponent(V);
  GammaBracket g = gamma_bracket(V);
  t.gamma_lower = g.lower;
  t.gamma_upper = g.upper;
  t.alpha_lower = alpha_lower_bound(V);
  BetaBounds b = beta_lower_bounds(V, p);
  t.beta_any_state = b.any_state;
  t.beta_delta0 = b.delta0;
  return t;
}

/// Lower bound (1 + (2+2V)^{-2})^{n/2} for the local norm of any
/// normalised solution over the first F_{8n} sites.
inline double local_norm_lower_bound(double V, int n) {
  if (n < 1)
    throw std::invalid_argument("local_norm_lower_bound: n must be >= 1");
  double base = 1.0 + 1.0 / ((2.0 + 2.0 * V) * (2.0 + 2.0 * V));
  return std::pow(base, 0.5 * static_cast<double>(n));
}

namespace detail {

// Letters for sites 1..count as a byte string; cached word prefix.
inline std::string word_letters(std::int64_t count) {
  if (count < 1) throw std::invalid_argument("word_letters: count must be >= 1");
  int k = 1;
  while (static_cast<std::int64_t>(fib(k)) < count) {
    ++k;
    if (k > 36) throw std::length_error("word_letters: count beyond F_36");
  }
  return substitution_prefix(k);
}

struct SolutionAccumulator {
  double sum_u = 0.0;       // sum of u(n)^2, n = 1..floor(L)
  double tail_u = 0.0;      // u(floor(L)+1)^2
  double sum_state = 0.0;   // sum of u(n+1)^2 + u(n)^2
  double tail_state = 0.0;  // u(L+2)^2 + u(L+1)^2 at n = floor(L)+1
  bool overflow = false;
};

// Propagate the solution with u(0), u(1) given, accumulating the pieces
// for both norm flavours up to floor(L)+2 sites.
inline SolutionAccumulator accumulate_solution(double u0, double u1, double E,
                                               const ModelParams& p,
                                               double L) {
  auto n_int = static_cast<std::int64_t>(std::floor(L));
  std::string letters;
  bool use_word = (p.kind == ModelParams::Kind::kOffDiagonal) ||
                  (p.omega == 0.0);
  if (use_word) letters = word_letters(n_int + 2);
  auto v_at = [&](std::int64_t n) -> double {
    if (p.kind == ModelParams::Kind::kOffDiagonal) return 0.0;
    if (use_word) return letters[static_cast<std::size_t>(n - 1)] == '1' ? p.V : 0.0;
    return site_potential(p, n);
  };
  auto w_at = [&](std::int64_t n) -> double {
    if (p.kind == ModelParams::Kind::kDiagonal) return 1.0;
    return letters[static_cast<std::size_t>(n - 1)] == '1' ? p.a : p.b;
  };

  SolutionAccumulator acc;
  double prev = u0, cur = u1;  // u(n-1), u(n) starting at n = 1
  for (std::int64_t n = 1; n <= n_int + 2; ++n) {
    double next;
    if (p.kind == ModelParams::Kind::kDiagonal) {
      next = (E - v_at(n)) * cur - prev;
    } else {
      next = (E * cur - w_at(n) * prev) / w_at(n + 1);
    }
    if (!(std::fabs(cur) < 1e150) || !(std::fabs(next) < 1e150)) {
      acc.overflow = true;
      return acc;
    }
    if (n <= n_int) {
      acc.sum_u += cur * cur;
      acc.sum_state += cur * cur + next * next;
    } else if (n == n_int + 1) {
      acc.tail_u = cur * cur;
      acc.tail_state = cur * cur + next * next;
    }
    prev = cur;
    cur = next;
  }
  return acc;
}

}  // namespace detail

/// Local norm ||u||_L over the interval [1, L], L >= 1 real: the sum of
/// u(n)^2 up to floor(L) plus the fractional share of the next site.
/// u0, u1 are u(0), u(1) and must be normalised. Returns +inf if the
/// solution overflows on the way.
inline double local_norm(double u0, double u1, double E, const ModelParams& p,
                         double L) {
  if (!(L >= 1.0)) throw std::invalid_argument("local_norm: L must be >= 1");
  if (std::fabs(u0 * u0 + u1 * u1 - 1.0) > 1e-9)
    throw std::invalid_argument("local_norm: (u0, u1) must be normalised");
  auto acc = detail::accumulate_solution(u0, u1, E, p, L);
  if (acc.overflow) return std::numeric_limits<double>::infinity();
  double frac = L - std::floor(L);
  return std::sqrt(acc.sum_u + frac * acc.tail_u);
}

/// Same for the vector solution U(n) = (u(n+1), u(n)): the quantity the
/// power-law lower bound controls.
inline double local_state_norm(double u0, double u1, double E,
                               const ModelParams& p, double L) {
  if (!(L >= 1.0))
    throw std::invalid_argument("local_state_norm: L must be >= 1");
  if (std::fabs(u0 * u0 + u1 * u1 - 1.0) > 1e-9)
    throw std::invalid_argument("local_state_norm: (u0, u1) must be normalised");
  auto acc = detail::accumulate_solution(u0, u1, E, p, L);
  if (acc.overflow) return std::numeric_limits<double>::infinity();
  double frac = L - std::floor(L);
  return std::sqrt(acc.sum_state + frac * acc.tail_state);
}

struct GrowthSample {
  double E = 0.0;
  double slope = 0.0;     // fitted log-log growth of the running max norm
  double max_norm = 0.0;  // max ||M(n)|| over n <= n_max
  bool within = false;    // slope <= zeta + margin
};

struct GrowthReport {
  double V = 0.0;
  double bound = 0.0;  // zeta(V) + margin
  std::vector<GrowthSample> samples;
  bool all_within = false;
};

/// Sample band midpoints of the depth-`depth` approximant and check that
/// transfer norms grow no faster than n^{zeta + margin}: the running max
/// of ||M(n)|| is fitted against n at Fibonacci checkpoints.
inline GrowthReport norm_growth_check(double V, int depth, std::int64_t n_max,
                                      int n_energies = 20,
                                      double edge_tol = 1e-12,
                                      double margin = 0.1) {
  if (n_max < 34)
    throw std::invalid_argument("norm_growth_check: n_max must be >= 34");
  if (n_energies < 1)
    throw std::invalid_argument("norm_growth_check: n_energies must be >= 1");
  ModelParams p = ModelParams::diagonal(V);
  BandSet s = spectrum_approx(p, depth, edge_tol);

  std::vector<double> energies;
  std::size_t nb = s.bands.size();
  std::size_t want = static_cast<std::size_t>(n_energies);
  if (nb <= want) {
    for (const Band& b : s.bands) energies.push_back(0.5 * (b.lo + b.hi));
  } else {
    for (std::size_t i = 0; i < want; ++i) {
      std::size_t j = i * (nb - 1) / (want - 1 == 0 ? 1 : want - 1);
      const Band& b = s.bands[j];
      energies.push_back(0.5 * (b.lo + b.hi));
    }
    energies.erase(std::unique(energies.begin(), energies.end()),
                   energies.end());
  }

  std::vector<std::int64_t> checkpoints;
  for (int k = 4; k <= 92 && static_cast<std::int64_t>(fib(k)) <= n_max; ++k)
    checkpoints.push_back(static_cast<std::int64_t>(fib(k)));
  if (checkpoints.empty() || checkpoints.back() != n_max)
    checkpoints.push_back(n_max);

  std::string letters = detail::word_letters(n_max);
  GrowthReport rep;
  rep.V = V;
  rep.bound = zeta_exponent(V) + margin;
  for (double E : energies) {
    Mat2 acc = Mat2::identity();
    double maxn = 1.0;
    std::size_t cp = 0;
    std::vector<double> xs, ys;
    for (std::int64_t n = 1; n <= n_max; ++n) {
      double v = letters[static_cast<std::size_t>(n - 1)] == '1' ? V : 0.0;
      acc = Mat2{E - v, -1.0, 1.0, 0.0} * acc;
      maxn = std::max(maxn, spectral_norm(acc));
      if (cp < checkpoints.size() && n == checkpoints[cp]) {
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(maxn));
        ++cp;
      }
    }
    double sn = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    double slope = (sn * sxy - sx * sy) / (sn * sxx - sx * sx);
    rep.samples.push_back({E, slope, maxn, slope <= rep.bound});
  }
  rep.all_within = true;
  for (const GrowthSample& g : rep.samples)
    if (!g.within) rep.all_within = false;
  return rep;
}

}  // namespace fibspec

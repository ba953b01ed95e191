#pragma once

// The Fibonacci trace map T(x,y,z) = (2xy - z, x, y), its invariant
// G(x,y,z) = x^2 + y^2 + z^2 - 2xyz - 1, the line of initial conditions,
// and the escape classifier behind all band computations.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "model.hpp"

namespace fibspec {

struct TraceTriple {
  double x = 0.0;  // x_{k+1}
  double y = 0.0;  // x_k
  double z = 0.0;  // x_{k-1}
};

// Values beyond this are treated as numeric escape; the recursion is
// quadratic, so once an orbit passes 1e300 the next step would overflow.
inline constexpr double kOverflowGuard = 1e300;

inline TraceTriple step(const TraceTriple& t) {
  return {2.0 * t.x * t.y - t.z, t.x, t.y};
}

inline TraceTriple inverse_step(const TraceTriple& t) {
  return {t.y, t.z, 2.0 * t.y * t.z - t.x};
}

inline bool overflowed(const TraceTriple& t) {
  return !(std::fabs(t.x) <= kOverflowGuard) ||
         !(std::fabs(t.y) <= kOverflowGuard) ||
         !(std::fabs(t.z) <= kOverflowGuard);
}

/// step() with an explicit overflow signal, for callers that iterate far.
inline std::optional<TraceTriple> step_checked(const TraceTriple& t) {
  TraceTriple s = step(t);
  if (overflowed(s)) return std::nullopt;
  return s;
}

/// Fricke-Vogt invariant, conserved exactly by step and inverse_step.
inline double fricke(const TraceTriple& t) {
  return t.x * t.x + t.y * t.y + t.z * t.z - 2.0 * t.x * t.y * t.z - 1.0;
}

/// Initial condition ((E-V)/2, E/2, 1) on the line l_V; G = V^2/4 there.
inline TraceTriple line_point_diagonal(double E, double V) {
  return {0.5 * (E - V), 0.5 * E, 1.0};
}

/// Off-diagonal initial condition (E/2a, E/2b, (a^2+b^2)/2ab).
inline TraceTriple line_point_offdiag(double E, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("line_point_offdiag: hoppings must be positive");
  return {E / (2.0 * a), E / (2.0 * b), (a * a + b * b) / (2.0 * a * b)};
}

inline TraceTriple seed_triple(double E, const ModelParams& p) {
  return p.kind == ModelParams::Kind::kDiagonal
             ? line_point_diagonal(E, p.V)
             : line_point_offdiag(E, p.a, p.b);
}

/// Outcome of iterating the trace map with the escape test
/// min(|x_{k+1}|, |x_k|) > 1. Once that holds the traces diverge
/// super-exponentially, so iteration stops at the first failure.
struct EscapeResult {
  bool escaped = false;
  int steps = 0;          // escape step, or max_steps when bounded
  TraceTriple last;       // triple at the recorded step
};

inline EscapeResult escape_iterate(const TraceTriple& t0, int max_steps) {
  if (max_steps < 0)
    throw std::invalid_argument("escape_iterate: max_steps must be >= 0");
  TraceTriple t = t0;
  for (int k = 0; k <= max_steps; ++k) {
    if (std::fabs(t.x) > 1.0 && std::fabs(t.y) > 1.0)
      return {true, k, t};
    if (k == max_steps) break;
    t = step(t);
    if (overflowed(t)) return {true, k + 1, t};
  }
  return {false, max_steps, t};
}

/// Half-traces x_{-1}, x_0, ..., x_{k_max} of the transfer matrices over
/// Fibonacci blocks, generated by x_{k+1} = 2 x_k x_{k-1} - x_{k-2}.
/// values[i] holds x_{i-1}. Truncated early if the orbit overflows.
struct TraceSequence {
  std::vector<double> values;
  bool truncated = false;

  double at(int k) const { return values.at(static_cast<std::size_t>(k + 1)); }
  int last_index() const { return static_cast<int>(values.size()) - 2; }
};

inline TraceSequence trace_sequence(double E, const ModelParams& p, int k_max) {
  if (k_max < 1) throw std::invalid_argument("trace_sequence: k_max must be >= 1");
  TraceTriple s = seed_triple(E, p);
  TraceSequence seq;
  seq.values.reserve(static_cast<std::size_t>(k_max) + 2);
  seq.values.push_back(s.z);  // x_{-1}
  seq.values.push_back(s.y);  // x_0
  seq.values.push_back(s.x);  // x_1
  double x2 = s.z, x1 = s.y, x0 = s.x;  // x_{k-2}, x_{k-1}, x_k
  for (int k = 1; k < k_max; ++k) {
    double next = 2.0 * x0 * x1 - x2;
    if (!(std::fabs(next) <= kOverflowGuard)) {
      seq.truncated = true;
      return seq;
    }
    seq.values.push_back(next);
    x2 = x1;
    x1 = x0;
    x0 = next;
  }
  return seq;
}

/// Single half-trace x_k(E) without storing the sequence. Overflow is
/// clamped to +-1e300, which keeps band-edge bisection signs usable.
inline double trace_value(double E, const ModelParams& p, int k) {
  if (k < -1) throw std::invalid_argument("trace_value: k must be >= -1");
  TraceTriple s = seed_triple(E, p);
  if (k == -1) return s.z;
  if (k == 0) return s.y;
  if (k == 1) return s.x;
  double x2 = s.z, x1 = s.y, x0 = s.x;
  for (int j = 2; j <= k; ++j) {
    double next = 2.0 * x0 * x1 - x2;
    if (!(std::fabs(next) <= kOverflowGuard))
      return next > 0.0 ? kOverflowGuard : -kOverflowGuard;
    x2 = x1;
    x1 = x0;
    x0 = next;
  }
  return x0;
}

/// Semiconjugacy F(theta, phi) = (cos 2pi(theta+phi), cos 2pi theta,
/// cos 2pi phi) from the torus onto the invariant surface G = 0.
inline TraceTriple semiconjugacy(double theta, double phi) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  return {std::cos(two_pi * (theta + phi)), std::cos(two_pi * theta),
          std::cos(two_pi * phi)};
}

/// Hyperbolic torus automorphism A(theta, phi) = (theta + phi, theta)
/// mod 1; F intertwines A with the trace map. Its expanding eigenvalue
/// is the golden mean.
inline std::pair<double, double> torus_automorphism(double theta, double phi) {
  double s = theta + phi;
  s -= std::floor(s);
  double t = theta - std::floor(theta);
  if (s >= 1.0) s -= 1.0;
  if (t >= 1.0) t -= 1.0;
  return {s, t};
}

}  // namespace fibspec

#pragma once

// Off-diagonal Fibonacci Jacobi matrices: hoppings a (letter 1) and b
// (letter 0) read from the substitution word, zero diagonal. The trace
// recursion is the same; only the initial conditions and the conserved
// quantity change.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "model.hpp"
#include "spectrum_bands.hpp"
#include "trace_map.hpp"
#include "transfer_transport.hpp"

namespace fibspec {

/// Conserved quantity I(a,b) = (a^2+b^2)^2 / (4 a^2 b^2) - 1 of the
/// off-diagonal trace orbit; independent of the energy.
inline double offdiag_invariant(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("offdiag_invariant: hoppings must be positive");
  double r = (a * a + b * b) / (2.0 * a * b);
  return r * r - 1.0;
}

/// One-step Jacobi transfer matrix (1/w_n) [[E, -1], [w_n^2, 0]].
inline Mat2 jacobi_transfer(std::int64_t n, double E, double a, double b) {
  return one_step_transfer(n, E, ModelParams::offdiagonal(a, b));
}

/// Band approximant for hoppings (a, b); same scan machinery as the
/// diagonal model with the off-diagonal seeds.
inline BandSet offdiag_spectrum_approx(double a, double b, int n,
                                       double edge_tol = 1e-12) {
  return spectrum_approx(ModelParams::offdiagonal(a, b), n, edge_tol);
}

/// Defect of the Cayley-Hamilton identity
/// U(2F_k + 1) - 2 x_k U(F_k + 1) + U(1) = 0, where U(1) is an initial
/// state and U(m) is reached from it by the transfer matrices over sites
/// 1 .. m-1. The word begins with the square (s_k)^2 for every k >= 3
/// (not for k = 2: it starts 1011), which makes the identity exact.
/// Returns ||lhs|| / max(1, ||U(2F_k + 1)||).
inline double cayley_hamilton_residual(double E, double a, double b, int k,
                                       double u_init_1 = 1.0,
                                       double u_init_2 = 0.0) {
  if (k < 3)
    throw std::invalid_argument(
        "cayley_hamilton_residual: k must be >= 3 (the word begins with a "
        "square of s_k only from k = 3 on)");
  if (k > 30)
    throw std::invalid_argument("cayley_hamilton_residual: k too large");
  if (u_init_1 == 0.0 && u_init_2 == 0.0)
    throw std::invalid_argument("cayley_hamilton_residual: U(1) must be nonzero");
  ModelParams p = ModelParams::offdiagonal(a, b);
  std::int64_t fk = static_cast<std::int64_t>(fib(k));

  double x1 = u_init_1, x2 = u_init_2;  // state U(m), starting at m = 1
  double mid1 = 0.0, mid2 = 0.0;
  for (std::int64_t m = 2; m <= 2 * fk + 1; ++m) {
    Mat2 t = one_step_transfer(m - 1, E, p);
    double y1 = t.m11 * x1 + t.m12 * x2;
    double y2 = t.m21 * x1 + t.m22 * x2;
    x1 = y1;
    x2 = y2;
    if (m == fk + 1) {
      mid1 = x1;
      mid2 = x2;
    }
  }

  double xk = trace_value(E, p, k);
  double r1 = x1 - 2.0 * xk * mid1 + u_init_1;
  double r2 = x2 - 2.0 * xk * mid2 + u_init_2;
  double scale = std::max(1.0, std::hypot(x1, x2));
  return std::hypot(r1, r2) / scale;
}

}  // namespace fibspec

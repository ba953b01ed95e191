#pragma once

// Model selection shared by the band, IDS and transfer-matrix code:
// either the diagonal operator with potential V * chi_[1-alpha,1)({n a + w})
// or the off-diagonal Jacobi operator with hoppings a, b read from the
// substitution word.

#include <cstdint>
#include <stdexcept>

#include "fibonacci_word.hpp"

namespace fibspec {

struct ModelParams {
  enum class Kind { kDiagonal, kOffDiagonal };

  Kind kind = Kind::kDiagonal;
  double V = 0.0;       // diagonal coupling
  double a = 1.0;       // hopping for letter 1
  double b = 1.0;       // hopping for letter 0
  double omega = 0.0;   // phase, diagonal model only

  static ModelParams diagonal(double V, double omega = 0.0) {
    if (V < 0.0) throw std::invalid_argument("ModelParams: V must be >= 0");
    if (!(omega >= 0.0 && omega < 1.0))
      throw std::invalid_argument("ModelParams: omega must lie in [0,1)");
    ModelParams p;
    p.kind = Kind::kDiagonal;
    p.V = V;
    p.omega = omega;
    return p;
  }

  static ModelParams offdiagonal(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
      throw std::invalid_argument("ModelParams: hoppings must be positive");
    ModelParams p;
    p.kind = Kind::kOffDiagonal;
    p.a = a;
    p.b = b;
    return p;
  }
};

/// On-site value at n. Zero for the off-diagonal model.
inline double site_potential(const ModelParams& p, std::int64_t n) {
  if (p.kind == ModelParams::Kind::kOffDiagonal) return 0.0;
  return potential(n, p.V, p.omega);
}

/// Hopping between sites n-1 and n. One for the diagonal model; for the
/// off-diagonal model the letter u_n picks a (letter 1) or b (letter 0).
inline double site_hopping(const ModelParams& p, std::int64_t n) {
  if (p.kind == ModelParams::Kind::kDiagonal) return 1.0;
  if (n < 1) throw std::invalid_argument("site_hopping: n must be >= 1");
  return fib_word_letter(static_cast<std::uint64_t>(n)) ? p.a : p.b;
}

}  // namespace fibspec

#pragma once

// Fibonacci substitution word, Zeckendorf representations, and the
// sampled potential v(n) = V * chi_[1-alpha,1)({n*alpha + omega}),
// alpha = (sqrt(5)-1)/2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fibspec {

// Golden ratio quantities. kAlphaHi + kAlphaLo is a double-double
// representation of alpha accurate to ~1e-33, used to evaluate
// {n*alpha + omega} without catastrophic cancellation for |n| up to ~1e9.
inline constexpr double kAlphaHi = 0.6180339887498949;
inline constexpr double kAlphaLo = -5.1795413165634359e-17;
inline constexpr double kAlpha = kAlphaHi;
inline constexpr double kOneMinusAlpha = 0.38196601125010515;
inline constexpr double kGoldenMean = 1.6180339887498949;

namespace detail {
// F_0 = F_1 = 1, F_k = F_{k-1} + F_{k-2}. F_92 is the last value that
// fits in 64 bits.
inline constexpr int kMaxFibIndex = 92;

consteval std::array<std::uint64_t, kMaxFibIndex + 1> make_fib_table() {
  std::array<std::uint64_t, kMaxFibIndex + 1> t{};
  t[0] = 1;
  t[1] = 1;
  for (int k = 2; k <= kMaxFibIndex; ++k) t[k] = t[k - 1] + t[k - 2];
  return t;
}

inline constexpr auto kFib = make_fib_table();
}  // namespace detail

/// F_k with F_0 = F_1 = 1. Throws std::overflow_error for k > 92 and
/// std::invalid_argument for k < 0.
inline std::uint64_t fib(int k) {
  if (k < 0) throw std::invalid_argument("fib: index must be nonnegative");
  if (k > detail::kMaxFibIndex)
    throw std::overflow_error("fib: F_k exceeds 64 bits for k > 92");
  return detail::kFib[static_cast<std::size_t>(k)];
}

/// Substitution prefix s_k: s_0 = "0", s_1 = "1", s_k = s_{k-1} s_{k-2}.
/// Length is F_k. Capped at k <= 36 (about 24 MB) to keep memory bounded.
inline std::string substitution_prefix(int k) {
  if (k < 0) throw std::invalid_argument("substitution_prefix: negative index");
  if (k > 36)
    throw std::length_error("substitution_prefix: prefix longer than F_36");
  if (k == 0) return "0";
  std::string prev = "0", cur = "1";
  for (int j = 2; j <= k; ++j) {
    std::string next = cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// n-th letter (1-based) of the infinite word u = 1011010110110...,
/// the fixed point of the substitution read through s_k = s_{k-1} s_{k-2}.
/// Works by index descent, so n may be as large as F_92.
inline int fib_word_letter(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("fib_word_letter: n must be >= 1");
  int k = 1;
  while (detail::kFib[static_cast<std::size_t>(k)] < n) {
    ++k;
    if (k > detail::kMaxFibIndex)
      throw std::overflow_error("fib_word_letter: n beyond F_92");
  }
  // Inside s_k, position n is in the s_{k-1} head or the s_{k-2} tail.
  while (k > 1) {
    std::uint64_t head = detail::kFib[static_cast<std::size_t>(k - 1)];
    if (n > head) {
      n -= head;
      k -= 2;
    } else {
      k -= 1;
    }
  }
  return k == 1 ? 1 : 0;
}

namespace detail {
// Fractional part of n*alpha + omega in [0,1), with the double-double
// alpha. The product n*kAlphaHi is split exactly with an FMA.
inline double frac_n_alpha_plus(double n, double omega) {
  double p = n * kAlphaHi;
  double err = std::fma(n, kAlphaHi, -p);
  double tail = err + n * kAlphaLo + omega;
  double f = (p - std::floor(p)) + tail;
  f -= std::floor(f);
  if (f >= 1.0) f -= 1.0;
  if (f < 0.0) f += 1.0;
  return f;
}
}  // namespace detail

/// Sampled potential v(n) = V * chi_[1-alpha,1)({n*alpha + omega}).
/// For omega = 0 and n >= 1 the letter of the substitution word is used,
/// which is exact; otherwise the double-double fractional part decides.
inline double potential(std::int64_t n, double V, double omega = 0.0) {
  if (V < 0.0) throw std::invalid_argument("potential: V must be >= 0");
  if (!(omega >= 0.0 && omega < 1.0))
    throw std::invalid_argument("potential: omega must lie in [0,1)");
  if (omega == 0.0 && n >= 1)
    return fib_word_letter(static_cast<std::uint64_t>(n)) ? V : 0.0;
  double f = detail::frac_n_alpha_plus(static_cast<double>(n), omega);
  return (f >= kOneMinusAlpha) ? V : 0.0;
}

/// Zeckendorf representation: n = sum of F_{indices[i]} with indices
/// strictly increasing and no two consecutive. The unit term is F_1,
/// index 0 never appears.
struct Zeckendorf {
  std::vector<int> indices;
};

inline Zeckendorf zeckendorf(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("zeckendorf: n must be positive");
  Zeckendorf z;
  for (int k = detail::kMaxFibIndex; k >= 1; --k) {
    std::uint64_t f = detail::kFib[static_cast<std::size_t>(k)];
    if (f <= n) {
      z.indices.push_back(k);
      n -= f;
      --k;  // skip the neighbour, gaps are at least 2
    }
  }
  std::reverse(z.indices.begin(), z.indices.end());
  return z;
}

/// Number of terms in the Zeckendorf representation of n.
inline int zeck_count(std::uint64_t n) {
  return static_cast<int>(zeckendorf(n).indices.size());
}

/// First `count` symbols of the digit word whose n-th symbol equals
/// zeck_count(n). Built independently of the greedy algorithm from the
/// concatenation W_1 W_2 W_3 ... with W_1 = W_2 = (1) and
/// W_{k+1} = W_k followed by W_{k-1} with every digit raised by one.
inline std::vector<int> zeck_digit_word(std::size_t count) {
  std::vector<int> word{1, 1};  // W_1 and W_2
  std::vector<int> prev{1}, cur{1};
  while (word.size() < count) {
    std::vector<int> next = cur;  // W_{k+1}
    next.reserve(cur.size() + prev.size());
    for (int d : prev) next.push_back(d + 1);
    for (int d : next) {
      if (word.size() >= count) break;
      word.push_back(d);
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  word.resize(count);
  return word;
}

}  // namespace fibspec

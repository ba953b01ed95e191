#pragma once

// Geometry of band sets viewed as Cantor-set approximations: gap lists,
// thickness and denseness with the dimension bracket they imply,
// box-counting dimension, Minkowski sums, and the Gap Lemma criterion
// for a sum of two Cantor sets to be an interval.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "spectrum_bands.hpp"

namespace fibspec {

struct GapList {
  Band hull;               // [lowest lo, highest hi]
  std::vector<Band> gaps;  // bounded complementary gaps, ascending
};

/// Bounded gaps between consecutive bands. Zero-width bands still split
/// the complement, since they are points of the set.
inline GapList gaps(const BandSet& s) {
  if (s.bands.empty())
    throw std::invalid_argument("gaps: band set is empty");
  GapList g;
  g.hull = {s.bands.front().lo, s.bands.back().hi};
  for (std::size_t i = 0; i + 1 < s.bands.size(); ++i) {
    double lo = s.bands[i].hi, hi = s.bands[i + 1].lo;
    if (hi > lo) g.gaps.push_back({lo, hi});
  }
  return g;
}

struct GapSideRef {
  std::size_t gap_index = 0;  // index into gaps(s).gaps, ascending order
  bool left_side = true;      // bridge on the left of the gap
};

struct ThicknessReport {
  double tau = 0.0;    // min bridge/gap ratio (thickness)
  double theta = 0.0;  // max bridge/gap ratio (denseness)
  double dim_lower = 0.0;  // log 2 / log(2 + 1/tau) <= dim_H
  double dim_upper = 1.0;  // dim_H <= log 2 / log(2 + 1/theta)
  GapSideRef witness;      // where the minimum is attained
  int dropped_zero_width = 0;
};

/// Thickness and denseness in the size-ordered presentation: gaps are
/// removed from widest to narrowest (ties leftmost first), and each
/// removal compares the gap with the two bridges flanking it at that
/// moment. Requires at least two bands of positive width.
inline ThicknessReport thickness(const BandSet& s) {
  std::vector<Band> bands;
  int dropped = 0;
  for (const Band& b : s.bands) {
    if (b.width() > 0.0)
      bands.push_back(b);
    else
      ++dropped;
  }
  if (bands.size() < 2)
    throw std::invalid_argument(
        "thickness: need at least two positive-width bands");

  struct GapEntry {
    double lo, hi, width;
    std::size_t index;  // ascending position index
  };
  std::vector<GapEntry> order;
  std::size_t gap_pos = 0;
  for (std::size_t i = 0; i + 1 < bands.size(); ++i) {
    double lo = bands[i].hi, hi = bands[i + 1].lo;
    if (hi > lo) order.push_back({lo, hi, hi - lo, gap_pos++});
  }
  std::sort(order.begin(), order.end(), [](const GapEntry& u, const GapEntry& v) {
    if (u.width != v.width) return u.width > v.width;
    return u.lo < v.lo;
  });

  // Endpoints of already-removed gaps plus the hull edges; the bridge
  // beside a gap runs to the nearest such cut.
  std::set<double> cuts{bands.front().lo, bands.back().hi};
  ThicknessReport rep;
  rep.tau = std::numeric_limits<double>::infinity();
  rep.theta = 0.0;
  rep.dropped_zero_width = dropped;
  for (const GapEntry& g : order) {
    auto right = cuts.lower_bound(g.hi);
    auto left = cuts.upper_bound(g.lo);
    --left;
    double bridge_l = g.lo - *left;
    double bridge_r = *right - g.hi;
    double rl = bridge_l / g.width;
    double rr = bridge_r / g.width;
    if (rl < rep.tau) {
      rep.tau = rl;
      rep.witness = {g.index, true};
    }
    if (rr < rep.tau) {
      rep.tau = rr;
      rep.witness = {g.index, false};
    }
    rep.theta = std::max(rep.theta, std::max(rl, rr));
    cuts.insert(g.lo);
    cuts.insert(g.hi);
  }
  if (order.empty()) {
    // Single interval after dropping: no bounded gaps, thickness infinite.
    rep.theta = std::numeric_limits<double>::infinity();
    rep.dim_lower = 1.0;
    rep.dim_upper = 1.0;
    return rep;
  }
  rep.dim_lower = std::log(2.0) / std::log(2.0 + 1.0 / rep.tau);
  rep.dim_upper =
      rep.theta > 0.0
          ? std::min(1.0, std::log(2.0) / std::log(2.0 + 1.0 / rep.theta))
          : 0.0;
  return rep;
}

/// Box-counting dimension estimate: least-squares slope of log N(eps)
/// against log(1/eps) over the geometric grid eps_hi, eps_hi/2, ...
/// down to eps_lo. Requires at least four grid values.
inline double box_dimension(const BandSet& s, double eps_hi, double eps_lo) {
  if (s.bands.empty())
    throw std::invalid_argument("box_dimension: band set is empty");
  if (!(eps_lo > 0.0) || !(eps_hi > eps_lo))
    throw std::invalid_argument("box_dimension: need eps_hi > eps_lo > 0");
  std::vector<double> eps_list;
  for (double e = eps_hi; e >= eps_lo * (1.0 - 1e-9); e *= 0.5)
    eps_list.push_back(e);
  if (eps_list.size() < 4)
    throw std::invalid_argument(
        "box_dimension: fewer than four scales between eps_lo and eps_hi");

  std::vector<double> xs, ys;
  for (double eps : eps_list) {
    std::int64_t boxes = 0;
    std::int64_t last = std::numeric_limits<std::int64_t>::min();
    for (const Band& b : s.bands) {
      auto m_lo = static_cast<std::int64_t>(std::floor(b.lo / eps));
      auto m_hi = static_cast<std::int64_t>(std::floor(b.hi / eps));
      std::int64_t start = std::max(m_lo, last + 1);
      if (m_hi >= start) boxes += m_hi - start + 1;
      last = std::max(last, m_hi);
    }
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(static_cast<double>(boxes)));
  }
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Minkowski sum: all pairwise band sums, merged. The result carries the
/// first argument's params, the smaller level, and the summed edge_tol.
inline BandSet minkowski_sum(const BandSet& s1, const BandSet& s2) {
  if (s1.bands.empty() || s2.bands.empty())
    throw std::invalid_argument("minkowski_sum: empty band set");
  std::size_t pairs = s1.bands.size() * s2.bands.size();
  if (pairs > (std::size_t{1} << 23))
    throw std::length_error("minkowski_sum: too many band pairs");
  std::vector<Band> sums;
  sums.reserve(pairs);
  for (const Band& u : s1.bands)
    for (const Band& v : s2.bands)
      sums.push_back({u.lo + v.lo, u.hi + v.hi});
  BandSet out;
  out.params = s1.params;
  out.level = std::min(s1.level, s2.level);
  out.edge_tol = s1.edge_tol + s2.edge_tol;
  out.bands = detail::merge_close_bands(std::move(sums), 1e-13);
  return out;
}

enum class GapLemmaStatus { kCertified, kInconclusive };

struct GapLemmaReport {
  GapLemmaStatus status = GapLemmaStatus::kInconclusive;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau_product = 0.0;
  bool thickness_ok = false;     // tau1 * tau2 > 1
  bool gap_diameter_ok = false;  // each largest gap <= other diameter
};

/// Gap Lemma sufficient condition for s1 + s2 to be one interval:
/// tau(s1) * tau(s2) > 1 and neither set has a gap wider than the other
/// set's diameter. Sets that are single intervals get infinite tau.
inline GapLemmaReport gap_lemma_certify(const BandSet& s1, const BandSet& s2) {
  auto tau_of = [](const BandSet& s) {
    int positive = 0;
    for (const Band& b : s.bands)
      if (b.width() > 0.0) ++positive;
    if (positive < 2) return std::numeric_limits<double>::infinity();
    return thickness(s).tau;
  };
  auto largest_gap = [](const BandSet& s) {
    double w = 0.0;
    GapList g = gaps(s);
    for (const Band& u : g.gaps) w = std::max(w, u.width());
    return w;
  };
  auto diameter = [](const BandSet& s) {
    return s.bands.back().hi - s.bands.front().lo;
  };
  GapLemmaReport rep;
  rep.tau1 = tau_of(s1);
  rep.tau2 = tau_of(s2);
  rep.tau_product = rep.tau1 * rep.tau2;
  rep.thickness_ok = rep.tau_product > 1.0;
  rep.gap_diameter_ok =
      largest_gap(s1) <= diameter(s2) && largest_gap(s2) <= diameter(s1);
  rep.status = (rep.thickness_ok && rep.gap_diameter_ok)
                   ? GapLemmaStatus::kCertified
                   : GapLemmaStatus::kInconclusive;
  return rep;
}

}  // namespace fibspec

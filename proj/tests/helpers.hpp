#pragma once

// Shared test fixtures: synthetic band sets, a brute-force thickness
// oracle written independently of the library's cut-set algorithm, and
// set distances between interval unions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <fibspec/cantor_metrics.hpp>
#include <fibspec/spectrum_bands.hpp>

namespace testutil {

inline fibspec::BandSet make_bands(
    const std::vector<std::pair<double, double>>& iv, double edge_tol = 1e-12) {
  fibspec::BandSet s;
  s.params = fibspec::ModelParams::diagonal(0.0);
  s.level = 0;
  s.edge_tol = edge_tol;
  for (const auto& [lo, hi] : iv) s.bands.push_back({lo, hi});
  return s;
}

/// Depth-d approximant of the middle-lambda Cantor set on [0,1]: each
/// interval keeps a fraction (1-lambda)/2 at both ends.
inline fibspec::BandSet middle_lambda(double lambda, int depth) {
  std::vector<fibspec::Band> bands{{0.0, 1.0}};
  double keep = 0.5 * (1.0 - lambda);
  for (int d = 0; d < depth; ++d) {
    std::vector<fibspec::Band> next;
    next.reserve(2 * bands.size());
    for (const fibspec::Band& b : bands) {
      double w = b.hi - b.lo;
      next.push_back({b.lo, b.lo + keep * w});
      next.push_back({b.hi - keep * w, b.hi});
    }
    bands = std::move(next);
  }
  fibspec::BandSet s;
  s.params = fibspec::ModelParams::diagonal(0.0);
  s.level = depth;
  s.edge_tol = 0.0;
  s.bands = std::move(bands);
  return s;
}

/// Affine image c*b + d of a band set; c < 0 reverses the order.
inline fibspec::BandSet scale_bands(const fibspec::BandSet& s, double c,
                                    double d) {
  fibspec::BandSet out = s;
  out.bands.clear();
  for (const fibspec::Band& b : s.bands) {
    double u = c * b.lo + d, v = c * b.hi + d;
    out.bands.push_back({std::min(u, v), std::max(u, v)});
  }
  std::sort(out.bands.begin(), out.bands.end(),
            [](const fibspec::Band& u, const fibspec::Band& v) {
              return u.lo < v.lo;
            });
  return out;
}

/// Size-ordered thickness and denseness by direct enumeration: for each
/// gap, the flanking bridges are found by scanning every strictly
/// earlier gap in the removal order, with no incremental data structure.
inline std::pair<double, double> brute_thickness(const fibspec::BandSet& s) {
  std::vector<fibspec::Band> bands;
  for (const fibspec::Band& b : s.bands)
    if (b.hi > b.lo) bands.push_back(b);
  struct G {
    double lo, hi, w;
  };
  std::vector<G> order;
  for (std::size_t i = 0; i + 1 < bands.size(); ++i) {
    double lo = bands[i].hi, hi = bands[i + 1].lo;
    if (hi > lo) order.push_back({lo, hi, hi - lo});
  }
  std::sort(order.begin(), order.end(), [](const G& u, const G& v) {
    if (u.w != v.w) return u.w > v.w;
    return u.lo < v.lo;
  });
  double hull_lo = bands.front().lo, hull_hi = bands.back().hi;
  double tau = std::numeric_limits<double>::infinity();
  double theta = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    double left = hull_lo, right = hull_hi;
    for (std::size_t q = 0; q < r; ++q) {
      if (order[q].hi <= order[r].lo) left = std::max(left, order[q].hi);
      if (order[q].lo >= order[r].hi) right = std::min(right, order[q].lo);
    }
    double rl = (order[r].lo - left) / order[r].w;
    double rr = (right - order[r].hi) / order[r].w;
    tau = std::min(tau, std::min(rl, rr));
    theta = std::max(theta, std::max(rl, rr));
  }
  return {tau, theta};
}

inline double dist_to_set(double x, const fibspec::BandSet& s) {
  double best = std::numeric_limits<double>::infinity();
  for (const fibspec::Band& b : s.bands) {
    if (x < b.lo)
      best = std::min(best, b.lo - x);
    else if (x > b.hi)
      best = std::min(best, x - b.hi);
    else
      return 0.0;
  }
  return best;
}

/// Hausdorff distance between two unions of closed intervals. The
/// directed distance is attained either at an endpoint of the source or
/// at a gap midpoint of the target lying inside the source.
inline double hausdorff(const fibspec::BandSet& A, const fibspec::BandSet& B) {
  auto directed = [](const fibspec::BandSet& from, const fibspec::BandSet& to) {
    double worst = 0.0;
    for (const fibspec::Band& b : from.bands) {
      worst = std::max(worst, dist_to_set(b.lo, to));
      worst = std::max(worst, dist_to_set(b.hi, to));
    }
    for (std::size_t i = 0; i + 1 < to.bands.size(); ++i) {
      double mid = 0.5 * (to.bands[i].hi + to.bands[i + 1].lo);
      if (dist_to_set(mid, from) == 0.0)
        worst = std::max(worst, dist_to_set(mid, to));
    }
    return worst;
  };
  return std::max(directed(A, B), directed(B, A));
}

/// True when every band of `inner` lies inside some band of `outer`
/// inflated by `slack`.
inline bool contained_in(const fibspec::BandSet& inner,
                         const fibspec::BandSet& outer, double slack) {
  for (const fibspec::Band& b : inner.bands) {
    bool ok = false;
    for (const fibspec::Band& o : outer.bands) {
      if (b.lo >= o.lo - slack && b.hi <= o.hi + slack) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace testutil

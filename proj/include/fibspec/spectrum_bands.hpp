#pragma once

// Band approximants of the spectrum. sigma_k = {E : |x_k(E)| <= 1} is a
// union of at most F_k closed intervals, and the level-n approximant is
// sigma_{n+1} union sigma_n, which contains the spectrum and decreases
// to it as n grows.
//
// Scanning the whole hull uniformly is unreliable: deep levels have
// bands far thinner than any affordable cell, and outside the bands the
// traces overflow, where clamped arithmetic can fabricate sign changes.
// Instead the scanner climbs a ladder. Levels up to 5 are low-degree
// polynomials and are scanned uniformly with 2048 cells. Every band of
// sigma_k lies inside a band of sigma_{k-1} union sigma_{k-2} (once the
// two previous traces exceed 1 in modulus the orbit has escaped for
// good), so each later level is scanned only inside the previous two
// levels' bands, slightly padded. Each such parent interval gets 64
// cells plus a width-proportional share of an 8 F_k global budget,
// followed by bisection of x_k -+ 1 at each member/non-member
// transition.
//
// Three rescue passes catch features thinner than one cell: a sign flip
// of x_k across a non-member cell (a band the grid jumped over), a
// local minimum of |x_k| within 1e-10 of 1 (a tangency, recorded as a
// zero-width band), and a local maximum of |x_k| above 1 between member
// samples (a gap the grid jumped over, splitting the band). Gaps that
// stay below the local cell size with no sample hint can still be
// bridged; band edges are accurate to edge_tol per level, with drift up
// to a few edge_tol across levels where parent and child edges
// coincide.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"
#include "parallel.hpp"
#include "trace_map.hpp"

namespace fibspec {

struct Band {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct BandSet {
  ModelParams params;
  int level = 0;        // k for sigma_k, approximant depth n otherwise
  double edge_tol = 1e-12;
  std::vector<Band> bands;  // disjoint, ascending
};

struct bracketing_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Interval guaranteed to contain every band: [-2-V, 2+V] for the
/// diagonal model, [-2 max(a,b) - tol, 2 max(a,b) + tol] off-diagonal.
inline Band hull_interval(const ModelParams& p, double edge_tol) {
  if (p.kind == ModelParams::Kind::kDiagonal)
    return {-2.0 - p.V, 2.0 + p.V};
  double m = 2.0 * std::max(p.a, p.b);
  return {-m - edge_tol, m + edge_tol};
}

/// Bisect x_k(E) = target (+1 or -1) inside [e_lo, e_hi]. The endpoints
/// must straddle the level set, otherwise a bracketing_error is thrown.
inline double refine_band_edge(double e_lo, double e_hi, int k, int target,
                               const ModelParams& p, double tol) {
  if (target != 1 && target != -1)
    throw std::invalid_argument("refine_band_edge: target must be +1 or -1");
  if (!(e_lo < e_hi))
    throw std::invalid_argument("refine_band_edge: empty bracket");
  double t = static_cast<double>(target);
  double f_lo = trace_value(e_lo, p, k) - t;
  double f_hi = trace_value(e_hi, p, k) - t;
  if (f_lo == 0.0) return e_lo;
  if (f_hi == 0.0) return e_hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw bracketing_error("refine_band_edge: no sign change of x_k - target");
  for (int it = 0; it < 200 && e_hi - e_lo > tol; ++it) {
    double mid = 0.5 * (e_lo + e_hi);
    double f_mid = trace_value(mid, p, k) - t;
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      e_lo = mid;
      f_lo = f_mid;
    } else {
      e_hi = mid;
    }
  }
  return 0.5 * (e_lo + e_hi);
}

namespace detail {

// Bisection helper used when a scan cell already brackets the level set.
inline double edge_in_cell(double e_out, double e_in, int k, int target,
                           const ModelParams& p, double tol) {
  double lo = std::min(e_out, e_in), hi = std::max(e_out, e_in);
  return refine_band_edge(lo, hi, k, target, p, tol);
}

// Golden-section search for an extremum of |x_k| over [lo, hi]; returns
// the argmin (want_max false) or argmax (want_max true).
inline double extremize_abs_trace(double lo, double hi, int k,
                                  const ModelParams& p, bool want_max) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = std::fabs(trace_value(c, p, k));
  double fd = std::fabs(trace_value(d, p, k));
  for (int it = 0; it < 90 && b - a > 1e-15 * (1.0 + std::fabs(a)); ++it) {
    bool keep_left = want_max ? fc > fd : fc < fd;
    if (keep_left) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = std::fabs(trace_value(c, p, k));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = std::fabs(trace_value(d, p, k));
    }
  }
  return 0.5 * (a + b);
}

// Merge sorted bands whose separation is below `touch`; gaps that small
// are artefacts of finite edge resolution.
inline std::vector<Band> merge_close_bands(std::vector<Band> bands,
                                           double touch) {
  if (bands.empty()) return bands;
  std::sort(bands.begin(), bands.end(),
            [](const Band& u, const Band& v) { return u.lo < v.lo; });
  std::vector<Band> out;
  out.push_back(bands.front());
  for (std::size_t i = 1; i < bands.size(); ++i) {
    Band& last = out.back();
    if (bands[i].lo <= last.hi + touch)
      last.hi = std::max(last.hi, bands[i].hi);
    else
      out.push_back(bands[i]);
  }
  return out;
}

// Scan [lo, hi] with `cells` uniform cells and append every component of
// sigma_k found inside to `out`. Serial; callers parallelise over
// disjoint intervals.
inline void scan_interval(const ModelParams& p, int k, double lo, double hi,
                          std::size_t cells, double edge_tol,
                          std::vector<Band>& out) {
  if (!(hi - lo > 4.0 * edge_tol) || cells < 8) {
    if (std::fabs(trace_value(0.5 * (lo + hi), p, k)) <= 1.0)
      out.push_back({lo, hi});
    return;
  }
  // Large grids are cut into chunks sharing their seam sample; a band
  // split at a seam is rejoined by the final merge.
  constexpr std::size_t kChunk = std::size_t{1} << 20;
  if (cells > kChunk) {
    std::size_t pieces = (cells + kChunk - 1) / kChunk;
    double span = hi - lo;
    for (std::size_t q = 0; q < pieces; ++q) {
      double c_lo =
          lo + span * static_cast<double>(q) / static_cast<double>(pieces);
      double c_hi =
          lo + span * static_cast<double>(q + 1) / static_cast<double>(pieces);
      scan_interval(p, k, c_lo, c_hi, cells / pieces + 1, edge_tol, out);
    }
    return;
  }

  std::size_t npts = cells + 1;
  std::vector<double> val(npts);
  std::vector<signed char> code(npts);  // 0 member, +1 above, -1 below
  double span = hi - lo;
  auto grid_e = [&](std::size_t i) {
    return lo + span * static_cast<double>(i) / static_cast<double>(cells);
  };
  for (std::size_t i = 0; i < npts; ++i) {
    double x = trace_value(grid_e(i), p, k);
    val[i] = x;
    code[i] = x > 1.0 ? 1 : (x < -1.0 ? -1 : 0);
  }

  std::size_t i = 0;
  while (i < npts) {
    if (code[i] != 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < npts && code[j + 1] == 0) ++j;
    double b_lo = grid_e(i);
    if (i > 0)
      b_lo = edge_in_cell(grid_e(i - 1), b_lo, k, code[i - 1], p, edge_tol);
    double b_hi = grid_e(j);
    if (j + 1 < npts)
      b_hi = edge_in_cell(b_hi, grid_e(j + 1), k, code[j + 1], p, edge_tol);

    // |x_k| may exceed 1 and come back between two member samples: a
    // sub-cell gap splitting the run. Interior |val| maxima above 0.5
    // are probed with the maximiser.
    std::vector<Band> cuts;
    for (std::size_t c = i + 1; c + 1 <= j; ++c) {
      double a0 = std::fabs(val[c - 1]), a1 = std::fabs(val[c]),
             a2 = std::fabs(val[c + 1]);
      if (!(a1 > 0.5 && a1 >= a0 && a1 >= a2)) continue;
      double e_pk =
          extremize_abs_trace(grid_e(c - 1), grid_e(c + 1), k, p, true);
      double xm = trace_value(e_pk, p, k);
      if (std::fabs(xm) <= 1.0) continue;
      int s = xm > 0.0 ? 1 : -1;
      double g1 = edge_in_cell(e_pk, grid_e(c - 1), k, s, p, edge_tol);
      double g2 = edge_in_cell(e_pk, grid_e(c + 1), k, s, p, edge_tol);
      cuts.push_back({std::min(g1, g2), std::max(g1, g2)});
    }
    if (cuts.empty()) {
      out.push_back({b_lo, b_hi});
    } else {
      std::sort(cuts.begin(), cuts.end(),
                [](const Band& u, const Band& v) { return u.lo < v.lo; });
      double cur = b_lo;
      for (const Band& g : cuts) {
        if (g.lo > cur) out.push_back({cur, g.lo});
        cur = std::max(cur, g.hi);
      }
      if (b_hi > cur) out.push_back({cur, b_hi});
    }
    i = j + 1;
  }

  // Bands narrower than a cell show up as a sign flip between two
  // non-member neighbours.
  for (std::size_t c = 0; c + 1 < npts; ++c) {
    if (code[c] != 0 && code[c + 1] != 0 && code[c] != code[c + 1]) {
      double g1 = edge_in_cell(grid_e(c), grid_e(c + 1), k, code[c], p,
                               edge_tol);
      double g2 = edge_in_cell(grid_e(c), grid_e(c + 1), k, code[c + 1], p,
                               edge_tol);
      out.push_back({std::min(g1, g2), std::max(g1, g2)});
    }
  }

  // Tangencies: |x_k| dips to 1 without the grid noticing. A dip below
  // 1 - detected by the minimiser - is a regular band and gets edges; a
  // dip within 1e-10 above 1 is recorded as a zero-width band.
  for (std::size_t c = 1; c + 1 < npts; ++c) {
    if (code[c - 1] == 0 || code[c] == 0 || code[c + 1] == 0) continue;
    if (code[c - 1] != code[c] || code[c] != code[c + 1]) continue;
    double a0 = std::fabs(val[c - 1]), a1 = std::fabs(val[c]),
           a2 = std::fabs(val[c + 1]);
    if (!(a1 < a0 && a1 < a2)) continue;
    double e_min =
        extremize_abs_trace(grid_e(c - 1), grid_e(c + 1), k, p, false);
    double m = std::fabs(trace_value(e_min, p, k));
    if (m <= 1.0) {
      int s = code[c];
      double g1 = edge_in_cell(grid_e(c - 1), e_min, k, s, p, edge_tol);
      double g2 = edge_in_cell(e_min, grid_e(c + 1), k, s, p, edge_tol);
      out.push_back({g1, g2});
    } else if (m - 1.0 < 1e-10) {
      out.push_back({e_min, e_min});
    }
  }
}

// Bands of sigma_j located inside the padded bands of the previous two
// levels. Parents are scanned concurrently; results are concatenated in
// parent order, so output does not depend on thread count.
inline std::vector<Band> level_children(const ModelParams& p, int j,
                                        const std::vector<Band>& parents,
                                        double edge_tol) {
  if (parents.empty()) return {};
  double total_width = 0.0;
  for (const Band& b : parents) total_width += b.width();
  double budget = 8.0 * static_cast<double>(fib(j));
  double pad = 2.0 * edge_tol;
  std::vector<std::vector<Band>> found(parents.size());
  parallel_for(parents.size(), [&](std::size_t i) {
    const Band& b = parents[i];
    std::size_t cells = 64;
    if (total_width > 0.0)
      cells += static_cast<std::size_t>(budget * (b.width() / total_width));
    scan_interval(p, j, b.lo - pad, b.hi + pad, cells, edge_tol, found[i]);
  });
  std::vector<Band> out;
  for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
  return merge_close_bands(std::move(out), 1e-13);
}

// Climb from the uniformly scanned base levels to sigma_k; on return
// `top` holds sigma_k and `prev` holds sigma_{k-1} (empty for k = 1).
inline void scan_ladder(const ModelParams& p, int k, double edge_tol,
                        std::vector<Band>& prev, std::vector<Band>& top) {
  if (k > 32)
    throw std::length_error("sigma_k_bands: depth " + std::to_string(k) +
                            " exceeds the supported maximum of 32");
  Band hull = hull_interval(p, edge_tol);
  auto uniform = [&](int j) {
    std::vector<Band> out;
    std::size_t cells = static_cast<std::size_t>(
        std::max<std::uint64_t>(8 * fib(j), 2048));
    scan_interval(p, j, hull.lo, hull.hi, cells, edge_tol, out);
    return merge_close_bands(std::move(out), 1e-13);
  };
  if (k <= 5) {
    top = uniform(k);
    prev = k >= 2 ? uniform(k - 1) : std::vector<Band>{};
    return;
  }
  std::vector<Band> a = uniform(4);
  std::vector<Band> b = uniform(5);
  for (int j = 6; j <= k; ++j) {
    std::vector<Band> all = a;
    all.insert(all.end(), b.begin(), b.end());
    std::vector<Band> parents = merge_close_bands(std::move(all),
                                                  2.0 * edge_tol);
    std::vector<Band> next = level_children(p, j, parents, edge_tol);
    a = std::move(b);
    b = std::move(next);
  }
  prev = std::move(a);
  top = std::move(b);
}

}  // namespace detail

/// Band decomposition of sigma_k = {E : |x_k(E)| <= 1}, k >= 1.
inline BandSet sigma_k_bands(const ModelParams& p, int k,
                             double edge_tol = 1e-12) {
  if (k < 1) throw std::invalid_argument("sigma_k_bands: k must be >= 1");
  if (!(edge_tol > 0.0))
    throw std::invalid_argument("sigma_k_bands: edge_tol must be positive");
  BandSet out;
  out.params = p;
  out.level = k;
  out.edge_tol = edge_tol;
  std::vector<Band> prev;
  detail::scan_ladder(p, k, edge_tol, prev, out.bands);
  return out;
}

/// Union of two band sets; components closer than `touch` are joined.
inline std::vector<Band> union_bands(const std::vector<Band>& u,
                                     const std::vector<Band>& v,
                                     double touch) {
  std::vector<Band> all = u;
  all.insert(all.end(), v.begin(), v.end());
  return detail::merge_close_bands(std::move(all), touch);
}

/// Level-n covering approximant sigma_{n+1} union sigma_n.
inline BandSet spectrum_approx(const ModelParams& p, int n,
                               double edge_tol = 1e-12) {
  if (n < 1) throw std::invalid_argument("spectrum_approx: n must be >= 1");
  std::vector<Band> prev, top;
  detail::scan_ladder(p, n + 1, edge_tol, prev, top);
  BandSet out;
  out.params = p;
  out.level = n;
  out.edge_tol = edge_tol;
  out.bands = union_bands(top, prev, 2.0 * edge_tol);
  return out;
}

/// True if E lies in some band, enlarged by `slack` on both sides.
inline bool contains(const BandSet& s, double E, double slack = 0.0) {
  auto it = std::upper_bound(
      s.bands.begin(), s.bands.end(), E,
      [](double e, const Band& b) { return e < b.lo; });
  if (it == s.bands.begin()) return false;
  --it;
  return E >= it->lo - slack && E <= it->hi + slack;
}

}  // namespace fibspec

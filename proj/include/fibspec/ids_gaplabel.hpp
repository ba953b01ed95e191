#pragma once

// Integrated density of states via Sturm pivot counting on finite
// Dirichlet restrictions, gap labels N(E) = {m alpha} mod 1, and the
// V -> 0 limit positions of the labelled gaps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cantor_metrics.hpp"
#include "model.hpp"
#include "spectrum_bands.hpp"

namespace fibspec {

struct missing_gap_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ambiguous_gap_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Number of eigenvalues <= E of the operator restricted to sites
/// 1..n_sites with Dirichlet boundary conditions, by counting negative
/// pivots of the LDL^T factorisation of J - E. Exact zero pivots are
/// nudged to 1e-300, which resolves boundary hits upward.
inline int dirichlet_eigencount(double E, const ModelParams& p, int n_sites) {
  if (n_sites < 1)
    throw std::invalid_argument("dirichlet_eigencount: n_sites must be >= 1");
  int negatives = 0;
  double d = site_potential(p, 1) - E;
  if (d == 0.0) d = 1e-300;
  if (d < 0.0) ++negatives;
  for (int i = 2; i <= n_sites; ++i) {
    double c = site_hopping(p, i);  // coupling between sites i-1 and i
    double next = (site_potential(p, i) - E) - c * c / d;
    if (next == 0.0) next = 1e-300;
    if (next < 0.0) ++negatives;
    d = next;
  }
  return negatives;
}

/// Finite-volume integrated density of states N_n(E) = count / n.
inline double ids(double E, const ModelParams& p, int n_sites) {
  return static_cast<double>(dirichlet_eigencount(E, p, n_sites)) /
         static_cast<double>(n_sites);
}

/// Free IDS at V = 0: 0 below the band, arccos(-E/2)/pi inside, 1 above.
inline double ids_free(double E) {
  if (E <= -2.0) return 0.0;
  if (E >= 2.0) return 1.0;
  return std::acos(-0.5 * E) / 3.14159265358979323846264338327950288;
}

/// {m alpha} mod 1, using the double-double alpha.
inline double gap_label_value(int m) {
  return detail::frac_n_alpha_plus(static_cast<double>(m), 0.0);
}

/// V -> 0 limit position E_m(0) = -2 cos(pi {m alpha}) of the gap with
/// label m. The label must be nonzero.
inline double label_energy_at_zero(int m) {
  if (m == 0)
    throw std::invalid_argument("label_energy_at_zero: m must be nonzero");
  return -2.0 * std::cos(3.14159265358979323846264338327950288 *
                         gap_label_value(m));
}

struct GapLabel {
  Band gap;
  double ids_value = 0.0;
  int m = 0;               // matched label, 0 when none within tolerance
  double residual = std::numeric_limits<double>::infinity();
  bool labeled = false;
};

/// Label a spectral gap: evaluate the IDS at the midpoint and near both
/// edges (it must be constant on a true gap up to finite-size wobble),
/// then match the value against {m alpha} for |m| <= m_max. `tol` <= 0
/// picks the default max(5e-3, 2/n_sites).
inline GapLabel gap_label(const Band& gap, const ModelParams& p, int n_sites,
                          int m_max, double tol = 0.0) {
  if (!(gap.hi > gap.lo))
    throw std::invalid_argument("gap_label: gap must have positive width");
  if (m_max < 1) throw std::invalid_argument("gap_label: m_max must be >= 1");
  double w = gap.width();
  double mid = 0.5 * (gap.lo + gap.hi);
  int c_mid = dirichlet_eigencount(mid, p, n_sites);
  int c_lo = dirichlet_eigencount(gap.lo + 0.05 * w, p, n_sites);
  int c_hi = dirichlet_eigencount(gap.hi - 0.05 * w, p, n_sites);
  int spread = std::max({c_mid, c_lo, c_hi}) - std::min({c_mid, c_lo, c_hi});
  double allowed = std::max(2.0, 1e-3 * n_sites);
  if (static_cast<double>(spread) > allowed)
    throw ambiguous_gap_error(
        "gap_label: IDS not constant across the gap; not a spectral gap at "
        "this system size");

  GapLabel rec;
  rec.gap = gap;
  rec.ids_value = static_cast<double>(c_mid) / static_cast<double>(n_sites);
  for (int m = -m_max; m <= m_max; ++m) {
    if (m == 0) continue;
    double r = std::fabs(rec.ids_value - gap_label_value(m));
    if (r < rec.residual) {
      rec.residual = r;
      rec.m = m;
    }
  }
  double tol_eff = tol > 0.0 ? tol : std::max(5e-3, 2.0 / n_sites);
  rec.labeled = rec.residual <= tol_eff;
  if (!rec.labeled) rec.m = 0;
  return rec;
}

struct OpeningRateRow {
  double V = 0.0;
  Band gap;
  double width = 0.0;
  double width_over_V = 0.0;
  double m_width_over_V = 0.0;
};

struct OpeningRateReport {
  int m = 0;
  int depth = 0;
  std::vector<OpeningRateRow> rows;  // one per coupling, input order
};

/// Track the gap with label m across couplings: for each V the spectrum
/// approximant is computed, candidate gaps near the limit position
/// E_m(0) are labelled, and the nearest gap whose label matches m is
/// taken. Gap width over V approximates the opening rate |U_m| / V.
inline OpeningRateReport gap_opening_rate(int m,
                                          const std::vector<double>& V_list,
                                          int depth, int n_sites = 10000,
                                          int m_max = 50,
                                          double edge_tol = 1e-12) {
  if (m == 0) throw std::invalid_argument("gap_opening_rate: m must be nonzero");
  if (depth < 2)
    throw std::invalid_argument("gap_opening_rate: depth must be >= 2");
  OpeningRateReport rep;
  rep.m = m;
  rep.depth = depth;
  double e0 = label_energy_at_zero(m);
  for (double V : V_list) {
    if (!(V > 0.0))
      throw std::invalid_argument("gap_opening_rate: couplings must be > 0");
    ModelParams p = ModelParams::diagonal(V);
    BandSet s = spectrum_approx(p, depth, edge_tol);
    GapList gl = gaps(s);

    // Sort candidate gaps by distance of their midpoint from E_m(0).
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < gl.gaps.size(); ++i)
      if (gl.gaps[i].width() > 10.0 * edge_tol) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t u, std::size_t v) {
      double du = std::fabs(0.5 * (gl.gaps[u].lo + gl.gaps[u].hi) - e0);
      double dv = std::fabs(0.5 * (gl.gaps[v].lo + gl.gaps[v].hi) - e0);
      return du < dv;
    });

    bool found = false;
    std::size_t tried = 0;
    for (std::size_t i : idx) {
      double mid = 0.5 * (gl.gaps[i].lo + gl.gaps[i].hi);
      if (std::fabs(mid - e0) > 0.75) break;  // gap drifts only O(V)
      if (++tried > 16) break;
      GapLabel rec;
      try {
        rec = gap_label(gl.gaps[i], p, n_sites, m_max);
      } catch (const ambiguous_gap_error&) {
        continue;
      }
      if (rec.labeled && rec.m == m) {
        double w = gl.gaps[i].width();
        rep.rows.push_back(
            {V, gl.gaps[i], w, w / V, std::fabs(m) * w / V});
        found = true;
        break;
      }
    }
    if (!found)
      throw missing_gap_error(
          "gap_opening_rate: no gap with label m=" + std::to_string(m) +
          " resolved at V=" + std::to_string(V) +
          ", depth=" + std::to_string(depth));
  }
  return rep;
}

}  // namespace fibspec

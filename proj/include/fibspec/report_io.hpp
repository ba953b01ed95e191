#pragma once

// Report assembly for the command-line tool: every analysis is reduced
// to a RunConfig in, a text payload out. CSV and JSON carry the same
// field names; floats are printed with 17 significant digits so binary64
// values survive a round-trip through the text.

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cantor_metrics.hpp"
#include "ids_gaplabel.hpp"
#include "model.hpp"
#include "offdiag_jacobi.hpp"
#include "parallel.hpp"
#include "spectrum_bands.hpp"
#include "trace_map.hpp"
#include "transfer_transport.hpp"

namespace fibspec {

inline std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

// Minimal JSON building; nothing here nests deeper than arrays of pairs.
struct JsonObject {
  std::ostringstream os;
  bool first = true;

  JsonObject() { os << "{"; }
  void key(const std::string& k) {
    if (!first) os << ",";
    first = false;
    os << '"' << k << "\":";
  }
  void field(const std::string& k, double v) {
    key(k);
    if (std::isfinite(v))
      os << fmt_double(v);
    else
      os << "null";
  }
  void field(const std::string& k, long long v) {
    key(k);
    os << v;
  }
  void field(const std::string& k, int v) { field(k, (long long)v); }
  void field(const std::string& k, bool v) {
    key(k);
    os << (v ? "true" : "false");
  }
  void raw(const std::string& k, const std::string& body) {
    key(k);
    os << body;
  }
  std::string close() {
    os << "}";
    return os.str();
  }
};

inline std::string json_pairs(const std::vector<Band>& bands) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (i) os << ",";
    os << "[" << fmt_double(bands[i].lo) << "," << fmt_double(bands[i].hi)
       << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace detail

struct RunConfig {
  std::string command;
  std::string format = "csv";  // csv | json
  int parallelism = 0;         // 0: FIBSPEC_THREADS, then hardware

  double V = 1.0;
  double omega = 0.0;
  double a = 1.0, b = 1.2;  // off-diagonal hoppings

  int depth = 10;      // approximant level n, or k for `sigma`
  double edge_tol = 1e-12;

  int n_sites = 10000;
  double min_rel_width = 1e-3;  // labels: ignore gaps narrower than this
  int m = 1;
  int m_max = 50;
  std::vector<double> V_list;

  double e_min = -2.5, e_max = 2.5;
  int e_points = 401;

  double eps_hi = 1e-2, eps_lo = 1e-5;

  double V2 = -1.0;  // sumset second coupling; < 0 means reuse V

  double p = std::numeric_limits<double>::infinity();

  long long n_max = 1597;
  int n_energies = 20;

  double v_lo = 0.0, v_hi = 0.75;
  int v_steps = 16;
};

struct RunResult {
  int exit_code = 0;
  std::string payload;
  std::string message;  // diagnostics for stderr
};

/// One CSV row per (V, band) pair over a linear coupling grid; the data
/// behind coupling-versus-energy band plots.
inline std::string emit_specplot_grid(double v_lo, double v_hi, int v_steps,
                                      int depth, double edge_tol = 1e-12,
                                      bool json = false) {
  if (v_steps < 1)
    throw std::invalid_argument("emit_specplot_grid: v_steps must be >= 1");
  if (v_steps > 1 && !(v_lo < v_hi))
    throw std::invalid_argument("emit_specplot_grid: need v_lo < v_hi");
  std::ostringstream os;
  if (json) os << "{\"depth\":" << depth << ",\"rows\":[";
  else os << "V,band,lo,hi\n";
  bool first = true;
  for (int i = 0; i < v_steps; ++i) {
    double V = v_steps == 1
                   ? v_lo
                   : v_lo + (v_hi - v_lo) * static_cast<double>(i) /
                         static_cast<double>(v_steps - 1);
    BandSet s = spectrum_approx(ModelParams::diagonal(V), depth, edge_tol);
    for (std::size_t bidx = 0; bidx < s.bands.size(); ++bidx) {
      const Band& bb = s.bands[bidx];
      if (json) {
        if (!first) os << ",";
        first = false;
        os << "[" << fmt_double(V) << "," << fmt_double(bb.lo) << ","
           << fmt_double(bb.hi) << "]";
      } else {
        os << fmt_double(V) << "," << bidx << "," << fmt_double(bb.lo) << ","
           << fmt_double(bb.hi) << "\n";
      }
    }
  }
  if (json) os << "]}";
  return os.str();
}

namespace detail {

inline std::string emit_band_set(const BandSet& s, bool json,
                                 const char* level_key = "level") {
  bool offd = s.params.kind == ModelParams::Kind::kOffDiagonal;
  if (json) {
    JsonObject j;
    j.field(level_key, s.level);
    if (offd) {
      j.field("a", s.params.a);
      j.field("b", s.params.b);
    } else {
      j.field("V", s.params.V);
    }
    j.raw("bands", json_pairs(s.bands));
    j.field("edge_tol", s.edge_tol);
    return j.close();
  }
  std::ostringstream os;
  os << level_key << (offd ? ",a,b" : ",V") << ",band,lo,hi\n";
  for (std::size_t i = 0; i < s.bands.size(); ++i) {
    os << s.level << ",";
    if (offd)
      os << fmt_double(s.params.a) << "," << fmt_double(s.params.b);
    else
      os << fmt_double(s.params.V);
    os << "," << i << "," << fmt_double(s.bands[i].lo) << ","
       << fmt_double(s.bands[i].hi) << "\n";
  }
  return os.str();
}

inline RunResult run_impl(const RunConfig& cfg) {
  const bool json = cfg.format == "json";
  RunResult res;
  std::ostringstream os;

  if (cfg.command == "spectrum") {
    ModelParams p = ModelParams::diagonal(cfg.V, cfg.omega);
    res.payload = emit_band_set(spectrum_approx(p, cfg.depth, cfg.edge_tol),
                                json);
  } else if (cfg.command == "sigma") {
    ModelParams p = ModelParams::diagonal(cfg.V, cfg.omega);
    res.payload = emit_band_set(sigma_k_bands(p, cfg.depth, cfg.edge_tol),
                                json, "k");
  } else if (cfg.command == "offdiag") {
    res.payload = emit_band_set(
        offdiag_spectrum_approx(cfg.a, cfg.b, cfg.depth, cfg.edge_tol), json);
  } else if (cfg.command == "thickness") {
    ModelParams p = ModelParams::diagonal(cfg.V, cfg.omega);
    BandSet s = spectrum_approx(p, cfg.depth, cfg.edge_tol);
    ThicknessReport t = thickness(s);
    if (json) {
      JsonObject j;
      j.field("V", cfg.V);
      j.field("depth", cfg.depth);
      j.field("tau", t.tau);
      j.field("theta", t.theta);
      j.field("dim_lo", t.dim_lower);
      j.field("dim_hi", t.dim_upper);
      j.field("n_bands", (long long)s.bands.size());
      res.payload = j.close();
    } else {
      os << "V,depth,tau,theta,dim_lo,dim_hi,n_bands\n"
         << fmt_double(cfg.V) << "," << cfg.depth << "," << fmt_double(t.tau)
         << "," << fmt_double(t.theta) << "," << fmt_double(t.dim_lower) << ","
         << fmt_double(t.dim_upper) << "," << s.bands.size() << "\n";
      res.payload = os.str();
    }
  } else if (cfg.command == "boxdim") {
    ModelParams p = ModelParams::diagonal(cfg.V, cfg.omega);
    BandSet s = spectrum_approx(p, cfg.depth, cfg.edge_tol);
    double dim = box_dimension(s, cfg.eps_hi, cfg.eps_lo);
    if (json) {
      JsonObject j;
      j.field("V", cfg.V);
      j.field("depth", cfg.depth);
      j.field("eps_hi", cfg.eps_hi);
      j.field("eps_lo", cfg.eps_lo);
      j.field("dimension", dim);
      res.payload = j.close();
    } else {
      os << "V,depth,eps_hi,eps_lo,dimension\n"
         << fmt_double(cfg.V) << "," << cfg.depth << ","
         << fmt_double(cfg.eps_hi) << "," << fmt_double(cfg.eps_lo) << ","
         << fmt_double(dim) << "\n";
      res.payload = os.str();
    }
  } else if (cfg.command == "gaps") {
    ModelParams p = ModelParams::diagonal(cfg.V, cfg.omega);
    BandSet s = spectrum_approx(p, cfg.depth, cfg.edge_tol);
    GapList g = gaps(s);
    if (json) {
      JsonObject j;
      j.field("level", cfg.depth);
      j.field("V", cfg.V);
      j.raw("gaps", json_pairs(g.gaps));
      res.payload = j.close();
    } else {
      os << "level,V,gap,lo,hi,width\n";
      for (std::size_t i = 0; i < g.gaps.size(); ++i)
        os << cfg.depth << "," << fmt_double(cfg.V) << "," << i << ","
           << fmt_double(g.gaps[i].lo) << "," << fmt_double(g.gaps[i].hi)
           << "," << fmt_double(g.gaps[i].width()) << "\n";
      res.payload = os.str();
    }
  } else if (cfg.command == "labels") {
    ModelParams p = ModelParams::diagonal(cfg.V, cfg.omega);
    BandSet s = spectrum_approx(p, cfg.depth, cfg.edge_tol);
    GapList g = gaps(s);
    double hull_w = g.hull.hi - g.hull.lo;
    std::ostringstream body;
    bool first = true;
    if (!json) os << "gap_lo,gap_hi,width,ids,m,residual,labeled\n";
    for (const Band& gap : g.gaps) {
      if (gap.width() < cfg.min_rel_width * hull_w) continue;
      GapLabel rec = gap_label(gap, p, cfg.n_sites, cfg.m_max);
      if (json) {
        if (!first) body << ",";
        first = false;
        JsonObject j;
        j.field("gap_lo", rec.gap.lo);
        j.field("gap_hi", rec.gap.hi);
        j.field("width", rec.gap.width());
        j.field("ids", rec.ids_value);
        j.field("m", rec.m);
        j.field("residual", rec.residual);
        j.field("labeled", rec.labeled);
        body << j.close();
      } else {
        os << fmt_double(rec.gap.lo) << "," << fmt_double(rec.gap.hi) << ","
           << fmt_double(rec.gap.width()) << "," << fmt_double(rec.ids_value)
           << "," << rec.m << "," << fmt_double(rec.residual) << ","
           << (rec.labeled ? 1 : 0) << "\n";
      }
    }
    if (json) {
      JsonObject j;
      j.field("V", cfg.V);
      j.field("depth", cfg.depth);
      j.field("n_sites", cfg.n_sites);
      j.raw("labels", "[" + body.str() + "]");
      res.payload = j.close();
    } else {
      res.payload = os.str();
    }
  } else if (cfg.command == "opening") {
    std::vector<double> vs = cfg.V_list;
    if (vs.empty()) vs = {cfg.V};
    OpeningRateReport rep = gap_opening_rate(cfg.m, vs, cfg.depth,
                                             cfg.n_sites, cfg.m_max,
                                             cfg.edge_tol);
    if (json) {
      std::ostringstream body;
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const OpeningRateRow& r = rep.rows[i];
        if (i) body << ",";
        JsonObject j;
        j.field("V", r.V);
        j.field("gap_lo", r.gap.lo);
        j.field("gap_hi", r.gap.hi);
        j.field("width", r.width);
        j.field("width_over_V", r.width_over_V);
        j.field("m_times_width_over_V", r.m_width_over_V);
        body << j.close();
      }
      JsonObject j;
      j.field("m", rep.m);
      j.field("depth", rep.depth);
      j.raw("rows", "[" + body.str() + "]");
      res.payload = j.close();
    } else {
      os << "V,gap_lo,gap_hi,width,width_over_V,m_times_width_over_V\n";
      for (const OpeningRateRow& r : rep.rows)
        os << fmt_double(r.V) << "," << fmt_double(r.gap.lo) << ","
           << fmt_double(r.gap.hi) << "," << fmt_double(r.width) << ","
           << fmt_double(r.width_over_V) << ","
           << fmt_double(r.m_width_over_V) << "\n";
      res.payload = os.str();
    }
  } else if (cfg.command == "ids") {
    ModelParams p = ModelParams::diagonal(cfg.V, cfg.omega);
    int n = cfg.e_points < 1 ? 1 : cfg.e_points;
    std::vector<double> vals(static_cast<std::size_t>(n));
    std::vector<double> es(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      es[static_cast<std::size_t>(i)] =
          n == 1 ? cfg.e_min
                 : cfg.e_min + (cfg.e_max - cfg.e_min) *
                       static_cast<double>(i) / static_cast<double>(n - 1);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      vals[i] = ids(es[i], p, cfg.n_sites);
    });
    if (json) {
      std::ostringstream body;
      for (int i = 0; i < n; ++i) {
        if (i) body << ",";
        body << "[" << fmt_double(es[static_cast<std::size_t>(i)]) << ","
             << fmt_double(vals[static_cast<std::size_t>(i)]) << "]";
      }
      JsonObject j;
      j.field("V", cfg.V);
      j.field("n_sites", cfg.n_sites);
      j.raw("points", "[" + body.str() + "]");
      res.payload = j.close();
    } else {
      os << "E,ids\n";
      for (int i = 0; i < n; ++i)
        os << fmt_double(es[static_cast<std::size_t>(i)]) << ","
           << fmt_double(vals[static_cast<std::size_t>(i)]) << "\n";
      res.payload = os.str();
    }
  } else if (cfg.command == "sumset") {
    ModelParams p1 = ModelParams::diagonal(cfg.V, cfg.omega);
    double V2 = cfg.V2 < 0.0 ? cfg.V : cfg.V2;
    ModelParams p2 = ModelParams::diagonal(V2, cfg.omega);
    BandSet s1 = spectrum_approx(p1, cfg.depth, cfg.edge_tol);
    BandSet s2 = cfg.V2 < 0.0 ? s1 : spectrum_approx(p2, cfg.depth,
                                                     cfg.edge_tol);
    BandSet sum = minkowski_sum(s1, s2);
    GapLemmaReport rep = gap_lemma_certify(s1, s2);
    bool certified = rep.status == GapLemmaStatus::kCertified;
    if (json) {
      JsonObject j;
      j.field("V1", cfg.V);
      j.field("V2", V2);
      j.field("depth", cfg.depth);
      j.field("certified", certified);
      j.field("tau1", rep.tau1);
      j.field("tau2", rep.tau2);
      j.field("tau_product", rep.tau_product);
      j.field("gap_diameter_ok", rep.gap_diameter_ok);
      j.field("n_bands", (long long)sum.bands.size());
      j.raw("bands", json_pairs(sum.bands));
      j.field("edge_tol", sum.edge_tol);
      res.payload = j.close();
    } else {
      os << "certified,tau1,tau2,tau_product,gap_diameter_ok,n_bands,lo,hi\n"
         << (certified ? 1 : 0) << "," << fmt_double(rep.tau1) << ","
         << fmt_double(rep.tau2) << "," << fmt_double(rep.tau_product) << ","
         << (rep.gap_diameter_ok ? 1 : 0) << "," << sum.bands.size() << ","
         << fmt_double(sum.bands.front().lo) << ","
         << fmt_double(sum.bands.back().hi) << "\n";
      res.payload = os.str();
    }
  } else if (cfg.command == "transport") {
    TransportBounds t = transport_bounds(cfg.V, cfg.p);
    if (json) {
      JsonObject j;
      j.field("V", t.V);
      j.field("p", t.p);
      j.field("a_V", t.a);
      j.field("zeta", t.zeta);
      j.field("gamma_lower", t.gamma_lower);
      j.field("gamma_upper", t.gamma_upper);
      j.field("alpha_lower", t.alpha_lower);
      j.field("beta_any_state", t.beta_any_state);
      j.field("beta_delta0", t.beta_delta0);
      res.payload = j.close();
    } else {
      os << "V,p,a_V,zeta,gamma_lower,gamma_upper,alpha_lower,beta_any_state,"
            "beta_delta0\n"
         << fmt_double(t.V) << "," << fmt_double(t.p) << ","
         << fmt_double(t.a) << "," << fmt_double(t.zeta) << ","
         << fmt_double(t.gamma_lower) << "," << fmt_double(t.gamma_upper)
         << "," << fmt_double(t.alpha_lower) << ","
         << fmt_double(t.beta_any_state) << "," << fmt_double(t.beta_delta0)
         << "\n";
      res.payload = os.str();
    }
  } else if (cfg.command == "growth") {
    GrowthReport rep = norm_growth_check(cfg.V, cfg.depth, cfg.n_max,
                                         cfg.n_energies, cfg.edge_tol);
    if (json) {
      std::ostringstream body;
      for (std::size_t i = 0; i < rep.samples.size(); ++i) {
        const GrowthSample& gg = rep.samples[i];
        if (i) body << ",";
        JsonObject j;
        j.field("E", gg.E);
        j.field("slope", gg.slope);
        j.field("max_norm", gg.max_norm);
        j.field("within", gg.within);
        body << j.close();
      }
      JsonObject j;
      j.field("V", rep.V);
      j.field("bound", rep.bound);
      j.field("all_within", rep.all_within);
      j.raw("samples", "[" + body.str() + "]");
      res.payload = j.close();
    } else {
      os << "E,slope,max_norm,bound,within\n";
      for (const GrowthSample& gg : rep.samples)
        os << fmt_double(gg.E) << "," << fmt_double(gg.slope) << ","
           << fmt_double(gg.max_norm) << "," << fmt_double(rep.bound) << ","
           << (gg.within ? 1 : 0) << "\n";
      res.payload = os.str();
    }
    if (!rep.all_within) {
      res.exit_code = 2;
      res.message = "growth: a sampled slope exceeds the power-law bound";
    }
  } else if (cfg.command == "specplot") {
    res.payload = emit_specplot_grid(cfg.v_lo, cfg.v_hi, cfg.v_steps,
                                     cfg.depth, cfg.edge_tol, json);
  } else {
    res.exit_code = 1;
    res.message = "unknown subcommand: " + cfg.command;
  }
  return res;
}

}  // namespace detail

/// Execute one analysis. Exit code 0 on success, 1 on configuration
/// problems, 2 when a mathematical assertion fails at run time.
inline RunResult run(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json")
    return {1, "", "format must be csv or json"};
  thread_override() = cfg.parallelism;
  try {
    return detail::run_impl(cfg);
  } catch (const missing_gap_error& e) {
    return {2, "", e.what()};
  } catch (const ambiguous_gap_error& e) {
    return {2, "", e.what()};
  } catch (const bracketing_error& e) {
    return {2, "", e.what()};
  } catch (const std::exception& e) {
    return {1, "", e.what()};
  }
}

}  // namespace fibspec

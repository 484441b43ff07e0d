#pragma once

// Module descriptions and report serialization.  Needs the vendored json.hpp
// on the include path.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "expr.hpp"
#include "pipeline.hpp"

namespace dwb {

using Json = nlohmann::ordered_json;

struct DescriptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModuleDescription {
  std::string label;
  std::string source;
  std::uint64_t p = 0;
  std::size_t rank = 0;
  std::vector<std::vector<std::string>> entries;
  std::int64_t solve_order = 400;
  std::int64_t growth_order = 10000;
  std::int64_t iterates = 200;
  // Optional expectations, checked by the corpus runner.
  std::optional<std::size_t> expected_n;
  std::optional<std::vector<mpq_class>> expected_radii;  // boundary log_p R_i(M,1), ascending
  std::optional<double> expected_delta;                  // max over basis sections
  std::optional<std::string> expected_branch;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Line and column of the first occurrence of "text" (quoted) after `from`.
inline std::pair<std::size_t, std::size_t> locate_string(const std::string& raw, const std::string& text, std::size_t& from) {
  std::string needle = "\"" + text + "\"";
  std::size_t at = raw.find(needle, from);
  if (at == std::string::npos) return {0, 0};
  from = at + needle.size();
  return line_col(raw, at + 1);
}

inline std::uint64_t parse_prime(const Json& j, const std::string& where) {
  mpz_class p;
  try {
    if (j.is_string()) p = mpz_class(j.get<std::string>());
    else if (j.is_number_unsigned() || j.is_number_integer()) p = mpz_class(std::to_string(j.get<std::int64_t>()));
    else throw DescriptionError(where + ": \"p\" must be a decimal string");
  } catch (const std::invalid_argument&) {
    throw DescriptionError(where + ": \"p\" is not an integer");
  }
  if (p < 2 || !p.fits_ulong_p()) throw DescriptionError(where + ": p = " + p.get_str() + " out of range");
  if (!is_prime(p.get_ui())) throw DescriptionError(where + ": p = " + p.get_str() + " is not prime");
  return p.get_ui();
}

inline mpq_class parse_rational(const std::string& s, const std::string& where) {
  mpq_class q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw DescriptionError(where + ": not a rational number: \"" + s + "\"");
  q.canonicalize();
  return q;
}

inline mpq_class radius_exponent(const Json& j, const std::string& where) {
  if (j.is_object() && j.contains("base_p_exponent")) return parse_rational(j["base_p_exponent"].get<std::string>(), where);
  if (j.is_string()) return parse_rational(j.get<std::string>(), where);
  throw DescriptionError(where + ": radius must be {\"base_p_exponent\": \"q\"}");
}

}  // namespace detail

inline ModuleDescription parse_module_text(const std::string& raw, const std::string& origin) {
  Json j;
  try {
    j = Json::parse(raw);
  } catch (const Json::parse_error& e) {
    auto [line, col] = detail::line_col(raw, e.byte == 0 ? 0 : e.byte - 1);
    throw DescriptionError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error");
  }
  if (!j.is_object()) throw DescriptionError(origin + ": top level must be an object");
  ModuleDescription d;
  d.source = origin;
  try {
    d.label = j.value("label", std::string("module"));
    if (!j.contains("p")) throw DescriptionError(origin + ": missing \"p\"");
    d.p = detail::parse_prime(j["p"], origin);
    if (!j.contains("connection") || !j["connection"].is_array()) throw DescriptionError(origin + ": missing \"connection\" array");
    const auto& c = j["connection"];
    d.rank = j.contains("rank") ? j["rank"].get<std::size_t>() : c.size();
    if (d.rank == 0) throw DescriptionError(origin + ": rank must be positive");
    if (c.size() != d.rank) throw DescriptionError(origin + ": connection has " + std::to_string(c.size()) + " rows, rank is " + std::to_string(d.rank));
    for (std::size_t i = 0; i < d.rank; ++i) {
      if (!c[i].is_array() || c[i].size() != d.rank)
        throw DescriptionError(origin + ": connection row " + std::to_string(i) + " does not have " + std::to_string(d.rank) + " entries");
      std::vector<std::string> row;
      for (const auto& e : c[i]) {
        if (e.is_string()) row.push_back(e.get<std::string>());
        else if (e.is_number_integer()) row.push_back(std::to_string(e.get<std::int64_t>()));
        else throw DescriptionError(origin + ": connection entries must be strings");
      }
      d.entries.push_back(row);
    }
    if (j.contains("orders")) {
      const auto& o = j["orders"];
      d.solve_order = o.value("solve", d.solve_order);
      d.growth_order = o.value("growth", d.growth_order);
      d.iterates = o.value("iterates", d.iterates);
    }
    if (j.contains("expected")) {
      const auto& e = j["expected"];
      if (e.contains("n")) d.expected_n = e["n"].get<std::size_t>();
      if (e.contains("boundary_radii")) {
        std::vector<mpq_class> r;
        for (const auto& x : e["boundary_radii"]) r.push_back(detail::radius_exponent(x, origin));
        if (r.size() != d.rank) throw DescriptionError(origin + ": expected.boundary_radii needs " + std::to_string(d.rank) + " values");
        std::sort(r.begin(), r.end());
        d.expected_radii = r;
      }
      if (e.contains("delta")) d.expected_delta = detail::parse_rational(e["delta"].get<std::string>(), origin).get_d();
      if (e.contains("condition_d")) d.expected_branch = e["condition_d"].get<std::string>();
    }
  } catch (const Json::exception& e) {
    throw DescriptionError(origin + ": " + e.what());
  }
  // Syntax check every entry now, so errors surface at load time.
  RationalField f{d.p};
  std::size_t from = 0;
  for (std::size_t i = 0; i < d.rank; ++i)
    for (std::size_t k = 0; k < d.rank; ++k) {
      auto [line, col] = detail::locate_string(raw, d.entries[i][k], from);
      try {
        parse_entry(d.entries[i][k], f, 8);
      } catch (const ParseError& e) {
        std::string at = line ? std::to_string(line) + ":" + std::to_string(col + e.column - 1) : "";
        throw DescriptionError(origin + (at.empty() ? "" : ":" + at) + ": connection[" + std::to_string(i) + "][" + std::to_string(k) + "] \"" +
                               d.entries[i][k] + "\": " + e.what());
      }
    }
  return d;
}

inline ModuleDescription parse_module(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DescriptionError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_module_text(ss.str(), path);
}

// Exact module with non-polynomial entries kept to `order` coefficients.
inline DifferentialModule<RationalField> build_module(const ModuleDescription& d, std::int64_t order) {
  RationalField f{d.p};
  SeriesMatrix<RationalField> a(d.rank, d.rank);
  for (std::size_t i = 0; i < d.rank; ++i)
    for (std::size_t k = 0; k < d.rank; ++k) a(i, k) = parse_entry(d.entries[i][k], f, order);
  return DifferentialModule<RationalField>(f, std::move(a), d.label);
}

// ---- JSON -----------------------------------------------------------------

inline std::string q_str(const mpq_class& q) { return q.get_str(); }

inline Json radius_json(const mpq_class& e) { return Json{{"base_p_exponent", q_str(e)}}; }

inline Json log_value_json(const LogValue& v) { return v ? Json(q_str(*v)) : Json("-inf"); }

inline std::string fixed(double x, int digits = 6) {
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

inline Json padic_json(const PadicNumber& x) {
  Json j;
  j["p"] = std::to_string(x.prime());
  if (x.is_exact_zero()) {
    j["kind"] = "exact_zero";
    return j;
  }
  if (x.is_zero()) {
    j["kind"] = "zero";
    j["absolute_precision"] = std::to_string(x.absolute_precision());
    return j;
  }
  j["kind"] = x.is_exact() ? "exact" : "capped";
  j["v"] = std::to_string(x.valuation());
  j["u"] = x.unit().get_str();
  if (!x.is_exact()) j["N"] = std::to_string(x.relative_precision());
  return j;
}

inline Json rational_json(const mpq_class& q) { return Json(q_str(q)); }

// Series as {valuation, unit, precision} records, first `head` coefficients.
inline Json series_json(const Series<PadicField>& s, std::int64_t head = 16) {
  Json c = Json::array();
  for (std::int64_t i = 0; i < std::min(head, s.size()); ++i) {
    const auto& x = s[i];
    Json r;
    if (x.is_exact_zero()) {
      r["valuation"] = "inf";
      r["unit"] = "0";
      r["precision"] = "inf";
    } else if (x.is_zero()) {
      r["valuation"] = std::to_string(x.valuation());
      r["unit"] = "0";
      r["precision"] = "0";
    } else {
      r["valuation"] = std::to_string(x.valuation());
      r["unit"] = x.unit().get_str();
      r["precision"] = x.is_exact() ? std::string("inf") : std::to_string(x.relative_precision());
    }
    c.push_back(r);
  }
  Json j;
  j["valid"] = s.is_exact() ? std::string("inf") : std::to_string(s.valid());
  j["stored"] = std::to_string(s.size());
  j["coefficients"] = c;
  return j;
}

// Exact rational series when every stored coefficient reconstructs.
inline std::optional<std::string> series_text(const Series<PadicField>& s, std::int64_t max_terms = 12) {
  if (!s.is_exact() && s.size() >= s.valid()) return std::nullopt;
  if (s.size() > max_terms) return std::nullopt;
  std::string out;
  for (std::int64_t i = 0; i < s.size(); ++i) {
    if (s[i].is_exact_zero()) continue;
    if (!s[i].is_exact()) return std::nullopt;
    mpq_class q = s[i].lift();
    std::string mag = q_str(abs(q));
    std::string term = i == 0 ? mag : (mag == "1" ? "" : mag + "*") + (i == 1 ? std::string("t") : "t^" + std::to_string(i));
    if (out.empty()) out = (sgn(q) < 0 ? "-" : "") + term;
    else out += (sgn(q) < 0 ? " - " : " + ") + term;
  }
  return out.empty() ? std::string("0") : out;
}

inline Json growth_json(const GrowthProfile& g) {
  Json j;
  j["lambda"] = log_value_json(g.lambda);
  j["lambda_index"] = g.lambda_index;
  j["delta"] = fixed(g.delta);
  j["delta_index"] = g.delta_index;
  j["window"] = {g.lo, g.hi};
  return j;
}

inline Json section_json(const HorizontalSection& s, std::int64_t head = 16) {
  Json j;
  Json init = Json::array();
  for (const auto& x : s.initial) init.push_back(padic_json(x));
  j["initial"] = init;
  j["order"] = s.order;
  j["last_sound_order"] = s.last_sound_order;
  j["precision_exhausted"] = s.precision_exhausted;
  j["growth"] = growth_json(s.growth);
  j["verdict"] = to_string(s.verdict);
  Json coords = Json::array();
  for (const auto& c : s.coords) {
    Json cj = series_json(c, head);
    if (auto t = series_text(c)) cj["exact"] = *t;
    coords.push_back(cj);
  }
  j["coordinates"] = coords;
  return j;
}

inline Json h0_json(const H0Result& h) {
  Json j;
  j["n"] = h.n;
  j["inconclusive"] = h.inconclusive;
  Json secs = Json::array();
  for (const auto& s : h.sections) secs.push_back(section_json(s));
  j["basis"] = secs;
  Json std_ = Json::array();
  for (const auto& s : h.standard) {
    Json x;
    x["verdict"] = to_string(s.verdict);
    x["growth"] = growth_json(s.growth);
    std_.push_back(x);
  }
  j["standard_solutions"] = std_;
  j["notes"] = h.notes;
  return j;
}

inline Json sample_json(const RadiusSample& s) {
  Json j;
  j["r"] = q_str(s.r);
  j["rho"] = radius_json(-s.r);
  Json radii = Json::array();
  for (const auto& x : s.log_radii) radii.push_back(radius_json(x));
  j["radii"] = radii;
  Json rates = Json::array();
  for (const auto& x : s.rates) rates.push_back(log_value_json(x));
  j["minor_rates"] = rates;
  j["secant"] = {s.s1, s.s2};
  j["reordered"] = s.reordered;
  j["truncation_boundary"] = s.boundary;
  return j;
}

inline Json boundary_json(const BoundaryRadii& b, const RadiusConfig& cfg) {
  Json j;
  Json radii = Json::array();
  for (const auto& r : b.radii) {
    Json x = radius_json(r.log_radius);
    x["raw_intercept"] = q_str(r.raw_intercept);
    x["direct"] = q_str(r.direct_log_radius);
    x["fit_points"] = r.fit.points;
    x["fit_slope"] = q_str(r.fit.slope);
    x["fit_residual"] = fixed(r.fit.residual, 9);
    x["flagged"] = r.flagged;
    radii.push_back(x);
  }
  j["boundary"] = radii;
  j["tolerance"] = fixed(cfg.fit_tol, 6);
  Json samples = Json::array();
  for (const auto& s : b.samples) samples.push_back(sample_json(s));
  j["samples"] = samples;
  j["caveat"] = "solution-radius estimator; boundary value by affine extrapolation to rho = 1";
  return j;
}

inline Json fprofile_json(const FProfile& f) {
  Json j;
  Json rows = Json::array();
  for (std::size_t k = 0; k < f.rs.size(); ++k) {
    Json r;
    r["r"] = q_str(f.rs[k]);
    Json v = Json::array();
    for (const auto& x : f.f[k]) v.push_back(q_str(x));
    r["F"] = v;
    rows.push_back(r);
  }
  j["units"] = "log_p";
  j["grid"] = rows;
  j["convex"] = f.convex;
  j["trivial_law"] = f.trivial_law;
  j["coarse"] = f.coarse;
  return j;
}

inline Json matrix_json(const SeriesMatrix<PadicField>& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      auto t = series_text(a(i, k));
      row.push_back(t ? Json(*t) : series_json(a(i, k), 8));
    }
    rows.push_back(row);
  }
  return rows;
}

inline Json witness_json(const ConditionDWitness& w) {
  Json j;
  j["branch"] = to_string(w.branch);
  j["status"] = to_string(w.status);
  j["n"] = w.n;
  j["L_connection"] = matrix_json(w.l.connection());
  j["phi"] = matrix_json(w.phi);
  j["theta"] = matrix_json(w.theta);
  if (w.branch == ConditionDWitness::Branch::kGeneric) {
    Json e = Json::array();
    for (const auto& s : w.e) {
      auto t = series_text(s);
      e.push_back(t ? Json(*t) : series_json(s, 8));
    }
    j["e"] = e;
    j["delta_matrix"] = matrix_json(w.delta);
    j["e_log_sup"] = w.e_log_sup ? Json(q_str(*w.e_log_sup)) : Json(nullptr);
    j["e_sup_at"] = {w.e_sup_coordinate, w.e_sup_index};
  }
  j["checks"] = {{"e_horizontal", w.e_horizontal}, {"e_bounded", w.e_bounded},      {"rank_L", w.rank_ok},
                 {"L_D_stable", w.d_stable},       {"diagram", w.diagram_commutes}, {"theta_convergent", w.theta_convergent}};
  j["theta_lambda"] = log_value_json(w.theta_lambda);
  j["h0_L"] = w.l_h0_dimension;
  j["messages"] = w.messages;
  return j;
}

inline Json dwork_json(const DworkBound& d) {
  Json j;
  j["applicable"] = d.applicable;
  if (!d.applicable) {
    j["verdict"] = "not applicable";
    return j;
  }
  j["verdict"] = to_string(d.verdict);
  j["bound"] = fixed(d.bound, 1);
  j["tolerance"] = fixed(d.tol, 3);
  Json ds = Json::array();
  for (double x : d.deltas) ds.push_back(fixed(x));
  j["deltas"] = ds;
  Json fm = Json::array();
  for (const auto& m : d.membership) fm.push_back({{"verdict", to_string(m.verdict)}, {"log_sup", fixed(m.log_sup)}, {"index", m.index}, {"stabilized", m.stabilized}});
  j["fil_membership"] = fm;
  j["window"] = {d.window_lo, d.window_hi};
  return j;
}

inline Json conjecture_json(const ConjectureReport& r, const PipelineConfig& cfg) {
  Json j;
  j["label"] = r.label;
  j["p"] = std::to_string(r.p);
  j["m"] = r.m;
  j["n"] = r.n;
  j["precision"] = {{"solve", std::to_string(r.precision)}, {"growth", std::to_string(r.growth_precision)}};
  j["h0"] = h0_json(r.h0);
  Json g = Json::array();
  for (const auto& s : r.growth) {
    Json x;
    x["delta_hat"] = fixed(s.delta);
    x["lambda"] = log_value_json(s.lambda);
    x["verdict"] = to_string(s.verdict);
    x["window"] = {s.window_lo, s.window_hi};
    g.push_back(x);
  }
  j["growth"] = {{"order", cfg.growth_order}, {"sections", g}};
  j["dwork_bound"] = dwork_json(r.dwork);
  Json c;
  c["verdict"] = r.conjecture_vacuous ? "vacuous" : to_string(r.conjecture);
  c["bound"] = r.n == 0 ? Json(nullptr) : Json(fixed(static_cast<double>(r.n) - 1, 1));
  c["tolerance"] = fixed(cfg.tol_growth, 3);
  j["conjecture_bound"] = c;
  if (r.radii) j["radii"] = boundary_json(*r.radii, cfg.radii);
  j["hypothesis_R_m_minus_n_lt_1"] = r.hypothesis ? Json(*r.hypothesis) : Json("not applicable");
  j["radius_transfer"] = to_string(r.transfer);
  j["corank_one_route"] = r.corank_one_route;
  j["condition_d"] = witness_json(r.condition_d);
  j["overall"] = to_string(r.overall);
  j["notes"] = r.notes;
  return j;
}

inline Json config_json(const PipelineConfig& cfg) {
  Json j;
  j["order"] = cfg.solver.order;
  j["growth_order"] = cfg.growth_order;
  j["precision"] = cfg.precision ? Json(std::to_string(cfg.precision)) : Json("auto");
  j["growth_precision"] = cfg.growth_precision ? Json(std::to_string(cfg.growth_precision)) : Json("auto");
  j["eps_conv"] = fixed(cfg.solver.eps_conv, 4);
  j["eps_margin"] = fixed(cfg.solver.eps_margin, 4);
  j["tolerance_growth"] = fixed(cfg.tol_growth, 4);
  j["iterates"] = cfg.radii.iterates;
  j["series_window"] = cfg.radii.series_window;
  Json s = Json::array();
  for (const auto& r : cfg.radii.samples) s.push_back(q_str(r));
  j["radius_samples_r"] = s;
  j["fit_tolerance"] = fixed(cfg.radii.fit_tol, 6);
  return j;
}

// ---- CSV / SVG ----------------------------------------------------------------

inline std::string fprofile_csv(const FProfile& f) {
  std::ostringstream os;
  os << "r";
  std::size_t m = f.f.empty() ? 0 : f.f[0].size();
  for (std::size_t i = 0; i < m; ++i) os << ",F_" << i + 1;
  os << "\n";
  for (std::size_t k = 0; k < f.rs.size(); ++k) {
    os << q_str(f.rs[k]);
    for (const auto& x : f.f[k]) os << "," << fixed(x.get_d(), 9);
    os << "\n";
  }
  return os.str();
}

inline std::string fprofile_svg(const FProfile& f, const std::string& title) {
  const double w = 640, h = 400, pad = 50;
  double rmax = 0, fmin = 0, fmax = 0;
  for (std::size_t k = 0; k < f.rs.size(); ++k) {
    rmax = std::max(rmax, f.rs[k].get_d());
    for (const auto& x : f.f[k]) {
      fmin = std::min(fmin, x.get_d());
      fmax = std::max(fmax, x.get_d());
    }
  }
  if (rmax <= 0) rmax = 1;
  if (fmax - fmin <= 0) fmax = fmin + 1;
  auto px = [&](double r) { return pad + (w - 2 * pad) * r / rmax; };
  auto py = [&](double v) { return h - pad - (h - 2 * pad) * (v - fmin) / (fmax - fmin); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << pad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\"" << h - pad << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << w - pad << "\" y=\"" << h - pad + 30 << "\" font-family=\"sans-serif\" font-size=\"12\">r = " << fixed(rmax, 4)
     << "</text>\n";
  os << "<text x=\"" << pad - 40 << "\" y=\"" << pad - 8 << "\" font-family=\"sans-serif\" font-size=\"12\">" << fixed(fmax, 4) << "</text>\n";
  os << "<text x=\"" << pad - 40 << "\" y=\"" << h - pad << "\" font-family=\"sans-serif\" font-size=\"12\">" << fixed(fmin, 4) << "</text>\n";
  std::size_t m = f.f.empty() ? 0 : f.f[0].size();
  for (std::size_t i = 0; i < m; ++i) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[i % 6] << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < f.rs.size(); ++k) os << (k ? " " : "") << px(f.rs[k].get_d()) << "," << py(f.f[k][i].get_d());
    os << "\"/>\n";
    os << "<text x=\"" << w - pad + 4 << "\" y=\"" << py(f.f.back()[i].get_d()) << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << colors[i % 6]
       << "\">F_" << i + 1 << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// ---- plain text -------------------------------------------------------------

inline std::string conjecture_text(const ConjectureReport& r, const PipelineConfig& cfg) {
  std::ostringstream os;
  os << r.label << " (p = " << r.p << ", m = " << r.m << ")\n";
  os << "  H^0 dimension n = " << r.n << (r.h0.inconclusive ? " (inconclusive)" : "") << "\n";
  for (std::size_t k = 0; k < r.growth.size(); ++k)
    os << "  section " << k + 1 << ": delta_hat = " << fixed(r.growth[k].delta) << " on [" << r.growth[k].window_lo << ", " << r.growth[k].window_hi
       << "], " << to_string(r.growth[k].verdict) << "\n";
  if (r.dwork.applicable) os << "  Dwork bound delta <= " << r.m - 1 << " + " << fixed(cfg.tol_growth, 2) << ": " << to_string(r.dwork.verdict) << "\n";
  else os << "  Dwork bound: not applicable (n < m)\n";
  if (r.conjecture_vacuous) os << "  conjecture bound: vacuous (n = 0)\n";
  else os << "  conjecture bound delta <= " << r.n - 1 << " + " << fixed(cfg.tol_growth, 2) << ": " << to_string(r.conjecture) << "\n";
  if (r.radii) {
    os << "  boundary radii log_p R_i(M,1):";
    for (const auto& b : r.radii->radii) os << " " << q_str(b.log_radius) << (b.flagged ? "*" : "");
    os << "\n";
  }
  if (r.hypothesis) os << "  R_{m-n}(M,1) < 1: " << (*r.hypothesis ? "yes" : "no") << "\n";
  os << "  transfer (R_1(M,1) = 1 iff n = m): " << to_string(r.transfer) << "\n";
  if (r.corank_one_route) os << "  n = m - 1: corank-one route\n";
  os << "  Condition (D): " << to_string(r.condition_d.status) << " (" << to_string(r.condition_d.branch) << " branch)\n";
  for (const auto& m : r.condition_d.messages) os << "    " << m << "\n";
  for (const auto& m : r.notes) os << "  note: " << m << "\n";
  os << "  verdict: " << to_string(r.overall) << "\n";
  return os.str();
}

}  // namespace dwb

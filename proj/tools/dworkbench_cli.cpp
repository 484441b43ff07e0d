#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dworkbench/dworkbench.hpp"
#include "dworkbench/io.hpp"

#ifndef DWB_CORPUS_DIR
#define DWB_CORPUS_DIR "corpus"
#endif

using namespace dwb;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::vector<std::string> files;
  std::string out;
  std::int64_t order = 400;
  std::int64_t growth_order = 10000;
  std::int64_t iterates = 200;
  std::int64_t precision = 0;
  std::int64_t growth_precision = 0;
  std::vector<std::string> rho;
  std::vector<std::string> rho_grid;
  std::vector<std::string> alpha;
  double tol_growth = 0.1;
  std::uint64_t seed = 20240611;
  unsigned jobs = 1;
  std::string csv, svg;
  bool timing = false;
  bool order_set = false, growth_set = false, iterates_set = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Verdict worst(Verdict a, Verdict b) { return combine(a, b); }

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kPass: return 0;
    case Verdict::kFail: return 1;
    case Verdict::kInconclusive: return 2;
  }
  return 1;
}

// rho given as "1", "5^-1/4" / "p^-1/4", or a decimal in (0, 1]; returns r = -log_p rho.
mpq_class parse_rho(const std::string& s, std::uint64_t p) {
  auto caret = s.find('^');
  if (caret != std::string::npos) {
    std::string base = s.substr(0, caret);
    if (base != "p" && base != std::to_string(p)) throw UsageError("rho base must be p or " + std::to_string(p) + ": " + s);
    mpq_class e;
    if (e.set_str(s.substr(caret + 1), 10) != 0) throw UsageError("bad rho exponent: " + s);
    e.canonicalize();
    if (e > 0) throw UsageError("rho must be at most 1: " + s);
    return -e;
  }
  double x;
  try {
    std::size_t used = 0;
    x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw UsageError("bad rho value: " + s);
  }
  if (!(x > 0 && x <= 1)) throw UsageError("rho must lie in (0, 1]: " + s);
  double r = -std::log(x) / std::log(static_cast<double>(p));
  mpq_class q(static_cast<long>(std::llround(r * (1 << 20))), 1u << 20);
  q.canonicalize();
  return q;
}

PipelineConfig pipeline_config(const Options& o, const ModuleDescription& d) {
  PipelineConfig cfg;
  cfg.solver.order = o.order_set ? o.order : d.solve_order;
  cfg.growth_order = o.growth_set ? o.growth_order : d.growth_order;
  cfg.radii.iterates = o.iterates_set ? o.iterates : d.iterates;
  cfg.precision = o.precision;
  cfg.growth_precision = o.growth_precision;
  cfg.tol_growth = o.tol_growth;
  cfg.solver.jobs = o.jobs;
  return cfg;
}

std::int64_t build_order(const PipelineConfig& cfg) {
  return std::max({cfg.solver.order + 2, cfg.growth_order + 2, cfg.radii.iterates + cfg.radii.series_window + 1});
}

std::string timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct ModuleRun {
  Json json;
  std::string text;
  Verdict verdict = Verdict::kPass;
  double seconds = 0;
};

// Compares a conjecture report against the expectations stored in the description.
Verdict check_expected(const ModuleDescription& d, const ConjectureReport& r, const PipelineConfig& cfg, Json& out, std::string& text) {
  Verdict v = Verdict::kPass;
  auto add = [&](const std::string& what, bool ok, const std::string& detail) {
    out.push_back({{"check", what}, {"verdict", ok ? "PASS" : "FAIL"}, {"detail", detail}});
    if (!ok) {
      v = Verdict::kFail;
      text += "  expected " + what + ": FAIL (" + detail + ")\n";
    }
  };
  if (d.expected_n) add("n", r.n == *d.expected_n, "got " + std::to_string(r.n) + ", want " + std::to_string(*d.expected_n));
  if (d.expected_radii && r.radii) {
    bool ok = true;
    std::string got;
    for (std::size_t i = 0; i < d.rank; ++i) {
      got += (i ? " " : "") + r.radii->radii[i].log_radius.get_str();
      if (std::abs(mpq_class(r.radii->radii[i].log_radius - (*d.expected_radii)[i]).get_d()) > cfg.radii.fit_tol) ok = false;
    }
    add("boundary_radii", ok, "log_p: " + got + ", tolerance " + fixed(cfg.radii.fit_tol, 4));
  }
  if (d.expected_delta) {
    double mx = 0;
    for (const auto& s : r.growth) mx = std::max(mx, s.delta);
    add("delta", std::abs(mx - *d.expected_delta) <= cfg.tol_growth, "max delta_hat " + fixed(mx) + ", want " + fixed(*d.expected_delta));
  }
  if (d.expected_branch) add("condition_d", *d.expected_branch == to_string(r.condition_d.branch), std::string("branch ") + to_string(r.condition_d.branch));
  return v;
}

// D(f v) = d(f) v + f D(v) over Q for random polynomial f and vector v.
std::pair<std::size_t, std::size_t> leibniz_check(const DifferentialModule<RationalField>& m, std::mt19937_64& rng, std::size_t cases) {
  std::uniform_int_distribution<int> coef(-9, 9), den(1, 6), deg(0, 6);
  auto poly = [&] {
    std::vector<mpq_class> c(static_cast<std::size_t>(deg(rng) + 1));
    for (auto& x : c) {
      x = mpq_class(coef(rng), static_cast<unsigned>(den(rng)));
      x.canonicalize();
    }
    return Series<RationalField>(c);
  };
  auto mt = truncated(m, 64);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < cases; ++k) {
    auto f = poly();
    SeriesVector<RationalField> v(m.rank());
    for (auto& x : v) x = poly();
    SeriesVector<RationalField> fv;
    for (const auto& x : v) fv.push_back(convolve(f, x));
    auto lhs = apply_d(mt, fv);
    auto dv = apply_d(mt, v);
    auto df = derive(f);
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto rhs = convolve(df, v[i]) + convolve(f, dv[i]);
      auto diff = lhs[i] - rhs;
      if (!diff.is_zero()) {
        ++bad;
        break;
      }
    }
  }
  return {cases, bad};
}

ModuleRun run_module(const std::string& cmd, const ModuleDescription& d, const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  ModuleRun run;
  PipelineConfig cfg = pipeline_config(o, d);
  auto m = build_module(d, build_order(cfg));
  run.json["source"] = fs::path(d.source).filename().string();
  run.json["label"] = d.label;
  run.json["p"] = std::to_string(d.p);
  run.json["rank"] = d.rank;
  std::ostringstream text;
  text << d.label << " (p = " << d.p << ", m = " << d.rank << ")\n";

  auto mp = [&] { return to_padic(m, solve_precision(cfg, d.p), cfg.solver.order + 1); };
  auto radii_ready = [&] { return iterate_ready(m, cfg.radii); };

  if (cmd == "solve") {
    std::vector<PadicNumber> alpha;
    auto pm = mp();
    if (o.alpha.empty()) {
      for (std::size_t i = 0; i < d.rank; ++i) alpha.push_back(i == 0 ? pm.field().from_int(1) : PadicNumber::exact_zero(d.p));
    } else {
      if (o.alpha.size() != d.rank) throw UsageError("--alpha needs " + std::to_string(d.rank) + " values");
      for (const auto& s : o.alpha) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw UsageError("bad --alpha value: " + s);
        q.canonicalize();
        alpha.push_back(pm.field().from_rational(q));
      }
    }
    auto sec = horizontal_solve(pm, alpha, cfg.solver.order, cfg.solver);
    run.json["section"] = section_json(sec);
    text << "  order " << sec.order << ", last sound order " << sec.last_sound_order << "\n";
    text << "  lambda = " << (sec.growth.lambda ? sec.growth.lambda->get_str() : "-inf") << ", delta_hat = " << fixed(sec.growth.delta) << " on ["
         << sec.growth.lo << ", " << sec.growth.hi << "]: " << to_string(sec.verdict) << "\n";
    for (std::size_t i = 0; i < sec.coords.size(); ++i)
      if (auto t = series_text(sec.coords[i])) text << "  f_" << i + 1 << " = " << *t << "\n";
    run.verdict = sec.verdict == Convergence::kInconclusive ? Verdict::kInconclusive : Verdict::kPass;
  } else if (cmd == "h0") {
    auto h = h0_basis(mp(), cfg.solver);
    run.json["h0"] = h0_json(h);
    text << "  n = " << h.n << (h.inconclusive ? " (inconclusive)" : "") << "\n";
    for (std::size_t k = 0; k < h.sections.size(); ++k) {
      text << "  section " << k + 1 << ":";
      for (const auto& c : h.sections[k].coords) text << " [" << series_text(c).value_or("series") << "]";
      text << "\n";
    }
    run.verdict = h.inconclusive ? Verdict::kInconclusive : Verdict::kPass;
    if (d.expected_n && *d.expected_n != h.n) {
      run.verdict = Verdict::kFail;
      text << "  expected n = " << *d.expected_n << ": FAIL\n";
    }
  } else if (cmd == "growth" || cmd == "verify-dwork") {
    auto h = h0_basis(mp(), cfg.solver);
    auto gs = growth_sections(m, h, cfg);
    Json arr = Json::array();
    text << "  n = " << h.n << "\n";
    for (std::size_t k = 0; k < gs.size(); ++k) {
      Json x;
      x["delta_hat"] = fixed(growth_order(gs[k]));
      x["growth"] = growth_json(gs[k].growth);
      x["verdict"] = to_string(gs[k].verdict);
      arr.push_back(x);
      text << "  section " << k + 1 << ": delta_hat = " << fixed(growth_order(gs[k])) << " on [" << gs[k].growth.lo << ", " << gs[k].growth.hi << "]\n";
    }
    run.json["n"] = h.n;
    run.json["growth_order"] = cfg.growth_order;
    run.json["sections"] = arr;
    run.verdict = h.inconclusive ? Verdict::kInconclusive : Verdict::kPass;
    if (cmd == "verify-dwork") {
      PadicField gf{d.p, growth_precision(cfg, d.p)};
      auto db = verify_dwork_bound(d.rank, h.n, gs, gf, cfg.tol_growth);
      run.json["dwork_bound"] = dwork_json(db);
      if (db.applicable) {
        text << "  Dwork bound delta <= " << d.rank - 1 << " + " << fixed(cfg.tol_growth, 2) << ": " << to_string(db.verdict) << "\n";
        run.verdict = worst(run.verdict, db.verdict);
      } else {
        text << "  Dwork bound: not applicable (n = " << h.n << " < m)\n";
      }
    } else if (d.expected_delta) {
      double mx = 0;
      for (const auto& s : gs) mx = std::max(mx, growth_order(s));
      if (std::abs(mx - *d.expected_delta) > cfg.tol_growth) run.verdict = Verdict::kFail;
    }
  } else if (cmd == "radii") {
    auto mi = radii_ready();
    auto it = iterate_matrices(mi, cfg.radii.iterates, radius_keep_set(mi, cfg.radii.iterates));
    std::vector<std::string> rhos = o.rho.empty() ? std::vector<std::string>{"1"} : o.rho;
    Json arr = Json::array();
    for (const auto& s : rhos) {
      mpq_class r = parse_rho(s, d.p);
      if (r == 0) {
        auto b = boundary_radii(mi, it, cfg.radii);
        Json x = boundary_json(b, cfg.radii);
        x["rho"] = "1";
        arr.push_back(x);
        text << "  rho = 1 (extrapolated): log_p R_i =";
        for (const auto& br : b.radii) {
          text << " " << br.log_radius.get_str() << (br.flagged ? "*" : "");
          if (br.flagged) run.verdict = worst(run.verdict, Verdict::kInconclusive);
        }
        text << "\n";
        if (d.expected_radii) {
          for (std::size_t i = 0; i < d.rank; ++i)
            if (std::abs(mpq_class(b.radii[i].log_radius - (*d.expected_radii)[i]).get_d()) > cfg.radii.fit_tol) run.verdict = Verdict::kFail;
          if (run.verdict == Verdict::kFail) text << "  expected boundary radii: FAIL\n";
        }
        auto cn = cyclic_newton_r1(mi, mpq_class(0));
        arr.back()["cyclic_newton_r1"] = radius_json(cn.log_radius);
      } else {
        auto smp = radius_multiset(mi, it, r);
        arr.push_back(sample_json(smp));
        text << "  rho = p^-" << r.get_str() << ": log_p R_i =";
        for (const auto& x : smp.log_radii) text << " " << x.get_str();
        text << "\n";
      }
    }
    run.json["radii"] = arr;
  } else if (cmd == "fprofile") {
    auto mi = radii_ready();
    auto it = iterate_matrices(mi, cfg.radii.iterates, radius_keep_set(mi, cfg.radii.iterates));
    std::vector<mpq_class> rs;
    if (o.rho_grid.empty()) {
      for (const char* s : {"0", "1/32", "1/16", "1/8", "1/4", "1/2", "1"}) rs.emplace_back(s);
    } else {
      for (const auto& s : o.rho_grid) rs.push_back(parse_rho(s, d.p));
    }
    for (auto& r : rs) r.canonicalize();
    auto fp = f_profile(mi, it, rs);
    run.json["fprofile"] = fprofile_json(fp);
    text << "  r";
    for (std::size_t i = 0; i < d.rank; ++i) text << "  F_" << i + 1;
    text << "\n";
    for (std::size_t k = 0; k < fp.rs.size(); ++k) {
      text << "  " << fp.rs[k].get_str();
      for (const auto& x : fp.f[k]) text << "  " << x.get_str();
      text << "\n";
    }
    bool convex = std::all_of(fp.convex.begin(), fp.convex.end(), [](bool b) { return b; });
    text << "  convex: " << (convex ? "yes" : "no") << ", F_m = m r: " << (fp.trivial_law ? "yes" : "no") << "\n";
    run.verdict = convex ? (fp.coarse ? Verdict::kInconclusive : Verdict::kPass) : Verdict::kFail;
    auto stem = fs::path(d.source).stem().string();
    auto target = [&](const std::string& opt, const char* ext) {
      if (opt.empty()) return std::string();
      if (o.files.size() > 1 || fs::is_directory(opt)) return (fs::path(opt) / (stem + ext)).string();
      return opt;
    };
    if (auto path = target(o.csv, ".csv"); !path.empty()) std::ofstream(path) << fprofile_csv(fp);
    if (auto path = target(o.svg, ".svg"); !path.empty()) std::ofstream(path) << fprofile_svg(fp, d.label + ": F_i(M, r), log_p units");
  } else if (cmd == "construct-l") {
    auto pm = mp();
    auto h = h0_basis(pm, cfg.solver);
    auto w = construct_condition_d(pm, h, cfg.solver);
    run.json["n"] = h.n;
    run.json["condition_d"] = witness_json(w);
    text << "  n = " << h.n << ", branch " << to_string(w.branch) << ": " << to_string(w.status) << "\n";
    if (w.branch == ConditionDWitness::Branch::kGeneric) {
      text << "  e =";
      for (const auto& s : w.e) text << " [" << series_text(s).value_or("series") << "]";
      text << "\n  phi columns:";
      for (std::size_t j = 0; j < w.phi.cols(); ++j) {
        text << " (";
        for (std::size_t i = 0; i < w.phi.rows(); ++i) text << (i ? ", " : "") << series_text(w.phi(i, j)).value_or("series");
        text << ")";
      }
      text << "\n";
    }
    for (const auto& msg : w.messages) text << "  " << msg << "\n";
    run.verdict = worst(w.status, h.inconclusive ? Verdict::kInconclusive : Verdict::kPass);
  } else if (cmd == "verify-conjecture" || cmd == "corpus") {
    auto rep = verify_conjecture(m, cfg);
    run.json["report"] = conjecture_json(rep, cfg);
    std::string t = conjecture_text(rep, cfg);
    run.verdict = rep.overall;
    Json checks = Json::array();
    std::string extra;
    run.verdict = worst(run.verdict, check_expected(d, rep, cfg, checks, extra));
    if (cmd == "corpus") {
      std::mt19937_64 rng(o.seed ^ std::hash<std::string>{}(d.label));
      auto [cases, bad] = leibniz_check(m, rng, 200);
      checks.push_back({{"check", "leibniz"}, {"verdict", bad ? "FAIL" : "PASS"}, {"detail", std::to_string(cases) + " seeded cases"}});
      if (bad) {
        run.verdict = Verdict::kFail;
        extra += "  Leibniz identity: FAIL on " + std::to_string(bad) + " cases\n";
      }
    }
    run.json["expectations"] = checks;
    text.str("");
    text << t << extra;
  }
  run.json["verdict"] = to_string(run.verdict);
  run.text = text.str();
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

std::vector<std::string> corpus_files(const std::vector<std::string>& given) {
  std::vector<std::string> dirs = given.empty() ? std::vector<std::string>{DWB_CORPUS_DIR} : given;
  std::vector<std::string> out;
  for (const auto& d : dirs) {
    if (fs::is_directory(d)) {
      std::vector<std::string> here;
      for (const auto& e : fs::directory_iterator(d))
        if (e.path().extension() == ".json") here.push_back(e.path().string());
      std::sort(here.begin(), here.end());
      out.insert(out.end(), here.begin(), here.end());
    } else {
      out.push_back(d);
    }
  }
  if (out.empty()) throw UsageError("no module descriptions found");
  return out;
}

int run_command(const std::string& cmd, Options o, const std::string& argv_echo) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> files = cmd == "corpus" ? corpus_files(o.files) : o.files;
  if (files.empty()) throw UsageError(cmd + ": no module file given");
  o.files = files;
  std::vector<ModuleDescription> descs;
  for (const auto& f : files) descs.push_back(parse_module(f));
  std::vector<ModuleRun> runs(descs.size());
  // Batch mode: modules in parallel, each pipeline sequential.
  Options inner = o;
  unsigned outer = 1;
  if (descs.size() > 1) {
    outer = o.jobs;
    inner.jobs = 1;
  }
  parallel_for(descs.size(), outer, [&](std::size_t k) { runs[k] = run_module(cmd, descs[k], inner); });

  Json report;
  report["tool"] = "dworkbench";
  report["version"] = "0.1.0";
  report["command"] = cmd;
  report["arguments"] = argv_echo;
  report["timestamp"] = timestamp();
  Json cfg;
  cfg["order"] = o.order_set ? Json(o.order) : Json("per-module");
  cfg["growth_order"] = o.growth_set ? Json(o.growth_order) : Json("per-module");
  cfg["iterates"] = o.iterates_set ? Json(o.iterates) : Json("per-module");
  cfg["precision"] = o.precision ? Json(std::to_string(o.precision)) : Json("auto: v_p(S!) + 64");
  cfg["growth_precision"] = o.growth_precision ? Json(std::to_string(o.growth_precision)) : Json("auto: v_p(S_growth!) + 64");
  cfg["tolerance_growth"] = fixed(o.tol_growth, 4);
  cfg["eps_conv"] = fixed(SolverConfig{}.eps_conv, 4);
  cfg["radius_fit_tolerance"] = fixed(RadiusConfig{}.fit_tol, 6);
  cfg["seed"] = std::to_string(o.seed);
  report["config"] = cfg;
  Json mods = Json::array();
  Verdict all = Verdict::kPass;
  std::size_t pass = 0, fail = 0, inconc = 0;
  for (auto& r : runs) {
    if (o.timing) r.json["seconds"] = fixed(r.seconds, 3);
    mods.push_back(r.json);
    all = worst(all, r.verdict);
    (r.verdict == Verdict::kPass ? pass : r.verdict == Verdict::kFail ? fail : inconc)++;
    std::cout << r.text << "  => " << to_string(r.verdict) << "\n";
  }
  report["modules"] = mods;
  report["rollup"] = {{"pass", pass}, {"fail", fail}, {"inconclusive", inconc}, {"verdict", to_string(all)}};
  if (o.timing) report["seconds"] = fixed(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 3);
  std::cout << cmd << ": " << pass << " PASS, " << fail << " FAIL, " << inconc << " INCONCLUSIVE => " << to_string(all) << "\n";
  if (!o.out.empty()) {
    std::ofstream out(o.out);
    if (!out) throw UsageError("cannot write " + o.out);
    out << report.dump(2) << "\n";
  }
  return exit_code(all);
}

void split_list(const std::string& v, std::vector<std::string>& out) {
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dworkbench: p-adic differential modules, log-growth and radii"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "horizontal section from an initial vector (--alpha)"},
      {"h0", "basis of convergent horizontal sections"},
      {"growth", "log-growth orders of the H^0 basis at --growth-order"},
      {"radii", "subsidiary radii at --rho (1 = boundary extrapolation)"},
      {"fprofile", "F_i(M, r) profile on --rho-grid, optional CSV/SVG"},
      {"construct-l", "solvable submodule L and the Condition (D) witness"},
      {"verify-dwork", "Dwork's bound delta <= m - 1 for solvable modules"},
      {"verify-conjecture", "full pipeline: bounds, radii hypothesis, Condition (D)"},
      {"corpus", "run the bundled corpus (or given files/directories) with expectations"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("modules", o.files, "module description files");
    s->add_option("--out", o.out, "write the JSON report here");
    s->add_option("--order", o.order, "solver order S")->check(CLI::Range(8, 1000000))->each([&](const std::string&) { o.order_set = true; });
    s->add_option("--growth-order", o.growth_order, "growth window end S_growth")->check(CLI::Range(8, 10000000))->each([&](const std::string&) {
      o.growth_set = true;
    });
    s->add_option("--iterates", o.iterates, "iterate depth T for radii")->check(CLI::Range(8, 100000))->each([&](const std::string&) {
      o.iterates_set = true;
    });
    s->add_option("--precision", o.precision, "p-adic precision for the solve (default v_p(S!) + 64)")->check(CLI::Range(1, 100000000));
    s->add_option("--growth-precision", o.growth_precision, "p-adic precision for the growth solve")->check(CLI::Range(1, 100000000));
    s->add_option_function<std::string>("--rho", [&o](const std::string& v) { split_list(v, o.rho); }, "radius samples: 1, p^-1/4, 0.5");
    s->add_option_function<std::string>("--rho-grid", [&o](const std::string& v) { split_list(v, o.rho_grid); }, "radius grid for fprofile");
    s->add_option_function<std::string>("--alpha", [&o](const std::string& v) { split_list(v, o.alpha); }, "initial vector for solve, rationals");
    s->add_option("--tolerance-growth", o.tol_growth, "tolerance on growth bounds")->check(CLI::Range(0.0, 10.0));
    s->add_option("--seed", o.seed, "seed for randomized checks");
    s->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1, 1024));
    s->add_option("--csv", o.csv, "fprofile CSV output (file or directory)");
    s->add_option("--svg", o.svg, "fprofile SVG output (file or directory)");
    s->add_flag("--timing", o.timing, "include timings in the report");
    subs.push_back(s);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  std::string cmd;
  for (auto* s : subs)
    if (s->parsed()) cmd = s->get_name();
  std::string echo;
  for (int i = 1; i < argc; ++i) echo += (i > 1 ? " " : "") + std::string(argv[i]);
  try {
    return run_command(cmd, o, echo);
  } catch (const DescriptionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

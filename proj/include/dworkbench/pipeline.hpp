#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diffmod.hpp"
#include "radii.hpp"

namespace dwb {

struct PipelineConfig {
  SolverConfig solver;
  std::int64_t growth_order = 10000;
  RadiusConfig radii;
  std::int64_t precision = 0;         // 0: v_p(S!) + 64 for the solve order
  std::int64_t growth_precision = 0;  // 0: v_p(S_growth!) + 64
  double tol_growth = 0.1;
  bool run_radii = true;
};

inline std::int64_t auto_precision(std::uint64_t p, std::int64_t order) { return factorial_valuation(order, p) + 64; }

inline std::int64_t solve_precision(const PipelineConfig& cfg, std::uint64_t p) {
  return cfg.precision > 0 ? cfg.precision : auto_precision(p, cfg.solver.order);
}

inline std::int64_t growth_precision(const PipelineConfig& cfg, std::uint64_t p) {
  return cfg.growth_precision > 0 ? cfg.growth_precision : auto_precision(p, cfg.growth_order);
}

// Componentwise max of the log-growth estimate over the coordinates.
inline double growth_order(const HorizontalSection& s) { return s.growth.delta; }

struct DworkBound {
  bool applicable = false;
  Verdict verdict = Verdict::kPass;
  double bound = 0;  // m - 1
  double tol = 0.1;
  std::vector<double> deltas;
  std::vector<FilMembership> membership;  // worst coordinate per section
  std::int64_t window_lo = 0, window_hi = 0;
};

// Re-solves the H^0 basis at the growth order from its initial vectors.
inline std::vector<HorizontalSection> growth_sections(const DifferentialModule<RationalField>& m, const H0Result& h0,
                                                      const PipelineConfig& cfg) {
  std::vector<HorizontalSection> out(h0.sections.size());
  if (out.empty()) return out;
  const std::int64_t prec = growth_precision(cfg, m.prime());
  auto mp = to_padic(m, prec, cfg.growth_order + 1);
  PadicField f = mp.field();
  parallel_for(out.size(), cfg.solver.jobs, [&](std::size_t k) {
    std::vector<PadicNumber> init;
    for (const auto& x : h0.sections[k].initial) {
      auto q = reconstruct(x);
      init.push_back(x.is_exact() || !q ? x : f.from_rational(*q));
    }
    out[k] = horizontal_solve(mp, init, cfg.growth_order, cfg.solver);
  });
  return out;
}

inline DworkBound verify_dwork_bound(std::size_t m, std::size_t n, const std::vector<HorizontalSection>& sections, const PadicField& f,
                                     double tol) {
  DworkBound out;
  out.tol = tol;
  out.bound = static_cast<double>(m) - 1;
  out.applicable = n == m;
  if (!out.applicable) return out;
  for (const auto& s : sections) {
    out.deltas.push_back(growth_order(s));
    out.window_lo = s.growth.lo;
    out.window_hi = s.growth.hi;
    FilMembership worst;
    worst.verdict = Verdict::kPass;
    worst.stabilized = true;
    for (const auto& c : s.coords) {
      // sup |a_i| / (i+1)^(m-1) < +infinity: only stabilization can fail.
      auto fm = fil_membership(c, out.bound, INFINITY, f);
      if (fm.verdict != Verdict::kPass || fm.log_sup > worst.log_sup) {
        if (worst.verdict == Verdict::kPass || fm.verdict != Verdict::kPass) worst = fm;
      }
    }
    out.membership.push_back(worst);
    if (growth_order(s) > out.bound + tol) out.verdict = Verdict::kFail;
    else if (worst.verdict == Verdict::kInconclusive && out.verdict == Verdict::kPass) out.verdict = Verdict::kInconclusive;
    if (s.verdict == Convergence::kInconclusive && out.verdict == Verdict::kPass) out.verdict = Verdict::kInconclusive;
  }
  return out;
}

struct ConditionDWitness {
  enum class Branch { kZero, kIdentity, kGeneric };
  Branch branch = Branch::kZero;
  Verdict status = Verdict::kPass;
  std::size_t n = 0;
  DifferentialModule<PadicField> l;
  SeriesMatrix<PadicField> phi;    // m x n, columns are the images of L's basis
  SeriesMatrix<PadicField> theta;  // n x n, with Phi theta = phi on the window
  SeriesVector<PadicField> e;      // f_1 ^ ... ^ f_n, normalized to sup norm 1
  SeriesMatrix<PadicField> delta;  // x -> x ^ e
  std::optional<mpq_class> e_log_sup;
  std::int64_t e_sup_coordinate = -1, e_sup_index = -1;
  bool e_horizontal = true, e_bounded = true, rank_ok = true, d_stable = true;
  bool diagram_commutes = true, theta_convergent = true;
  std::optional<mpq_class> theta_lambda;
  std::size_t l_h0_dimension = 0;
  std::vector<std::string> messages;
};

inline const char* to_string(ConditionDWitness::Branch b) {
  switch (b) {
    case ConditionDWitness::Branch::kZero: return "zero";
    case ConditionDWitness::Branch::kIdentity: return "identity";
    case ConditionDWitness::Branch::kGeneric: return "generic";
  }
  return "?";
}

namespace detail {

inline SeriesMatrix<PadicField> columns_to_matrix(const std::vector<SeriesVector<PadicField>>& cols, std::size_t rows) {
  SeriesMatrix<PadicField> a(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) a.set_column(j, cols[j]);
  return a;
}

inline bool zero_on_window(const SeriesMatrix<PadicField>& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a(i, j).is_zero()) return false;
  return true;
}

inline LogValue lambda_of(const SeriesMatrix<PadicField>& a, const PadicField& f) {
  LogValue out;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto& s = a(i, j);
      std::int64_t hi = s.is_exact() ? std::max<std::int64_t>(s.size(), 8) : s.valid() - 1;
      std::int64_t lo = std::max<std::int64_t>(1, hi / 4);
      if (hi < lo) continue;
      auto g = growth_profile(s, lo, hi, f);
      if (g.lambda && (!out || *g.lambda > *out)) out = g.lambda;
    }
  return out;
}

// Solves X with A X = B column by column.
inline std::optional<SeriesMatrix<PadicField>> solve_columns(const SeriesMatrix<PadicField>& a, const SeriesMatrix<PadicField>& b,
                                                             const PadicField& f, std::int64_t order, std::string* why) {
  SeriesMatrix<PadicField> x(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto sol = solve_linear(a, b.column(j), f, order);
    if (!sol.solvable) {
      if (why) *why = sol.reason;
      return std::nullopt;
    }
    x.set_column(j, sol.x);
  }
  return x;
}

}  // namespace detail

// Builds (L, phi, theta): L is the kernel of x -> x ^ e with e = f_1 ^ ... ^ f_n.
inline ConditionDWitness construct_condition_d(const DifferentialModule<PadicField>& m, const H0Result& h0, const SolverConfig& cfg) {
  ConditionDWitness w;
  const std::size_t dim = m.rank(), n = h0.n;
  const auto& f = m.field();
  w.n = n;
  const std::int64_t order = cfg.order + 1;
  std::vector<SeriesVector<PadicField>> secs;
  for (const auto& s : h0.sections) secs.push_back(s.coords);
  auto fmat = detail::columns_to_matrix(secs, dim);
  if (n == 0) {
    w.branch = ConditionDWitness::Branch::kZero;
    w.l = DifferentialModule<PadicField>(f, SeriesMatrix<PadicField>(0, 0), "0");
    w.phi = SeriesMatrix<PadicField>(dim, 0);
    w.messages.push_back("H^0 = 0: witness (0, 0, 0)");
    return w;
  }
  if (n == dim) {
    w.branch = ConditionDWitness::Branch::kIdentity;
    w.l = m;
    w.phi = identity_matrix(dim, f);
    std::string why;
    auto th = detail::solve_columns(fmat, w.phi, f, order, &why);
    if (!th) {
      w.diagram_commutes = false;
      w.status = Verdict::kFail;
      w.messages.push_back("fundamental matrix not invertible: " + why);
      return w;
    }
    w.theta = *th;
    w.l_h0_dimension = n;
  } else {
    w.branch = ConditionDWitness::Branch::kGeneric;
    w.e = wedge_vectors(secs, dim, f);
    auto wm = wedge_power(m, n);
    w.e_horizontal = is_zero_vector(apply_d(wm, w.e));
    // Sup norm at rho = 1, then divide by the first coefficient attaining it.
    std::int64_t at_c = -1, at_i = -1;
    for (std::size_t i = 0; i < w.e.size(); ++i) {
      auto g = gauss_norm(w.e[i], mpq_class(0), f);
      if (g.at_boundary || g.precision_limited) w.e_bounded = false;
      if (g.log_value && (!w.e_log_sup || *g.log_value > *w.e_log_sup)) {
        w.e_log_sup = g.log_value;
        at_c = static_cast<std::int64_t>(i);
        at_i = g.index;
      }
    }
    w.e_sup_coordinate = at_c;
    w.e_sup_index = at_i;
    if (!w.e_bounded) w.messages.push_back("e: sup norm at rho = 1 not stabilized on the window");
    if (at_c < 0) {
      w.status = Verdict::kFail;
      w.messages.push_back("e vanishes on the window");
      return w;
    }
    PadicNumber unit = w.e[static_cast<std::size_t>(at_c)][at_i];
    PadicNumber inv = f.from_int(1) / unit;
    for (auto& s : w.e) s = scale(s, inv);

    auto basis_n = wedge_basis(dim, n), basis_n1 = wedge_basis(dim, n + 1);
    w.delta = SeriesMatrix<PadicField>(basis_n1.size(), dim);
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t c = 0; c < basis_n.size(); ++c) {
        if (w.e[c].is_exact_zero()) continue;
        std::vector<std::size_t> idx{j};
        idx.insert(idx.end(), basis_n[c].begin(), basis_n[c].end());
        int sign = sort_sign(idx);
        if (sign == 0) continue;
        std::size_t row = wedge_index(basis_n1, idx);
        w.delta(row, j) = sign > 0 ? w.delta(row, j) + w.e[c] : w.delta(row, j) - w.e[c];
      }
    auto ker = kernel_basis(w.delta, f, order);
    w.rank_ok = ker.size() == n;
    if (!w.rank_ok) {
      w.status = Verdict::kFail;
      w.messages.push_back("kernel of x -> x ^ e has rank " + std::to_string(ker.size()) + ", expected " + std::to_string(n));
      return w;
    }
    w.phi = detail::columns_to_matrix(ker, dim);
    // D-stability: D(l_k) = sum_j C(j, k) l_j.
    SeriesMatrix<PadicField> dl(dim, n);
    for (std::size_t k = 0; k < n; ++k) dl.set_column(k, apply_d(m, ker[k]));
    std::string why;
    auto c = detail::solve_columns(w.phi, dl, f, order, &why);
    if (!c) {
      w.d_stable = false;
      w.status = Verdict::kFail;
      w.messages.push_back("L is not D-stable: " + why);
      return w;
    }
    w.l = DifferentialModule<PadicField>(f, *c, "L");
    auto th = detail::solve_columns(fmat, w.phi, f, order, &why);
    if (!th) {
      w.diagram_commutes = false;
      w.status = Verdict::kFail;
      w.messages.push_back("phi does not factor through the horizontal frame: " + why);
      return w;
    }
    w.theta = *th;
    SolverConfig lc = cfg;
    lc.order = std::min<std::int64_t>(cfg.order, w.l.valid() == kInfinitePrecision ? cfg.order : w.l.valid());
    auto hl = h0_basis(w.l, lc);
    w.l_h0_dimension = hl.n;
    if (hl.n != n) {
      w.status = hl.inconclusive ? Verdict::kInconclusive : Verdict::kFail;
      w.messages.push_back("H^0(L) has dimension " + std::to_string(hl.n));
    }
  }
  // Diagram: Phi theta = phi on the window.
  auto prod = fmat * w.theta;
  SeriesMatrix<PadicField> diff(dim, n);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < n; ++j) diff(i, j) = prod(i, j) - w.phi(i, j);
  w.diagram_commutes = detail::zero_on_window(diff);
  w.theta_lambda = detail::lambda_of(w.theta, f);
  w.theta_convergent = !w.theta_lambda || w.theta_lambda->get_d() <= cfg.eps_conv;
  if (!w.e_horizontal) w.messages.push_back("e is not horizontal on the window");
  if (!w.diagram_commutes) w.messages.push_back("Phi theta differs from phi on the window");
  if (!w.theta_convergent) w.messages.push_back("theta has a divergent entry");
  if (!w.e_horizontal || !w.diagram_commutes || !w.theta_convergent) w.status = Verdict::kFail;
  else if (!w.e_bounded && w.status == Verdict::kPass) w.status = Verdict::kInconclusive;
  return w;
}

struct SectionSummary {
  std::vector<PadicNumber> initial;
  LogValue lambda;
  double delta = 0;
  Convergence verdict = Convergence::kInconclusive;
  std::int64_t window_lo = 0, window_hi = 0;
  bool exact_polynomial = false;
};

struct ConjectureReport {
  std::string label;
  std::uint64_t p = 0;
  std::size_t m = 0, n = 0;
  std::int64_t precision = 0, growth_precision = 0;
  H0Result h0;
  std::vector<SectionSummary> growth;  // basis sections at the growth order
  DworkBound dwork;
  Verdict conjecture = Verdict::kPass;
  bool conjecture_vacuous = false;
  std::optional<BoundaryRadii> radii;
  std::optional<bool> hypothesis;  // R_{m-n}(M,1) < 1, for 0 < n < m
  Verdict transfer = Verdict::kPass;
  bool corank_one_route = false;
  ConditionDWitness condition_d;
  Verdict overall = Verdict::kPass;
  std::vector<std::string> notes;
};

inline Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::kFail || b == Verdict::kFail) return Verdict::kFail;
  if (a == Verdict::kInconclusive || b == Verdict::kInconclusive) return Verdict::kInconclusive;
  return Verdict::kPass;
}

inline SectionSummary summarize(const HorizontalSection& s) {
  SectionSummary out;
  out.initial = s.initial;
  out.lambda = s.growth.lambda;
  out.delta = s.growth.delta;
  out.verdict = s.verdict;
  out.window_lo = s.growth.lo;
  out.window_hi = s.growth.hi;
  out.exact_polynomial = std::all_of(s.coords.begin(), s.coords.end(), [&](const Series<PadicField>& c) {
    return std::all_of(c.coeffs().begin(), c.coeffs().end(), [](const PadicNumber& x) { return x.is_exact(); }) && c.size() < s.order / 2;
  });
  return out;
}

// `m` must carry its series entries to max(S, S_growth) + 1 and T + window.
inline ConjectureReport verify_conjecture(const DifferentialModule<RationalField>& m, const PipelineConfig& cfg) {
  ConjectureReport rep;
  rep.label = m.label();
  rep.p = m.prime();
  rep.m = m.rank();
  rep.precision = solve_precision(cfg, m.prime());
  rep.growth_precision = growth_precision(cfg, m.prime());
  auto mp = to_padic(m, rep.precision, cfg.solver.order + 1);
  rep.h0 = h0_basis(mp, cfg.solver);
  rep.n = rep.h0.n;
  if (rep.h0.inconclusive) rep.overall = Verdict::kInconclusive;

  auto gs = growth_sections(m, rep.h0, cfg);
  for (const auto& s : gs) rep.growth.push_back(summarize(s));
  PadicField gf{m.prime(), rep.growth_precision};
  rep.dwork = verify_dwork_bound(rep.m, rep.n, gs, gf, cfg.tol_growth);
  if (rep.dwork.applicable) rep.overall = combine(rep.overall, rep.dwork.verdict);

  if (rep.n == 0) {
    rep.conjecture_vacuous = true;
  } else {
    double bound = static_cast<double>(rep.n) - 1 + cfg.tol_growth;
    for (const auto& s : gs) {
      if (growth_order(s) > bound) rep.conjecture = Verdict::kFail;
      else if (s.verdict != Convergence::kConvergent && rep.conjecture == Verdict::kPass) rep.conjecture = Verdict::kInconclusive;
    }
  }
  rep.overall = combine(rep.overall, rep.conjecture);

  if (cfg.run_radii) {
    auto mi = iterate_ready(m, cfg.radii);
    auto it = iterate_matrices(mi, cfg.radii.iterates, radius_keep_set(mi, cfg.radii.iterates));
    rep.radii = boundary_radii(mi, it, cfg.radii);
    const auto& b = rep.radii->radii;
    const double tol = cfg.radii.fit_tol;
    bool r1_is_one = std::abs(b[0].log_radius.get_d()) <= tol;
    rep.transfer = (r1_is_one == (rep.n == rep.m)) ? Verdict::kPass : Verdict::kFail;
    rep.overall = combine(rep.overall, rep.transfer);
    if (rep.n > 0 && rep.n < rep.m) {
      rep.hypothesis = b[rep.m - rep.n - 1].log_radius.get_d() < -tol;
      if (!*rep.hypothesis) rep.notes.push_back("R_{m-n}(M,1) < 1 not confirmed; Condition (D) construction attempted anyway");
    }
  }
  if (rep.n >= 1 && rep.n + 1 == rep.m) {
    rep.corank_one_route = true;
    rep.notes.push_back("n = m - 1: R_{m-n}(M,1) = R_1(M,1) < 1 follows from the transfer R_1(M,1) = 1 iff n = m");
  }
  rep.condition_d = construct_condition_d(mp, rep.h0, cfg.solver);
  rep.overall = combine(rep.overall, rep.condition_d.status);
  return rep;
}

}  // namespace dwb

// wsaw: batch front end for enumeration, identity checks, series, diagrams,
// complete-graph and Monte Carlo jobs.  Exit status 0 when every hard
// assertion passes, 1 on an assertion failure, 2 on configuration errors.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wsaw/completegraph.hpp"
#include "wsaw/diagrams.hpp"
#include "wsaw/expansion.hpp"
#include "wsaw/io.hpp"
#include "wsaw/montecarlo.hpp"
#include "wsaw/series.hpp"
#include "wsaw/walks.hpp"

namespace {

using wsaw::io::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  json result = json::object();
  std::vector<std::string> failures;
};

struct Command {
  std::string help;
  json defaults;
  std::function<Outcome(const json&)> run;
};

template <typename T>
T get(const json& cfg, const char* key) {
  if (!cfg.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

wsaw::EnumOptions enum_options(const json& cfg) {
  wsaw::EnumOptions o;
  o.budget = get<double>(cfg, "budget");
  o.workers = get<unsigned>(cfg, "workers");
  return o;
}

wsaw::LatticeConfig lattice(const json& cfg, bool need_torus) {
  const int d = get<int>(cfg, "d");
  const int r = get<int>(cfg, "r");
  const double beta = cfg.contains("beta") ? get<double>(cfg, "beta") : 0.0;
  if (need_torus && r == 0) throw ConfigError("this command needs a torus side r >= 3");
  return r == 0 ? wsaw::LatticeConfig::infinite_lattice(d, beta) : wsaw::LatticeConfig::torus(d, r, beta);
}

void append(std::vector<std::string>& out, const std::vector<std::string>& more, const std::string& prefix = "") {
  for (const auto& s : more) out.push_back(prefix + s);
}

json poly_totals(const wsaw::CoefficientTable& t) {
  json a = json::array();
  for (int n = 0; n <= t.n_max; ++n) a.push_back(wsaw::io::to_json(t.total(n)));
  return a;
}

// ---------------------------------------------------------------------------

Outcome cmd_enumerate(const json& cfg) {
  Outcome o;
  auto lc = lattice(cfg, false);
  auto t = wsaw::enumerate(lc, get<int>(cfg, "n_max"), enum_options(cfg));
  o.result["totals"] = poly_totals(t);
  o.result["table"] = wsaw::io::to_json(t);
  return o;
}

json expansion_failures(const wsaw::ExpansionReport& rep) {
  json a = json::array();
  for (const auto& f : rep.failures)
    a.push_back({{"n", f.n}, {"x", wsaw::io::to_json(f.x)}, {"expected", wsaw::io::to_json(f.expected)},
                 {"got", wsaw::io::to_json(f.got)}});
  return a;
}

Outcome cmd_verify_expansion(const json& cfg) {
  Outcome o;
  const int d = get<int>(cfg, "d"), r = get<int>(cfg, "r"), n_max = get<int>(cfg, "n_max");
  wsaw::PiOptions po;
  po.enumeration = enum_options(cfg);
  po.N_max = get<int>(cfg, "N_max");
  auto record = [&](const char* name, const wsaw::CoefficientTable& c, const wsaw::PiTable& pi) {
    auto rep = wsaw::verify_lace_expansion(c, pi);
    o.result[name] = {{"n_max", rep.n_max},
                      {"checked_sites", rep.checked_sites},
                      {"higher_laces_vanish", wsaw::higher_laces_vanish(pi)},
                      {"notes", rep.notes},
                      {"failures", expansion_failures(rep)}};
    for (const auto& f : rep.failures) o.failures.push_back(std::string(name) + ": mismatch at n=" + std::to_string(f.n));
    append(o.failures, rep.notes, std::string(name) + ": ");
    if (!wsaw::higher_laces_vanish(pi)) o.failures.push_back(std::string(name) + ": laces longer than the walk are nonzero");
  };
  if (r == 0) {
    auto lc = wsaw::LatticeConfig::infinite_lattice(d);
    record("infinite", wsaw::enumerate(lc, n_max, po.enumeration), wsaw::pi_coefficients(lc, n_max, po));
  } else {
    auto c = wsaw::enumerate_both(d, r, n_max, po.enumeration);
    auto pi = wsaw::pi_and_delta(d, r, n_max, po);
    record("infinite", c.infinite, pi.infinite);
    record("torus", c.torus, pi.torus);
  }
  return o;
}

json delta_json(const wsaw::DeltaReport& rep) {
  json terms = json::array();
  for (const auto& t : rep.terms) {
    json S = json::array(), T = json::array(), D = json::array();
    for (std::size_t n = 0; n < t.S.size(); ++n) {
      S.push_back(wsaw::io::to_json(t.S[n]));
      T.push_back(wsaw::io::to_json(t.T[n]));
      D.push_back(wsaw::io::to_json(t.Delta[n]));
    }
    terms.push_back({{"N", t.N}, {"S", S}, {"T", T}, {"Delta", D}});
  }
  return {{"lace_walk_pairs", rep.lace_walk_pairs},
          {"order_violations", rep.order_violations},
          {"inclusion_violations", rep.inclusion_violations},
          {"negative_walks", rep.negative_walks},
          {"terms", terms},
          {"failures", rep.failures}};
}

Outcome cmd_verify_identities(const json& cfg) {
  Outcome o;
  const int d = get<int>(cfg, "d"), r = get<int>(cfg, "r"), n_max = get<int>(cfg, "n_max");
  if (r == 0) throw ConfigError("verify-identities needs a torus side r >= 3");
  const auto betas = get<std::vector<double>>(cfg, "beta_grid");
  wsaw::PiOptions po;
  po.enumeration = enum_options(cfg);
  po.N_max = get<int>(cfg, "N_max");

  auto lift = wsaw::verify_lift_bijection(d, r, std::min(n_max, get<int>(cfg, "lift_n_max")));
  o.result["lift"] = {{"walks", lift.walks}, {"failures", lift.failures}};
  append(o.failures, lift.failures, "lift: ");

  auto c = wsaw::enumerate_both(d, r, n_max, po.enumeration);
  auto bb = wsaw::verify_basic_bounds(c.infinite, c.torus, betas);
  json rows = json::array();
  for (const auto& row : bb.rows)
    rows.push_back({{"n", row.n},
                    {"beta", row.beta},
                    {"c", row.c},
                    {"c_torus", row.c_torus},
                    {"bound", row.bound},
                    {"short_identity", row.short_identity},
                    {"torus_le_infinite", row.torus_le_infinite},
                    {"rough_bound", row.rough_bound}});
  o.result["basic_bounds"] = {{"rows", rows}, {"failures", bb.failures}};
  append(o.failures, bb.failures, "basic bounds: ");

  auto pi = wsaw::pi_and_delta(d, r, n_max, po);
  auto p1z = wsaw::pi1_closed_form_check(c.infinite, pi.infinite);
  auto p1t = wsaw::pi1_closed_form_check(c.torus, pi.torus);
  o.result["pi1_closed_form"] = {{"infinite", p1z.failures}, {"torus", p1t.failures}};
  append(o.failures, p1z.failures, "pi1 Z^d: ");
  append(o.failures, p1t.failures, "pi1 torus: ");

  o.result["delta"] = delta_json(pi.delta);
  append(o.failures, pi.delta.failures, "delta: ");
  auto d1 = wsaw::delta1_closed_form_check(c, pi.delta);
  o.result["delta1_closed_form"] = d1;
  append(o.failures, d1, "delta: ");

  auto inv = wsaw::inverse_identities(c, pi);
  o.result["inverse_identities"] = inv.failures;
  append(o.failures, inv.failures, "inverse: ");

  auto gs = wsaw::gamma_series_check(c.infinite, c.torus, betas);
  o.result["gamma_series"] = {{"dominated", gs.dominated}, {"sums_match", gs.sums_match}, {"failures", gs.failures}};
  append(o.failures, gs.failures, "gamma: ");

  const double z = get<double>(cfg, "z");
  auto fs = wsaw::folding_identity_series(c.infinite, r, betas.front(), z, n_max);
  o.result["folding"] = {{"beta", betas.front()},
                         {"z", z},
                         {"bubble_exact", fs.bubble_exact},
                         {"triangle_exact", fs.triangle_exact},
                         {"max_bubble_gap", fs.max_bubble_gap},
                         {"max_triangle_gap", fs.max_triangle_gap},
                         {"bubble_tail", fs.bubble_tail},
                         {"triangle_tail", fs.triangle_tail},
                         {"failures", fs.failures}};
  append(o.failures, fs.failures, "folding: ");
  return o;
}

Outcome cmd_series(const json& cfg) {
  Outcome o;
  const int d = get<int>(cfg, "d"), r = get<int>(cfg, "r"), n_max = get<int>(cfg, "n_max");
  if (r == 0) throw ConfigError("series needs a torus side r >= 3");
  const double beta = get<double>(cfg, "beta");
  const auto zs = get<std::vector<double>>(cfg, "z_grid");
  const auto ws = get<std::vector<double>>(cfg, "w_grid");
  wsaw::PiOptions po;
  po.enumeration = enum_options(cfg);
  auto c = wsaw::enumerate_both(d, r, n_max, po.enumeration);
  auto ds = wsaw::derived_series(c.infinite, c.torus, beta);
  append(o.failures, ds.failures, "series: ");
  json grid = json::array();
  for (double z : zs) {
    auto chi = ds.chi.evaluate(z), chit = ds.chi_t.evaluate(z), h = ds.h.evaluate(z);
    auto dl = ds.delta(z);
    auto el = wsaw::expected_length(c.torus, beta, z);
    grid.push_back({{"z", z},
                    {"chi", chi.value.real()},
                    {"chi_tail", chi.tail},
                    {"chi_torus", chit.value.real()},
                    {"H", h.value.real()},
                    {"H_tail", h.tail},
                    {"F", ds.F(z).value.real()},
                    {"phi", ds.phi(z).value.real()},
                    {"Delta", dl.value.real()},
                    {"Delta_error", dl.error},
                    {"pole", dl.pole},
                    {"expected_length", {el.lo, el.hi}}});
  }
  o.result["grid"] = grid;
  if (get<bool>(cfg, "with_delta")) {
    po.N_max = -1;
    auto pi = wsaw::pi_and_delta(d, r, n_max, po);
    auto inv = wsaw::inverse_identities(c, pi);
    append(o.failures, inv.failures, "inverse: ");
    json dg = json::array();
    for (const auto& p : wsaw::delta_grid(ds, pi.delta, zs)) {
      dg.push_back({{"z", p.z},
                    {"phi_minus_F", p.phi_minus_F},
                    {"error", p.error_reciprocal},
                    {"alternating_sum", p.alternating_sum},
                    {"tail", p.tail_alternating},
                    {"certified", p.certified},
                    {"consistent", p.consistent}});
      if (!p.consistent) o.failures.push_back("Delta aggregations disagree at z=" + wsaw::io::format_real(p.z));
    }
    o.result["delta_grid"] = dg;
  }
  auto cz = wsaw::evaluated_totals(c.infinite, beta), ct = wsaw::evaluated_totals(c.torus, beta);
  json growth = json::object();
  std::optional<wsaw::GrowthEstimate> g_inf;
  if (cz.size() >= 6) {
    for (auto [name, seq] : {std::pair{"infinite", &cz}, std::pair{"torus", &ct}}) {
      auto g = wsaw::estimate_growth(*seq);
      growth[name] = {{"mu_hat", g.mu_hat}, {"A_hat", g.A_hat}, {"residual", g.residual}, {"window", {g.window_lo, g.window_hi}}};
      if (std::string(name) == "infinite") g_inf = g;
    }
  }
  o.result["growth"] = growth;
  json hut = json::object();
  for (auto [name, seq] : {std::pair{"infinite", &cz}, std::pair{"torus", &ct}}) {
    auto h = wsaw::hutchcroft_bound_check(*seq, zs, ws);
    hut[name] = {{"refused", h.refused}, {"refusal", h.refusal}, {"checked", h.checked}, {"violated", h.violated},
                 {"undecidable", h.undecidable}, {"min_log_margin", std::isfinite(h.min_log_margin) ? json(h.min_log_margin) : json()}};
    if (!h.ok()) o.failures.push_back(std::string("submultiplicative bound on ") + name + ": " + (h.refused ? h.refusal : "violated"));
  }
  o.result["hutchcroft"] = hut;
  if (g_inf) {
    // H against the Tauberian shape b = 2, c = 1 at R = 1/mu_hat (truncated polynomial, report only).
    const double R = 1.0 / g_inf->mu_hat;
    const auto& hc = ds.h.coeffs;
    auto f = [&](std::complex<double> z) {
      std::complex<double> acc = 0;
      for (auto it = hc.rbegin(); it != hc.rend(); ++it) acc = acc * z + *it;
      return acc;
    };
    const double K1 = wsaw::sample_k1(f, R, 2, 1);
    if (K1 > 0) {
      auto tb = wsaw::tauberian_check(hc, R, 2, 1, K1);
      o.result["tauberian_H"] = {{"R", R}, {"K1", K1}, {"K2", tb.K2}, {"finite", tb.finite}, {"stable", tb.stable}, {"certified", false}};
    }
  }
  return o;
}

Outcome cmd_plateau(const json& cfg) {
  Outcome o;
  const int d = get<int>(cfg, "d"), r = get<int>(cfg, "r");
  if (r == 0) throw ConfigError("plateau needs a torus side r >= 3");
  auto rep = wsaw::plateau_beta0(d, r, get<std::vector<double>>(cfg, "z_fracs"), get<double>(cfg, "rho_cap"),
                                 get<double>(cfg, "tolerance"));
  json pts = json::array();
  for (const auto& p : rep.points)
    pts.push_back({{"z", p.z},
                   {"z_over_zc", p.z_over_zc},
                   {"chi", p.chi},
                   {"rho_min", p.rho_min},
                   {"rho_max", p.rho_max},
                   {"far_sites", p.far_sites},
                   {"gamma_rel", p.folding.gamma_rel},
                   {"bubble_rel", p.folding.bubble_rel},
                   {"triangle_rel", p.folding.triangle_rel},
                   {"sum_rel", p.folding.sum_rel},
                   {"copy_tail", p.folding.copy_tail}});
  o.result["V"] = rep.V;
  o.result["points"] = pts;
  append(o.failures, rep.failures);
  const double beta = get<double>(cfg, "beta");
  const int n_max = get<int>(cfg, "n_max");
  if (beta > 0 && n_max > 0) {
    auto c = wsaw::enumerate_both(d, r, n_max, enum_options(cfg));
    json tr = json::array();
    for (double f : get<std::vector<double>>(cfg, "z_fracs_truncated")) {
      auto p = wsaw::plateau_truncated(c.infinite, c.torus, beta, f / (2.0 * d));
      tr.push_back({{"z", p.z}, {"rho_lo", p.rho_lo}, {"rho_hi", p.rho_hi}, {"decided_positive", p.decided_positive}});
    }
    o.result["truncated"] = tr;
  }
  return o;
}

Outcome cmd_psi(const json& cfg) {
  Outcome o;
  const int d = get<int>(cfg, "d");
  const double z = get<double>(cfg, "z_frac") / (2.0 * d);
  auto rep = wsaw::psi_report(d, z, get<std::vector<int>>(cfg, "r_list"));
  json pts = json::array();
  for (const auto& p : rep.points)
    pts.push_back({{"r", p.r}, {"psi0", p.psi0}, {"psi_tilde0", p.psi_tilde0}, {"psi_g_l2", p.psi_g_l2}});
  o.result = {{"z", z},
              {"points", pts},
              {"slope_psi0", rep.exponent_psi0},
              {"slope_psi_g", rep.exponent_psi_g},
              {"reference_slope", rep.expected_exponent}};
  return o;
}

Outcome cmd_complete_graph(const json& cfg) {
  Outcome o;
  wsaw::CompleteGraphModel K(get<std::int64_t>(cfg, "V"));
  const auto n = get<std::int64_t>(cfg, "n");
  o.result["cnK"] = wsaw::cnK(K, n).str();
  if (n > 0 && n <= K.v()) {
    json ratios = json::object();
    for (auto f : {wsaw::AsymptoticForm::literal, wsaw::AsymptoticForm::quadratic, wsaw::AsymptoticForm::stirling}) {
      auto a = wsaw::asymptotic_ratio(K, n, f);
      ratios[wsaw::to_string(f)] = a.boundary ? json("boundary") : json(a.ratio);
    }
    o.result["asymptotic_ratio"] = ratios;
  }
  const double alpha = get<double>(cfg, "alpha");
  json sweep = json::array();
  double prev = 0;
  for (double vz : get<std::vector<double>>(cfg, "Vz_grid")) {
    const double z = vz / static_cast<double>(K.V);
    auto c = wsaw::chiK_and_phase(K, z, alpha);
    sweep.push_back({{"z", z}, {"Vz", vz}, {"log_chi", c.log_chi}, {"chi", c.log_domain ? json() : json(c.chi)},
                     {"phase", wsaw::to_string(c.phase)}, {"expected_length", c.expected_length}});
    if (c.log_chi < prev) o.failures.push_back("chi^K not monotone in z");
    prev = c.log_chi;
  }
  o.result["sweep"] = sweep;
  // Submultiplicative bound on the first terms of c^K.
  std::vector<double> a;
  for (std::int64_t k = 0; k <= std::min<std::int64_t>(K.v(), 40); ++k) a.push_back(wsaw::cnK(K, k).convert_to<double>());
  const bool finite = K.v() <= 40;
  const double w0 = 0.5 / static_cast<double>(K.V);
  auto h = wsaw::hutchcroft_bound_check(a, {w0, 2 * w0}, {w0}, finite);
  o.result["hutchcroft"] = {{"checked", h.checked}, {"violated", h.violated}, {"undecidable", h.undecidable}};
  if (!h.ok()) o.failures.push_back("submultiplicative bound failed on c^K");
  return o;
}

json estimate_json(const wsaw::MCEstimate& e) {
  return {{"mean", e.mean}, {"stderr", e.stderr_}, {"n_samples", e.n_samples}, {"seed", e.seed}};
}

Outcome cmd_mc_direct(const json& cfg) {
  Outcome o;
  auto lc = lattice(cfg, true);
  const int n = get<int>(cfg, "n");
  auto res = wsaw::direct_weight_estimate(lc, n, get<std::uint64_t>(cfg, "samples"), get<std::uint64_t>(cfg, "seed"),
                                          get<unsigned>(cfg, "workers"));
  o.result = {{"est_Z", estimate_json(res.est_Z)}, {"est_T", estimate_json(res.est_T)}, {"est_ratio", estimate_json(res.est_ratio)}};
  if (n < lc.r && res.est_ratio.mean != 1.0) o.failures.push_back("ratio estimator differs from 1 for n < r");
  if (wsaw::walk_extensions(lc.d, n) <= 1e8) {
    auto c = wsaw::enumerate_both(lc.d, lc.r, n, enum_options(cfg));
    const double scale = std::pow(2.0 * lc.d, n);
    const double ez = c.infinite.total(n).evaluate(lc.beta) / scale, et = c.torus.total(n).evaluate(lc.beta) / scale;
    auto zscore = [](double est, double se, double exact) { return se > 0 ? (est - exact) / se : (est == exact ? 0.0 : INFINITY); };
    o.result["exact"] = {{"Z", ez},
                         {"T", et},
                         {"z_score_Z", zscore(res.est_Z.mean, res.est_Z.stderr_, ez)},
                         {"z_score_T", zscore(res.est_T.mean, res.est_T.stderr_, et)}};
  }
  return o;
}

Outcome cmd_mc_bs(const json& cfg) {
  Outcome o;
  auto lc = lattice(cfg, true);
  wsaw::ChainOptions opt;
  opt.z = get<double>(cfg, "z");
  opt.steps = get<std::uint64_t>(cfg, "steps");
  opt.burn_in = get<std::uint64_t>(cfg, "burn_in");
  opt.seed = get<std::uint64_t>(cfg, "seed");
  auto res = wsaw::berretti_sokal(lc, opt);
  o.result = {{"mean_length", estimate_json(res.mean_length)}, {"acceptance", res.acceptance}, {"max_length", res.max_seen}};
  const int n_oracle = get<int>(cfg, "oracle_n_max");
  if (n_oracle > 0) {
    auto tt = wsaw::enumerate(lc, n_oracle, enum_options(cfg));
    auto el = wsaw::expected_length(tt, lc.beta, opt.z);
    o.result["series_expected_length"] = {el.lo, el.hi};
    const double se = res.mean_length.stderr_;
    const double gap = std::max({0.0, el.lo - res.mean_length.mean, res.mean_length.mean - el.hi});
    o.result["z_score"] = se > 0 ? gap / se : 0.0;
  }
  return o;
}

Outcome cmd_dilute_probe(const json& cfg) {
  Outcome o;
  auto lc = lattice(cfg, true);
  auto rep = wsaw::dilute_probe(lc, get<std::vector<int>>(cfg, "n_list"), get<std::uint64_t>(cfg, "samples"),
                                get<std::uint64_t>(cfg, "seed"), get<unsigned>(cfg, "workers"));
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"n", r.n},
                    {"R", r.ratio.mean},
                    {"stderr", r.ratio.stderr_},
                    {"one_minus_R", r.one_minus_R},
                    {"beta_n2_over_V", r.beta_n2_over_V},
                    {"exact_one", r.exact_one},
                    {"within", r.within}});
  o.result["rows"] = rows;
  append(o.failures, rep.failures);
  return o;
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"enumerate", {"exact c_n(x) or c_n^T(x) table", {{"d", 2}, {"r", 0}, {"n_max", 6}}, cmd_enumerate}},
      {"verify-expansion",
       {"lace-expansion recursion on Z^d (and the torus when r > 0)",
        {{"d", 1}, {"r", 0}, {"n_max", 6}, {"N_max", -1}},
        cmd_verify_expansion}},
      {"verify-identities",
       {"lift bijection, basic bounds, one-loop closed forms, Delta = T - S, folding",
        {{"d", 2}, {"r", 3}, {"n_max", 6}, {"N_max", -1}, {"lift_n_max", 6}, {"beta_grid", {0.1, 0.5, 1.0}}, {"z", 0.05}},
        cmd_verify_identities}},
      {"series",
       {"chi, chi^T, H, F, phi, Delta grids with bound checkers",
        {{"d", 2}, {"r", 3}, {"n_max", 8}, {"beta", 0.2}, {"z_grid", {0.02, 0.05, 0.1}}, {"w_grid", {0.02, 0.05}}, {"with_delta", true}},
        cmd_series}},
      {"plateau",
       {"beta = 0 plateau suite (and truncated beta > 0 intervals)",
        {{"d", 5}, {"r", 5}, {"z_fracs", {0.5, 0.8, 0.9, 0.95}}, {"rho_cap", 10.0}, {"tolerance", 1e-10}, {"beta", 0.0}, {"n_max", 0},
         {"z_fracs_truncated", {0.1, 0.2}}},
        cmd_plateau}},
      {"psi", {"Psi_z(0), tilde Psi_z(0), ||Psi_z G_z|| at beta = 0", {{"d", 5}, {"z_frac", 0.9}, {"r_list", {5, 7, 9}}}, cmd_psi}},
      {"complete-graph",
       {"complete-graph counts, asymptotics and susceptibility sweep",
        {{"V", 10001}, {"n", 100}, {"alpha", 0.6}, {"Vz_grid", {0.5, 0.9, 0.99, 1.0, 1.01, 1.1}}},
        cmd_complete_graph}},
      {"mc-direct",
       {"direct-weight estimates of c_n and c_n^T",
        {{"d", 2}, {"r", 3}, {"beta", 0.1}, {"n", 4}, {"samples", 1000000}},
        cmd_mc_direct}},
      {"mc-bs",
       {"variable-length chain for the expected length",
        {{"d", 1}, {"r", 3}, {"beta", 1.0}, {"z", 0.1}, {"steps", 2000000}, {"burn_in", 10000}, {"oracle_n_max", 12}},
        cmd_mc_bs}},
      {"dilute-probe",
       {"paired ratio c_n^T / c_n by Monte Carlo",
        {{"d", 5}, {"r", 3}, {"beta", 0.05}, {"n_list", {1, 2, 3, 5, 8, 11, 15}}, {"samples", 200000}},
        cmd_dilute_probe}},
  };
  return table;
}

json common_defaults() { return {{"seed", 1}, {"workers", 1}, {"budget", 17179869184.0}}; }

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weakly self-avoiding walk on Z^d and the torus: exact expansions and checks"};
  app.require_subcommand(1);
  std::string config_path, out_path, seed, workers, budget;
  std::vector<std::string> sets;
  bool print_config = false;
  app.add_option("--config", config_path, "JSON job file");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--workers", workers, "worker threads");
  app.add_option("--budget", budget, "walk-extension budget for exact enumeration");
  app.add_option("--set", sets, "override a key: key=value (value parsed as JSON)");
  app.add_flag("--print-effective-config", print_config, "print the merged configuration and exit");
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, cmd] : commands()) subs[name] = app.add_subcommand(name, cmd.help)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  std::string name;
  for (const auto& [n, s] : subs)
    if (s->parsed()) name = n;
  const auto& cmd = commands().at(name);

  json cfg = cmd.defaults;
  const json common = common_defaults();
  for (const auto& [k, v] : common.items()) cfg[k] = v;
  json report;
  try {
    std::set<std::string> allowed;
    for (const auto& [k, v] : cfg.items()) allowed.insert(k);
    allowed.insert("command");
    auto merge = [&](const std::string& k, const json& v) {
      if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' for " + name);
      cfg[k] = v;
    };
    if (!config_path.empty()) {
      json file;
      try {
        file = wsaw::io::read_json_file(config_path);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
      } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
      }
      if (!file.is_object()) throw ConfigError("config must be a JSON object");
      if (file.contains("command") && file["command"] != name) throw ConfigError("config is for a different command");
      for (const auto& [k, v] : file.items())
        if (k != "command") merge(k, v);
    }
    for (const auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value");
      merge(s.substr(0, eq), parse_value(s.substr(eq + 1)));
    }
    if (!seed.empty()) merge("seed", parse_value(seed));
    if (!workers.empty()) merge("workers", parse_value(workers));
    if (!budget.empty()) merge("budget", parse_value(budget));
    if (print_config) {
      std::cout << json{{"command", name}, {"config", cfg}}.dump(2) << "\n";
      return 0;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out = cmd.run(cfg);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report = {{"tool_version", wsaw::io::kToolVersion},
              {"command", name},
              {"config_hash", wsaw::io::config_hash(cfg)},
              {"config", cfg},
              {"ok", out.failures.empty()},
              {"failures", out.failures},
              {"result", out.result}};
    if (out_path.empty()) {
      std::cout << report.dump(2) << "\n";
    } else {
      wsaw::io::write_text_file(out_path, report.dump(2) + "\n");
      std::time_t now = std::time(nullptr);
      char stamp[32];
      std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      json meta = {{"finished", stamp}, {"elapsed_seconds", elapsed}};
      wsaw::io::write_text_file(out_path + ".meta.json", meta.dump(2) + "\n");
    }
    return out.failures.empty() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const wsaw::BudgetExceeded& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json fail = {{"tool_version", wsaw::io::kToolVersion},
                 {"command", name},
                 {"config_hash", wsaw::io::config_hash(cfg)},
                 {"ok", false},
                 {"failures", {std::string("aborted: ") + e.what()}}};
    std::cerr << fail.dump(2) << "\n";
    return 1;
  }
}

#include "tdirac/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "tdirac/io.hpp"
#include "tdirac/littlewood_paley.hpp"
#include "tdirac/norms.hpp"
#include "tdirac/sampling.hpp"
#include "tdirac/spectral.hpp"

namespace tdirac::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kConfigKeys = {
    "d",          "lattice_radius",  "dt",          "horizon",          "tolerance",
    "max_iterations", "epsilon",     "sobolev_s",   "mass",             "window",
    "monitor_norms", "nonlinearity", "out",         "seed",             "structural",
    "gamma_override", "defect_budget", "distance_budget", "hs_bound",   "bernstein_constant",
    "tail_rate",  "write_frames",    "verify_points", "verify_radii",   "verify_fields",
    "bernstein_samples", "verify_radius"};

template <class T>
void read_key(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config: bad value for '") + key + "'");
  }
}

int verify_radius(const RunConfig& cfg) {
  if (cfg.structural) return 1;
  if (cfg.verify_radius > 0) return cfg.verify_radius;
  switch (cfg.solve.d) {
    case 1: return 32;
    case 2: return 16;
    case 3: return 8;
    default: return 1;
  }
}

// ----- verify ---------------------------------------------------------------

struct Check {
  std::string name;
  std::string status;
  double error = 0.0;
  double tolerance = 0.0;
  json extra = json::object();
};

Check measured(std::string name, double error, double tolerance, json extra = json::object()) {
  const bool ok = std::isfinite(error) && error <= tolerance;
  return {std::move(name), ok ? "pass" : "fail", error, tolerance, std::move(extra)};
}

Check skipped(std::string name, std::string why) {
  return {std::move(name), "skipped", 0.0, 0.0, {{"reason", std::move(why)}}};
}

json check_json(const Check& c) {
  json j = {{"name", c.name}, {"status", c.status}};
  if (c.status != "skipped") {
    j["error"] = c.error;
    j["tolerance"] = c.tolerance;
    j["margin"] = c.tolerance - c.error;
  }
  for (const auto& [k, v] : c.extra.items()) j[k] = v;
  return j;
}

double frob(const CMatrix& m) { return m.norm(); }

std::vector<std::vector<int>> random_points(int d, int radius, int count, Rng& rng) {
  std::uniform_int_distribution<int> u(-radius, radius);
  std::vector<std::vector<int>> pts(count, std::vector<int>(d));
  for (auto& p : pts) {
    for (int& x : p) x = u(rng);
  }
  return pts;
}

void clifford_checks(const RunConfig& cfg, const GammaSet& g, std::vector<Check>& out) {
  const int d = cfg.solve.d;
  out.push_back(measured("clifford.dimension",
                         (g.d == d && g.d0 == spinor_dimension(d)) ? 0.0 : 1.0, 0.0,
                         {{"d0", g.d0}}));
  out.push_back(measured("clifford.anticommutator", anticommutator_defect(g), 1e-12));
  out.push_back(measured("clifford.hermiticity", hermiticity_defect(g), 1e-12));
  double mink = 0.0;
  const CMatrix id = CMatrix::Identity(g.d0, g.d0);
  for (int mu = 0; mu <= g.d; ++mu) {
    for (int nu = 0; nu <= g.d; ++nu) {
      const double eta = mu != nu ? 0.0 : (mu == 0 ? 2.0 : -2.0);
      mink = std::max(mink, frob(g.gamma[mu] * g.gamma[nu] + g.gamma[nu] * g.gamma[mu] - eta * id));
    }
  }
  out.push_back(measured("clifford.minkowski", mink, 1e-12));
}

void projector_checks(const RunConfig& cfg, const GammaSet& g, std::vector<Check>& out) {
  Rng rng(cfg.seed);
  const auto pts = random_points(g.d, verify_radius(cfg), cfg.verify_points, rng);
  const double m = cfg.solve.mass;
  const CMatrix id = CMatrix::Identity(g.d0, g.d0);
  double sq = 0.0, idem = 0.0, comp = 0.0, orth = 0.0;
  for (const auto& xi : pts) {
    double n2 = m * m;
    for (int x : xi) n2 += static_cast<double>(x) * x;
    const CMatrix s = g.dirac_symbol(xi, m);
    sq = std::max(sq, frob(s * s - n2 * id) / n2);
    const CMatrix p = projector_symbol(g, xi, Sign::plus, m);
    const CMatrix q = projector_symbol(g, xi, Sign::minus, m);
    idem = std::max({idem, frob(p * p - p), frob(q * q - q)});
    comp = std::max(comp, frob(p + q - id));
    orth = std::max({orth, frob(p * q), frob(q * p)});
  }
  const json n = {{"points", cfg.verify_points}};
  out.push_back(measured("projector.symbol_square", sq, 1e-12, n));
  out.push_back(measured("projector.idempotence", idem, 1e-12, n));
  out.push_back(measured("projector.complementarity", comp, 1e-12, n));
  out.push_back(measured("projector.orthogonality", orth, 1e-12, n));
}

double max_abs_diff(const SpinorField& a, const SpinorField& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    e = std::max(e, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  }
  return e;
}

void partition_checks(const RunConfig& cfg, const GammaSet& g, std::vector<Check>& out) {
  Rng rng(cfg.seed + 1);
  std::uniform_real_distribution<double> radius(0.0, 5000.0);
  double tele = 0.0;
  for (int t = 0; t < cfg.verify_radii; ++t) {
    const double s = radius(rng);
    double sum = lp::CutoffProfile::rho(s);
    for (int j = 0; j <= 14; ++j) sum += lp::CutoffProfile::phi_j(j, s);
    tele = std::max(tele, std::abs(sum - 1.0));
  }
  out.push_back(measured("partition.dyadic", tele, 1e-12, {{"radii", cfg.verify_radii}}));

  const int d = g.d;
  const FrequencyLattice lat(d, verify_radius(cfg));
  const int top = static_cast<int>(std::ceil(std::log2(lat.radius() * std::sqrt(d) + 1.0))) + 1;
  double tilde = 0.0, recon = 0.0;
  for (int t = 0; t < cfg.verify_fields; ++t) {
    const SpinorField f = random_field(lat, g.d0, rng);
    SpinorField sum = lp::apply_low(f);
    for (int j = 0; j <= top; ++j) {
      const SpinorField pj = lp::apply_Pj(f, j);
      tilde = std::max(tilde, max_abs_diff(lp::apply_Pj(lp::apply_Pj_tilde(f, j + 1), j), pj));
      sum += pj;
    }
    recon = std::max(recon, max_abs_diff(sum, f));
  }
  out.push_back(measured("partition.tilde", tilde, 1e-12, {{"fields", cfg.verify_fields}}));
  out.push_back(measured("partition.low_plus_annuli", recon, 1e-12));

  if (d > 3) {
    out.push_back(skipped("partition.caps", "cap covers are built for d <= 3"));
    out.push_back(skipped("partition.cubes", "cube sums are checked for d <= 3"));
    return;
  }
  const SpinorField f = random_field(lat, g.d0, rng);
  SpinorField nonzero = f;
  for (int k = 0; k < g.d0; ++k) nonzero.at(lat.size() / 2, k) = 0.0;
  double caps = 0.0;
  for (int l = 0; l <= 2; ++l) {
    const auto cover = lp::build_cap_cover(d, l);
    SpinorField sum(lat, g.d0);
    const auto symbols = lp::cap_symbols(lat, cover);
    for (std::size_t kappa = 0; kappa < cover.size(); ++kappa) sum += lp::apply_Pkappa(f, symbols, kappa);
    caps = std::max(caps, max_abs_diff(sum, nonzero));
  }
  out.push_back(measured("partition.caps", caps, 1e-12, {{"levels", json::array({0, 1, 2})}}));
  double cubes = 0.0;
  for (int k = 0; k <= 2; ++k) {
    const auto cover = lp::build_cube_cover(lat, k);
    SpinorField sum(lat, g.d0);
    for (const auto& n : cover.centers) sum += lp::apply_cube(f, cover, n);
    cubes = std::max(cubes, max_abs_diff(sum, f));
  }
  out.push_back(measured("partition.cubes", cubes, 1e-12, {{"scales", json::array({0, 1, 2})}}));
}

void bernstein_check(const RunConfig& cfg, std::vector<Check>& out) {
  const int d = cfg.solve.d;
  if (cfg.structural || d > 3) {
    out.push_back(skipped("bernstein", "needs a full lattice"));
    return;
  }
  const auto scan = norms::measure_bernstein_constant(d, d == 3 ? 1 : 2, cfg.bernstein_samples, cfg.seed);
  out.push_back(measured("bernstein", scan.violations, 0.0,
                         {{"constant", scan.constant}, {"samples", scan.samples}}));
}

void unitarity_checks(const RunConfig& cfg, const GammaSet& g, std::vector<Check>& out) {
  if (cfg.structural || g.d > 3) {
    out.push_back(skipped("unitarity.half_wave", "solver checks are skipped in structural mode"));
    out.push_back(skipped("unitarity.free_flow", "solver checks are skipped in structural mode"));
    return;
  }
  Rng rng(cfg.seed + 2);
  const FrequencyLattice lat(g.d, verify_radius(cfg));
  const SpinorField f = random_field(lat, g.d0, rng);
  double drift = 0.0;
  for (Sign s : {Sign::plus, Sign::minus}) {
    const SpinorField e = solver::half_wave(f, 1.7, s, cfg.solve.mass);
    drift = std::max(drift, std::abs(e.l2_norm() / f.l2_norm() - 1.0));
  }
  out.push_back(measured("unitarity.half_wave", drift, 1e-13));

  solver::SolveConfig sc;
  sc.d = g.d;
  sc.radius = std::min(lat.radius(), 8);
  sc.dt = 0.05;
  sc.horizon = 1.0;
  sc.mass = cfg.solve.mass;
  const FrequencyLattice small(g.d, sc.radius);
  const SpinorField psi0 = solver::standard_initial_data(small, g.d0, 1.0, 0.5 * g.d, cfg.seed);
  const auto res = solver::picard_solve(sc, psi0, nl::PowerSeriesNonlinearity(g.d0), g);
  const auto data = solver::split(psi0, g, sc.mass);
  double err = 0.0;
  for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
    const double t = res.trajectory.time(k);
    const SpinorField exact = solver::half_wave(data.plus, t, Sign::plus, sc.mass) +
                              solver::half_wave(data.minus, t, Sign::minus, sc.mass);
    err = std::max(err, l2_distance(res.trajectory.frames[k], exact) / psi0.l2_norm());
  }
  out.push_back(measured("unitarity.free_flow", err, 1e-12));
}

// ----- solve helpers --------------------------------------------------------

nl::PowerSeriesNonlinearity load_nonlinearity(const RunConfig& cfg, const GammaSet& g) {
  if (cfg.solve.nonlinearity.empty()) throw UsageError("a nonlinearity file is required");
  if (!fs::exists(cfg.solve.nonlinearity)) {
    throw UsageError("nonlinearity file not found: " + cfg.solve.nonlinearity);
  }
  nl::PowerSeriesNonlinearity F;
  try {
    F = nl::PowerSeriesNonlinearity::load(cfg.solve.nonlinearity);
  } catch (const std::exception& e) {
    throw UsageError(std::string("malformed nonlinearity: ") + e.what());
  }
  if (F.empty() && F.d0() != g.d0) F = nl::PowerSeriesNonlinearity(g.d0);
  if (F.d0() != g.d0) {
    throw UsageError("nonlinearity has d0 = " + std::to_string(F.d0()) + " but d = " +
                     std::to_string(g.d) + " needs d0 = " + std::to_string(g.d0));
  }
  return F;
}

struct Problem {
  GammaSet g;
  nl::PowerSeriesNonlinearity F;
  SpinorField psi0;
};

Problem prepare(const RunConfig& cfg) {
  if (cfg.structural) throw UsageError("structural mode only runs verify and condition-a");
  if (cfg.solve.frames() < 3) throw UsageError("the defect needs at least three frames");
  Problem p{resolve_gamma(cfg), {}, {}};
  p.F = load_nonlinearity(cfg, p.g);
  const FrequencyLattice lat(cfg.solve.d, cfg.solve.radius);
  p.psi0 = solver::standard_initial_data(lat, p.g.d0, cfg.solve.epsilon,
                                         cfg.solve.sobolev_index(), cfg.seed);
  return p;
}

std::vector<double> times_of(const Trajectory& tr) {
  std::vector<double> t(tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) t[k] = tr.time(k);
  return t;
}

json defect_json(const Trajectory& tr, const std::vector<double>& V, double budget) {
  const double rel = solver::relative_defect(tr, V);
  return {{"max", *std::max_element(V.begin(), V.end())},
          {"relative", rel},
          {"budget", budget},
          {"verdict", rel <= budget ? "pass" : "fail"}};
}

void iteration_series(const solver::PicardDiagnostics& diag, std::vector<io::CsvSeries>& rows) {
  for (int w = 0; w < diag.windows; ++w) {
    io::CsvSeries dist{"distance", w, {}, {}};
    io::CsvSeries ratio{"ratio", w, {}, {}};
    for (const auto& r : diag.iterations) {
      if (r.window != w) continue;
      dist.value.push_back(r.distance);
      ratio.value.push_back(r.ratio);
    }
    rows.push_back(std::move(dist));
    rows.push_back(std::move(ratio));
  }
}

}  // namespace

// ----- config ---------------------------------------------------------------

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw UsageError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.count(key)) throw UsageError("config: unknown key '" + key + "'");
  }
  RunConfig c;
  read_key(j, "d", c.solve.d);
  read_key(j, "lattice_radius", c.solve.radius);
  read_key(j, "dt", c.solve.dt);
  read_key(j, "horizon", c.solve.horizon);
  read_key(j, "tolerance", c.solve.tolerance);
  read_key(j, "max_iterations", c.solve.max_iterations);
  read_key(j, "epsilon", c.solve.epsilon);
  read_key(j, "sobolev_s", c.solve.sobolev_s);
  read_key(j, "mass", c.solve.mass);
  read_key(j, "window", c.solve.window);
  read_key(j, "monitor_norms", c.solve.monitor_norms);
  read_key(j, "nonlinearity", c.solve.nonlinearity);
  read_key(j, "out", c.out);
  read_key(j, "seed", c.seed);
  read_key(j, "structural", c.structural);
  if (j.contains("gamma_override") && !j.at("gamma_override").is_null()) {
    c.gamma_override = j.at("gamma_override");
  }
  read_key(j, "defect_budget", c.defect_budget);
  read_key(j, "distance_budget", c.distance_budget);
  read_key(j, "hs_bound", c.hs_bound);
  if (j.contains("bernstein_constant") && !j.at("bernstein_constant").is_null()) {
    double v = 0.0;
    read_key(j, "bernstein_constant", v);
    c.bernstein_constant = v;
  }
  read_key(j, "tail_rate", c.tail_rate);
  read_key(j, "write_frames", c.write_frames);
  read_key(j, "verify_points", c.verify_points);
  read_key(j, "verify_radii", c.verify_radii);
  read_key(j, "verify_fields", c.verify_fields);
  read_key(j, "bernstein_samples", c.bernstein_samples);
  read_key(j, "verify_radius", c.verify_radius);
  return c;
}

json RunConfig::to_json() const {
  json j = solve.to_json();
  j["out"] = out;
  j["seed"] = seed;
  j["structural"] = structural;
  j["gamma_override"] = gamma_override ? *gamma_override : json();
  j["defect_budget"] = defect_budget;
  j["distance_budget"] = distance_budget;
  j["hs_bound"] = hs_bound;
  j["bernstein_constant"] = bernstein_constant ? json(*bernstein_constant) : json();
  j["tail_rate"] = tail_rate;
  j["write_frames"] = write_frames;
  j["verify_points"] = verify_points;
  j["verify_radii"] = verify_radii;
  j["verify_fields"] = verify_fields;
  j["bernstein_samples"] = bernstein_samples;
  j["verify_radius"] = verify_radius;
  return j;
}

void RunConfig::validate() const {
  try {
    solve.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (spinor_dimension(solve.d) > kMaxSpinorDimension) throw UsageError("d too large");
  if (!structural && solve.d > 3 && command != "verify" && command != "condition-a") {
    throw UsageError("d > 3 is only supported in structural mode");
  }
  if (out.empty()) throw UsageError("out directory must not be empty");
  if (verify_points < 1 || verify_radii < 1 || verify_fields < 1 || bernstein_samples < 1) {
    throw UsageError("verify sample counts must be positive");
  }
  if (verify_radius < 0) throw UsageError("verify_radius must be >= 0");
  if (!(defect_budget > 0.0) || !(distance_budget > 0.0) || !(hs_bound > 0.0)) {
    throw UsageError("budgets must be positive");
  }
  if (bernstein_constant && !(*bernstein_constant >= 1.0)) {
    throw UsageError("bernstein_constant must be >= 1");
  }
}

GammaSet resolve_gamma(const RunConfig& cfg) {
  if (!cfg.gamma_override) return build_gamma(cfg.solve.d);
  try {
    return gamma_from_json(*cfg.gamma_override);
  } catch (const std::exception& e) {
    throw UsageError(std::string("gamma_override: ") + e.what());
  }
}

// ----- commands -------------------------------------------------------------

CommandResult cmd_verify(const RunConfig& cfg) {
  const GammaSet g = resolve_gamma(cfg);
  if (g.d != cfg.solve.d) throw UsageError("gamma_override is for a different d");
  std::vector<Check> checks;
  clifford_checks(cfg, g, checks);
  projector_checks(cfg, g, checks);
  partition_checks(cfg, g, checks);
  bernstein_check(cfg, checks);
  unitarity_checks(cfg, g, checks);

  CommandResult r;
  json list = json::array();
  json failed = json::array();
  int n_pass = 0, n_fail = 0, n_skip = 0;
  for (const auto& c : checks) {
    list.push_back(check_json(c));
    if (c.status == "pass") ++n_pass;
    if (c.status == "skipped") ++n_skip;
    if (c.status == "fail") {
      ++n_fail;
      failed.push_back(c.name);
    }
  }
  r.exit_code = n_fail == 0 ? kSuccess : kInvariantFailure;
  r.report = {{"checks", std::move(list)},
              {"failed_checks", std::move(failed)},
              {"summary", {{"pass", n_pass}, {"fail", n_fail}, {"skipped", n_skip}}},
              {"lattice_radius_used", verify_radius(cfg)},
              {"d0", g.d0}};
  return r;
}

CommandResult cmd_solve(const RunConfig& cfg) {
  const Problem p = prepare(cfg);
  const auto res = solver::picard_solve(cfg.solve, p.psi0, p.F, p.g);
  const auto V = solver::dirac_defect(res.trajectory, p.F, p.g, cfg.solve.mass);
  const auto hs = solver::hs_monitor(res.trajectory, cfg.solve.sobolev_index(), cfg.hs_bound);
  const json defect = defect_json(res.trajectory, V, cfg.defect_budget);

  CommandResult r;
  const bool converged = res.status == solver::PicardStatus::converged;
  if (!converged) {
    r.exit_code = kNonConvergence;
  } else {
    r.exit_code = defect["verdict"] == "pass" ? kSuccess : kInvariantFailure;
  }
  r.report = {{"status", solver::status_name(res.status)},
              {"diagnostics", res.diagnostics.to_json()},
              {"defect", defect},
              {"hs_monitor", hs.to_json()},
              {"frames", res.trajectory.size()},
              {"initial_l2", p.psi0.l2_norm()},
              {"nonlinearity", p.F.to_json()}};

  const fs::path out(cfg.out);
  fs::create_directories(out);
  const auto t = times_of(res.trajectory);
  std::vector<io::CsvSeries> rows;
  iteration_series(res.diagnostics, rows);
  rows.push_back({"defect", 0, t, V});
  rows.push_back({"hs", 0, t, hs.series});
  io::save_series_csv(out / "diagnostics.csv", rows);
  if (cfg.write_frames) {
    io::save_trajectory(out / "trajectory", res.trajectory,
                        {{"config", cfg.to_json()},
                         {"status", solver::status_name(res.status)},
                         {"diagnostics", res.diagnostics.to_json()}});
  }
  return r;
}

CommandResult cmd_compare_kg(const RunConfig& cfg) {
  const Problem p = prepare(cfg);
  const double m = cfg.solve.mass;
  const auto dirac = solver::picard_solve(cfg.solve, p.psi0, p.F, p.g);
  CommandResult r;
  r.report["dirac_status"] = solver::status_name(dirac.status);
  r.report["diagnostics"] = dirac.diagnostics.to_json();
  if (dirac.status != solver::PicardStatus::converged) {
    r.exit_code = kNonConvergence;
    return r;
  }
  Trajectory kg;
  try {
    kg = solver::kg_evolve(solver::kg_reduce(p.psi0, p.F, p.g, m), p.F, p.g, m, cfg.solve.dt,
                           cfg.solve.horizon);
  } catch (const std::invalid_argument& e) {
    r.report["kg_error"] = e.what();
    r.exit_code = kNonConvergence;
    return r;
  }
  const double dist = solver::relative_sup_distance(kg, dirac.trajectory);
  const auto Vd = solver::dirac_defect(dirac.trajectory, p.F, p.g, m);
  const auto Vk = solver::dirac_defect(kg, p.F, p.g, m);
  std::vector<double> per_frame(kg.size());
  for (std::size_t k = 0; k < kg.size(); ++k) {
    per_frame[k] = l2_distance(kg.frames[k], dirac.trajectory.frames[k]);
  }
  r.report["distance"] = {{"sup_relative", dist},
                          {"budget", cfg.distance_budget},
                          {"verdict", dist <= cfg.distance_budget ? "pass" : "fail"}};
  r.report["defect_dirac"] = defect_json(dirac.trajectory, Vd, cfg.defect_budget);
  r.report["defect_kg"] = defect_json(kg, Vk, cfg.defect_budget);
  r.report["defect_series"] = {{"dirac", Vd}, {"kg", Vk}};
  r.exit_code = dist <= cfg.distance_budget ? kSuccess : kInvariantFailure;

  const fs::path out(cfg.out);
  fs::create_directories(out);
  const auto t = times_of(kg);
  io::save_series_csv(out / "diagnostics.csv", {{"distance", 0, t, per_frame},
                                                {"defect_dirac", 0, t, Vd},
                                                {"defect_kg", 0, t, Vk}});
  return r;
}

CommandResult cmd_condition_a(const RunConfig& cfg) {
  const GammaSet g = resolve_gamma(cfg);
  const auto F = load_nonlinearity(cfg, g);
  if (F.empty()) throw UsageError("the nonlinearity has no terms");
  nl::ConditionAOptions opt;
  opt.tail_rate = cfg.tail_rate;
  std::string source;
  json scan_json;
  if (cfg.bernstein_constant) {
    opt.bernstein_constant = *cfg.bernstein_constant;
    source = "config";
  } else if (!cfg.structural && g.d <= 3) {
    const auto scan = norms::measure_bernstein_constant(g.d, g.d == 3 ? 1 : 2,
                                                        cfg.bernstein_samples, cfg.seed);
    opt.bernstein_constant = std::max(1.0, scan.constant);
    source = "measured";
    scan_json = scan.to_json();
  } else {
    opt.bernstein_constant = 4.0;
    source = "symbol_bound";
  }
  const auto rep = nl::condition_a_quantities(F, g, opt);
  CommandResult r;
  r.report = rep.to_json();
  r.report["bernstein_source"] = source;
  if (!scan_json.is_null()) r.report["bernstein_scan"] = scan_json;
  r.exit_code = rep.pass ? kSuccess : kConditionAFail;
  return r;
}

CommandResult run_command(const RunConfig& cfg) {
  CommandResult r;
  try {
    cfg.validate();
    if (cfg.command == "verify") {
      r = cmd_verify(cfg);
    } else if (cfg.command == "solve") {
      r = cmd_solve(cfg);
    } else if (cfg.command == "compare-kg") {
      r = cmd_compare_kg(cfg);
    } else if (cfg.command == "condition-a") {
      r = cmd_condition_a(cfg);
    } else {
      throw UsageError("unknown command '" + cfg.command + "'");
    }
  } catch (const UsageError& e) {
    r = {kUsage, {{"error", e.what()}}};
  } catch (const io::FormatError& e) {
    r = {kUsage, {{"error", e.what()}}};
  } catch (const std::exception& e) {
    r = {kInvariantFailure, {{"error", e.what()}}};
  }
  r.report["command"] = cfg.command;
  r.report["config"] = cfg.to_json();
  r.report["exit_code"] = r.exit_code;
  try {
    fs::create_directories(cfg.out);
    io::save_json(fs::path(cfg.out) / "report.json", r.report);
  } catch (const std::exception& e) {
    std::cerr << "could not write report: " << e.what() << '\n';
    if (r.exit_code == kSuccess) r.exit_code = kUsage;
  }
  return r;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Nonlinear Dirac solver on the flat torus: verification, solves and audits"};
  app.require_subcommand(1);

  struct Flags {
    std::string config, out, nonlinearity;
    std::uint64_t seed = 0;
    int d = 0, radius = 0;
    double dt = 0.0, horizon = 0.0, epsilon = 0.0;
    bool structural = false;
  } f;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify", "Run the Clifford, projector, partition, Bernstein and unitarity suites"},
      {"solve", "Picard solve of the Cauchy problem; writes trajectory and diagnostics"},
      {"compare-kg", "Solve both as a first-order system and by the second-order reduction"},
      {"condition-a", "Evaluate the coefficient growth condition for a power series"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
    s->add_option("--out", f.out, "Output directory");
    s->add_option("--seed", f.seed, "Seed for randomized data and suites");
    s->add_option("--d", f.d, "Spatial dimension");
    s->add_option("--lattice-radius", f.radius, "Frequency cutoff N");
    s->add_option("--dt", f.dt, "Frame spacing");
    s->add_option("--horizon", f.horizon, "Final time");
    s->add_option("--epsilon", f.epsilon, "H^s size of the initial data");
    s->add_option("--nonlinearity", f.nonlinearity, "Power-series JSON file");
    s->add_flag("--structural", f.structural, "Radius-1 lattice, solver checks skipped");
    subs.push_back(s);
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kSuccess : kUsage;
  }

  CLI::App* sub = nullptr;
  for (CLI::App* s : subs) {
    if (s->parsed()) sub = s;
  }
  RunConfig cfg;
  try {
    if (!f.config.empty()) cfg = RunConfig::from_json(io::load_json(f.config));
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << '\n';
    return kUsage;
  }
  cfg.command = sub->get_name();
  if (sub->count("--out")) cfg.out = f.out;
  if (sub->count("--seed")) cfg.seed = f.seed;
  if (sub->count("--d")) cfg.solve.d = f.d;
  if (sub->count("--lattice-radius")) cfg.solve.radius = f.radius;
  if (sub->count("--dt")) cfg.solve.dt = f.dt;
  if (sub->count("--horizon")) cfg.solve.horizon = f.horizon;
  if (sub->count("--epsilon")) cfg.solve.epsilon = f.epsilon;
  if (sub->count("--nonlinearity")) cfg.solve.nonlinearity = f.nonlinearity;
  if (sub->count("--structural")) cfg.structural = f.structural;

  const CommandResult r = run_command(cfg);
  const fs::path report = fs::path(cfg.out) / "report.json";
  if (r.report.contains("error")) {
    std::cerr << cfg.command << ": " << r.report["error"].get<std::string>() << '\n';
  }
  std::cout << cfg.command << ": exit " << r.exit_code << ", report " << report.string() << '\n';
  return r.exit_code;
}

}  // namespace tdirac::cli

// Command-line front end: classification, analysis, simulation, stationary
// solves, TV-decay experiments, birth-death oracles, QSS reduction, and the
// canned reproduction runs. All randomized outputs carry an explicit seed and
// embed the run configuration as '#' header lines (CSV) or a "config" object
// (JSON), so identical (config, seed) pairs give byte-identical files.

#include <ctmc1d/experiments.hpp>

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace ctmc1d;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitUnresolved = 3;
constexpr int kExitUsage = 64;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct CsvWriter {
  std::ofstream out;
  CsvWriter(const std::string& dir, const std::string& name,
            const std::map<std::string, std::string>& config,
            const std::string& columns) {
    std::filesystem::create_directories(dir);
    std::string path = dir + "/" + name;
    out.open(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& [k, v] : config) out << "# " << k << "=" << v << "\n";
    out << columns << "\n";
    std::cerr << "wrote " << path << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out << cells[i] << (i + 1 < cells.size() ? "," : "\n");
  }
};

nlohmann::json verdict_json(const Verdict& v) {
  nlohmann::json prov = nlohmann::json::array();
  for (const auto& c : v.provenance) prov.push_back({{"criterion", c.id}, {"fired", c.fired}});
  return {{"explosivity", to_string(v.explosivity)},
          {"recurrence", to_string(v.recurrence)},
          {"ergodicity_speed", to_string(v.ergodicity_speed)},
          {"provenance", prov},
          {"notes", v.notes}};
}

void print_verdict_table(const Verdict& v, const LaurentIndices& ix) {
  // human-readable presentation goes to stderr; stdout stays machine-parseable
  std::fprintf(stderr, "  %-18s %s\n", "R", std::to_string(ix.R).c_str());
  std::fprintf(stderr, "  %-18s %s\n", "alpha", rat_str(ix.alpha).c_str());
  std::fprintf(stderr, "  %-18s %s\n", "gamma", rat_str(ix.gamma).c_str());
  std::fprintf(stderr, "  %-18s %s\n", "theta", rat_str(ix.theta).c_str());
  std::fprintf(stderr, "  %-18s %s\n", "explosivity", to_string(v.explosivity));
  std::fprintf(stderr, "  %-18s %s\n", "recurrence", to_string(v.recurrence));
  std::fprintf(stderr, "  %-18s %s\n", "ergodicity", to_string(v.ergodicity_speed));
  std::string fired;
  for (const auto& c : v.provenance)
    if (c.fired) fired += (fired.empty() ? "" : ", ") + c.id;
  std::fprintf(stderr, "  %-18s %s\n", "fired criteria", fired.c_str());
  for (const auto& n : v.notes) std::fprintf(stderr, "  note: %s\n", n.c_str());
}

std::vector<long> parse_x0_list(const std::string& csv) {
  std::vector<long> out;
  std::string cur;
  for (char ch : csv + ",") {
    if (ch == ',') {
      if (!cur.empty()) {
        std::size_t used = 0;
        long v = 0;
        try {
          v = std::stol(cur, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != cur.size() || v < 0)
          throw std::invalid_argument("--x0 must be a comma-separated list of states");
        out.push_back(v);
      }
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  if (out.empty()) throw std::invalid_argument("--x0 needs at least one state");
  return out;
}

int cmd_classify(const std::string& path, bool strict) {
  CtmcModel m = load_model(path);
  ValidationReport rep = validate(m);
  if (!rep.ok()) {
    for (const auto& e : rep.errors) std::cerr << "validation error: " << e << "\n";
    return kExitValidation;
  }
  Verdict v = classify_model(m);
  LaurentIndices ix = indices(m);
  nlohmann::json j = verdict_json(v);
  j["model"] = path;
  j["indices"] = {{"R", ix.R},
                  {"alpha", rat_str(ix.alpha)},
                  {"gamma", rat_str(ix.gamma)},
                  {"theta", rat_str(ix.theta)}};
  std::cout << j.dump(2) << "\n";
  print_verdict_table(v, ix);
  if (strict && v.unresolved()) return kExitUnresolved;
  return 0;
}

int cmd_analyze(const std::string& path, const std::string& out_dir) {
  CtmcModel m = load_model(path);
  ValidationReport rep = validate(m);
  if (!rep.ok()) {
    for (const auto& e : rep.errors) std::cerr << "validation error: " << e << "\n";
    return kExitValidation;
  }
  LaurentIndices ix = indices(m);
  MomentFns fns = moments(m);
  nlohmann::json grid = nlohmann::json::array();
  for (long x = 4; x <= (1L << 20); x *= 4) {
    double xR = std::pow(static_cast<double>(x), static_cast<double>(ix.R));
    grid.push_back({{"x", x},
                    {"m_over_xR", to_double(fns.eval_m(x)) / xR},
                    {"v_over_xR", to_double(fns.eval_v(x)) / xR},
                    {"H1", hp(fns, 1.0, x)},
                    {"J", jfun(fns, x)}});
  }
  nlohmann::json j = {{"model", path},
                      {"R", ix.R},
                      {"alpha", rat_str(ix.alpha)},
                      {"gamma", rat_str(ix.gamma)},
                      {"theta", rat_str(ix.theta)},
                      {"grid", grid},
                      {"warnings", rep.warnings}};
  std::cout << j.dump(2) << "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream f(out_dir + "/analyze.json");
    f << j.dump(2) << "\n";
    std::cerr << "wrote " << out_dir << "/analyze.json\n";
  }
  return 0;
}

int cmd_simulate(const std::string& path, long x0, double t_end, std::uint64_t seed,
                 long jump_cap, const std::string& out_dir) {
  CtmcModel m = load_model(path);
  validate_or_throw(m);
  Trajectory t = simulate(m, x0, t_end, seed, jump_cap);
  CsvWriter csv(out_dir, "trajectory.csv",
                {{"model", path},
                 {"x0", std::to_string(x0)},
                 {"t_end", fmt(t_end)},
                 {"seed", std::to_string(seed)},
                 {"jump_cap", std::to_string(jump_cap)},
                 {"terminated_by", to_string(t.terminated_by)}},
                "t,x");
  for (std::size_t k = 0; k < t.times.size(); ++k)
    csv.row({fmt(t.times[k]), std::to_string(t.states[k])});
  std::cout << "jumps: " << t.times.size() - 1 << ", terminated_by: "
            << to_string(t.terminated_by) << "\n";
  return 0;
}

int cmd_stationary(const std::string& path, long n, const std::string& out_dir) {
  CtmcModel m = load_model(path);
  StationaryResult res = stationary_truncated(m, n);
  CsvWriter csv(out_dir, "stationary.csv",
                {{"model", path},
                 {"truncation", std::to_string(n)},
                 {"max_residual", fmt(res.max_residual)},
                 {"boundary_mass", fmt(res.boundary_mass)}},
                "state,mass");
  for (std::size_t x = 0; x < res.dist.mass.size(); ++x)
    csv.row({std::to_string(x), fmt(res.dist.mass[x])});
  std::cout << "max balance residual: " << fmt(res.max_residual)
            << ", boundary mass: " << fmt(res.boundary_mass) << "\n";
  for (const auto& w : res.warnings) std::cout << "warning: " << w << "\n";
  return 0;
}

int cmd_tvdecay(const std::string& path, const std::string& x0_csv, double t_end,
                std::size_t points, long n_traj, std::uint64_t seed, long truncation,
                const std::string& out_dir) {
  CtmcModel m = load_model(path);
  validate_or_throw(m);
  std::vector<long> x0s = parse_x0_list(x0_csv);
  Distribution ref = stationary_truncated(m, truncation).dist;
  TvDecayResult res = tv_decay(m, x0s, linspace(0, t_end, points), n_traj, ref, seed);
  std::map<std::string, std::string> config = {{"model", path},
                                               {"x0", x0_csv},
                                               {"t_end", fmt(t_end)},
                                               {"n_traj", std::to_string(n_traj)},
                                               {"seed", std::to_string(seed)},
                                               {"truncation", std::to_string(truncation)},
                                               {"noise_floor", fmt(res.noise_floor)}};
  CsvWriter csv(out_dir, "tvdecay.csv", config, "t,x0,tv,log_tv");
  for (const auto& r : res.rows)
    csv.row({fmt(r.t), std::to_string(r.x0), fmt(r.tv), fmt(r.log_tv)});
  CsvWriter moments(out_dir, "tvdecay_moments.csv", config, "t,x0,mean,variance");
  for (const auto& r : res.moments)
    moments.row({fmt(r.t), std::to_string(r.x0), fmt(r.mean), fmt(r.variance)});
  CsvWriter slopes(out_dir, "tvdecay_slopes.csv", config,
                   "x0,slope,points,window_start,window_end");
  for (const auto& s : res.slopes) {
    slopes.row({std::to_string(s.x0), fmt(s.slope), std::to_string(s.points),
                fmt(s.window_start), fmt(s.window_end)});
    std::cout << "x0=" << s.x0 << " slope=" << fmt(s.slope) << " (" << s.points
              << " points)\n";
  }
  return 0;
}

int cmd_oracle_bd(const std::string& path, bool with_partial_sums) {
  CtmcModel m = load_model(path);
  const JumpRate* birth = nullptr;
  const JumpRate* death = nullptr;
  for (const auto& j : m.jumps()) {
    if (j.eta == 1) birth = &j;
    if (j.eta == -1) death = &j;
  }
  if (!birth || !death || m.jumps().size() != 2) {
    std::cerr << "oracle bd needs a unit birth-death model (jumps +1 and -1)\n";
    return kExitValidation;
  }
  BirthDeathModel bd(birth->rate, death->rate);
  BdRecurrence rec = karlin_recurrence(bd);
  nlohmann::json j = {{"model", path}, {"recurrence", to_string(rec)}};
  if (rec == BdRecurrence::Recurrent)
    j["positivity"] = to_string(bd_positive_recurrence(bd));
  if (with_partial_sums) {
    BdSeriesDiagnostic diag = bd_series_diagnostic(bd);
    nlohmann::json kp = nlohmann::json::array(), sp = nlohmann::json::array();
    for (const auto& [x, s] : diag.karlin_partial) kp.push_back({{"x", x}, {"sum", s}});
    for (const auto& [x, s] : diag.stationary_partial) sp.push_back({{"x", x}, {"sum", s}});
    j["partial_sums"] = {{"karlin", kp},
                         {"stationary", sp},
                         {"karlin_looks_divergent", diag.karlin_looks_divergent},
                         {"stationary_looks_summable", diag.stationary_looks_summable}};
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_reduce(const std::string& path, const std::string& out_dir, bool compare,
               long n_traj, double t_end, std::uint64_t seed) {
  NetworkFile nf = load_network(path);
  if (!nf.qss) {
    std::cerr << "network file must carry a qss block (f1, f2) for reduction\n";
    return kExitValidation;
  }
  for (const auto& w : qss_consistency_warnings(nf.network, *nf.qss))
    std::cout << "warning: " << w << "\n";
  CtmcModel reduced = reduce(nf.network, *nf.qss);
  std::filesystem::create_directories(out_dir);
  save_model(reduced, out_dir + "/reduced_model.json");
  std::cerr << "wrote " << out_dir << "/reduced_model.json\n";

  Verdict v = classify_model(reduced);
  LaurentIndices ix = indices(reduced);
  nlohmann::json vj = verdict_json(v);
  vj["network"] = path;
  {
    std::ofstream f(out_dir + "/reduced_verdict.json");
    f << vj.dump(2) << "\n";
  }
  std::cerr << "wrote " << out_dir << "/reduced_verdict.json\n";
  print_verdict_table(v, ix);

  if (compare) {
    long x0 = 1;
    long y0 = static_cast<long>(to_double(nf.network.V));
    MomentComparison cmp = compare_moments(nf.network, reduced, x0, y0,
                                           linspace(0, t_end, 13), n_traj, seed);
    CsvWriter csv(out_dir, "reduction_compare.csv",
                  {{"network", path},
                   {"n_traj", std::to_string(n_traj)},
                   {"t_end", fmt(t_end)},
                   {"seed", std::to_string(seed)}},
                  "t,full_mean,reduced_mean,full_variance,reduced_variance,"
                  "rel_mean_diff,rel_var_diff");
    for (std::size_t i = 0; i < cmp.times.size(); ++i)
      csv.row({fmt(cmp.times[i]), fmt(cmp.full_mean[i]), fmt(cmp.reduced_mean[i]),
               fmt(cmp.full_var[i]), fmt(cmp.reduced_var[i]), fmt(cmp.rel_mean_diff[i]),
               fmt(cmp.rel_var_diff[i])});
    std::cout << "max relative differences: mean " << fmt(cmp.max_rel_mean_diff)
              << ", variance " << fmt(cmp.max_rel_var_diff) << "\n";
  }
  return 0;
}

int cmd_reproduce(int figure, long n_traj, std::uint64_t seed, const std::string& out_dir) {
  if (figure == 0 || figure == 1) {
    SlopeExperimentConfig cfg;
    if (n_traj > 0) cfg.n_traj = n_traj;
    cfg.seed = seed;
    SlopeExperimentResult res = figure1_experiment(cfg);
    std::map<std::string, std::string> config = {
        {"n_traj", std::to_string(cfg.n_traj)},
        {"seed", std::to_string(cfg.seed)},
        {"x0", "10,30,60"},
        {"panel_a", "michaelis-menten (1,1,1,1),(3,2,2,1) exponential"},
        {"panel_b", "michaelis-menten (3,1,2,3),(4,2,1,1) non-exponential"}};
    CsvWriter csv(out_dir, "figure1_tv.csv", config, "panel,x0,t,log_tv");
    for (const auto& r : res.exponential.rows)
      csv.row({"a", std::to_string(r.x0), fmt(r.t), fmt(r.log_tv)});
    for (const auto& r : res.nonexponential.rows)
      csv.row({"b", std::to_string(r.x0), fmt(r.t), fmt(r.log_tv)});
    CsvWriter slopes(out_dir, "figure1_slopes.csv", config, "panel,x0,slope,points");
    for (const auto& s : res.exponential.slopes)
      slopes.row({"a", std::to_string(s.x0), fmt(s.slope), std::to_string(s.points)});
    for (const auto& s : res.nonexponential.slopes)
      slopes.row({"b", std::to_string(s.x0), fmt(s.slope), std::to_string(s.points)});
    nlohmann::json panels = nlohmann::json::array();
    nlohmann::json va = verdict_json(classify_model(mm_exponential_example()));
    va["panel"] = "a";
    va["slope_spread"] = res.exp_spread;
    nlohmann::json vb = verdict_json(classify_model(mm_nonexponential_example()));
    vb["panel"] = "b";
    vb["slope_spread"] = res.nonexp_spread;
    panels.push_back(va);
    panels.push_back(vb);
    std::ofstream vf(out_dir + "/figure1_verdicts.json");
    vf << panels.dump(2) << "\n";
    std::cerr << "wrote " << out_dir << "/figure1_verdicts.json\n";
    std::cout << "panel a slope spread: " << fmt(res.exp_spread)
              << ", panel b slope spread: " << fmt(res.nonexp_spread) << "\n";
  }
  if (figure == 0 || figure == 2) {
    ReductionExperimentConfig cfg;
    if (n_traj > 0) cfg.n_traj = n_traj;
    cfg.seed = seed;
    ReductionExperimentResult res = figure2_experiment(cfg);
    CsvWriter csv(out_dir, "figure2_moments.csv",
                  {{"n_traj", std::to_string(cfg.n_traj)},
                   {"seed", std::to_string(cfg.seed)},
                   {"U", std::to_string(cfg.U)},
                   {"V", std::to_string(cfg.V)}},
                  "t,full_mean,reduced_mean,full_variance,reduced_variance,"
                  "rel_mean_diff,rel_var_diff");
    const MomentComparison& cmp = res.comparison;
    for (std::size_t i = 0; i < cmp.times.size(); ++i)
      csv.row({fmt(cmp.times[i]), fmt(cmp.full_mean[i]), fmt(cmp.reduced_mean[i]),
               fmt(cmp.full_var[i]), fmt(cmp.reduced_var[i]), fmt(cmp.rel_mean_diff[i]),
               fmt(cmp.rel_var_diff[i])});
    nlohmann::json vj = verdict_json(res.verdict);
    vj["reduced_model"] = to_json(res.reduced);
    vj["max_rel_mean_diff"] = cmp.max_rel_mean_diff;
    vj["max_rel_var_diff"] = cmp.max_rel_var_diff;
    std::filesystem::create_directories(out_dir);
    std::ofstream vf(out_dir + "/figure2_verdict.json");
    vf << vj.dump(2) << "\n";
    std::cerr << "wrote " << out_dir << "/figure2_verdict.json\n";
    std::cout << "figure 2 max relative differences: mean " << fmt(cmp.max_rel_mean_diff)
              << ", variance " << fmt(cmp.max_rel_var_diff) << "\n";
  }
  if (figure == 0 || figure == 3) {
    std::filesystem::create_directories(out_dir);
    CsvWriter csv(out_dir, "classification_tables.csv", {{"source", "worked examples"}},
                  "family,params,expected,verdict,match");
    nlohmann::json verdicts = nlohmann::json::array();
    for (bool haldane : {false, true}) {
      for (const auto& row : classification_table(haldane)) {
        csv.row({row.label, "\"" + row.params + "\"", row.expected,
                 detail::verdict_word(row.verdict), row.matches ? "yes" : "no"});
        nlohmann::json vj = verdict_json(row.verdict);
        vj["family"] = row.label;
        vj["params"] = row.params;
        verdicts.push_back(vj);
      }
    }
    std::ofstream f(out_dir + "/classification_verdicts.json");
    f << verdicts.dump(2) << "\n";
    std::cerr << "wrote " << out_dir << "/classification_verdicts.json\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamics classification and simulation for 1-D CTMCs with rational rates"};
  app.require_subcommand(1);

  std::string model_path, network_path, out_dir = "out", x0_csv = "10,30,60";
  bool strict = false, partial_sums = false, compare = false;
  long x0 = 10, n_traj = 0, truncation = 400, jump_cap = 1'000'000;
  std::uint64_t seed = 42;
  double t_end = 0;
  std::size_t grid_points = 41;
  int figure = 0;

  auto* classify = app.add_subcommand("classify", "classify a model file");
  classify->add_option("model", model_path)->required();
  classify->add_flag("--strict", strict, "exit 3 when any field is unresolved");

  auto* analyze = app.add_subcommand("analyze", "emit indices and grid diagnostics");
  analyze->add_option("model", model_path)->required();
  analyze->add_option("--out", out_dir);

  auto* simulate_cmd = app.add_subcommand("simulate", "one exact SSA trajectory");
  simulate_cmd->add_option("model", model_path)->required();
  simulate_cmd->add_option("--x0", x0);
  simulate_cmd->add_option("--t-end", t_end)->default_val(10.0);
  simulate_cmd->add_option("--seed", seed);
  simulate_cmd->add_option("--jump-cap", jump_cap);
  simulate_cmd->add_option("--out", out_dir);

  auto* stationary = app.add_subcommand("stationary", "truncated stationary distribution");
  stationary->add_option("model", model_path)->required();
  stationary->add_option("--truncation", truncation);
  stationary->add_option("--out", out_dir);

  auto* tvdecay = app.add_subcommand("tvdecay", "TV decay to the stationary law");
  tvdecay->add_option("model", model_path)->required();
  tvdecay->add_option("--x0", x0_csv, "comma-separated initial states");
  tvdecay->add_option("--t-end", t_end)->default_val(100.0);
  tvdecay->add_option("--grid-points", grid_points);
  tvdecay->add_option("--n-traj", n_traj)->default_val(50'000);
  tvdecay->add_option("--seed", seed);
  tvdecay->add_option("--truncation", truncation);
  tvdecay->add_option("--out", out_dir);

  auto* oracle = app.add_subcommand("oracle", "classical criteria oracles");
  auto* oracle_bd = oracle->add_subcommand("bd", "unit birth-death series criteria");
  oracle_bd->add_option("model", model_path)->required();
  oracle_bd->add_flag("--partial-sums", partial_sums, "include numerical partial sums");
  oracle->require_subcommand(1);

  auto* reduce_cmd = app.add_subcommand("reduce", "QSS-reduce a two-species network");
  reduce_cmd->add_option("network", network_path)->required();
  reduce_cmd->add_option("--out", out_dir);
  reduce_cmd->add_flag("--compare", compare, "compare full vs reduced moments");
  reduce_cmd->add_option("--n-traj", n_traj)->default_val(10'000);
  reduce_cmd->add_option("--t-end", t_end)->default_val(3.0);
  reduce_cmd->add_option("--seed", seed);

  auto* reproduce = app.add_subcommand("reproduce", "canned reproduction experiments");
  reproduce->add_option("--figure", figure, "1, 2, or 3 (tables); default all")
      ->check(CLI::Range(0, 3));
  reproduce->add_option("--n-traj", n_traj,
                        "override the per-experiment trajectory counts (default 50000 for "
                        "the TV panels, 10000 for the moment comparison)");
  reproduce->add_option("--seed", seed);
  reproduce->add_option("--out", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (classify->parsed()) return cmd_classify(model_path, strict);
    if (analyze->parsed()) return cmd_analyze(model_path, out_dir);
    if (simulate_cmd->parsed())
      return cmd_simulate(model_path, x0, t_end, seed, jump_cap, out_dir);
    if (stationary->parsed()) return cmd_stationary(model_path, truncation, out_dir);
    if (tvdecay->parsed())
      return cmd_tvdecay(model_path, x0_csv, t_end, grid_points, n_traj, seed, truncation,
                         out_dir);
    if (oracle->parsed()) return cmd_oracle_bd(model_path, partial_sums);
    if (reduce_cmd->parsed())
      return cmd_reduce(network_path, out_dir, compare, n_traj, t_end, seed);
    if (reproduce->parsed()) return cmd_reproduce(figure, n_traj, seed, out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

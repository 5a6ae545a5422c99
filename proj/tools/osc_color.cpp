// Command line front end: color one graph, dump spectra, dump phase
// traces, or sweep sparsified instances. Exit codes: 0 success, 1 input
// or usage error, 2 simulation budget exhausted.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "osc/circuit.hpp"
#include "osc/csv.hpp"
#include "osc/graph_io.hpp"
#include "osc/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GenSpec {
  std::vector<int> class_sizes;
  double keep = 1.0;
  std::uint64_t seed = 0;
};

// Generator mini-language: partite:a,b,c[;keep=f][;seed=s]
GenSpec parse_gen_spec(const std::string& spec) {
  GenSpec gs;
  if (spec.rfind("partite:", 0) != 0)
    throw std::runtime_error("generator spec must start with 'partite:'");
  std::string rest = spec.substr(8);
  std::vector<std::string> parts;
  std::stringstream ss(rest);
  std::string tok;
  while (std::getline(ss, tok, ';')) parts.push_back(tok);
  if (parts.empty()) throw std::runtime_error("generator spec needs sizes");
  {
    std::stringstream sizes(parts[0]);
    std::string cell;
    while (std::getline(sizes, cell, ','))
      gs.class_sizes.push_back(std::stoi(cell));
  }
  for (size_t i = 1; i < parts.size(); ++i) {
    auto eq = parts[i].find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("generator option needs key=value: " +
                               parts[i]);
    std::string key = parts[i].substr(0, eq);
    std::string val = parts[i].substr(eq + 1);
    if (key == "keep")
      gs.keep = std::stod(val);
    else if (key == "seed")
      gs.seed = std::stoull(val);
    else
      throw std::runtime_error("unknown generator option: " + key);
  }
  return gs;
}

osc::Graph build_input_graph(const std::string& graph_path,
                             const std::string& gen_spec,
                             std::string* graph_id) {
  if (!graph_path.empty() && !gen_spec.empty())
    throw std::runtime_error("--graph and --gen are mutually exclusive");
  if (!graph_path.empty()) {
    *graph_id = graph_path;
    return osc::load_graph_file(graph_path);
  }
  if (!gen_spec.empty()) {
    *graph_id = gen_spec;
    GenSpec gs = parse_gen_spec(gen_spec);
    osc::Graph g = osc::complete_partite(gs.class_sizes);
    if (gs.keep < 1.0) g = osc::sparsify(g, gs.keep, gs.seed);
    return g;
  }
  throw std::runtime_error("need --graph PATH or --gen SPEC");
}

osc::OscParams load_params(const std::string& path) {
  // Out of the box the tool runs the regime where random starts reach the
  // clustered cycle; a params file can override any field.
  osc::OscParams p = osc::deep_discharge_params();
  if (path.empty()) return p;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open params file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("params json: ") + e.what());
  }
  p.c_i = j.value("c_i", p.c_i);
  p.c_c = j.value("c_c", p.c_c);
  p.g_i = j.value("g_i", p.g_i);
  p.g_s = j.value("g_s", p.g_s);
  p.v_l = j.value("v_l", p.v_l);
  p.v_h = j.value("v_h", p.v_h);
  p.validate();
  return p;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

json params_json(const osc::OscParams& p) {
  return json{{"c_i", p.c_i}, {"c_c", p.c_c}, {"g_i", p.g_i},
              {"g_s", p.g_s}, {"v_l", p.v_l}, {"v_h", p.v_h}};
}

json config_json(const osc::PipelineConfig& cfg) {
  return json{
      {"mode",
       cfg.sim.mode == osc::SimMode::Exact ? "exact" : "instant"},
      {"t_end", cfg.sim.t_end},
      {"max_step", cfg.sim.max_step},
      {"event_tol", cfg.sim.event_tol},
      {"sample_dt", cfg.sim.sample_dt},
      {"seed", cfg.sim.seed},
      {"window", cfg.window},
      {"sync_tol", cfg.sync_tol},
      {"phase_tol", cfg.phase_tol},
      {"spikes_per_node", cfg.spikes_per_node}};
}

struct CommonArgs {
  std::string graph_path, gen_spec, params_path, out_dir;
  std::string mode = "instant";
  std::string format = "json";
  double t_end = 2000.0;  // exact mode: >100 cycles at deep-discharge periods
  std::uint64_t seed = 0;
  long event_budget = 200000;

  void attach(CLI::App* cmd, bool with_mode = true) {
    cmd->add_option("--graph", graph_path, "graph file (.col or .json)");
    cmd->add_option("--gen", gen_spec,
                    "generator spec, e.g. partite:5,5,5;keep=0.8;seed=3");
    cmd->add_option("--params", params_path, "device parameter json");
    cmd->add_option("--out", out_dir, "output directory")->required();
    cmd->add_option("--seed", seed, "initial-state seed");
    if (with_mode) {
      cmd->add_option("--mode", mode, "exact | instant")
          ->check(CLI::IsMember({"exact", "instant"}));
      cmd->add_option("--t-end", t_end, "horizon for exact mode");
      cmd->add_option("--event-budget", event_budget,
                      "abort after this many switching events");
    }
  }

  osc::PipelineConfig pipeline_config() const {
    osc::PipelineConfig cfg;
    cfg.params = load_params(params_path);
    cfg.sim.mode =
        mode == "exact" ? osc::SimMode::Exact : osc::SimMode::Instantaneous;
    cfg.sim.t_end = t_end;
    cfg.sim.seed = seed;
    cfg.sim.event_budget = event_budget;
    return cfg;
  }
};

void write_report_files(const fs::path& dir, const osc::ColoringReport& rep,
                        const osc::PipelineTrace& trace,
                        const osc::PipelineConfig& cfg,
                        const std::string& format) {
  fs::create_directories(dir);
  json j = json::parse(osc::report_to_json(rep));
  j["params"] = params_json(cfg.params);
  j["config"] = config_json(cfg);
  if (format == "json") {
    write_file(dir / "report.json", j.dump(2) + "\n");
  } else {
    std::ostringstream colors;
    colors << "node,color\n";
    for (int v = 0; v < rep.n; ++v)
      colors << v << "," << rep.coloring.assignment[v] << "\n";
    write_file(dir / "colors.csv", colors.str());
    std::ostringstream summary;
    summary << "key,value\n";
    summary << "graph_id," << rep.graph_id << "\n";
    summary << "n," << rep.n << "\n";
    summary << "num_colors," << rep.num_colors << "\n";
    summary << "sync," << (rep.sync ? 1 : 0) << "\n";
    summary << "fallback_order," << (rep.fallback_order ? 1 : 0) << "\n";
    summary << "total_spikes," << rep.total_spikes << "\n";
    summary << "wall_time_ms," << osc::format_sig(rep.wall_time_ms, 6)
            << "\n";
    write_file(dir / "summary.csv", summary.str());
  }
  std::ostringstream phases;
  osc::write_phase_csv(phases, trace.train, trace.phases);
  write_file(dir / "phases.csv", phases.str());
}

int cmd_color(const CommonArgs& args) {
  std::string graph_id;
  osc::Graph g = build_input_graph(args.graph_path, args.gen_spec, &graph_id);
  osc::PipelineConfig cfg = args.pipeline_config();
  osc::PipelineTrace trace;
  osc::ColoringReport rep =
      osc::color_graph_traced(g, cfg, graph_id, &trace);
  write_report_files(fs::path(args.out_dir), rep, trace, cfg, args.format);
  std::cout << "colored " << graph_id << " with " << rep.num_colors
            << " colors (sync=" << (rep.sync ? "yes" : "no") << ")\n";
  return 0;
}

int cmd_spectra(const CommonArgs& args) {
  std::string graph_id;
  osc::Graph g = build_input_graph(args.graph_path, args.gen_spec, &graph_id);
  osc::OscParams p = load_params(args.params_path);
  osc::SystemMatrices sys = osc::build_system(g, p);
  osc::Spectrum spec_a = osc::eigendecompose(sys.A);
  osc::Spectrum spec_b = osc::eigendecompose(sys.B);
  osc::EigRelationReport rel =
      osc::verify_eig_relation(spec_a, spec_b, p, g.n);

  fs::path dir(args.out_dir);
  fs::create_directories(dir);
  auto dump = [&](const char* name, const Eigen::MatrixXd& M) {
    std::ostringstream os;
    osc::write_matrix_csv(os, M);
    write_file(dir / name, os.str());
  };
  dump("A.csv", sys.A);
  dump("B.csv", sys.B);
  dump("C_total.csv", sys.C_total);
  dump("eigenvalues_A.csv", spec_a.eigenvalues.transpose());
  dump("eigenvalues_B.csv", spec_b.eigenvalues.transpose());

  json j;
  j["graph_id"] = graph_id;
  j["n"] = g.n;
  j["params"] = params_json(p);
  j["max_rel_value_error"] = rel.max_rel_value_error;
  j["max_principal_angle"] = rel.max_principal_angle;
  j["max_mu"] = rel.max_mu;
  j["relation_ok"] = rel.ok();
  // For pristine generated instances the closed form is available too.
  if (!args.gen_spec.empty()) {
    GenSpec gs = parse_gen_spec(args.gen_spec);
    bool equal_sizes = true;
    for (int m : gs.class_sizes)
      if (m != gs.class_sizes[0]) equal_sizes = false;
    if (gs.keep >= 1.0 && equal_sizes && gs.class_sizes.size() >= 2) {
      Eigen::MatrixXd F_inv = osc::prototypical_inverse(
          static_cast<int>(gs.class_sizes.size()), gs.class_sizes[0], p);
      j["closed_form_residual"] =
          (F_inv + sys.B).cwiseAbs().maxCoeff();
    }
  }
  write_file(dir / "relation.json", j.dump(2) + "\n");
  std::cout << "spectra written to " << dir.string() << "\n";
  return 0;
}

int cmd_phases(const CommonArgs& args) {
  std::string graph_id;
  osc::Graph g = build_input_graph(args.graph_path, args.gen_spec, &graph_id);
  osc::PipelineConfig cfg = args.pipeline_config();
  osc::PipelineTrace trace;
  osc::ColoringReport rep =
      osc::color_graph_traced(g, cfg, graph_id, &trace);

  fs::path dir(args.out_dir);
  fs::create_directories(dir);
  std::ostringstream phases;
  osc::write_phase_csv(phases, trace.train, trace.phases);
  write_file(dir / "phases.csv", phases.str());
  std::ostringstream traj;
  osc::write_trajectory_csv(traj, trace.trajectory);
  write_file(dir / "trajectory.csv", traj.str());
  std::ostringstream events;
  osc::write_events_csv(events, trace.trajectory);
  write_file(dir / "events.csv", events.str());

  json j;
  j["graph_id"] = graph_id;
  j["sync"] = rep.sync;
  j["periods"] =
      std::vector<double>(rep.periods.begin(), rep.periods.end());
  j["mean_phase"] =
      std::vector<double>(rep.mean_phase.begin(), rep.mean_phase.end());
  j["order"] = rep.cyclic_order;
  j["clusters"] = rep.clusters;
  write_file(dir / "clusters.json", j.dump(2) + "\n");
  std::cout << "phase traces written to " << dir.string() << "\n";
  return 0;
}

int worker_count() {
  if (const char* env = std::getenv("OSC_COLOR_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

struct BenchRow {
  double keep;
  std::uint64_t seed;
  int num_colors = -1;
  bool sync = false;
  double wall_ms = 0.0;
  std::string error;
};

int cmd_bench(const CommonArgs& args, const std::string& keep_list,
              int sweep_seeds, std::uint64_t seed_base) {
  if (args.gen_spec.empty())
    throw std::runtime_error("bench needs --gen");
  GenSpec base = parse_gen_spec(args.gen_spec);
  std::vector<double> keeps;
  {
    std::stringstream ss(keep_list);
    std::string cell;
    while (std::getline(ss, cell, ',')) keeps.push_back(std::stod(cell));
  }
  if (sweep_seeds < 0)
    throw std::runtime_error("bench needs a non-negative seed count");

  std::vector<BenchRow> rows;
  for (double keep : keeps)
    for (int i = 0; i < sweep_seeds; ++i)
      rows.push_back({keep, seed_base + static_cast<std::uint64_t>(i)});

  osc::PipelineConfig proto_cfg = args.pipeline_config();
  std::atomic<size_t> cursor{0};
  std::atomic<bool> budget_hit{false};
  auto run_one = [&](BenchRow& row) {
    try {
      osc::Graph g = osc::complete_partite(base.class_sizes);
      if (row.keep < 1.0) g = osc::sparsify(g, row.keep, row.seed);
      osc::PipelineConfig cfg = proto_cfg;
      cfg.sim.seed = row.seed;
      std::ostringstream id;
      id << "partite:";
      for (size_t i = 0; i < base.class_sizes.size(); ++i)
        id << (i ? "," : "") << base.class_sizes[i];
      id << ";keep=" << row.keep << ";seed=" << row.seed;
      osc::ColoringReport rep = osc::color_graph(g, cfg, id.str());
      row.num_colors = rep.num_colors;
      row.sync = rep.sync;
      row.wall_ms = rep.wall_time_ms;
    } catch (const osc::BudgetError& e) {
      row.error = e.what();
      budget_hit = true;
    }
  };

  int workers = std::min<int>(worker_count(), static_cast<int>(rows.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        size_t i = cursor.fetch_add(1);
        if (i >= rows.size()) return;
        run_one(rows[i]);
      }
    });
  for (auto& th : pool) th.join();

  fs::path dir(args.out_dir);
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "keep_fraction,seed,num_colors,sync,wall_time_ms,error\n";
  for (const auto& row : rows)
    csv << osc::format_sig(row.keep, 6) << "," << row.seed << ","
        << row.num_colors << "," << (row.sync ? 1 : 0) << ","
        << osc::format_sig(row.wall_ms, 6) << "," << row.error << "\n";
  write_file(dir / "bench.csv", csv.str());

  std::ostringstream summary;
  summary << "keep_fraction,count,min_colors,p25,median,p75,max_colors,"
             "sync_rate\n";
  for (double keep : keeps) {
    std::vector<int> colors;
    int synced = 0, total = 0;
    for (const auto& row : rows)
      if (row.keep == keep && row.error.empty()) {
        colors.push_back(row.num_colors);
        synced += row.sync ? 1 : 0;
        ++total;
      }
    std::sort(colors.begin(), colors.end());
    auto quant = [&](double q) {
      if (colors.empty()) return 0;
      size_t idx = static_cast<size_t>(q * (colors.size() - 1) + 0.5);
      return colors[idx];
    };
    summary << osc::format_sig(keep, 6) << "," << total << "," << quant(0.0)
            << "," << quant(0.25) << "," << quant(0.5) << "," << quant(0.75)
            << "," << quant(1.0) << ","
            << osc::format_sig(total ? double(synced) / total : 0.0, 6)
            << "\n";
  }
  write_file(dir / "bench_summary.csv", summary.str());
  std::cout << "bench results written to " << dir.string() << "\n";
  return budget_hit ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relaxation-oscillator graph coloring"};
  app.require_subcommand(1);

  CommonArgs color_args, spectra_args, phase_args, bench_args;
  std::string bench_keeps = "1.0";
  int bench_seeds = 1;
  std::uint64_t bench_seed_base = 0;

  CLI::App* color = app.add_subcommand("color", "color one graph");
  color_args.attach(color);
  color->add_option("--format", color_args.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* spectra =
      app.add_subcommand("spectra", "matrix and eigenstructure dumps");
  spectra_args.attach(spectra, false);

  CLI::App* phases = app.add_subcommand("phases", "phase trace dumps");
  phase_args.attach(phases);

  CLI::App* bench =
      app.add_subcommand("bench", "sweep sparsified generated instances");
  bench_args.attach(bench);
  bench->add_option("--sweep-keep", bench_keeps,
                    "comma list of keep fractions");
  bench->add_option("--sweep-seeds", bench_seeds, "seeds per keep fraction");
  bench->add_option("--seed-base", bench_seed_base, "first sweep seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  }

  try {
    if (color->parsed()) return cmd_color(color_args);
    if (spectra->parsed()) return cmd_spectra(spectra_args);
    if (phases->parsed()) return cmd_phases(phase_args);
    if (bench->parsed())
      return cmd_bench(bench_args, bench_keeps, bench_seeds, bench_seed_base);
  } catch (const osc::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

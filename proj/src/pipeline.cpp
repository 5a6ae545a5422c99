#include "osc/pipeline.hpp"

#include <chrono>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace osc {

OscParams deep_discharge_params() {
  OscParams p;
  p.c_c = 0.1;
  p.v_l = 0.002;
  p.v_h = 0.95;
  return p;
}

ColoringReport color_graph_traced(const Graph& g, const PipelineConfig& cfg,
                                  const std::string& graph_id,
                                  PipelineTrace* trace) {
  auto t0 = std::chrono::steady_clock::now();
  cfg.params.validate();
  cfg.sim.validate();
  if (cfg.window < 1) throw std::invalid_argument("window must be positive");

  SystemMatrices sys = build_system(g, cfg.params);
  Eigen::VectorXd x0 = draw_initial_state(g.n, cfg.params, cfg.sim.seed);

  Trajectory traj;
  if (cfg.sim.mode == SimMode::Exact) {
    traj = simulate_exact(sys, x0, cfg.sim);
  } else {
    int spikes = g.n * std::max(cfg.spikes_per_node, cfg.window + 2);
    traj = simulate_instantaneous(sys, x0, spikes, cfg.sim);
  }

  SpikeTrain train = extract_spikes(traj);
  PeriodEstimate pe = estimate_periods(train, cfg.window, cfg.sync_tol);
  PhaseTrace pt = compute_phases(train, pe);

  ColoringReport rep;
  rep.graph_id = graph_id;
  rep.n = g.n;
  rep.sync = pe.sync;
  rep.periods = pe.periods;
  rep.total_spikes = static_cast<int>(traj.events.size());

  CyclicOrder co;
  if (pe.sync) {
    co = steady_cyclic_order(pt, cfg.window, cfg.phase_tol);
  } else {
    co = order_by_last_spike(train);
    rep.fallback_order = true;
  }
  rep.mean_phase = co.mean_phase;
  rep.phase_tie_count = co.tie_count;

  rep.cover = block_cover_cyclic(g, co);
  rep.cyclic_order = co.order;
  rep.coloring = cover_to_coloring(rep.cover);
  rep.num_colors = rep.coloring.num_colors;
  for (int b = 0; b < rep.cover.num_blocks(); ++b) {
    int end = (b + 1 < rep.cover.num_blocks()) ? rep.cover.block_starts[b + 1]
                                               : rep.n;
    std::vector<int> cluster(rep.cover.ordering.begin() +
                                 rep.cover.block_starts[b],
                             rep.cover.ordering.begin() + end);
    rep.clusters.push_back(std::move(cluster));
  }

  if (!validate_coloring(g, rep.coloring))
    throw std::logic_error("block cover produced an improper coloring");

  if (trace) {
    trace->trajectory = std::move(traj);
    trace->train = std::move(train);
    trace->phases = std::move(pt);
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_time_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

ColoringReport color_graph(const Graph& g, const PipelineConfig& cfg,
                           const std::string& graph_id) {
  return color_graph_traced(g, cfg, graph_id, nullptr);
}

ColoringReport color_graph(const Graph& g, const OscParams& p,
                           const SimConfig& sim, const std::string& graph_id) {
  PipelineConfig cfg;
  cfg.params = p;
  cfg.sim = sim;
  return color_graph(g, cfg, graph_id);
}

std::string report_to_json(const ColoringReport& rep, bool include_timing) {
  nlohmann::json j;
  j["graph_id"] = rep.graph_id;
  j["n"] = rep.n;
  j["num_colors"] = rep.num_colors;
  j["colors"] = rep.coloring.assignment;
  j["sync"] = rep.sync;
  j["fallback_order"] = rep.fallback_order;
  j["periods"] =
      std::vector<double>(rep.periods.begin(), rep.periods.end());
  j["mean_phase"] =
      std::vector<double>(rep.mean_phase.begin(), rep.mean_phase.end());
  j["order"] = rep.cyclic_order;
  j["blocks"] = rep.cover.block_starts;
  j["clusters"] = rep.clusters;
  j["total_spikes"] = rep.total_spikes;
  j["phase_tie_count"] = rep.phase_tie_count;
  if (include_timing) j["wall_time_ms"] = rep.wall_time_ms;
  return j.dump(2);
}

}  // namespace osc

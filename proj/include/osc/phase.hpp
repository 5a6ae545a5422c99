#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "osc/circuit.hpp"
#include "osc/dynamics.hpp"

namespace osc {

struct SpikeTrain {
  // Charging-onset times per node, ascending.
  std::vector<std::vector<double>> times;
  int n() const { return static_cast<int>(times.size()); }
};

SpikeTrain extract_spikes(const Trajectory& traj);

struct PeriodEstimate {
  Eigen::VectorXd periods;  // mean of the last `window` inter-spike gaps
  double mean_period = 0.0;
  // True when the spread of periods stays within sync_tol of the mean.
  bool sync = false;
};

// Requires at least window + 1 spikes per node.
PeriodEstimate estimate_periods(const SpikeTrain& train, int window = 10,
                                double sync_tol = 1e-3);

struct PhaseTrace {
  // phases[k][i]: phase of node k's i-th spike,
  // ((t_i - i dt_k) 2 pi / dt_k) mod 2 pi.
  std::vector<std::vector<double>> phases;
  Eigen::VectorXd periods;
  bool sync = false;
};

PhaseTrace compute_phases(const SpikeTrain& train, const PeriodEstimate& pe);

struct CyclicOrder {
  std::vector<int> order;      // nodes sorted by circular mean phase
  Eigen::VectorXd mean_phase;  // per node, in [0, 2 pi)
  int tie_count = 0;           // pairs broken by node index
};

// Circular mean over each node's last `window` phases, then sorted.
// Ties within phase_tol fall back to node index and are counted.
// Requires pe.sync; callers without synchronization use
// order_by_last_spike instead.
CyclicOrder steady_cyclic_order(const PhaseTrace& pt, int window = 10,
                                double phase_tol = 1e-6);

// Fallback ordering when the array never synchronized.
CyclicOrder order_by_last_spike(const SpikeTrain& train);

// Tie-grouped component ordering, ascending value. Groups list node
// indices ascending; flattening preserves group boundaries.
struct RankedOrder {
  std::vector<std::vector<int>> groups;
  std::vector<int> flattened() const;
  bool is_total() const;
};

// Groups components of v that agree within eps_eq (anchored at each
// group's first member), ascending.
RankedOrder rank_components(const Eigen::VectorXd& v, double eps_eq);

// Ranking of the projection of x0 onto the leading eigenspace of spec.
// The all-ones direction carries no ordering information and is removed
// first; a projection of norm <= eps_eq yields nullopt so callers can
// move to the next eigenspace.
std::optional<RankedOrder> rank_by_projection(const Spectrum& spec,
                                              const Eigen::VectorXd& x0,
                                              double eps_eq);

// Preferential refinement: later orders only split ties left by earlier
// ones and never move a node across an existing group boundary.
RankedOrder preferential_extend(const std::vector<RankedOrder>& orders);

// Component order that a pure-discharge flow approaches as t grows:
// eigenspace projections of x0 chained from the least negative eigenvalue
// of B down. Throws std::runtime_error when every projection is
// ordering-neutral (x0 proportional to the all-ones vector).
RankedOrder predict_asymptotic_order(const Spectrum& spec_b,
                                     const Eigen::VectorXd& x0,
                                     double eps_eq);

// Same idea for a fixed conduction state s != 0: the flow matrix B G(s)
// is diagonalized through the conductance-weighted symmetrization, and
// the fixed-point ranking leads the chain.
RankedOrder predict_charging_order(const SystemMatrices& sys,
                                   const std::vector<std::uint8_t>& s,
                                   const Eigen::VectorXd& x0, double eps_eq,
                                   double eps_eig = 1e-8);

}  // namespace osc

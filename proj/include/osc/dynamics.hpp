#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "osc/circuit.hpp"

namespace osc {

enum class Transition : std::uint8_t { ToCharging, ToDischarging };

struct Event {
  double t = 0.0;
  int node = -1;
  Transition kind = Transition::ToCharging;
};

struct SimState {
  double t = 0.0;
  Eigen::VectorXd x;
  std::vector<std::uint8_t> s;  // 1 while the device conducts
};

struct Trajectory {
  int n = 0;
  std::vector<SimState> samples;  // strictly increasing times
  std::vector<Event> events;
};

enum class SimMode { Exact, Instantaneous };

struct SimConfig {
  double t_end = 20.0;
  double max_step = 0.01;     // event-scan stride, refined while charging
  double event_tol = 1e-10;   // bisection width on event times
  double sample_dt = 0.01;    // 0 disables grid samples
  SimMode mode = SimMode::Instantaneous;
  std::uint64_t seed = 0;
  long event_budget = 200000;
  void validate() const;
};

// Raised when a simulation exceeds its event budget or an event scan
// stalls; the CLI maps it to its own exit code.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// x(t) for x' = M (x - fp). Symmetric M goes through its
// eigendecomposition, anything else through a matrix exponential.
// Requires t >= 0 and finite inputs.
Eigen::VectorXd linear_flow(const Eigen::MatrixXd& M,
                            const Eigen::VectorXd& fp,
                            const Eigen::VectorXd& x0, double t);

// Flow matrix B G(s) and fixed point of the conduction state s, where
// G(s) = diag(g_s + g_i s) and fp = g_i/(g_i + g_s) per conducting node.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> state_matrices(
    const SystemMatrices& sys, const std::vector<std::uint8_t>& s);

// Cached closed-form flow of one conduction state. B G(s) is similar to
// the symmetric W B W with W = G^{1/2}, which yields real modes.
class StateFlow {
 public:
  StateFlow(const SystemMatrices& sys, const std::vector<std::uint8_t>& s);

  const Eigen::VectorXd& fixed_point() const { return fp_; }
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }

  // Binds a start state; evaluations are then O(n) per component.
  void bind(const Eigen::VectorXd& x0);
  Eigen::VectorXd at(double t) const;
  double component(int k, double t) const;

 private:
  Eigen::VectorXd fp_;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd modes_;      // right eigenvectors of B G(s)
  Eigen::MatrixXd modes_inv_;  // left factors, modes_inv_ * modes_ = I
  Eigen::VectorXd coef_;
};

// State-independent update applied when node k fires:
// delta = (dv / B_kk) B e_k, so component k moves by exactly dv.
Eigen::VectorXd delta_x(const SystemMatrices& sys, int k);

// Uniform iid start in (v_l + margin, v_h - margin), margin = 0.01 dv.
// Bitwise deterministic for a fixed seed.
Eigen::VectorXd draw_initial_state(int n, const OscParams& p,
                                   std::uint64_t seed);

// Full hybrid run: every v_l and v_h crossing switches that node's
// conduction state; events are bisected to cfg.event_tol and simultaneous
// crossings are processed in ascending node index. Starts all-discharging;
// requires x0 strictly inside (v_l, v_h)^n.
Trajectory simulate_exact(const SystemMatrices& sys,
                          const Eigen::VectorXd& x0, const SimConfig& cfg);

// Zero-duration charging approximation: the array discharges under g_s B
// between spikes, and a v_l crossing applies delta_x at one instant
// (paired 0->1 / 1->0 events share a timestamp).
Trajectory simulate_instantaneous(const SystemMatrices& sys,
                                  const Eigen::VectorXd& x0, int n_spikes,
                                  const SimConfig& cfg);

}  // namespace osc

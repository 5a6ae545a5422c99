#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "osc/dynamics.hpp"
#include "osc/phase.hpp"

namespace osc {

// Shortest decimal form with the given significant digits; deterministic
// across runs.
std::string format_sig(double v, int digits);

// Row-major matrix dump, 17 significant digits by default (round-trip
// exact for doubles).
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& M,
                      int digits = 17);
Eigen::MatrixXd read_matrix_csv(std::istream& in);

// Columns t, x_0..x_{n-1}, s_0..s_{n-1}; 15 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// Columns t, node, transition (0->1 / 1->0).
void write_events_csv(std::ostream& out, const Trajectory& traj);

// Columns node, n, n_dt (n times the node period), phi.
void write_phase_csv(std::ostream& out, const SpikeTrain& train,
                     const PhaseTrace& pt);

}  // namespace osc

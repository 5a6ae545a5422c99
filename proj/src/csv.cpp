#include "osc/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace osc {

std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& M,
                      int digits) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out << ",";
      out << format_sig(M(i, j), digits);
    }
    out << "\n";
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged matrix csv");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  Eigen::MatrixXd M(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  return M;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t";
  for (int k = 0; k < traj.n; ++k) out << ",x_" << k;
  for (int k = 0; k < traj.n; ++k) out << ",s_" << k;
  out << "\n";
  for (const auto& smp : traj.samples) {
    out << format_sig(smp.t, 15);
    for (int k = 0; k < traj.n; ++k)
      out << "," << format_sig(smp.x[k], 15);
    for (int k = 0; k < traj.n; ++k) out << "," << int(smp.s[k]);
    out << "\n";
  }
}

void write_events_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,node,transition\n";
  for (const auto& e : traj.events)
    out << format_sig(e.t, 15) << "," << e.node << ","
        << (e.kind == Transition::ToCharging ? "0->1" : "1->0") << "\n";
}

void write_phase_csv(std::ostream& out, const SpikeTrain& train,
                     const PhaseTrace& pt) {
  out << "node,n,n_dt,phi\n";
  for (int k = 0; k < train.n(); ++k) {
    double dt = pt.periods[k];
    for (size_t i = 0; i < pt.phases[k].size(); ++i)
      out << k << "," << i << "," << format_sig(double(i) * dt, 15) << ","
          << format_sig(pt.phases[k][i], 15) << "\n";
  }
}

}  // namespace osc

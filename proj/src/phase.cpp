#include "osc/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace osc {

SpikeTrain extract_spikes(const Trajectory& traj) {
  SpikeTrain train;
  train.times.resize(traj.n);
  for (const auto& e : traj.events)
    if (e.kind == Transition::ToCharging) train.times[e.node].push_back(e.t);
  return train;
}

PeriodEstimate estimate_periods(const SpikeTrain& train, int window,
                                double sync_tol) {
  if (window < 1) throw std::invalid_argument("window must be positive");
  const int n = train.n();
  if (n == 0) throw std::invalid_argument("empty spike train");
  PeriodEstimate pe;
  pe.periods.resize(n);
  for (int k = 0; k < n; ++k) {
    const auto& tk = train.times[k];
    if (static_cast<int>(tk.size()) < window + 1)
      throw std::invalid_argument(
          "node " + std::to_string(k) + " has " + std::to_string(tk.size()) +
          " spikes, need " + std::to_string(window + 1));
    double acc = 0.0;
    for (size_t i = tk.size() - window; i < tk.size(); ++i)
      acc += tk[i] - tk[i - 1];
    pe.periods[k] = acc / window;
  }
  pe.mean_period = pe.periods.mean();
  double spread = pe.periods.maxCoeff() - pe.periods.minCoeff();
  pe.sync = spread <= sync_tol * pe.mean_period;
  return pe;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double phi) {
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  return phi;
}

}  // namespace

PhaseTrace compute_phases(const SpikeTrain& train, const PeriodEstimate& pe) {
  const int n = train.n();
  if (pe.periods.size() != n)
    throw std::invalid_argument("period vector does not match the train");
  PhaseTrace pt;
  pt.periods = pe.periods;
  pt.sync = pe.sync;
  pt.phases.resize(n);
  for (int k = 0; k < n; ++k) {
    double dt = pe.periods[k];
    if (!(dt > 0.0)) throw std::invalid_argument("nonpositive period");
    pt.phases[k].reserve(train.times[k].size());
    for (size_t i = 0; i < train.times[k].size(); ++i) {
      double t_i = train.times[k][i];
      pt.phases[k].push_back(
          wrap_phase((t_i - double(i) * dt) * kTwoPi / dt));
    }
  }
  return pt;
}

CyclicOrder steady_cyclic_order(const PhaseTrace& pt, int window,
                                double phase_tol) {
  if (!pt.sync)
    throw std::invalid_argument(
        "steady_cyclic_order needs a synchronized train");
  if (window < 1) throw std::invalid_argument("window must be positive");
  const int n = static_cast<int>(pt.phases.size());
  CyclicOrder co;
  co.mean_phase.resize(n);
  for (int k = 0; k < n; ++k) {
    if (static_cast<int>(pt.phases[k].size()) < window)
      throw std::invalid_argument("node " + std::to_string(k) +
                                  " has fewer phases than the window");
    double sx = 0.0, sy = 0.0;
    for (size_t i = pt.phases[k].size() - window; i < pt.phases[k].size();
         ++i) {
      sx += std::cos(pt.phases[k][i]);
      sy += std::sin(pt.phases[k][i]);
    }
    double mean = std::atan2(sy, sx);
    co.mean_phase[k] = mean < 0.0 ? mean + kTwoPi : mean;
  }
  co.order.resize(n);
  std::iota(co.order.begin(), co.order.end(), 0);
  std::sort(co.order.begin(), co.order.end(), [&](int a, int b) {
    if (co.mean_phase[a] == co.mean_phase[b]) return a < b;
    return co.mean_phase[a] < co.mean_phase[b];
  });
  // Runs of phases within phase_tol of the run head fall back to node
  // index order.
  size_t i = 0;
  while (i < co.order.size()) {
    size_t j = i;
    while (j + 1 < co.order.size() &&
           co.mean_phase[co.order[j + 1]] - co.mean_phase[co.order[i]] <=
               phase_tol)
      ++j;
    if (j > i) {
      std::sort(co.order.begin() + i, co.order.begin() + j + 1);
      co.tie_count += static_cast<int>(j - i);
    }
    i = j + 1;
  }
  return co;
}

CyclicOrder order_by_last_spike(const SpikeTrain& train) {
  const int n = train.n();
  CyclicOrder co;
  co.mean_phase = Eigen::VectorXd::Zero(n);
  std::vector<double> last(n, -std::numeric_limits<double>::infinity());
  for (int k = 0; k < n; ++k)
    if (!train.times[k].empty()) last[k] = train.times[k].back();
  co.order.resize(n);
  std::iota(co.order.begin(), co.order.end(), 0);
  std::sort(co.order.begin(), co.order.end(), [&](int a, int b) {
    if (last[a] == last[b]) return a < b;
    return last[a] < last[b];
  });
  return co;
}

std::vector<int> RankedOrder::flattened() const {
  std::vector<int> flat;
  for (const auto& g : groups) flat.insert(flat.end(), g.begin(), g.end());
  return flat;
}

bool RankedOrder::is_total() const {
  return std::all_of(groups.begin(), groups.end(),
                     [](const auto& g) { return g.size() == 1; });
}

RankedOrder rank_components(const Eigen::VectorXd& v, double eps_eq) {
  if (!(eps_eq >= 0.0))
    throw std::invalid_argument("eps_eq must be nonnegative");
  const int n = static_cast<int>(v.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return v[a] < v[b]; });
  RankedOrder ro;
  for (int i : idx) {
    if (ro.groups.empty() || v[i] - v[ro.groups.back().front()] > eps_eq)
      ro.groups.push_back({});
    ro.groups.back().push_back(i);
  }
  for (auto& g : ro.groups) std::sort(g.begin(), g.end());
  return ro;
}

namespace {

Eigen::VectorXd deflate_ones(const Eigen::VectorXd& v) {
  return v.array() - v.mean();
}

std::optional<RankedOrder> rank_projection_group(
    const Spectrum& spec, const std::vector<int>& grp,
    const Eigen::VectorXd& x0, double eps_eq) {
  Eigen::VectorXd proj = Eigen::VectorXd::Zero(x0.size());
  for (int col : grp) {
    const auto q = spec.eigenvectors.col(col);
    proj += q.dot(x0) * q;
  }
  // A constant shift never reorders components, so the all-ones part is
  // discarded; what remains decides whether this eigenspace says anything.
  Eigen::VectorXd centered = deflate_ones(proj);
  if (centered.norm() <= eps_eq) return std::nullopt;
  return rank_components(centered, eps_eq);
}

}  // namespace

std::optional<RankedOrder> rank_by_projection(const Spectrum& spec,
                                              const Eigen::VectorXd& x0,
                                              double eps_eq) {
  if (spec.eigenvectors.rows() != x0.size())
    throw std::invalid_argument("spectrum and state sizes do not agree");
  if (spec.eigenspaces.empty())
    throw std::invalid_argument("spectrum carries no eigenspaces");
  return rank_projection_group(spec, spec.eigenspaces.front(), x0, eps_eq);
}

RankedOrder preferential_extend(const std::vector<RankedOrder>& orders) {
  if (orders.empty())
    throw std::invalid_argument("preferential_extend needs at least one order");

  auto coverage = [](const RankedOrder& ro) {
    std::vector<int> nodes = ro.flattened();
    std::sort(nodes.begin(), nodes.end());
    return nodes;
  };
  std::vector<int> base = coverage(orders.front());
  for (size_t i = 0; i < base.size(); ++i)
    if (base[i] != static_cast<int>(i))
      throw std::invalid_argument("orders must cover nodes 0..n-1");

  RankedOrder result = orders.front();
  for (size_t oi = 1; oi < orders.size(); ++oi) {
    const RankedOrder& next = orders[oi];
    if (coverage(next) != base)
      throw std::invalid_argument("orders cover inconsistent node sets");
    std::vector<int> rank_of(base.size());
    for (size_t g = 0; g < next.groups.size(); ++g)
      for (int v : next.groups[g]) rank_of[v] = static_cast<int>(g);

    std::vector<std::vector<int>> refined;
    for (const auto& grp : result.groups) {
      // Split one tie-group by the later order's ranks; nodes sharing a
      // rank stay tied. Earlier boundaries are never crossed.
      std::vector<int> sorted = grp;
      std::stable_sort(sorted.begin(), sorted.end(), [&](int a, int b) {
        if (rank_of[a] != rank_of[b]) return rank_of[a] < rank_of[b];
        return a < b;
      });
      size_t i = 0;
      while (i < sorted.size()) {
        size_t j = i;
        while (j < sorted.size() && rank_of[sorted[j]] == rank_of[sorted[i]])
          ++j;
        refined.emplace_back(sorted.begin() + i, sorted.begin() + j);
        i = j;
      }
    }
    result.groups = std::move(refined);
  }
  return result;
}

RankedOrder predict_asymptotic_order(const Spectrum& spec_b,
                                     const Eigen::VectorXd& x0,
                                     double eps_eq) {
  if (spec_b.eigenvectors.rows() != x0.size())
    throw std::invalid_argument("spectrum and state sizes do not agree");
  std::vector<RankedOrder> chain;
  for (const auto& grp : spec_b.eigenspaces) {
    auto ranked = rank_projection_group(spec_b, grp, x0, eps_eq);
    if (ranked) chain.push_back(std::move(*ranked));
  }
  if (chain.empty())
    throw std::runtime_error(
        "every eigenspace projection is ordering-neutral; the start state "
        "carries no asymptotic order");
  return preferential_extend(chain);
}

RankedOrder predict_charging_order(const SystemMatrices& sys,
                                   const std::vector<std::uint8_t>& s,
                                   const Eigen::VectorXd& x0, double eps_eq,
                                   double eps_eig) {
  if (static_cast<int>(s.size()) != sys.n)
    throw std::invalid_argument("conduction state has wrong length");
  if (x0.size() != sys.n)
    throw std::invalid_argument("state vector has wrong length");
  if (std::none_of(s.begin(), s.end(), [](auto b) { return b; }))
    throw std::invalid_argument(
        "predict_charging_order needs a conducting node; use "
        "predict_asymptotic_order for the discharge flow");

  Eigen::VectorXd g(sys.n), fp(sys.n);
  for (int k = 0; k < sys.n; ++k) {
    g[k] = sys.g_s[k] + (s[k] ? sys.g_i[k] : 0.0);
    fp[k] = s[k] ? sys.g_i[k] / (sys.g_i[k] + sys.g_s[k]) : 0.0;
  }
  // B G(s) is similar to W B W with W = G^{1/2}; spectral projectors in
  // the original coordinates are W^{-1} (Q_g Q_g^T) W.
  Eigen::VectorXd w = g.cwiseSqrt();
  Eigen::MatrixXd S = w.asDiagonal() * sys.B * w.asDiagonal();
  S = 0.5 * (S + S.transpose()).eval();
  Spectrum spec = eigendecompose(S, eps_eig);

  std::vector<RankedOrder> chain;
  chain.push_back(rank_components(fp, eps_eq));

  Eigen::VectorXd x0_w = w.asDiagonal() * x0;
  for (const auto& grp : spec.eigenspaces) {
    Eigen::VectorXd proj_w = Eigen::VectorXd::Zero(sys.n);
    for (int col : grp) {
      const auto q = spec.eigenvectors.col(col);
      proj_w += q.dot(x0_w) * q;
    }
    Eigen::VectorXd proj = deflate_ones(w.cwiseInverse().asDiagonal() * proj_w);
    if (proj.norm() <= eps_eq) continue;
    chain.push_back(rank_components(proj, eps_eq));
  }
  return preferential_extend(chain);
}

}  // namespace osc

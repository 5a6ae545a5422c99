#include "osc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

namespace osc {

void SimConfig::validate() const {
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(max_step > 0.0))
    throw std::invalid_argument("max_step must be positive");
  if (!(event_tol > 0.0))
    throw std::invalid_argument("event_tol must be positive");
  if (!(sample_dt >= 0.0))
    throw std::invalid_argument("sample_dt must be nonnegative");
  if (event_budget < 1)
    throw std::invalid_argument("event_budget must be positive");
}

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite())
    throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

bool is_symmetric(const Eigen::MatrixXd& M) {
  double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

}  // namespace

Eigen::VectorXd linear_flow(const Eigen::MatrixXd& M,
                            const Eigen::VectorXd& fp,
                            const Eigen::VectorXd& x0, double t) {
  if (M.rows() != M.cols() || M.rows() != fp.size() || fp.size() != x0.size())
    throw std::invalid_argument("linear_flow dimensions do not agree");
  require_finite(M, "flow matrix");
  require_finite(fp, "fixed point");
  require_finite(x0, "start state");
  if (!(t >= 0.0)) throw std::invalid_argument("flow time must be >= 0");

  if (is_symmetric(M)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("flow eigendecomposition failed");
    Eigen::VectorXd c = es.eigenvectors().transpose() * (x0 - fp);
    Eigen::VectorXd scaled =
        (es.eigenvalues().array() * t).exp() * c.array();
    return fp + es.eigenvectors() * scaled;
  }
  return fp + ((M * t).exp() * (x0 - fp)).eval();
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> state_matrices(
    const SystemMatrices& sys, const std::vector<std::uint8_t>& s) {
  if (static_cast<int>(s.size()) != sys.n)
    throw std::invalid_argument("conduction state has wrong length");
  Eigen::VectorXd g(sys.n), fp(sys.n);
  for (int k = 0; k < sys.n; ++k) {
    g[k] = sys.g_s[k] + (s[k] ? sys.g_i[k] : 0.0);
    fp[k] = s[k] ? sys.g_i[k] / (sys.g_i[k] + sys.g_s[k]) : 0.0;
  }
  return {sys.B * g.asDiagonal(), fp};
}

StateFlow::StateFlow(const SystemMatrices& sys,
                     const std::vector<std::uint8_t>& s) {
  if (static_cast<int>(s.size()) != sys.n)
    throw std::invalid_argument("conduction state has wrong length");
  Eigen::VectorXd g(sys.n);
  fp_.resize(sys.n);
  for (int k = 0; k < sys.n; ++k) {
    g[k] = sys.g_s[k] + (s[k] ? sys.g_i[k] : 0.0);
    fp_[k] = s[k] ? sys.g_i[k] / (sys.g_i[k] + sys.g_s[k]) : 0.0;
  }
  Eigen::VectorXd w = g.cwiseSqrt();
  Eigen::VectorXd wi = w.cwiseInverse();
  Eigen::MatrixXd S = w.asDiagonal() * sys.B * w.asDiagonal();
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("state flow eigendecomposition failed");
  lambda_ = es.eigenvalues();
  modes_ = wi.asDiagonal() * es.eigenvectors();
  modes_inv_ = es.eigenvectors().transpose() * Eigen::MatrixXd(w.asDiagonal());
  coef_ = Eigen::VectorXd::Zero(sys.n);
}

void StateFlow::bind(const Eigen::VectorXd& x0) {
  if (x0.size() != fp_.size())
    throw std::invalid_argument("bound state has wrong length");
  coef_ = modes_inv_ * (x0 - fp_);
}

Eigen::VectorXd StateFlow::at(double t) const {
  Eigen::VectorXd scaled = (lambda_.array() * t).exp() * coef_.array();
  return fp_ + modes_ * scaled;
}

double StateFlow::component(int k, double t) const {
  double acc = 0.0;
  for (int i = 0; i < lambda_.size(); ++i)
    acc += modes_(k, i) * coef_[i] * std::exp(lambda_[i] * t);
  return fp_[k] + acc;
}

Eigen::VectorXd delta_x(const SystemMatrices& sys, int k) {
  if (k < 0 || k >= sys.n)
    throw std::invalid_argument("delta_x node index out of range");
  Eigen::VectorXd d = (sys.params.dv() / sys.B(k, k)) * sys.B.col(k);
  d[k] = sys.params.dv();  // exact by contract, not up to rounding
  return d;
}

Eigen::VectorXd draw_initial_state(int n, const OscParams& p,
                                   std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need at least one oscillator");
  p.validate();
  double margin = 0.01 * p.dv();
  double lo = p.v_l + margin, hi = p.v_h - margin;
  std::mt19937_64 rng(seed);
  Eigen::VectorXd x(n);
  for (int k = 0; k < n; ++k) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x[k] = lo + u * (hi - lo);
  }
  return x;
}

namespace {

constexpr long kScanBudget = 50'000'000;

void check_box(const Eigen::VectorXd& x) {
  if (x.minCoeff() < -1e-6 || x.maxCoeff() > 1.0 + 1e-6)
    throw std::logic_error("state left the admissible box [0,1]^n");
}

// Crossing time of component k through thr inside (lo, hi], bisected
// until the bracket is narrower than tol. Returns the crossed side.
double bisect_crossing(const StateFlow& flow, int k, double thr, double lo,
                       double hi, double tol, bool downward) {
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double v = flow.component(k, mid);
    bool crossed = downward ? (v <= thr) : (v >= thr);
    if (crossed)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

struct SampleSink {
  Trajectory* traj;
  double sample_dt;
  double next_grid;

  explicit SampleSink(Trajectory* t, double dt)
      : traj(t), sample_dt(dt), next_grid(dt > 0 ? dt : 0) {}

  void push(double t, const Eigen::VectorXd& x,
            const std::vector<std::uint8_t>& s) {
    check_box(x);
    if (!traj->samples.empty() && traj->samples.back().t == t) {
      traj->samples.back().x = x;
      traj->samples.back().s = s;
      return;
    }
    traj->samples.push_back({t, x, s});
  }

  // Grid samples strictly inside (interval start, until).
  void emit_grid(const StateFlow& flow, double t0, double until,
                 const std::vector<std::uint8_t>& s) {
    if (sample_dt <= 0) return;
    while (next_grid < until) {
      if (next_grid > t0) push(next_grid, flow.at(next_grid - t0), s);
      next_grid += sample_dt;
    }
  }
};

}  // namespace

Trajectory simulate_exact(const SystemMatrices& sys,
                          const Eigen::VectorXd& x0, const SimConfig& cfg) {
  cfg.validate();
  if (x0.size() != sys.n)
    throw std::invalid_argument("start state has wrong length");
  for (int k = 0; k < sys.n; ++k)
    if (!(x0[k] > sys.params.v_l && x0[k] < sys.params.v_h))
      throw std::invalid_argument(
          "start state must lie strictly inside (v_l, v_h)^n");

  const double v_l = sys.params.v_l, v_h = sys.params.v_h;
  double charge_tau = std::numeric_limits<double>::infinity();
  for (int k = 0; k < sys.n; ++k)
    charge_tau = std::min(charge_tau, sys.c_int[k] / (sys.g_i[k] + sys.g_s[k]));

  Trajectory traj;
  traj.n = sys.n;
  SampleSink sink(&traj, cfg.sample_dt);

  std::vector<std::uint8_t> s(sys.n, 0);
  Eigen::VectorXd x = x0;
  double t = 0.0;
  sink.push(t, x, s);

  std::map<std::vector<std::uint8_t>, StateFlow> flows;
  long events_used = 0;
  long scan_iters = 0;

  while (t < cfg.t_end) {
    auto it = flows.find(s);
    if (it == flows.end())
      it = flows.emplace(s, StateFlow(sys, s)).first;
    StateFlow& flow = it->second;
    flow.bind(x);

    bool charging = std::any_of(s.begin(), s.end(), [](auto b) { return b; });
    // While a device conducts, the flow moves on the charging timescale;
    // the scan has to resolve it or v_h crossings could slip through.
    double step = charging ? std::min(cfg.max_step, 0.2 * charge_tau)
                           : cfg.max_step;
    double horizon = cfg.t_end - t;

    double tau_prev = 0.0;
    Eigen::VectorXd x_prev = x;
    double tau_event = -1.0;
    std::vector<int> firing;

    while (tau_prev < horizon) {
      if (++scan_iters > kScanBudget)
        throw BudgetError("event scan exceeded its iteration budget");
      double tau_next = std::min(tau_prev + step, horizon);
      Eigen::VectorXd x_next = flow.at(tau_next);

      std::vector<std::pair<double, int>> hits;
      for (int k = 0; k < sys.n; ++k) {
        if (!s[k]) {
          if (x_prev[k] > v_l && x_next[k] <= v_l)
            hits.emplace_back(bisect_crossing(flow, k, v_l, tau_prev,
                                              tau_next, cfg.event_tol, true),
                              k);
        } else {
          if (x_prev[k] < v_h && x_next[k] >= v_h)
            hits.emplace_back(bisect_crossing(flow, k, v_h, tau_prev,
                                              tau_next, cfg.event_tol, false),
                              k);
        }
      }
      if (!hits.empty()) {
        tau_event = std::min_element(hits.begin(), hits.end())->first;
        for (auto [tk, k] : hits)
          if (tk <= tau_event + cfg.event_tol) firing.push_back(k);
        std::sort(firing.begin(), firing.end());
        break;
      }
      tau_prev = tau_next;
      x_prev.swap(x_next);
    }

    if (tau_event < 0.0) {
      sink.emit_grid(flow, t, t + horizon, s);
      x = flow.at(horizon);
      t = cfg.t_end;
      sink.push(t, x, s);
      break;
    }

    sink.emit_grid(flow, t, t + tau_event, s);
    x = flow.at(tau_event);
    t += tau_event;
    for (int k : firing) {
      if (++events_used > cfg.event_budget)
        throw BudgetError("event budget exceeded");
      s[k] ^= 1;
      traj.events.push_back(
          {t, k, s[k] ? Transition::ToCharging : Transition::ToDischarging});
    }
    sink.push(t, x, s);
  }
  return traj;
}

Trajectory simulate_instantaneous(const SystemMatrices& sys,
                                  const Eigen::VectorXd& x0, int n_spikes,
                                  const SimConfig& cfg) {
  cfg.validate();
  if (n_spikes < 0)
    throw std::invalid_argument("spike count must be nonnegative");
  if (x0.size() != sys.n)
    throw std::invalid_argument("start state has wrong length");
  for (int k = 0; k < sys.n; ++k)
    if (!(x0[k] > sys.params.v_l && x0[k] < sys.params.v_h))
      throw std::invalid_argument(
          "start state must lie strictly inside (v_l, v_h)^n");

  const double v_l = sys.params.v_l;
  const std::vector<std::uint8_t> s(sys.n, 0);
  StateFlow flow(sys, s);

  // Spike updates are state independent; precompute one column per node.
  Eigen::MatrixXd jump(sys.n, sys.n);
  for (int k = 0; k < sys.n; ++k) jump.col(k) = delta_x(sys, k);

  // The slowest mode bounds how long any discharge can take.
  double rate = -flow.eigenvalues().maxCoeff();
  double scan_limit = 60.0 / rate + 10.0 * cfg.max_step;

  Trajectory traj;
  traj.n = sys.n;
  SampleSink sink(&traj, cfg.sample_dt);

  Eigen::VectorXd x = x0;
  double t = 0.0;
  sink.push(t, x, s);
  long events_used = 0;
  long scan_iters = 0;
  int done = 0;

  while (done < n_spikes) {
    flow.bind(x);
    double tau_prev = 0.0;
    Eigen::VectorXd x_prev = x;
    double tau_event = -1.0;
    std::vector<int> firing;
    while (tau_event < 0.0) {
      if (tau_prev > scan_limit)
        throw BudgetError("no threshold crossing within the scan window");
      if (++scan_iters > kScanBudget)
        throw BudgetError("event scan exceeded its iteration budget");
      double tau_next = tau_prev + cfg.max_step;
      Eigen::VectorXd x_next = flow.at(tau_next);
      std::vector<std::pair<double, int>> hits;
      for (int k = 0; k < sys.n; ++k)
        if (x_prev[k] > v_l && x_next[k] <= v_l)
          hits.emplace_back(bisect_crossing(flow, k, v_l, tau_prev, tau_next,
                                            cfg.event_tol, true),
                            k);
      if (!hits.empty()) {
        tau_event = std::min_element(hits.begin(), hits.end())->first;
        for (auto [tk, k] : hits)
          if (tk <= tau_event + cfg.event_tol) firing.push_back(k);
        std::sort(firing.begin(), firing.end());
      }
      tau_prev = tau_next;
      x_prev.swap(x_next);
    }

    sink.emit_grid(flow, t, t + tau_event, s);
    x = flow.at(tau_event);
    t += tau_event;

    // Fire the simultaneous arrivals in ascending node index; each kick
    // lifts the rest, and anything still at or below v_l afterwards fires
    // at the same instant.
    while (!firing.empty() && done < n_spikes) {
      for (int k : firing) {
        if (done == n_spikes) break;
        events_used += 2;
        if (events_used > cfg.event_budget)
          throw BudgetError("event budget exceeded");
        x[k] = v_l;  // bisection leaves it within event_tol anyway
        x += jump.col(k);
        traj.events.push_back({t, k, Transition::ToCharging});
        traj.events.push_back({t, k, Transition::ToDischarging});
        ++done;
      }
      firing.clear();
      for (int k = 0; k < sys.n; ++k)
        if (x[k] <= v_l) firing.push_back(k);
    }
    sink.push(t, x, s);
  }
  return traj;
}

}  // namespace osc

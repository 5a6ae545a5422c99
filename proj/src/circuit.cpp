#include "osc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace osc {

void OscParams::validate() const {
  if (!(c_i > 0.0)) throw std::invalid_argument("c_i must be positive");
  if (!(c_c >= 0.0)) throw std::invalid_argument("c_c must be nonnegative");
  if (!(g_i > 0.0)) throw std::invalid_argument("g_i must be positive");
  if (!(g_s > 0.0)) throw std::invalid_argument("g_s must be positive");
  if (!(0.0 < v_l && v_l < v_h))
    throw std::invalid_argument("need 0 < v_l < v_h");
  if (!(v_h < charging_fixed_point()))
    throw std::invalid_argument("v_h must stay below g_i/(g_i+g_s)");
}

void HeteroParams::validate(int n) const {
  if (c_i.size() != n || g_i.size() != n || g_s.size() != n)
    throw std::invalid_argument("per-oscillator vectors must have length n");
  if (!(c_c >= 0.0)) throw std::invalid_argument("c_c must be nonnegative");
  if (!(0.0 < v_l && v_l < v_h))
    throw std::invalid_argument("need 0 < v_l < v_h");
  for (int k = 0; k < n; ++k) {
    if (!(c_i[k] > 0.0 && g_i[k] > 0.0 && g_s[k] > 0.0))
      throw std::invalid_argument("device constants must be positive");
    if (!(v_h < g_i[k] / (g_i[k] + g_s[k])))
      throw std::invalid_argument(
          "v_h must stay below g_i/(g_i+g_s) of oscillator " +
          std::to_string(k));
  }
}

namespace {

Eigen::MatrixXd invert_spd_negated(const Eigen::MatrixXd& C) {
  // C is symmetric positive definite for valid parameters; a failure
  // here is an internal numerical error, not a user input problem.
  Eigen::LLT<Eigen::MatrixXd> llt(C);
  if (llt.info() != Eigen::Success)
    throw std::logic_error("coefficient matrix is not positive definite");
  Eigen::MatrixXd Binv =
      -llt.solve(Eigen::MatrixXd::Identity(C.rows(), C.cols()));
  // Symmetrize away solver round-off.
  return 0.5 * (Binv + Binv.transpose());
}

SystemMatrices assemble(const Graph& g, const Eigen::VectorXd& c_int,
                        double c_c) {
  SystemMatrices sys;
  sys.n = g.n;
  sys.A = g.adjacency();
  sys.degrees = g.degrees();
  // C_c = c_c (D - A), C_l = c_c (n I - D): the load capacitances top the
  // coupled node capacitance up to a constant n c_c on the diagonal.
  Eigen::MatrixXd L =
      Eigen::MatrixXd(sys.degrees.asDiagonal()) - sys.A;
  sys.C_total = Eigen::MatrixXd(c_int.asDiagonal()) + c_c * L +
                c_c * (double(g.n) * Eigen::MatrixXd::Identity(g.n, g.n) -
                       Eigen::MatrixXd(sys.degrees.asDiagonal()));
  sys.B = invert_spd_negated(sys.C_total);
  return sys;
}

}  // namespace

SystemMatrices build_system(const Graph& g, const OscParams& p) {
  p.validate();
  SystemMatrices sys =
      assemble(g, Eigen::VectorXd::Constant(g.n, p.c_i), p.c_c);
  sys.params = p;
  sys.identical = true;
  sys.c_int = Eigen::VectorXd::Constant(g.n, p.c_i);
  sys.g_i = Eigen::VectorXd::Constant(g.n, p.g_i);
  sys.g_s = Eigen::VectorXd::Constant(g.n, p.g_s);
  double want = double(g.n) * p.c_c + p.c_i;
  for (int k = 0; k < g.n; ++k)
    if (std::abs(sys.C_total(k, k) - want) > 1e-12 * std::max(1.0, want))
      throw std::logic_error("diagonal of C_c + C_l is not n c_c");
  return sys;
}

SystemMatrices build_system(const Graph& g, const HeteroParams& p) {
  p.validate(g.n);
  SystemMatrices sys = assemble(g, p.c_i, p.c_c);
  sys.identical = false;
  sys.c_int = p.c_i;
  sys.g_i = p.g_i;
  sys.g_s = p.g_s;
  sys.params.c_i = p.c_i.mean();
  sys.params.c_c = p.c_c;
  sys.params.g_i = p.g_i.mean();
  sys.params.g_s = p.g_s.mean();
  sys.params.v_l = p.v_l;
  sys.params.v_h = p.v_h;
  return sys;
}

Spectrum eigendecompose(const Eigen::MatrixXd& M, double eps_eig) {
  if (M.rows() != M.cols())
    throw std::invalid_argument("eigendecompose needs a square matrix");
  double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("eigendecompose needs a symmetric matrix");
  if (!(eps_eig >= 0.0))
    throw std::invalid_argument("eps_eig must be nonnegative");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");

  const int n = static_cast<int>(M.rows());
  Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors.resize(n, n);
  // Solver returns ascending order; flip to descending.
  for (int i = 0; i < n; ++i) {
    spec.eigenvalues[i] = solver.eigenvalues()[n - 1 - i];
    spec.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  double tol = eps_eig * std::max(1.0, std::abs(spec.eigenvalues[0]));
  for (int i = 0; i < n; ++i) {
    if (spec.eigenspaces.empty() ||
        spec.eigenvalues[spec.eigenspaces.back().front()] -
                spec.eigenvalues[i] >
            tol)
      spec.eigenspaces.push_back({});
    spec.eigenspaces.back().push_back(i);
  }
  return spec;
}

namespace {

double principal_angle(const Eigen::MatrixXd& Qa, const Eigen::MatrixXd& Qb) {
  // asin of the projection residual: accurate for small angles, where
  // acos of a singular value near 1 loses half the digits.
  Eigen::MatrixXd resid = Qb - Qa * (Qa.transpose() * Qb);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(resid);
  double smax = svd.singularValues().maxCoeff();
  return std::asin(std::clamp(smax, 0.0, 1.0));
}

}  // namespace

EigRelationReport verify_eig_relation(const Spectrum& spec_a,
                                      const Spectrum& spec_b,
                                      const OscParams& p, int n) {
  p.validate();
  if (spec_a.eigenvalues.size() != n || spec_b.eigenvalues.size() != n)
    throw std::invalid_argument("spectra do not match the node count");

  EigRelationReport rep;
  rep.max_mu = spec_b.eigenvalues.maxCoeff();
  // mu(lambda) = 1/(c_c lambda - c_i - n c_c) is decreasing in lambda, so
  // the descending lambda list pairs with the reversed mu list.
  for (int i = 0; i < n; ++i) {
    double denom = p.c_c * spec_a.eigenvalues[i] - p.c_i - n * p.c_c;
    double mu_pred = 1.0 / denom;
    double mu = spec_b.eigenvalues[n - 1 - i];
    rep.max_rel_value_error = std::max(
        rep.max_rel_value_error, std::abs(mu - mu_pred) / std::abs(mu_pred));
  }
  // Compare eigenspace spans using the grouping of A; the matching B
  // columns are the index-reversed block.
  for (const auto& grp : spec_a.eigenspaces) {
    Eigen::MatrixXd Qa(n, grp.size()), Qb(n, grp.size());
    for (size_t j = 0; j < grp.size(); ++j) {
      Qa.col(j) = spec_a.eigenvectors.col(grp[j]);
      Qb.col(j) = spec_b.eigenvectors.col(n - 1 - grp[j]);
    }
    rep.max_principal_angle =
        std::max(rep.max_principal_angle, principal_angle(Qa, Qb));
  }
  return rep;
}

Eigen::MatrixXd prototypical_inverse(int k_classes, int m,
                                     const OscParams& p) {
  if (k_classes < 2)
    throw std::invalid_argument("prototypical graph needs k >= 2 classes");
  if (m < 1) throw std::invalid_argument("class size m must be positive");
  p.validate();
  const int n = k_classes * m;
  const double c_ic = p.c_i + n * p.c_c;
  const double denom = p.c_i + (n + m) * p.c_c;
  const double beta = (p.c_i + n * p.c_c) / (p.c_i + m * p.c_c);
  Eigen::MatrixXd F_inv(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double same_class = (i / m == j / m) ? 1.0 : 0.0;
      double kron = (i == j) ? 1.0 : 0.0;
      F_inv(i, j) = (kron + p.c_c * (beta - same_class) / denom) / c_ic;
    }
  }
  return F_inv;
}

ColumnProfile column_profile(int k_classes, int m, const OscParams& p) {
  if (k_classes < 2)
    throw std::invalid_argument("prototypical graph needs k >= 2 classes");
  if (m < 1) throw std::invalid_argument("class size m must be positive");
  p.validate();
  ColumnProfile cp;
  cp.k_classes = k_classes;
  cp.m = m;
  cp.n = k_classes * m;
  const double c_ic = p.c_i + cp.n * p.c_c;
  if (p.c_c == 0.0) {
    cp.alpha = 0.0;
    cp.beta = 1.0;
    cp.b_kk = 1.0 / c_ic;
    cp.b_kl = 0.0;
    cp.b_kj = 0.0;
    cp.ratio = 0.0;
    return cp;
  }
  cp.alpha = p.c_c / (p.c_i + (cp.n + cp.m) * p.c_c);
  cp.beta = (p.c_i + cp.n * p.c_c) / (p.c_i + cp.m * p.c_c);
  cp.b_kk = (1.0 + cp.alpha * (cp.beta - 1.0)) / c_ic;
  cp.b_kl = cp.alpha * (cp.beta - 1.0) / c_ic;
  cp.b_kj = cp.alpha * cp.beta / c_ic;
  const double r = p.c_i / p.c_c;
  cp.ratio = 1.0 / (r + cp.n + cp.m + double(cp.n - cp.m) / (r + cp.m));
  return cp;
}

}  // namespace osc

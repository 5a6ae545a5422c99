#pragma once

#include <vector>

#include <Eigen/Dense>

#include "osc/graph.hpp"

namespace osc {

// Per-oscillator device constants, identical across the array.
// v_l/v_h are the discharge/charge switching thresholds; the charging
// branch relaxes toward g_i / (g_i + g_s), which must exceed v_h.
struct OscParams {
  double c_i = 1.0;     // internal capacitance
  double c_c = 0.01;    // coupling capacitance (0 decouples the array)
  double g_i = 1000.0;  // conduction branch
  double g_s = 1.0;     // shunt branch
  double v_l = 0.3;
  double v_h = 0.7;

  double dv() const { return v_h - v_l; }
  double charging_fixed_point() const { return g_i / (g_i + g_s); }
  void validate() const;  // throws std::invalid_argument
};

// Heterogeneous variant: per-oscillator internal capacitance and branch
// conductances, one shared coupling capacitance and threshold pair.
struct HeteroParams {
  Eigen::VectorXd c_i, g_i, g_s;
  double c_c = 0.01;
  double v_l = 0.3;
  double v_h = 0.7;
  void validate(int n) const;
};

struct SystemMatrices {
  int n = 0;
  Eigen::MatrixXd A;
  Eigen::VectorXd degrees;
  Eigen::MatrixXd C_total;  // C_i + C_c + C_l
  // Inverse coefficient matrix -(C_total)^{-1}; symmetric negative
  // definite. Equals (c_c A - (c_i + n c_c) I)^{-1} for identical
  // oscillators.
  Eigen::MatrixXd B;
  OscParams params;  // thresholds; device constants when identical
  bool identical = true;
  // Per-oscillator constants; filled with params values when identical.
  Eigen::VectorXd c_int, g_i, g_s;
};

SystemMatrices build_system(const Graph& g, const OscParams& p);
SystemMatrices build_system(const Graph& g, const HeteroParams& p);

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns, same order
  // Indices of equal eigenvalues, grouped within
  // eps_eig * max(1, |lambda_1|); groups keep the descending order.
  std::vector<std::vector<int>> eigenspaces;
};

// Symmetric eigendecomposition with eigenvalue grouping. Throws
// std::invalid_argument if M is not symmetric to 1e-12 (relative).
Spectrum eigendecompose(const Eigen::MatrixXd& M, double eps_eig = 1e-8);

struct EigRelationReport {
  double max_rel_value_error = 0.0;  // of mu vs 1/(c_c lambda - c_i - n c_c)
  double max_principal_angle = 0.0;  // eigenspace alignment, radians
  double max_mu = 0.0;               // stability requires < 0
  bool ok() const {
    return max_rel_value_error <= 1e-9 && max_principal_angle <= 1e-8 &&
           max_mu < 0.0;
  }
};

// Checks that spec_b is the image of spec_a under
// mu = 1/(c_c lambda - c_i - n c_c): values pair up in reverse order and
// eigenspaces align. Identical oscillators only.
EigRelationReport verify_eig_relation(const Spectrum& spec_a,
                                      const Spectrum& spec_b,
                                      const OscParams& p, int n);

// Closed-form inverse of (c_i I - c_c A + c_c n I) for the complete
// k-partite graph with equal class sizes m (classes contiguous). This is
// the sign-flipped B of the same system. Requires k >= 2, m >= 1.
Eigen::MatrixXd prototypical_inverse(int k_classes, int m,
                                     const OscParams& p);

// Column structure of prototypical_inverse: diagonal entry, same-class
// off-diagonal entry, cross-class entry, and the charging-contrast ratio
// (b_kj - b_kl) / b_kk = 1 / (r + n + m + (n - m)/(r + m)), r = c_i/c_c.
struct ColumnProfile {
  double b_kk = 0.0;
  double b_kl = 0.0;  // same class
  double b_kj = 0.0;  // other class
  double alpha = 0.0;
  double beta = 0.0;
  double ratio = 0.0;
  int n = 0, m = 0, k_classes = 0;
};

// c_c = 0 degenerates gracefully: alpha = 0, ratio = 0.
ColumnProfile column_profile(int k_classes, int m, const OscParams& p);

}  // namespace osc

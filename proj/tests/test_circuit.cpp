#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "osc/circuit.hpp"
#include "osc/graph.hpp"
#include "support.hpp"

using namespace osc;

namespace {

OscParams params_10_1() {
  OscParams p;
  p.c_i = 10.0;
  p.c_c = 1.0;
  return p;
}

}  // namespace

TEST_CASE("OscParams validation") {
  OscParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.dv() == doctest::Approx(0.4));
  CHECK(p.charging_fixed_point() == doctest::Approx(1000.0 / 1001.0));

  OscParams weak = p;
  weak.g_i = 1.0;  // fixed point 0.5 < v_h, charging could never finish
  CHECK_THROWS_AS(weak.validate(), std::invalid_argument);

  OscParams bad = p;
  bad.v_l = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.v_h = bad.v_l;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.c_c = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.c_i = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.c_c = 0.0;
  CHECK_NOTHROW(bad.validate());  // decoupled array is legal
}

TEST_CASE("scalar system inverts to -1/c_i") {
  OscParams p;
  p.c_c = 0.0;
  SystemMatrices sys = build_system(make_graph(1, {}), p);
  CHECK(sys.B(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("coupling diagonal carries n*c_c") {
  Graph g = complete_partite({2, 2});
  SystemMatrices sys = build_system(g, params_10_1());
  // C_total = c_i I + c_c L + c_c (n I - D); everything beyond c_i on the
  // diagonal comes from coupling and must equal n*c_c on every node.
  for (int k = 0; k < 4; ++k)
    CHECK(sys.C_total(k, k) - 10.0 == doctest::Approx(4.0).epsilon(1e-14));

  // uneven degrees: path still gets a constant coupling diagonal
  SystemMatrices path_sys = build_system(support::path_graph(4), params_10_1());
  for (int k = 0; k < 4; ++k)
    CHECK(path_sys.C_total(k, k) - 10.0 == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("B is the inverse of c_c A - (c_i + n c_c) I") {
  Graph g = complete_partite({2, 2});
  OscParams p = params_10_1();
  SystemMatrices sys = build_system(g, p);
  Eigen::MatrixXd target = p.c_c * g.adjacency() -
                           (p.c_i + g.n * p.c_c) *
                               Eigen::MatrixXd::Identity(g.n, g.n);
  CHECK((sys.B * target - Eigen::MatrixXd::Identity(g.n, g.n))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((sys.B - sys.B.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("B is negative definite on assorted graphs") {
  OscParams p;
  for (const Graph& g :
       {support::petersen_graph(), support::random_graph(12, 0.3, 5),
        support::random_graph(8, 0.7, 6), make_graph(5, {})}) {
    SystemMatrices sys = build_system(g, p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.B);
    CHECK(es.eigenvalues().maxCoeff() < 0.0);
  }
}

TEST_CASE("heterogeneous path reduces to the identical one") {
  Graph g = complete_partite({2, 2});
  OscParams p = params_10_1();
  HeteroParams hp;
  hp.c_i = Eigen::VectorXd::Constant(4, p.c_i);
  hp.g_i = Eigen::VectorXd::Constant(4, p.g_i);
  hp.g_s = Eigen::VectorXd::Constant(4, p.g_s);
  hp.c_c = p.c_c;
  hp.v_l = p.v_l;
  hp.v_h = p.v_h;
  SystemMatrices a = build_system(g, p);
  SystemMatrices b = build_system(g, hp);
  CHECK(a.identical);
  CHECK_FALSE(b.identical);
  CHECK((a.B - b.B).cwiseAbs().maxCoeff() < 1e-12);

  hp.c_i[2] = 13.0;  // genuinely heterogeneous: still symmetric stable
  SystemMatrices c = build_system(g, hp);
  CHECK((c.B - c.B.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.B);
  CHECK(es.eigenvalues().maxCoeff() < 0.0);
}

TEST_CASE("eigendecompose basics") {
  Spectrum id3 = eigendecompose(Eigen::MatrixXd::Identity(3, 3));
  CHECK(id3.eigenvalues.isApprox(Eigen::VectorXd::Ones(3)));
  REQUIRE(id3.eigenspaces.size() == 1);
  CHECK(id3.eigenspaces[0].size() == 3);

  Eigen::MatrixXd skew(2, 2);
  skew << 0, 1, -1, 0;
  CHECK_THROWS_AS(eigendecompose(skew), std::invalid_argument);
}

TEST_CASE("complete bipartite adjacency spectrum") {
  Graph g = complete_partite({2, 2});
  Spectrum spec = eigendecompose(g.adjacency());
  Eigen::VectorXd want(4);
  want << 2, 0, 0, -2;
  CHECK((spec.eigenvalues - want).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE(spec.eigenspaces.size() == 3);
  CHECK(spec.eigenspaces[0].size() == 1);
  CHECK(spec.eigenspaces[1].size() == 2);
  CHECK(spec.eigenspaces[2].size() == 1);

  // columns orthonormal, reconstruction tight
  Eigen::MatrixXd Q = spec.eigenvectors;
  CHECK((Q.transpose() * Q - Eigen::MatrixXd::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  Eigen::MatrixXd rebuilt =
      Q * spec.eigenvalues.asDiagonal() * Q.transpose();
  CHECK((rebuilt - g.adjacency()).cwiseAbs().maxCoeff() < 1e-9 * 2.0);
}

TEST_CASE("equal-class partite adjacency spectrum layout") {
  for (int k = 2; k <= 4; ++k)
    for (int m = 1; m <= 4; ++m) {
      Graph g = complete_partite(std::vector<int>(k, m));
      Spectrum spec = eigendecompose(g.adjacency());
      int n = k * m;
      // descending: (k-1)m once, 0 with multiplicity k(m-1), -m with k-1
      CHECK(spec.eigenvalues[0] ==
            doctest::Approx((k - 1) * m).epsilon(1e-12));
      CHECK(spec.eigenvalues[n - 1] == doctest::Approx(-m).epsilon(1e-12));
      REQUIRE(spec.eigenspaces.size() == (m == 1 ? 2u : 3u));
      CHECK(spec.eigenspaces.front().size() == 1);
      CHECK(spec.eigenspaces.back().size() == static_cast<size_t>(k - 1));
      if (m > 1)
        CHECK(spec.eigenspaces[1].size() == static_cast<size_t>(k * (m - 1)));
    }
}

TEST_CASE("spectral map from A to B, hand values") {
  Graph g = complete_partite({2, 2});
  OscParams p = params_10_1();
  SystemMatrices sys = build_system(g, p);
  Spectrum spec_b = eigendecompose(sys.B);
  // mu = 1/(lambda - 14) for lambda in {2, 0, -2}, descending mu
  Eigen::VectorXd want(4);
  want << -1.0 / 16.0, -1.0 / 14.0, -1.0 / 14.0, -1.0 / 12.0;
  CHECK((spec_b.eigenvalues - want).cwiseAbs().maxCoeff() < 1e-14);

  Spectrum spec_a = eigendecompose(g.adjacency());
  EigRelationReport rep = verify_eig_relation(spec_a, spec_b, p, g.n);
  CHECK(rep.ok());
  CHECK(rep.max_rel_value_error < 1e-12);
  CHECK(rep.max_principal_angle < 1e-10);
  CHECK(rep.max_mu < 0.0);
}

TEST_CASE("spectral relation holds on irregular graphs") {
  OscParams p;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Graph g = support::random_graph(14, 0.35, seed);
    SystemMatrices sys = build_system(g, p);
    EigRelationReport rep = verify_eig_relation(
        eigendecompose(g.adjacency()), eigendecompose(sys.B), p, g.n);
    CHECK(rep.ok());
  }
}

TEST_CASE("verify_eig_relation rejects dimension mismatch") {
  OscParams p = params_10_1();
  Spectrum a = eigendecompose(complete_partite({2, 2}).adjacency());
  Spectrum b = eigendecompose(Eigen::MatrixXd::Identity(3, 3) * -1.0);
  CHECK_THROWS_AS(verify_eig_relation(a, b, p, 4), std::invalid_argument);
}

TEST_CASE("closed-form inverse against numeric inverse") {
  OscParams p = params_10_1();
  Graph g = complete_partite({2, 2});
  Eigen::MatrixXd F = p.c_i * Eigen::MatrixXd::Identity(4, 4) -
                      p.c_c * g.adjacency() +
                      p.c_c * 4.0 * Eigen::MatrixXd::Identity(4, 4);
  Eigen::MatrixXd F_inv = prototypical_inverse(2, 2, p);
  CHECK((F_inv - F.inverse()).cwiseAbs().maxCoeff() < 1e-10);

  // and the sign-flipped system matrix
  SystemMatrices sys = build_system(g, p);
  CHECK((F_inv + sys.B).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(prototypical_inverse(1, 4, p), std::invalid_argument);
}

TEST_CASE("column profile hand values for K(2,2), r = 10") {
  ColumnProfile cp = column_profile(2, 2, params_10_1());
  CHECK(cp.beta == doctest::Approx(7.0 / 6.0).epsilon(1e-14));
  CHECK(cp.b_kk == doctest::Approx(97.0 / 1344.0).epsilon(1e-14));
  CHECK(cp.b_kl == doctest::Approx(1.0 / 1344.0).epsilon(1e-14));
  CHECK(cp.b_kj == doctest::Approx(7.0 / 1344.0).epsilon(1e-14));
  CHECK(cp.ratio == doctest::Approx(6.0 / 97.0).epsilon(1e-14));
  CHECK(std::abs(cp.ratio - (cp.b_kj - cp.b_kl) / cp.b_kk) < 1e-12);
  // item-4 form: 1/(r + n + m + (n-m)/(r+m))
  CHECK(std::abs(cp.ratio - 1.0 / (10 + 4 + 2 + 2.0 / 12.0)) < 1e-12);
}

TEST_CASE("column profile matches numeric entries") {
  OscParams p = params_10_1();
  SystemMatrices sys = build_system(complete_partite({2, 2}), p);
  ColumnProfile cp = column_profile(2, 2, p);
  CHECK(std::abs(cp.b_kk + sys.B(0, 0)) < 1e-12);
  CHECK(std::abs(cp.b_kl + sys.B(0, 1)) < 1e-12);  // same class: node 1
  CHECK(std::abs(cp.b_kj + sys.B(0, 2)) < 1e-12);  // other class: node 2
}

TEST_CASE("contrast ratio shrinks with weaker coupling") {
  OscParams r10 = params_10_1();
  OscParams r100 = params_10_1();
  r100.c_i = 100.0;
  CHECK(column_profile(2, 2, r100).ratio < column_profile(2, 2, r10).ratio);
}

TEST_CASE("column profile degenerates cleanly at c_c = 0") {
  OscParams p;
  p.c_i = 2.0;
  p.c_c = 0.0;
  ColumnProfile cp = column_profile(3, 2, p);
  CHECK(cp.alpha == 0.0);
  CHECK(cp.ratio == 0.0);
  CHECK(cp.b_kk == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("slow eigenspace of B is constant on classes") {
  OscParams p;
  SystemMatrices sys = build_system(complete_partite({3, 3, 3}), p);
  Spectrum spec = eigendecompose(sys.B);
  REQUIRE(spec.eigenspaces.front().size() == 2);  // k - 1
  for (int idx : spec.eigenspaces.front()) {
    Eigen::VectorXd v = spec.eigenvectors.col(idx);
    v.array() -= v.mean();  // ones direction carries no class signal
    for (int cls = 0; cls < 3; ++cls) {
      double lo = v.segment(3 * cls, 3).minCoeff();
      double hi = v.segment(3 * cls, 3).maxCoeff();
      CHECK(hi - lo < 1e-9);
    }
  }
}

#include <doctest.h>

#include <random>

#include "mse/errors.hpp"
#include "mse/topology.hpp"

using namespace mse;

namespace {

Eigen::MatrixXi dense(const IncidenceMatrix& e) { return Eigen::MatrixXi(e.matrix()); }

bool is_zero(const IncidenceMatrix::Storage& m) {
  for (int k = 0; k < m.outerSize(); ++k) {
    for (IncidenceMatrix::Storage::InnerIterator it(m, k); it; ++it) {
      if (it.value() != 0) return false;
    }
  }
  return true;
}

bool signs_only(const IncidenceMatrix& e) {
  const auto& m = e.matrix();
  for (int k = 0; k < m.outerSize(); ++k) {
    for (IncidenceMatrix::Storage::InnerIterator it(m, k); it; ++it) {
      if (it.value() != 1 && it.value() != -1) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("1D incidence of one element") {
  Eigen::MatrixXi e1(1, 2);
  e1 << -1, 1;
  CHECK(dense(incidence_1_0(1)) == e1);
  Eigen::MatrixXi e2(2, 3);
  e2 << -1, 1, 0, 0, -1, 1;
  CHECK(dense(incidence_1_0(2)) == e2);
  CHECK_THROWS_AS(incidence_1_0(0), InvalidOrder);
}

TEST_CASE("apply_incidence examples") {
  const auto e = incidence_1_0(2);
  CHECK(apply_incidence(e, Eigen::Vector3d(1, 2, 4)) == Eigen::Vector2d(1, 2));
  CHECK(apply_incidence(e, Eigen::Vector3d::Zero()) == Eigen::Vector2d::Zero());
  CHECK(apply_incidence(e, Eigen::Vector3d::Constant(3.5)) == Eigen::Vector2d::Zero());
  CHECK_THROWS_AS(apply_incidence(e, Eigen::Vector2d(1, 2)), DimensionMismatch);
}

TEST_CASE("single element face row follows bottom, top, left, right") {
  const CellComplex2D c(1, 1, 1, false, false);
  const auto e = incidence_2_1(c);
  REQUIRE(e.rows() == 1);
  REQUIRE(e.cols() == 4);
  const Eigen::MatrixXi d = dense(e);
  CHECK(d(0, c.xedge_index(0, 1, 0)) == 1);   // bottom
  CHECK(d(0, c.xedge_index(0, 1, 1)) == -1);  // top
  CHECK(d(0, c.yedge_index(0, 0, 1)) == -1);  // left
  CHECK(d(0, c.yedge_index(0, 1, 1)) == 1);   // right
  // x-edges are numbered before y-edges.
  CHECK(c.xedge_index(0, 1, 0) == 0);
  CHECK(c.xedge_index(0, 1, 1) == 1);
  CHECK(c.yedge_index(0, 0, 1) == 2);
  CHECK(c.yedge_index(0, 1, 1) == 3);
}

TEST_CASE("cell counts") {
  const CellComplex2D c(4, 4, 3, true, true);
  CHECK(c.face_count() == 144);
  CHECK(c.node_count() == 144);
  CHECK(c.edge_count() == 288);
  CHECK(c.local_edges() == 24);
  const CellComplex2D b(2, 3, 2, false, false);
  CHECK(b.node_count() == 5 * 7);
  CHECK(b.edge_count() == 4 * 7 + 5 * 6);
  CHECK(b.cell_count(2) == 24);
  const CellComplex1D l(3, 4, true);
  CHECK(l.node_count() == 12);
  CHECK(l.edge_count() == 12);
}

TEST_CASE("d o d = 0 exactly for all tested sizes and orders") {
  for (int p = 1; p <= 6; ++p) {
    for (auto [nx, ny, px, py] : std::vector<std::tuple<int, int, bool, bool>>{
             {1, 1, false, false}, {2, 3, true, true}, {3, 2, true, false}, {1, 1, true, true}}) {
      const CellComplex2D c(nx, ny, p, px, py);
      const auto e10 = incidence_1_0(c);
      const auto e21 = incidence_2_1(c);
      CHECK(signs_only(e10));
      CHECK(signs_only(e21));
      CHECK(is_zero(e21 * e10));
    }
    const CellComplex2D loc(1, 1, p, false, false);
    CHECK(dense(local_incidence_2_1(p)) == dense(incidence_2_1(loc)));
  }
}

TEST_CASE("periodic meshes: every edge shared with opposite signs") {
  for (int p : {1, 2, 4}) {
    const CellComplex2D c(2, 2, p, true, true);
    const Eigen::MatrixXi d = dense(incidence_2_1(c));
    CHECK(d.colwise().sum().cwiseAbs().maxCoeff() == 0);
    for (int j = 0; j < d.cols(); ++j) CHECK(d.col(j).cwiseAbs().sum() == 2);
    // Global conservation for an arbitrary 1-cochain.
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Eigen::VectorXd s(c.edge_count());
    for (auto& v : s) v = g(rng);
    CHECK(std::abs(apply_incidence(incidence_2_1(c), s).sum()) < 1e-12);
  }
  const CellComplex1D l(4, 3, true);
  const Eigen::MatrixXi d = dense(incidence_1_0(l));
  CHECK(d.colwise().sum().cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("global numbering is lexicographic by first encounter") {
  const CellComplex2D c(2, 2, 2, false, false);
  // Element 0 is numbered completely, local x fastest; element 1 reuses its shared column.
  CHECK(c.node_index(0, 0, 0) == 0);
  CHECK(c.node_index(0, 1, 0) == 1);
  CHECK(c.node_index(0, 2, 0) == 2);
  CHECK(c.node_index(0, 2, 2) == 8);
  CHECK(c.node_index(1, 0, 0) == 2);
  CHECK(c.node_index(1, 0, 1) == 5);
  CHECK(c.node_index(1, 1, 0) == 9);
  CHECK(c.node_index(1, 2, 0) == 10);
  for (int e = 0; e < 4; ++e) {
    for (int j = 1; j <= 2; ++j) {
      for (int i = 1; i <= 2; ++i) CHECK(c.face_index(e, i, j) == e * 4 + (j - 1) * 2 + (i - 1));
    }
  }
}

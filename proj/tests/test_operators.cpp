#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "isgqd/constructions.hpp"
#include "isgqd/green.hpp"
#include "isgqd/operators.hpp"
#include "isgqd/spec_io.hpp"
#include "oracles.hpp"

using namespace isgqd;

namespace {

Eigen::MatrixXd dense(const SparseOp& a) { return Eigen::MatrixXd(a); }

bool exactly_equal(const SparseOp& a, const SparseOp& b) { return max_abs_entry(SparseOp(a - b)) == 0.0; }

}  // namespace

TEST_SUITE("operator_rep") {
  TEST_CASE("regular representations match their definitions") {
    for (const char* name : {"symmetric_inverse_3", "brandt_z3_4", "clifford_diamond", "qdnotr_k3"}) {
      const auto spec = load_spec(oracle::catalog_path(name));
      const auto& s = spec.semi();
      CAPTURE(name);
      for (Index a = 0; a < s.size(); ++a) {
        CHECK(dense(left_regular(s, a).matrix) == oracle::dense_left_regular(s, a));
        CHECK(dense(right_regular(s, a).matrix) == oracle::dense_right_regular(s, a));
        CHECK(left_regular(s, a).partial_isometry);
      }
    }
  }

  TEST_CASE("v_0 is the rank-one projection onto delta_0 and v_e is diagonal") {
    const auto s = symmetric_inverse_monoid(3);
    const auto v0 = dense(left_regular(s, s.zero()).matrix);
    CHECK(v0.sum() == 1.0);
    CHECK(v0(s.zero(), s.zero()) == 1.0);
    for (Index e : s.idempotents()) {
      const auto v = dense(left_regular(s, e).matrix);
      for (Index x = 0; x < s.size(); ++x) CHECK(v(x, x) == (s.mul(e, x) == x ? 1.0 : 0.0));
      CHECK(v.isDiagonal());
      const auto w = dense(right_regular(s, e).matrix);
      for (Index x = 0; x < s.size(); ++x) CHECK(w(x, x) == (s.mul(x, e) == x ? 1.0 : 0.0));
    }
    for (Index a = 0; a < s.size(); ++a) CHECK(dense(left_regular(s, a).matrix).col(s.zero()) == v0.col(s.zero()));
  }

  TEST_CASE("distinct elements give distinct operators") {
    const auto s = brandt(cyclic_group(2), 3);
    for (Index a = 0; a < s.size(); ++a) {
      for (Index b = a + 1; b < s.size(); ++b) CHECK_FALSE(exactly_equal(left_regular(s, a).matrix, left_regular(s, b).matrix));
    }
  }

  TEST_CASE("operator norms") {
    const auto s = symmetric_inverse_monoid(3);
    for (Index a = 0; a < s.size(); ++a) CHECK(opnorm(left_regular(s, a).matrix) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(opnorm(SparseOp(5, 5)) == 0.0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(40, 30);
      for (int i = 0; i < 120; ++i) m(static_cast<Eigen::Index>(rng() % 40), static_cast<Eigen::Index>(rng() % 30)) = u(rng);
      const SparseOp a = m.sparseView();
      const double ref = oracle::dense_norm(m);
      CHECK(opnorm(a) == doctest::Approx(ref).epsilon(1e-9));
      CHECK(opnorm_lanczos(a) == doctest::Approx(ref).epsilon(1e-9));
      CHECK(opnorm(a, 0) == doctest::Approx(ref).epsilon(1e-9));
    }
  }

  TEST_CASE("Lanczos agrees with the dense path on a large block") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 300;
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) {
      t.emplace_back(i, i, u(rng));
      t.emplace_back(i, (i + 1) % n, u(rng));
      t.emplace_back((i * 7) % n, i, u(rng));
    }
    SparseOp a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    CHECK(opnorm_lanczos(a) == doctest::Approx(oracle::dense_norm(Eigen::MatrixXd(a))).epsilon(1e-9));
  }

  TEST_CASE("algebra dimension") {
    CHECK(algebra_dim(brandt(cyclic_group(5), 1)) == 6);
    CHECK(algebra_dim(InverseSemigroup::from_table({"0", "f", "e"}, {{0, 0, 0}, {0, 1, 1}, {0, 1, 2}}, 0)) == 3);
    CHECK(algebra_dim(symmetric_inverse_monoid(3)) == 34);
  }

  TEST_CASE("qdnotr splits off a one-dimensional central summand") {
    for (std::size_t k = 1; k <= 5; ++k) {
      const auto s = qdnotr_family(k, true);
      const Index one = *s.unit();
      // z = 1 - sum_e v_(e,e) + (k-1) v_0.
      SparseOp z = left_regular(s, one).matrix;
      for (Index e : s.idempotents()) {
        if (e != one && e != s.zero()) z -= left_regular(s, e).matrix;
      }
      z += static_cast<double>(k - 1) * left_regular(s, s.zero()).matrix;
      z.prune(0.0);
      CHECK(is_projection(z));
      CHECK(SparseOp(z).nonZeros() == 1);
      for (Index a = 0; a < s.size(); ++a) {
        const SparseOp v = left_regular(s, a).matrix;
        CHECK(max_abs_entry(commutator(v, z)) == 0.0);
        const SparseOp zv = z * v;
        if (a == one) {
          CHECK(exactly_equal(zv, z));
        } else {
          CHECK(max_abs_entry(zv) == 0.0);
        }
      }
    }
  }

  TEST_CASE("Matrix Market export") {
    const auto s = symmetric_inverse_monoid(2);
    const auto path = std::filesystem::temp_directory_path() / "isgqd_v.mtx";
    save_matrix_market(left_regular(s, 5).matrix, path.string());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("%%MatrixMarket", 0) == 0);
    std::filesystem::remove(path);
  }

  TEST_CASE("window defect on a finite semigroup is zero") {
    const auto s = brandt(cyclic_group(3), 2);
    const SparseOp id = left_regular(s, s.zero()).matrix;
    for (Index a = 0; a < s.size(); ++a) {
      CHECK(leaked_columns(s, a).empty());
      CHECK(window_defect(s, a, id) == 0.0);
    }
    const auto w = brandt(integer_window(4), 1);
    const auto& layout = *w.brandt_layout();
    const Index shift = layout.index(0, layout.group.index_of_integer(1), 0);
    CHECK(leaked_columns(w, shift).size() == 1);
  }
}

TEST_SUITE("normequal") {
  TEST_CASE("|A| = |AV| when A(1 - VV*) = 0, 500 seeded pairs") {
    // A = B V* for random B supported on the columns of V, so A(1 - VV*) = 0.
    std::vector<InverseSemigroup> pool;
    for (const char* name : {"symmetric_inverse_3", "brandt_z3_4", "clifford_diamond", "qdnotr_k4", "brandt_s3_2"}) {
      pool.push_back(*load_spec(oracle::catalog_path(name)).semigroup);
    }
    std::mt19937_64 rng(0x6e6f726d);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
      const auto& s = pool[rng() % pool.size()];
      const auto n = static_cast<Eigen::Index>(s.size());
      // V: a product of two random v_s, or a partial isometry w_t v_s.
      const Index a = static_cast<Index>(rng() % s.size()), b = static_cast<Index>(rng() % s.size());
      SparseOp v = (trial % 2 == 0) ? SparseOp(left_regular(s, a).matrix * left_regular(s, b).matrix)
                                    : SparseOp(right_regular(s, b).matrix * left_regular(s, a).matrix);
      REQUIRE(is_partial_isometry(v));
      Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < 3 * n; ++i) bm(static_cast<Eigen::Index>(rng() % n), static_cast<Eigen::Index>(rng() % n)) = u(rng);
      const SparseOp amat = SparseOp(bm.sparseView()) * SparseOp(v.transpose());
      const SparseOp range = v * SparseOp(v.transpose());
      SparseOp id(n, n);
      id.setIdentity();
      REQUIRE(max_abs_entry(SparseOp(amat * SparseOp(id - range))) <= 1e-12);
      const double lhs = opnorm(amat);
      const double rhs = opnorm(SparseOp(amat * v));
      worst = std::max(worst, std::abs(lhs - rhs));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
      ++checked;
    }
    CHECK(checked == 500);
    MESSAGE("largest deviation " << worst);
  }
}

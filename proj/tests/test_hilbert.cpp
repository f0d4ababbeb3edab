#include "transducer/errors.hpp"
#include "transducer/hilbert.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace transducer;

namespace {

ModeRegister four_modes() { return make_register({{"a", 2}, {"b", 2}, {"c", 2}, {"d", 2}}); }

Matrix random_density(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  }
  Matrix rho = m * m.adjoint();
  return rho / rho.trace();
}

// Reduced state by explicit summation over every basis pair.
Matrix partial_trace_oracle(const ModeRegister& reg, const Matrix& rho, const std::vector<std::string>& keep) {
  std::vector<bool> kept(reg.size(), false);
  for (const auto& k : keep) kept[reg.index_of(k)] = true;
  const ModeRegister sub = reg.subregister(keep);
  Matrix out = Matrix::Zero(sub.dimension(), sub.dimension());
  for (Eigen::Index i = 0; i < reg.dimension(); ++i) {
    for (Eigen::Index j = 0; j < reg.dimension(); ++j) {
      const auto oi = reg.occupations(i), oj = reg.occupations(j);
      bool traced_equal = true;
      std::vector<int> si, sj;
      for (std::size_t m = 0; m < reg.size(); ++m) {
        if (kept[m]) {
          si.push_back(oi[m]);
          sj.push_back(oj[m]);
        } else if (oi[m] != oj[m]) {
          traced_equal = false;
        }
      }
      if (traced_equal) out(sub.basis_index(si), sub.basis_index(sj)) += rho(i, j);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("register dimensions and ordering") {
  CHECK(four_modes().dimension() == 16);
  CHECK(make_register({{"a", 3}}).dimension() == 3);
  const auto reg = make_register({{"x", 2}, {"y", 3}, {"z", 4}});
  CHECK(reg.stride(0) == 12);
  CHECK(reg.stride(2) == 1);
  const std::vector<int> occ{1, 2, 3};
  CHECK(reg.basis_index(occ) == 12 + 2 * 4 + 3);
  CHECK(reg.occupations(23) == occ);
}

TEST_CASE("register construction errors") {
  CHECK_THROWS_AS(make_register({{"a", 2}, {"a", 2}}), ValidationError);
  CHECK_THROWS_AS(make_register({{"a", 1}}), ValidationError);
  CHECK_THROWS_AS(make_register({{"a", 64}, {"b", 65}}), ValidationError);
  CHECK_THROWS_AS(make_register({{"a", 4}, {"b", 4}}, 8), ValidationError);
  CHECK_THROWS_AS(four_modes().index_of("e"), ValidationError);
}

TEST_CASE("annihilation operator matrix elements") {
  const Matrix a2 = annihilation_op(make_register({{"a", 2}}), "a").matrix();
  Matrix expected2 = Matrix::Zero(2, 2);
  expected2(0, 1) = 1;
  CHECK((a2 - expected2).norm() == 0);

  const Matrix a3 = annihilation_op(make_register({{"a", 3}}), "a").matrix();
  CHECK(a3(0, 1) == Complex(1));
  CHECK(std::abs(a3(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(a3.cwiseAbs().sum() == doctest::Approx(1 + std::sqrt(2.0)));

  // Second of two qubit modes is identity ⊗ lowering, written out by hand.
  Matrix by_hand = Matrix::Zero(4, 4);
  by_hand(0, 1) = 1;  // |00> <- |01>
  by_hand(2, 3) = 1;  // |10> <- |11>
  const Matrix b = annihilation_op(make_register({{"a", 2}, {"b", 2}}), "b").matrix();
  CHECK((b - by_hand).norm() == 0);
  CHECK_THROWS_AS(annihilation_op(four_modes(), "q"), ValidationError);
}

TEST_CASE("canonical commutator below the truncation edge") {
  const auto reg = make_register({{"a", 3}, {"b", 4}});
  for (const char* label : {"a", "b"}) {
    const Matrix a = annihilation_op(reg, label).matrix();
    const Matrix comm = a * a.adjoint() - a.adjoint() * a;
    const int top = reg.dim(label) - 1;
    for (Eigen::Index i = 0; i < reg.dimension(); ++i) {
      const int n = reg.occupations(i)[reg.index_of(label)];
      for (Eigen::Index j = 0; j < reg.dimension(); ++j) {
        if (n == top) continue;
        CHECK(std::abs(comm(i, j) - Complex(i == j ? 1.0 : 0.0)) <= 4 * std::numeric_limits<double>::epsilon());
      }
    }
  }
}

TEST_CASE("basis and superposition states") {
  const auto reg = four_modes();
  const std::vector<int> occ{1, 0, 0, 0};
  const DensityMatrix rho = basis_state(reg, occ);
  CHECK(rho.matrix()(8, 8) == Complex(1));
  CHECK(rho.matrix().cwiseAbs().sum() == doctest::Approx(1));
  CHECK((rho.matrix() * rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);

  const std::vector<int> bad{2, 0, 0, 0};
  CHECK_THROWS_AS(basis_state(reg, bad), ValidationError);

  const auto single = make_register({{"a", 2}});
  const double r = 1 / std::sqrt(2.0);
  const DensityMatrix plus = superposition_state(single, {{{0}, r}, {{1}, r}});
  CHECK((plus.matrix() - Matrix::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(plus.purity() == doctest::Approx(1).epsilon(1e-12));
  CHECK_THROWS_AS(superposition_state(single, {{{0}, 0.7}, {{1}, 0.7}}), ValidationError);
}

TEST_CASE("density matrix invariants are enforced") {
  const auto reg = make_register({{"a", 2}});
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0 + 1e-6;
  CHECK_THROWS_AS(DensityMatrix(reg, m), ValidationError);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(reg, m), ValidationError);
  m = Matrix::Identity(2, 2) / 2.0;
  m(0, 1) = Complex(0, 1e-9);
  CHECK_THROWS_AS(DensityMatrix(reg, m), ValidationError);
  CHECK_THROWS_AS(DensityMatrix(reg, Matrix::Identity(3, 3) / 3.0), ValidationError);
}

TEST_CASE("partial trace examples") {
  const auto reg = make_register({{"a", 2}, {"b", 2}});
  const std::vector<int> occ{1, 0};
  const Matrix kept = partial_trace(basis_state(reg, occ), {"a"}).matrix();
  CHECK(kept(1, 1) == Complex(1));
  CHECK(std::abs(kept(0, 0)) == 0);

  const double r = 1 / std::sqrt(2.0);
  const DensityMatrix bell = superposition_state(reg, {{{0, 1}, r}, {{1, 0}, r}});
  const Matrix mixed = partial_trace(bell, {"a"}).matrix();
  CHECK((mixed - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(partial_trace(bell, {}), ValidationError);
  CHECK_THROWS_AS(partial_trace(bell, {"z"}), ValidationError);
}

TEST_CASE("partial trace agrees with index summation") {
  const auto reg = four_modes();
  const Matrix rho = random_density(16, 7);
  for (const std::vector<std::string>& keep : std::vector<std::vector<std::string>>{
           {"a"}, {"d"}, {"b", "c"}, {"a", "d"}, {"d", "a"}, {"a", "b", "c", "d"}}) {
    const Matrix fast = partial_trace(reg, rho, keep);
    CHECK((fast - partial_trace_oracle(reg, rho, keep)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(fast.trace() - rho.trace()) < 1e-12);
  }

  const auto mixed = make_register({{"a", 3}, {"b", 2}, {"c", 4}});
  const Matrix big = random_density(24, 11);
  CHECK((partial_trace(mixed, big, {"a", "c"}) - partial_trace_oracle(mixed, big, {"a", "c"})).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("sequential partial traces compose") {
  const auto reg = four_modes();
  const DensityMatrix rho(reg, random_density(16, 3));
  const Matrix direct = partial_trace(rho, {"b"}).matrix();
  const DensityMatrix abc = partial_trace(rho, {"a", "b", "c"});
  const DensityMatrix bd = partial_trace(rho, {"b", "d"});
  CHECK((partial_trace(abc, {"b"}).matrix() - direct).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((partial_trace(bd, {"b"}).matrix() - direct).cwiseAbs().maxCoeff() < 1e-12);
  const DensityMatrix single = partial_trace(rho, {"b"});
  CHECK((partial_trace(single, {"b"}).matrix() - direct).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("operator algebra checks registers") {
  const auto reg = four_modes();
  const auto other = make_register({{"a", 2}, {"b", 2}, {"c", 2}, {"e", 2}});
  const auto a = annihilation_op(reg, "a");
  CHECK_THROWS_AS(a + annihilation_op(other, "a"), ValidationError);
  const auto n = a.adjoint() * a;
  CHECK((n - number_op(reg, "a")).matrix().norm() == 0);
  const std::vector<int> occ{1, 0, 1, 0};
  CHECK(expectation(basis_state(reg, occ), number_op(reg, "c")).real() == doctest::Approx(1));
}

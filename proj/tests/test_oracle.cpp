#include <doctest.h>

#include <cmath>

#include "mmw/oracle.hpp"
#include "mmw/random_states.hpp"

using namespace mmw;

namespace {

PolyOperator one() { return PolyOperator::identity(); }
PolyOperator a() { return PolyOperator::ladder(0, false); }

}  // namespace

TEST_CASE("materialization basics") {
  const ModeShape shape({5});
  CHECK(oracle::materialize(one(), shape).matrix.isIdentity(1e-15));
  const Eigen::MatrixXcd n =
      oracle::materialize(PolyOperator::number(0), shape).matrix;
  for (std::size_t k = 0; k < 5; ++k)
    CHECK(std::abs(n(static_cast<Eigen::Index>(k),
                     static_cast<Eigen::Index>(k)) -
                   cplx(static_cast<double>(k), 0.0)) < 1e-14);
  // canonical commutator holds away from the top level
  const Eigen::MatrixXcd A = oracle::materialize(a(), shape).matrix;
  const Eigen::MatrixXcd comm = A * A.adjoint() - A.adjoint() * A;
  for (std::size_t k = 0; k + 1 < 5; ++k)
    CHECK(std::abs(comm(static_cast<Eigen::Index>(k),
                        static_cast<Eigen::Index>(k)) -
                   cplx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("oracle expectation against contraction") {
  Rng rng(3);
  FockState s = random_pure_state(rng, {9, 9}, 3);
  const PolyOperator op =
      PolyOperator::monomial(cplx{0.3, 0.1}, {ModeExp{0, 1, 1}}) +
      PolyOperator::monomial(cplx{0.0, -1.0}, {ModeExp{0, 0, 1},
                                               ModeExp{1, 1, 0}}) +
      one();
  CHECK(std::abs(oracle::expect(s, op) - expect(s, op)) < 1e-12);
}

TEST_CASE("partial transpose involution and eigenvalues") {
  FockState prod = tensor(make_coherent(ModeShape({12}),
                                        std::vector<cplx>{{0.7, 0.0}}),
                          make_coherent(ModeShape({12}),
                                        std::vector<cplx>{{0.0, 0.6}}))
                       .to_density();
  FockState pt = oracle::partial_transpose(prod, {0});
  CHECK(oracle::eigenvalues(pt).minCoeff() >= -1e-10);
  FockState back = oracle::partial_transpose(pt, {0});
  for (std::size_t k = 0; k < back.amplitudes().size(); ++k)
    CHECK(back.amplitudes()[k] == prod.amplitudes()[k]);

  FockState tmsv = make_tmsv(ModeShape({16, 16}), 0.5).to_density();
  CHECK(oracle::eigenvalues(oracle::partial_transpose(tmsv, {0})).minCoeff() <
        -1e-3);
}

TEST_CASE("oracle moment matrices match the main path") {
  Rng rng(7);
  auto ad = adjoint(a());
  const PolyOperator b = PolyOperator::ladder(1, false);
  const PolyOperator bd = adjoint(b);
  std::vector<OperatorSet> sets;
  sets.push_back(OperatorSet(
      {one(), PolyOperator::monomial(1.0, {ModeExp{0, 0, 1}, ModeExp{1, 0, 1}})},
      {"1", "ab"}));
  sets.push_back(OperatorSet({one(), a() + bd, ad + b}, {"1", "a+bd", "ad+b"}));
  sets.push_back(OperatorSet({one(), a(), ad, b, bd},
                             {"1", "a", "ad", "b", "bd"}));
  for (int rep = 0; rep < 6; ++rep) {
    const FockState s = rep % 2 ? random_pure_state(rng, {10, 10}, 4)
                                : random_mixed_state(rng, {8, 8}, 2, 4);
    for (const OperatorSet& F : sets) {
      for (MatrixMode mode : {MatrixMode::normal, MatrixMode::gamma}) {
        const MomentMatrix main = mode == MatrixMode::normal
                                      ? build_normal(F, s)
                                      : build_gamma(F, s, {1});
        const MomentMatrix ref = oracle::moment_matrix(F, s, mode, {1});
        CHECK((main.entries - ref.entries).cwiseAbs().maxCoeff() <=
              1e-9 * std::max({main.scale, ref.scale, 1.0}));
      }
    }
  }
}

TEST_CASE("dimension cap guards dense work") {
  const ModeShape big({40, 40});
  CHECK_THROWS_AS(oracle::materialize(one(), big), error);
  CHECK_NOTHROW(oracle::materialize(one(), big, 40 * 40));
}

TEST_CASE("multi-mode partial transposes agree between both derivations") {
  Rng rng(29);
  const OperatorSet F(
      {one(),
       PolyOperator::monomial(cplx{0.4, 0.9},
                              {ModeExp{0, 1, 0}, ModeExp{1, 0, 1},
                               ModeExp{2, 0, 2}}),
       PolyOperator::ladder(1, true)},
      {"1", "adbc^2", "bd"});
  for (int rep = 0; rep < 4; ++rep) {
    const FockState s = rep % 2 ? random_pure_state(rng, {8, 8, 8}, 4)
                                : random_mixed_state(rng, {7, 7, 7}, 2, 4);
    for (const std::set<std::size_t>& pt :
         {std::set<std::size_t>{0, 2}, std::set<std::size_t>{1, 2},
          std::set<std::size_t>{0, 1, 2}}) {
      const MomentMatrix main = build_gamma(F, s, pt);
      const MomentMatrix ref =
          oracle::moment_matrix(F, s, MatrixMode::gamma, pt);
      CHECK((main.entries - ref.entries).cwiseAbs().maxCoeff() <=
            1e-9 * std::max({main.scale, ref.scale, 1.0}));
    }
    // transposing every mode of a real-coefficient set reproduces the
    // plain matrix transposed
    const FockState rho = s.to_density();
    const FockState all_pt = oracle::partial_transpose(rho, {0, 1, 2});
    double herm = 0.0;
    const std::size_t D = rho.dim();
    for (std::size_t i = 0; i < D; ++i)
      for (std::size_t j = 0; j < D; ++j)
        herm = std::max(herm,
                        std::abs(all_pt.amplitudes()[i * D + j] -
                                 rho.amplitudes()[j * D + i]));
    CHECK(herm == 0.0);
  }
}

TEST_CASE("high-exponent product sets agree with the dense route") {
  Rng rng(33);
  const OperatorSet F(
      {one(), PolyOperator::monomial(
                  1.0, {ModeExp{0, 0, 2}, ModeExp{1, 0, 1}, ModeExp{2, 0, 1}})},
      {"1", "a^2 b c"});
  for (int rep = 0; rep < 3; ++rep) {
    const FockState s = random_pure_state(rng, {8, 8, 8}, 4);
    for (MatrixMode mode : {MatrixMode::normal, MatrixMode::gamma}) {
      const MomentMatrix main = mode == MatrixMode::normal
                                    ? build_normal(F, s)
                                    : build_gamma(F, s, {0});
      const MomentMatrix ref = oracle::moment_matrix(F, s, mode, {0});
      CHECK((main.entries - ref.entries).cwiseAbs().maxCoeff() <=
            1e-9 * std::max({main.scale, ref.scale, 1.0}));
    }
  }
}

#include <doctest.h>

#include <cmath>

#include "mmw/moments.hpp"
#include "mmw/oracle.hpp"
#include "mmw/random_states.hpp"

using namespace mmw;

namespace {

PolyOperator one() { return PolyOperator::identity(); }
PolyOperator a() { return PolyOperator::ladder(0, false); }
PolyOperator b() { return PolyOperator::ladder(1, false); }
PolyOperator ab() {
  return PolyOperator::monomial(1.0, {ModeExp{0, 0, 1}, ModeExp{1, 0, 1}});
}

}  // namespace

TEST_CASE("trivial one-operator matrix") {
  FockState s = make_fock(ModeShape({4}), std::vector<std::size_t>{1});
  MomentMatrix m = build_normal(OperatorSet({one()}, {"1"}), s);
  CHECK(m.entries(0, 0).real() == doctest::Approx(1.0));
  PositivityReport rep = positivity(m);
  CHECK(rep.verdict == PositivityReport::Verdict::psd);
  CHECK(rep.determinant == doctest::Approx(1.0));
}

TEST_CASE("coherent states give singular rank-one matrices") {
  FockState s = make_coherent(ModeShape({24}), std::vector<cplx>{{1.0, 0.0}});
  MomentMatrix m = build_normal(OperatorSet({one(), a()}, {"1", "a"}), s);
  CHECK(std::abs(m.entries(0, 1) - cplx{1.0, 0.0}) < 1e-9);
  CHECK(std::abs(m.entries(1, 1) - cplx{1.0, 0.0}) < 1e-9);
  PositivityReport rep = positivity(m);
  CHECK(rep.verdict == PositivityReport::Verdict::psd);
  CHECK(std::abs(rep.determinant) < 1e-9);
  CHECK(std::abs(rep.min_eigenvalue) < 1e-9);
}

TEST_CASE("number-operator matrix on a one-photon state") {
  FockState s = make_fock(ModeShape({6}), std::vector<std::size_t>{1});
  MomentMatrix m = build_normal(
      OperatorSet({one(), PolyOperator::number(0)}, {"1", "n"}), s);
  CHECK(m.entries(0, 1).real() == doctest::Approx(1.0));
  CHECK(m.entries(1, 1).real() == doctest::Approx(0.0));  // <n(n-1)> = 0
  PositivityReport rep = positivity(m);
  CHECK(rep.determinant == doctest::Approx(-1.0));
  CHECK(rep.verdict == PositivityReport::Verdict::npd);
  // eigenvalues (1 +- sqrt 5)/2
  CHECK(rep.min_eigenvalue ==
        doctest::Approx((1.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
}

TEST_CASE("coherent rank-one structure for random monomial sets") {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<cplx> alpha{rng.complex_normal() * 0.5,
                            rng.complex_normal() * 0.5};
    FockState s = make_coherent(ModeShape({20, 20}), alpha);
    std::vector<PolyOperator> ops{one(), ab(), PolyOperator::number(0)};
    MomentMatrix m = build_normal(OperatorSet(ops, {"1", "ab", "n1"}), s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.entries,
                                                       Eigen::EigenvaluesOnly);
    // second largest eigenvalue vanishes
    CHECK(std::abs(es.eigenvalues()(1)) < 1e-8 * std::max(m.scale, 1.0));
  }
}

TEST_CASE("gamma matrix of a product coherent state is PSD") {
  FockState s = make_coherent(ModeShape({18, 18}),
                              std::vector<cplx>{{0.8, 0.2}, {-0.3, 0.5}});
  MomentMatrix m = build_gamma(OperatorSet({one(), ab()}, {"1", "ab"}), s, {0});
  PositivityReport rep = positivity(m);
  CHECK(rep.determinant >= -1e-9 * m.scale);
  CHECK(rep.verdict == PositivityReport::Verdict::psd);
}

TEST_CASE("gamma matrix detects the two-mode squeezed vacuum") {
  const double r = 1.0;
  FockState s = make_tmsv(ModeShape({36, 36}), r, {1e-6, false});

  // pair-product form: the transposed cross moment <a b+> vanishes on this
  // state, so the determinant is the (positive) occupation product; tie it
  // to the dense route
  MomentMatrix m1 = build_gamma(OperatorSet({one(), ab()}, {"1", "ab"}), s, {0});
  MomentMatrix o1 = oracle::moment_matrix(OperatorSet({one(), ab()},
                                                      {"1", "ab"}),
                                          s, MatrixMode::gamma, {0}, 1 << 11);
  CHECK(determinant(m1) ==
        doctest::Approx(determinant(o1)).epsilon(1e-8));
  CHECK(determinant(m1) > 0.0);
  CHECK(std::abs(m1.entries(0, 1)) < 1e-10);

  // occupation-vs-pair form reproduces -sinh^2 r
  MomentMatrix m2 = build_gamma(OperatorSet({a(), b()}, {"a", "b"}), s, {0});
  const double expected = -std::sinh(r) * std::sinh(r);
  CHECK(determinant(m2) == doctest::Approx(expected).epsilon(1e-5));
  CHECK(positivity(m2).verdict == PositivityReport::Verdict::npd);
}

TEST_CASE("gamma without pt modes is the plain-ordered matrix") {
  Rng rng(11);
  FockState s = random_mixed_state(rng, {8, 8}, 2, 4);
  OperatorSet F({one(), a(), adjoint(a())}, {"1", "a", "ad"});
  MomentMatrix main = build_gamma(F, s, {});
  MomentMatrix ref = oracle::moment_matrix(F, s, MatrixMode::gamma, {});
  CHECK((main.entries - ref.entries).cwiseAbs().maxCoeff() <
        1e-9 * std::max(main.scale, 1.0));
  // support on mode 0 only: pt on mode 1 changes nothing
  MomentMatrix pt1 = build_gamma(F, s, {1});
  CHECK((main.entries - pt1.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("positivity handles the singular matrix") {
  MomentMatrix m;
  m.entries = Eigen::MatrixXcd(2, 2);
  m.entries << 1.0, 1.0, 1.0, 1.0;
  m.scale = 1.0;
  PositivityReport rep = positivity(m);
  CHECK(rep.verdict == PositivityReport::Verdict::psd);
  CHECK(std::abs(rep.determinant) < 1e-12);
  CHECK(rep.all_principal_minors_nonneg.has_value());
  CHECK(*rep.all_principal_minors_nonneg);
}

TEST_CASE("principal minors catch indefiniteness the determinant misses") {
  // diag(1, -1, -1): determinant is +1 but 1x1 minors are negative
  MomentMatrix m;
  m.entries = Eigen::MatrixXcd::Zero(3, 3);
  m.entries(0, 0) = 1.0;
  m.entries(1, 1) = -1.0;
  m.entries(2, 2) = -1.0;
  m.scale = 1.0;
  PositivityReport rep = positivity(m);
  CHECK(rep.determinant == doctest::Approx(1.0));
  CHECK(rep.verdict == PositivityReport::Verdict::npd);
  CHECK_FALSE(*rep.all_principal_minors_nonneg);
}

TEST_CASE("asymmetry check fires on inconsistent inputs") {
  // force an asymmetric matrix through the report path
  MomentMatrix m;
  m.entries = Eigen::MatrixXcd(2, 2);
  m.entries << 1.0, cplx{0.0, 1.0}, cplx{0.0, 1.0}, 1.0;
  m.scale = 1.0;
  m.asymmetry = 2.0;  // what assembly would have recorded
  CHECK(m.asymmetry > 1e-8 * m.scale);
}

TEST_CASE("submatrix consistency") {
  Rng rng(31);
  FockState s = random_pure_state(rng, {9, 9}, 3);
  OperatorSet F({one(), a(), b(), ab()}, {"1", "a", "b", "ab"});
  MomentMatrix full = build_normal(F, s);
  for (std::size_t k = 0; k < F.size(); ++k) {
    MomentMatrix sub = build_normal(F.without(k), s);
    std::size_t ii = 0;
    for (std::size_t i = 0; i < F.size(); ++i) {
      if (i == k) continue;
      std::size_t jj = 0;
      for (std::size_t j = 0; j < F.size(); ++j) {
        if (j == k) continue;
        CHECK(full.entries(static_cast<Eigen::Index>(i),
                           static_cast<Eigen::Index>(j)) ==
              sub.entries(static_cast<Eigen::Index>(ii),
                          static_cast<Eigen::Index>(jj)));
        ++jj;
      }
      ++ii;
    }
  }
}

TEST_CASE("separability harness") {
  // section-structured set on a product coherent state
  FockState prod = make_coherent(ModeShape({18, 18}),
                                 std::vector<cplx>{{0.7, 0.1}, {0.4, -0.6}});
  OperatorSet F({a(), b()}, {"a", "b"});
  CHECK(separability_psd_check(F, prod));

  // factorized-state matrix is the Gram matrix of the two amplitudes
  MomentMatrix m = build_normal(F, prod);
  CHECK(std::abs(m.entries(0, 0).real() - std::norm(cplx{0.7, 0.1})) < 1e-9);
  CHECK(std::abs(m.entries(0, 1) -
                 std::conj(cplx{0.7, 0.1}) * cplx{0.4, -0.6}) < 1e-9);

  // (a, b) spans a Gram matrix and stays PSD even on entangled states; the
  // violation needs the creation-side partner on mode 2
  FockState tmsv = make_tmsv(ModeShape({24, 24}), 0.5);
  CHECK(separability_psd_check(F, tmsv));
  OperatorSet Fdag({a(), adjoint(b())}, {"a", "bd"});
  CHECK_FALSE(separability_psd_check(Fdag, tmsv));
  MomentMatrix mt = build_normal(Fdag, tmsv);
  CHECK(determinant(mt) ==
        doctest::Approx(-std::sinh(0.5) * std::sinh(0.5)).epsilon(1e-9));

  // structure violations are rejected
  CHECK_THROWS_AS(
      separability_psd_check(OperatorSet({a() + adjoint(a())}, {"x"}), prod),
      error);
  CHECK_THROWS_AS(
      separability_psd_check(OperatorSet({a(), a() * a()}, {"a", "aa"}),
                             prod),
      error);

  // positivity on factorized states extends to their mixtures
  Rng rng(67);
  OperatorSet Fsq({a() * a(), adjoint(b()) * adjoint(b())}, {"a^2", "bd^2"});
  for (int rep = 0; rep < 10; ++rep) {
    const FockState sep = random_coherent_mixture(rng, 2, 4, 1.2, 18).build();
    CHECK(separability_psd_check(F, sep));
    CHECK(separability_psd_check(Fdag, sep));
    CHECK(separability_psd_check(Fsq, sep));
  }
}

TEST_CASE("classical closure over the catalog operator sets") {
  Rng rng(41);
  auto bd = adjoint(b());
  auto ad = adjoint(a());
  std::vector<OperatorSet> sets;
  sets.push_back(OperatorSet({one(), ab(), ad * bd}, {"1", "ab", "adbd"}));
  sets.push_back(OperatorSet({one(), a(), ad, bd, b()},
                             {"1", "a", "ad", "bd", "b"}));
  sets.push_back(OperatorSet({PolyOperator::number(0),
                              PolyOperator::number(1)},
                             {"n1", "n2"}));
  sets.push_back(OperatorSet({one(), a() + bd, ad + b()},
                             {"1", "a+bd", "ad+b"}));
  for (int rep = 0; rep < 25; ++rep) {
    const CoherentMixtureSpec spec =
        random_coherent_mixture(rng, 2, 5, 1.5, 20);
    const FockState s = spec.build();
    for (const OperatorSet& F : sets) {
      MomentMatrix m = build_normal(F, s);
      PositivityReport r = positivity(m, 1e-8);
      CHECK(r.min_eigenvalue >= -1e-8 * std::max(m.scale, 1.0));
    }
  }
}

TEST_CASE("separable closure of the gamma matrices") {
  Rng rng(43);
  auto ad = adjoint(a());
  auto bd = adjoint(b());
  std::vector<OperatorSet> sets;
  sets.push_back(OperatorSet({one(), ab()}, {"1", "ab"}));
  sets.push_back(OperatorSet({a(), b()}, {"a", "b"}));
  sets.push_back(OperatorSet({one(), a(), ad, b(), bd},
                             {"1", "a", "ad", "b", "bd"}));
  for (int rep = 0; rep < 25; ++rep) {
    const FockState s = random_coherent_mixture(rng, 2, 4, 1.2, 18).build();
    for (const OperatorSet& F : sets) {
      MomentMatrix m = build_gamma(F, s, {0});
      PositivityReport r = positivity(m, 1e-8);
      CHECK(r.min_eigenvalue >= -1e-8 * std::max(m.scale, 1.0));
    }
  }
}

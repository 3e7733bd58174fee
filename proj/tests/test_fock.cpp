#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mmw/fock.hpp"
#include "mmw/ops.hpp"
#include "mmw/random_states.hpp"

using namespace mmw;

namespace {

const Letter A{0, false};
const Letter Ad{0, true};
const Letter B{1, false};
const Letter Bd{1, true};

cplx ew(const FockState& s, std::initializer_list<Letter> w) {
  return expect_word(s, std::vector<Letter>(w));
}

}  // namespace

TEST_CASE("mode shape layout and guards") {
  ModeShape shape({3, 4, 5});
  CHECK(shape.dim() == 60);
  CHECK(shape.stride(0) == 20);
  CHECK(shape.stride(2) == 1);
  CHECK_THROWS_AS(ModeShape({1}), error);
  CHECK_THROWS_AS(ModeShape({}), error);
}

TEST_CASE("coherent state moments") {
  ModeShape shape({30});
  const cplx alpha{1.0, 0.0};
  FockState s = make_coherent(shape, std::vector<cplx>{alpha});
  CHECK(s.leakage() < 1e-8);
  // <n> = |alpha|^2, independently as sum n |c_n|^2
  double n_direct = 0.0;
  for (std::size_t n = 0; n < 30; ++n)
    n_direct += static_cast<double>(n) * std::norm(s.amplitudes()[n]);
  CHECK(ew(s, {Ad, A}).real() == doctest::Approx(n_direct).epsilon(1e-14));
  CHECK(ew(s, {Ad, A}).real() == doctest::Approx(1.0).epsilon(1e-12));

  // vacuum comes out exactly
  FockState vac = make_coherent(ModeShape({4, 4}),
                                std::vector<cplx>{cplx{}, cplx{}});
  CHECK(vac.leakage() == 0.0);
  CHECK(vac.amplitudes()[0] == cplx{1.0, 0.0});

  // eigenvalue property
  FockState sc = make_coherent(ModeShape({25}),
                               std::vector<cplx>{cplx{0.5, 0.5}});
  const cplx a_mean = ew(sc, {A});
  CHECK(std::abs(a_mean - cplx{0.5, 0.5}) < 1e-10);
}

TEST_CASE("coherent cutoff guard") {
  ModeShape shape({8});
  CHECK_THROWS_AS(make_coherent(shape, std::vector<cplx>{cplx{2.0, 0.0}}),
                  cutoff_error);
  StateOptions opt;
  opt.override_cutoff_guard = true;
  opt.leakage_tol = 1.0;
  CHECK_NOTHROW(make_coherent(shape, std::vector<cplx>{cplx{2.0, 0.0}}, opt));
}

TEST_CASE("fock states") {
  FockState s = make_fock(ModeShape({4, 4}), std::vector<std::size_t>{1, 1});
  CHECK(s.leakage() == 0.0);
  CHECK(ew(s, {Ad, A, Bd, B}).real() == doctest::Approx(1.0));
  FockState s2 = make_fock(ModeShape({5, 5}), std::vector<std::size_t>{2, 0});
  CHECK(ew(s2, {Ad, Ad, A, A}).real() == doctest::Approx(2.0));
  CHECK_THROWS_AS(make_fock(ModeShape({3}), std::vector<std::size_t>{3}),
                  cutoff_error);
}

TEST_CASE("thermal state moments") {
  FockState s = make_thermal(ModeShape({40}), std::vector<double>{0.5});
  // <n^2> = 2 nbar^2 + nbar, via the plain word a+ a a+ a
  CHECK(ew(s, {Ad, A, Ad, A}).real() == doctest::Approx(1.0).epsilon(1e-8));
  FockState s2 = make_thermal(ModeShape({60}), std::vector<double>{1.0});
  CHECK(ew(s2, {Ad, Ad, A, A}).real() == doctest::Approx(2.0).epsilon(1e-8));
  FockState vac = make_thermal(ModeShape({4}), std::vector<double>{0.0});
  CHECK(ew(vac, {Ad, A}).real() == doctest::Approx(0.0));
}

TEST_CASE("squeezed vacuum moments") {
  const double r = 0.5;
  FockState s = make_sq_vac(ModeShape({40}), r);
  CHECK(ew(s, {Ad, A}).real() ==
        doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-10));
  // <a^2> = e^{i theta} sinh r cosh r at theta = 0
  CHECK(ew(s, {A, A}).real() ==
        doctest::Approx(std::sinh(r) * std::cosh(r)).epsilon(1e-10));
  CHECK(ew(s, {A, A}).imag() == doctest::Approx(0.0));
  FockState vac = make_sq_vac(ModeShape({8}), 0.0);
  CHECK(std::abs(vac.amplitudes()[0] - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("normally ordered squeezed quadrature variance") {
  const double r = 0.5;
  FockState s = make_sq_vac(ModeShape({40}), r);
  const PolyOperator X = quad_x(0, std::numbers::pi / 2);
  const PolyOperator dX = shift_by_mean(X, s);
  const double varn = expect(s, normal_product(dX, dX)).real();
  CHECK(varn ==
        doctest::Approx(std::exp(-2.0 * r) - 1.0).epsilon(1e-8));
}

TEST_CASE("two-mode squeezed vacuum moments") {
  const double r = 1.0;
  FockState s = make_tmsv(ModeShape({36, 36}), r, {1e-6, false});
  CHECK(std::abs(ew(s, {A, B}) - std::sinh(r) * std::cosh(r)) < 1e-6);
  CHECK(std::abs(ew(s, {Ad, A}) - std::sinh(r) * std::sinh(r)) < 1e-6);
  CHECK(std::abs(ew(s, {Bd, B}) - std::sinh(r) * std::sinh(r)) < 1e-6);
  FockState vac = make_tmsv(ModeShape({6, 6}), 0.0);
  CHECK(std::abs(vac.amplitudes()[0] - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("tmsv leakage gate fires at tight tolerance") {
  // r=1 at cutoff 30 leaks about 8e-8, above the 1e-8 default
  CHECK_THROWS_AS(make_tmsv(ModeShape({30, 30}), 1.0), cutoff_error);
  CHECK_NOTHROW(make_tmsv(ModeShape({30, 30}), 1.0, {1e-6, false}));
}

TEST_CASE("tensor and mix") {
  FockState v = make_coherent(ModeShape({6}), std::vector<cplx>{cplx{}});
  FockState two = tensor(v, v);
  CHECK(two.shape().num_modes() == 2);
  CHECK(std::abs(ew(two, {}) - 1.0) < 1e-15);

  FockState c1 = make_coherent(ModeShape({24}), std::vector<cplx>{{1.0, 0.0}});
  FockState c2 = make_coherent(ModeShape({24}), std::vector<cplx>{{-1.0, 0.0}});
  std::vector<std::pair<double, FockState>> parts{{0.5, c1}, {0.5, c2}};
  FockState m = mix(parts);
  CHECK(m.kind() == StateKind::density);
  CHECK(std::abs(ew(m, {A})) < 1e-12);
  CHECK(ew(m, {Ad, A}).real() == doctest::Approx(1.0).epsilon(1e-10));

  std::vector<std::pair<double, FockState>> single{{1.0, c1}};
  FockState md = mix(single);
  CHECK(md.kind() == StateKind::density);
  CHECK(std::abs(ew(md, {Ad, A}) - ew(c1, {Ad, A})) < 1e-14);

  std::vector<std::pair<double, FockState>> bad{{0.7, c1}, {0.2, c2}};
  CHECK_THROWS_AS(mix(bad), error);

  // density and pure components mix on one code path
  std::vector<std::pair<double, FockState>> hetero{{0.4, m}, {0.6, c1}};
  FockState h = mix(hetero);
  const cplx want = 0.4 * ew(m, {Ad, A}) + 0.6 * ew(c1, {Ad, A});
  CHECK(std::abs(ew(h, {Ad, A}) - want) < 1e-12);
}

TEST_CASE("empty word reports the retained norm") {
  FockState s = make_tmsv(ModeShape({20, 20}), 1.0, {1e-3, false});
  CHECK(ew(s, {}).real() == doctest::Approx(1.0 - s.leakage()).epsilon(1e-13));
  CHECK(ew(s, {}).imag() == 0.0);
}

TEST_CASE("plain word on coherent state picks up the commutator") {
  FockState s = make_coherent(ModeShape({30}), std::vector<cplx>{{1.0, 0.0}});
  // a a+ = a+ a + 1
  CHECK(ew(s, {A, Ad}).real() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("hermiticity of word expectations") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    FockState s = rep % 2 == 0 ? random_pure_state(rng, {8, 8}, 0)
                               : random_mixed_state(rng, {6, 6}, 2, 0);
    std::vector<Letter> w;
    const std::size_t len = rng.index(6) + 1;
    for (std::size_t k = 0; k < len; ++k)
      w.push_back(Letter{rng.index(2), rng.index(2) == 0});
    std::vector<Letter> wdag(w.rbegin(), w.rend());
    for (Letter& l : wdag) l.dagger = !l.dagger;
    const cplx lhs = expect_word(s, w);
    const cplx rhs = std::conj(expect_word(s, wdag));
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("linearity of expectations under mixing") {
  Rng rng(13);
  FockState s1 = random_pure_state(rng, {7, 7}, 0);
  FockState s2 = random_pure_state(rng, {7, 7}, 0);
  std::vector<std::pair<double, FockState>> parts{{0.3, s1}, {0.7, s2}};
  FockState m = mix(parts);
  const std::vector<Letter> w{Ad, A, Bd, B};
  const cplx mixed = expect_word(m, w);
  const cplx weighted = 0.3 * expect_word(s1, w) + 0.7 * expect_word(s2, w);
  CHECK(std::abs(mixed - weighted) < 1e-12);
}

TEST_CASE("coherent eigenrelation for words") {
  const cplx alpha{0.4, -0.3};
  FockState s = make_coherent(ModeShape({24, 24}),
                              std::vector<cplx>{alpha, cplx{0.2, 0.1}});
  const std::vector<std::vector<Letter>> tails = {
      {}, {Ad, A}, {Bd, B}, {Ad, Bd, A, B}};
  for (const auto& tail : tails) {
    std::vector<Letter> with_a = tail;
    with_a.push_back(A);  // rightmost acts first
    const cplx lhs = expect_word(s, with_a);
    const cplx rhs = alpha * expect_word(s, tail);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("truncation stability of low-degree moments") {
  // doubling the cutoffs moves degree-4 moments of the factory states by
  // less than 1e-8 relative
  auto relshift = [](auto&& make, const std::vector<Letter>& w) {
    const cplx base = expect_word(make(1), w);
    const cplx fine = expect_word(make(2), w);
    return std::abs(base - fine) / std::max(1.0, std::abs(fine));
  };
  const std::vector<Letter> w4{Ad, A, Bd, B};
  CHECK(relshift(
            [](std::size_t f) {
              return make_coherent(ModeShape({24 * f, 24 * f}),
                                   std::vector<cplx>{{1.2, 0.0}, {0.0, 0.8}});
            },
            w4) < 1e-8);
  CHECK(relshift(
            [](std::size_t f) {
              return make_tmsv(ModeShape({24 * f, 24 * f}), 0.5);
            },
            w4) < 1e-8);
  const std::vector<Letter> w1{Ad, Ad, A, A};
  CHECK(relshift(
            [](std::size_t f) {
              return make_thermal(ModeShape({48 * f}),
                                  std::vector<double>{0.8});
            },
            w1) < 1e-8);
  CHECK(relshift(
            [](std::size_t f) {
              return make_sq_vac(ModeShape({40 * f}), 0.6);
            },
            w1) < 1e-8);
}

TEST_CASE("blocked kernel matches the plain reference") {
  // dimensions above one reduction block, so the blocked path is exercised
  Rng rng(99);
  FockState pure = random_pure_state(rng, {60, 60}, 0);
  FockState dens = make_tmsv(ModeShape({48, 48}), 0.8, {1.0, false})
                       .to_density();
  const std::vector<std::vector<Letter>> words = {
      {A}, {Ad, A}, {A, Ad, Bd, B}, {Ad, Ad, A, A, Bd, B}};
  for (const auto& w : words) {
    CHECK(std::abs(expect_word(pure, w) - expect_word_reference(pure, w)) <
          1e-13);
    CHECK(std::abs(expect_word(dens, w) - expect_word_reference(dens, w)) <
          1e-13);
  }
}

TEST_CASE("density factory validates hermiticity") {
  ModeShape shape({2});
  std::vector<cplx> bad{cplx{0.5, 0.0}, cplx{0.1, 0.2}, cplx{0.3, 0.2},
                        cplx{0.5, 0.0}};
  CHECK_THROWS_AS(FockState::density(shape, bad), numerical_error);
}

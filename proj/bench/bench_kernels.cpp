// Compares the blocked (OpenMP) kernels against the plain serial reference:
// single-word expectations, moment assembly vs the dense oracle route, and
// a draw-parallel closure suite at one thread vs all threads.
//
//   mmw_bench [repetitions]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "mmw/moments.hpp"
#include "mmw/oracle.hpp"
#include "mmw/random_states.hpp"
#include "mmw/suites.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace mmw;

namespace {

double seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class F>
double time_best(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const double t0 = seconds();
    f();
    best = std::min(best, seconds() - t0);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
  std::printf("openmp threads: %d\n", threads);
#else
  const int threads = 1;
  std::printf("serial build\n");
#endif

  Rng rng(1);
  const FockState pure = random_pure_state(rng, {256, 256}, 0);
  const FockState dens =
      make_tmsv(ModeShape({56, 56}), 0.9, {1.0, false}).to_density();

  const std::vector<Letter> word{{0, true}, {0, true}, {0, false},
                                 {0, false}, {1, true}, {1, false}};

  volatile double sink = 0.0;
  const double t_pure_ref = time_best(reps, [&] {
    sink = expect_word_reference(pure, word).real();
  });
  const double t_pure_blk = time_best(reps, [&] {
    sink = expect_word(pure, word).real();
  });
  std::printf("expect_word pure  dim=%6zu   reference %8.3f ms   blocked "
              "%8.3f ms   speedup %.2fx\n",
              pure.dim(), 1e3 * t_pure_ref, 1e3 * t_pure_blk,
              t_pure_ref / t_pure_blk);

  const double t_dens_ref = time_best(reps, [&] {
    sink = expect_word_reference(dens, word).real();
  });
  const double t_dens_blk = time_best(reps, [&] {
    sink = expect_word(dens, word).real();
  });
  std::printf("expect_word dens  dim=%6zu   reference %8.3f ms   blocked "
              "%8.3f ms   speedup %.2fx\n",
              dens.dim(), 1e3 * t_dens_ref, 1e3 * t_dens_blk,
              t_dens_ref / t_dens_blk);

  // moment assembly: entry-parallel main path vs the dense oracle
  auto one = PolyOperator::identity();
  auto a = PolyOperator::ladder(0, false), ad = PolyOperator::ladder(0, true);
  auto b = PolyOperator::ladder(1, false), bd = PolyOperator::ladder(1, true);
  const OperatorSet F({one, a, ad, b, bd, a * b, ad * bd},
                      {"1", "a", "ad", "b", "bd", "ab", "adbd"});
  const FockState mid =
      make_tmsv(ModeShape({28, 28}), 0.8, {1.0, false}).to_density();
  const double t_asm = time_best(reps, [&] {
    sink = build_normal(F, mid).scale;
  });
  const double t_oracle = time_best(reps, [&] {
    sink = oracle::moment_matrix(F, mid, MatrixMode::normal).scale;
  });
  std::printf("moment assembly 7x7 dim=%zu   main %8.3f ms   dense oracle "
              "%8.3f ms\n",
              mid.dim(), 1e3 * t_asm, 1e3 * t_oracle);

#ifdef _OPENMP
  // draw-parallel property suite
  omp_set_num_threads(1);
  const double t_one = time_best(1, [&] {
    sink = suite_classical_closure(3, 24).worst;
  });
  omp_set_num_threads(threads);
  const double t_all = time_best(1, [&] {
    sink = suite_classical_closure(3, 24).worst;
  });
  std::printf("classical-closure x24   1 thread %8.1f ms   %d threads "
              "%8.1f ms   speedup %.2fx\n",
              1e3 * t_one, threads, 1e3 * t_all, t_one / t_all);
#endif
  (void)sink;
  return 0;
}

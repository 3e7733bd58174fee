#ifndef MMW_RANDOM_STATES_HPP
#define MMW_RANDOM_STATES_HPP

#include <cstdint>
#include <vector>

#include "mmw/fock.hpp"

// Seeded state generators for the property suites. The generator is
// hand-rolled (splitmix64 + explicit Box-Muller) so draws are reproducible
// bit-for-bit across platforms and standard-library versions.

namespace mmw {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();                        // standard normal
  cplx complex_normal();                  // independent N(0,1) parts
  std::size_t index(std::size_t n);       // [0, n)

  // Independent stream for draw k of a seeded suite.
  static Rng for_draw(std::uint64_t seed, std::uint64_t draw);

 private:
  std::uint64_t state_;
};

struct CoherentComponent {
  double weight;
  std::vector<cplx> alpha;
};

// Mixture of product coherent states: a certified-classical state (its
// phase-space weight is a sum of point masses) and, by construction, a
// separable one.
struct CoherentMixtureSpec {
  std::vector<std::size_t> cutoffs;
  std::vector<CoherentComponent> components;

  FockState build(const StateOptions& opt = {}) const;
  std::string describe() const;
};

// Up to max_components, amplitudes within |alpha| <= alpha_max.
CoherentMixtureSpec random_coherent_mixture(Rng& rng, std::size_t num_modes,
                                            std::size_t max_components = 5,
                                            double alpha_max = 1.5,
                                            std::size_t cutoff = 18);

// Random normalized pure state with exactly zero truncation leakage and
// `headroom` empty top levels per mode, so low-degree words never touch the
// truncation boundary. Amplitudes decay geometrically with total occupation.
FockState random_pure_state(Rng& rng, const std::vector<std::size_t>& cutoffs,
                            std::size_t headroom = 4);

// Random mixture of a few random pure states (same support policy).
FockState random_mixed_state(Rng& rng, const std::vector<std::size_t>& cutoffs,
                             std::size_t max_components = 3,
                             std::size_t headroom = 4);

}  // namespace mmw

#endif  // MMW_RANDOM_STATES_HPP

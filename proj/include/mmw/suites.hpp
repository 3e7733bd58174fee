#ifndef MMW_SUITES_HPP
#define MMW_SUITES_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mmw/witnesses.hpp"

// Seeded property suites: closure of the witness catalog on certified
// classical / separable states, the determinant decomposition identities,
// and the dual-path equivalence against the dense oracle.

namespace mmw {

struct SuiteFailure {
  std::size_t draw = 0;
  std::string what;
  std::string state_desc;  // full spec of the failing draw
  double value = 0.0;
};

struct SuiteResult {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::size_t checks = 0;
  // Closest approach to a violation across all draws (margin for closure
  // suites, relative residual for identity/oracle suites).
  double worst = -std::numeric_limits<double>::infinity();
  std::string worst_what;
  std::size_t worst_draw = 0;
  std::vector<SuiteFailure> failures;

  bool passed() const { return failures.empty(); }
};

// 2-mode coherent mixtures vs every applicable table-1 witness; any
// nonclassical verdict is a failure.
SuiteResult suite_classical_closure(std::uint64_t seed, std::size_t count,
                                    double tol_rel = 1e-8);

// 2- and 3-mode mixtures of product coherent states vs every applicable
// table-2 witness; any entangled verdict is a failure.
SuiteResult suite_separable_closure(std::uint64_t seed, std::size_t count,
                                    double tol_rel = 1e-8);

// Decomposition and dual-path identities on random two-mode states.
SuiteResult suite_identities(std::uint64_t seed, std::size_t count,
                             double tol_rel = 1e-8);

// Moment-matrix entries main path vs dense oracle, both orderings, plus
// partial-transpose spot checks.
SuiteResult suite_oracle_equivalence(std::uint64_t seed, std::size_t count,
                                     double tol_rel = 1e-9);

SuiteResult run_suite(const std::string& name, std::uint64_t seed,
                      std::size_t count);

}  // namespace mmw

#endif  // MMW_SUITES_HPP

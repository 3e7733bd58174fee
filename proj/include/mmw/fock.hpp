#ifndef MMW_FOCK_HPP
#define MMW_FOCK_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Truncated multimode Fock spaces: state construction and exact expectation
// values of ladder-operator words on the truncated space.

namespace mmw {

using cplx = std::complex<double>;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Construction-time violations: cutoff guards, bad occupations, shape mismatch.
struct cutoff_error : error {
  using error::error;
};

// Internal cross-checks that failed (asymmetry, dual-path disagreement).
struct numerical_error : error {
  using error::error;
};

// Mode count plus per-mode local dimension d_m (Fock levels 0..d_m-1).
class ModeShape {
 public:
  ModeShape(std::vector<std::size_t> cutoffs);

  std::size_t num_modes() const { return cutoffs_.size(); }
  std::size_t cutoff(std::size_t m) const { return cutoffs_[m]; }
  const std::vector<std::size_t>& cutoffs() const { return cutoffs_; }
  std::size_t dim() const { return dim_; }  // product of cutoffs

  // Row-major mixed-radix strides; last mode is fastest.
  std::size_t stride(std::size_t m) const { return strides_[m]; }

  bool operator==(const ModeShape& o) const { return cutoffs_ == o.cutoffs_; }
  bool operator!=(const ModeShape& o) const { return !(*this == o); }

  // Concatenation for tensor products.
  friend ModeShape operator+(const ModeShape& a, const ModeShape& b);

 private:
  std::vector<std::size_t> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t dim_ = 0;
};

enum class StateKind { pure, density };

// One ladder-operator letter: annihilation or creation on a single mode.
struct Letter {
  std::size_t mode = 0;
  bool dagger = false;
};

struct StateOptions {
  double leakage_tol = 1e-8;
  bool override_cutoff_guard = false;
};

// Immutable dense state on a truncated Fock space. Pure states hold dim()
// amplitudes, densities a row-major dim() x dim() matrix. Truncation leakage
// (norm or trace deficit) is recorded and never renormalized away.
class FockState {
 public:
  static FockState pure(ModeShape shape, std::vector<cplx> amplitudes,
                        const StateOptions& opt = {});
  static FockState density(ModeShape shape, std::vector<cplx> matrix,
                           const StateOptions& opt = {});

  const ModeShape& shape() const { return shape_; }
  StateKind kind() const { return kind_; }
  double leakage() const { return leakage_; }
  std::size_t dim() const { return shape_.dim(); }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  cplx density_entry(std::size_t row, std::size_t col) const {
    return kind_ == StateKind::density ? amp_[row * dim() + col]
                                       : amp_[row] * std::conj(amp_[col]);
  }

  // Promote a pure state to a density operator (no-op copy for densities).
  FockState to_density() const;

 private:
  FockState(ModeShape shape, StateKind kind, std::vector<cplx> amp,
            double leakage)
      : shape_(std::move(shape)), kind_(kind), amp_(std::move(amp)),
        leakage_(leakage) {}

  ModeShape shape_;
  StateKind kind_;
  std::vector<cplx> amp_;
  double leakage_;
};

// --- state factories ---------------------------------------------------

// Product coherent state, amplitudes e^{-|a|^2/2} a^n / sqrt(n!), truncated.
// Guard |alpha_m|^2 <= d_m/4 unless overridden.
FockState make_coherent(const ModeShape& shape, std::span<const cplx> alpha,
                        const StateOptions& opt = {});

FockState make_fock(const ModeShape& shape, std::span<const std::size_t> occ);

// Product of geometric (thermal) distributions with mean occupations nbar.
FockState make_thermal(const ModeShape& shape, std::span<const double> nbar,
                       const StateOptions& opt = {});

// Single-mode squeezed vacuum with <a^2> = e^{i theta} sinh r cosh r, so the
// phi = pi/2 quadrature of x(phi) = a e^{i phi} + a^+ e^{-i phi} is squeezed
// at theta = 0.
FockState make_sq_vac(const ModeShape& shape, double r, double theta = 0.0,
                      const StateOptions& opt = {});

// Two-mode squeezed vacuum, sum_n (tanh^n r / cosh r) |n,n>, truncated.
FockState make_tmsv(const ModeShape& shape, double r,
                    const StateOptions& opt = {});

FockState tensor(const FockState& s1, const FockState& s2);

// Convex mixture; always yields a density operator.
FockState mix(std::span<const std::pair<double, FockState>> components);

// --- expectations -------------------------------------------------------

// <word> with letters applied as an operator product (rightmost letter acts
// first on kets). Exact on the truncated space; a^+ annihilates the top Fock
// level. Empty word gives 1 - leakage.
cplx expect_word(const FockState& state, std::span<const Letter> word);

// Plain single-loop implementation kept as the reference for the blocked
// kernel; used by tests and the benchmark.
cplx expect_word_reference(const FockState& state,
                           std::span<const Letter> word);

}  // namespace mmw

#endif  // MMW_FOCK_HPP

#include "mmw/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mmw/parallel.hpp"

namespace mmw {

ModeShape::ModeShape(std::vector<std::size_t> cutoffs)
    : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw error("ModeShape: need at least one mode");
  for (std::size_t d : cutoffs_) {
    if (d < 2) throw error("ModeShape: every cutoff must be >= 2");
  }
  dim_ = 1;
  for (std::size_t d : cutoffs_) {
    if (dim_ > std::numeric_limits<std::size_t>::max() / d / 2)
      throw error("ModeShape: total dimension overflows addressable size");
    dim_ *= d;
  }
  strides_.assign(cutoffs_.size(), 1);
  for (std::size_t m = cutoffs_.size(); m-- > 1;)
    strides_[m - 1] = strides_[m] * cutoffs_[m];
}

ModeShape operator+(const ModeShape& a, const ModeShape& b) {
  std::vector<std::size_t> c = a.cutoffs_;
  c.insert(c.end(), b.cutoffs_.begin(), b.cutoffs_.end());
  return ModeShape(std::move(c));
}

namespace {

void check_leakage(double leakage, const StateOptions& opt) {
  if (leakage < -1e-12)
    throw numerical_error("state norm exceeds 1 by " +
                          std::to_string(-leakage));
  if (leakage > opt.leakage_tol)
    throw cutoff_error("truncation leakage " + std::to_string(leakage) +
                       " exceeds tolerance " +
                       std::to_string(opt.leakage_tol) +
                       " (raise cutoffs or the leakage tolerance)");
}

}  // namespace

FockState FockState::pure(ModeShape shape, std::vector<cplx> amplitudes,
                          const StateOptions& opt) {
  if (amplitudes.size() != shape.dim())
    throw error("pure state amplitude count does not match shape");
  double norm2 = 0.0;
  for (const cplx& c : amplitudes) norm2 += std::norm(c);
  const double leakage = 1.0 - norm2;
  check_leakage(leakage, opt);
  return FockState(std::move(shape), StateKind::pure, std::move(amplitudes),
                   leakage);
}

FockState FockState::density(ModeShape shape, std::vector<cplx> matrix,
                             const StateOptions& opt) {
  const std::size_t d = shape.dim();
  if (matrix.size() != d * d)
    throw error("density matrix size does not match shape");
  double asym = 0.0;
  double tr = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    tr += matrix[i * d + i].real();
    asym = std::max(asym, std::abs(matrix[i * d + i].imag()));
    for (std::size_t j = i + 1; j < d; ++j)
      asym = std::max(
          asym, std::abs(matrix[i * d + j] - std::conj(matrix[j * d + i])));
  }
  if (asym > 1e-12)
    throw numerical_error("density matrix is not Hermitian (max deviation " +
                          std::to_string(asym) + ")");
  const double leakage = 1.0 - tr;
  check_leakage(leakage, opt);
  return FockState(std::move(shape), StateKind::density, std::move(matrix),
                   leakage);
}

FockState FockState::to_density() const {
  if (kind_ == StateKind::density) return *this;
  const std::size_t d = dim();
  std::vector<cplx> rho(d * d);
  parallel_index_for(d, [&](std::size_t i) {
    for (std::size_t j = 0; j < d; ++j)
      rho[i * d + j] = amp_[i] * std::conj(amp_[j]);
  });
  return FockState(shape_, StateKind::density, std::move(rho), leakage_);
}

FockState make_coherent(const ModeShape& shape, std::span<const cplx> alpha,
                        const StateOptions& opt) {
  const std::size_t M = shape.num_modes();
  if (alpha.size() != M) throw error("make_coherent: alpha length != modes");
  if (!opt.override_cutoff_guard) {
    for (std::size_t m = 0; m < M; ++m) {
      if (std::norm(alpha[m]) > static_cast<double>(shape.cutoff(m)) / 4.0)
        throw cutoff_error(
            "make_coherent: |alpha|^2 > d/4 for mode " + std::to_string(m) +
            "; raise the cutoff or set the override flag");
    }
  }
  // Per-mode coefficient tables, then a product over modes.
  std::vector<std::vector<cplx>> coef(M);
  for (std::size_t m = 0; m < M; ++m) {
    const std::size_t d = shape.cutoff(m);
    coef[m].resize(d);
    const double w = std::exp(-0.5 * std::norm(alpha[m]));
    cplx c = w;
    for (std::size_t n = 0; n < d; ++n) {
      coef[m][n] = c;
      c *= alpha[m] / std::sqrt(static_cast<double>(n + 1));
    }
  }
  std::vector<cplx> amp(shape.dim());
  for (std::size_t idx = 0; idx < amp.size(); ++idx) {
    cplx v = 1.0;
    std::size_t rest = idx;
    for (std::size_t m = 0; m < M; ++m) {
      const std::size_t n = rest / shape.stride(m);
      rest %= shape.stride(m);
      v *= coef[m][n];
    }
    amp[idx] = v;
  }
  return FockState::pure(shape, std::move(amp), opt);
}

FockState make_fock(const ModeShape& shape,
                    std::span<const std::size_t> occ) {
  if (occ.size() != shape.num_modes())
    throw error("make_fock: occupation length != modes");
  std::size_t idx = 0;
  for (std::size_t m = 0; m < occ.size(); ++m) {
    if (occ[m] >= shape.cutoff(m))
      throw cutoff_error("make_fock: occupation " + std::to_string(occ[m]) +
                         " out of range for mode " + std::to_string(m));
    idx += occ[m] * shape.stride(m);
  }
  std::vector<cplx> amp(shape.dim());
  amp[idx] = 1.0;
  return FockState::pure(shape, std::move(amp));
}

FockState make_thermal(const ModeShape& shape, std::span<const double> nbar,
                       const StateOptions& opt) {
  const std::size_t M = shape.num_modes();
  if (nbar.size() != M) throw error("make_thermal: nbar length != modes");
  for (double nb : nbar)
    if (nb < 0) throw error("make_thermal: nbar must be >= 0");
  std::vector<std::vector<double>> p(M);
  for (std::size_t m = 0; m < M; ++m) {
    const std::size_t d = shape.cutoff(m);
    p[m].resize(d);
    const double nb = nbar[m];
    double q = 1.0 / (1.0 + nb);
    for (std::size_t n = 0; n < d; ++n) {
      p[m][n] = q;
      q *= nb / (1.0 + nb);
    }
  }
  const std::size_t D = shape.dim();
  std::vector<cplx> rho(D * D);
  for (std::size_t idx = 0; idx < D; ++idx) {
    double v = 1.0;
    std::size_t rest = idx;
    for (std::size_t m = 0; m < M; ++m) {
      const std::size_t n = rest / shape.stride(m);
      rest %= shape.stride(m);
      v *= p[m][n];
    }
    rho[idx * D + idx] = v;
  }
  return FockState::density(shape, std::move(rho), opt);
}

FockState make_sq_vac(const ModeShape& shape, double r, double theta,
                      const StateOptions& opt) {
  if (shape.num_modes() != 1)
    throw error("make_sq_vac: single-mode constructor");
  const std::size_t d = shape.cutoff(0);
  std::vector<cplx> amp(d);
  // c_{2n} = (cosh r)^{-1/2} (e^{i theta} tanh r)^n sqrt((2n)!) / (2^n n!),
  // built by the even-step recurrence c_{2n+2} = g * sqrt((2n+1)/(2n+2)) c_{2n}.
  const cplx g = std::polar(std::tanh(r), theta);
  cplx c = 1.0 / std::sqrt(std::cosh(r));
  for (std::size_t n = 0; n < d; n += 2) {
    amp[n] = c;
    c *= g * std::sqrt(static_cast<double>(n + 1) /
                       static_cast<double>(n + 2));
  }
  return FockState::pure(shape, std::move(amp), opt);
}

FockState make_tmsv(const ModeShape& shape, double r,
                    const StateOptions& opt) {
  if (shape.num_modes() != 2) throw error("make_tmsv: two-mode constructor");
  const std::size_t d0 = shape.cutoff(0), d1 = shape.cutoff(1);
  std::vector<cplx> amp(shape.dim());
  const double t = std::tanh(r);
  double c = 1.0 / std::cosh(r);
  for (std::size_t n = 0; n < std::min(d0, d1); ++n) {
    amp[n * shape.stride(0) + n * shape.stride(1)] = c;
    c *= t;
  }
  return FockState::pure(shape, std::move(amp), opt);
}

FockState tensor(const FockState& s1, const FockState& s2) {
  const ModeShape shape = s1.shape() + s2.shape();
  if (s1.kind() == StateKind::pure && s2.kind() == StateKind::pure) {
    std::vector<cplx> amp(shape.dim());
    const std::size_t d2 = s2.dim();
    for (std::size_t i = 0; i < s1.dim(); ++i)
      for (std::size_t j = 0; j < d2; ++j)
        amp[i * d2 + j] = s1.amplitudes()[i] * s2.amplitudes()[j];
    StateOptions opt;
    opt.leakage_tol = 1.0;  // leakage already vetted per factor
    return FockState::pure(shape, std::move(amp), opt);
  }
  const FockState r1 = s1.to_density();
  const FockState r2 = s2.to_density();
  const std::size_t D1 = r1.dim(), D2 = r2.dim(), D = D1 * D2;
  std::vector<cplx> rho(D * D);
  for (std::size_t i1 = 0; i1 < D1; ++i1)
    for (std::size_t j1 = 0; j1 < D1; ++j1) {
      const cplx v1 = r1.amplitudes()[i1 * D1 + j1];
      if (v1 == cplx{}) continue;
      for (std::size_t i2 = 0; i2 < D2; ++i2)
        for (std::size_t j2 = 0; j2 < D2; ++j2)
          rho[(i1 * D2 + i2) * D + (j1 * D2 + j2)] =
              v1 * r2.amplitudes()[i2 * D2 + j2];
    }
  StateOptions opt;
  opt.leakage_tol = 1.0;
  return FockState::density(shape, std::move(rho), opt);
}

FockState mix(std::span<const std::pair<double, FockState>> components) {
  if (components.empty()) throw error("mix: no components");
  double wsum = 0.0;
  for (const auto& [w, s] : components) {
    if (w <= 0) throw error("mix: weights must be positive");
    wsum += w;
    if (s.shape() != components.front().second.shape())
      throw error("mix: incompatible shapes");
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw error("mix: weights sum to " + std::to_string(wsum) + ", not 1");
  const std::size_t D = components.front().second.dim();
  std::vector<cplx> rho(D * D);
  for (const auto& [w, s] : components) {
    const double weight = w;
    const FockState& comp = s;
    if (comp.kind() == StateKind::pure) {
      const cplx* c = comp.amplitudes().data();
      parallel_index_for(D, [&, weight](std::size_t i) {
        if (c[i] == cplx{}) return;
        const cplx wi = weight * c[i];
        for (std::size_t j = 0; j < D; ++j)
          rho[i * D + j] += wi * std::conj(c[j]);
      });
    } else {
      const cplx* r = comp.amplitudes().data();
      parallel_index_for(D, [&, weight](std::size_t i) {
        for (std::size_t j = 0; j < D; ++j)
          rho[i * D + j] += weight * r[i * D + j];
      });
    }
  }
  StateOptions opt;
  opt.leakage_tol = 1.0;
  return FockState::density(components.front().second.shape(),
                            std::move(rho), opt);
}

namespace {

// A word maps each basis vector to one scaled basis vector (or kills it).
// Walking letters right-to-left gives W|src> = factor |dst>, so
//   pure:    <W> = sum_src conj(c_dst) * factor * c_src
//   density: <W> = tr(W rho) = sum_src factor * rho[src, dst]
// The factor is a product of square roots, hence real.
struct Transition {
  std::size_t dst;
  double factor;  // 0 means annihilated
};

inline Transition apply_word(std::size_t src, std::span<const Letter> word,
                             const ModeShape& shape,
                             std::vector<std::size_t>& occ) {
  const std::size_t M = shape.num_modes();
  std::size_t rest = src;
  for (std::size_t m = 0; m < M; ++m) {
    occ[m] = rest / shape.stride(m);
    rest %= shape.stride(m);
  }
  double factor = 1.0;
  for (std::size_t k = word.size(); k-- > 0;) {
    const Letter& l = word[k];
    std::size_t& n = occ[l.mode];
    if (l.dagger) {
      if (n + 1 == shape.cutoff(l.mode)) return {0, 0.0};
      factor *= std::sqrt(static_cast<double>(n + 1));
      ++n;
    } else {
      if (n == 0) return {0, 0.0};
      factor *= std::sqrt(static_cast<double>(n));
      --n;
    }
  }
  std::size_t dst = 0;
  for (std::size_t m = 0; m < M; ++m) dst += occ[m] * shape.stride(m);
  return {dst, factor};
}

}  // namespace

cplx expect_word(const FockState& state, std::span<const Letter> word) {
  const ModeShape& shape = state.shape();
  for (const Letter& l : word)
    if (l.mode >= shape.num_modes())
      throw error("expect_word: letter references mode " +
                  std::to_string(l.mode) + " outside the state");
  const std::size_t D = state.dim();
  if (state.kind() == StateKind::pure) {
    const cplx* c = state.amplitudes().data();
    return blocked_sum(D, [&](std::size_t src) -> cplx {
      if (c[src] == cplx{}) return {};
      thread_local std::vector<std::size_t> occ;
      occ.resize(shape.num_modes());
      const Transition t = apply_word(src, word, shape, occ);
      if (t.factor == 0.0) return {};
      return std::conj(c[t.dst]) * t.factor * c[src];
    });
  }
  const cplx* rho = state.amplitudes().data();
  return blocked_sum(D, [&](std::size_t src) -> cplx {
    thread_local std::vector<std::size_t> occ;
    occ.resize(shape.num_modes());
    const Transition t = apply_word(src, word, shape, occ);
    if (t.factor == 0.0) return {};
    return t.factor * rho[src * D + t.dst];
  });
}

cplx expect_word_reference(const FockState& state,
                           std::span<const Letter> word) {
  const ModeShape& shape = state.shape();
  const std::size_t D = state.dim();
  std::vector<std::size_t> occ(shape.num_modes());
  cplx acc{};
  for (std::size_t src = 0; src < D; ++src) {
    const Transition t = apply_word(src, word, shape, occ);
    if (t.factor == 0.0) continue;
    if (state.kind() == StateKind::pure) {
      acc += std::conj(state.amplitudes()[t.dst]) * t.factor *
             state.amplitudes()[src];
    } else {
      acc += t.factor * state.amplitudes()[src * D + t.dst];
    }
  }
  return acc;
}

}  // namespace mmw

#include "mmw/random_states.hpp"

#include <cmath>
#include <numbers>

#include "mmw/ops.hpp"

namespace mmw {

std::uint64_t Rng::next_u64() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

std::size_t Rng::index(std::size_t n) {
  return n ? static_cast<std::size_t>(next_u64() % n) : 0;
}

Rng Rng::for_draw(std::uint64_t seed, std::uint64_t draw) {
  Rng mixer(seed ^ (0xa0761d6478bd642fULL * (draw + 1)));
  mixer.next_u64();
  return Rng(mixer.next_u64());
}

FockState CoherentMixtureSpec::build(const StateOptions& opt) const {
  const ModeShape shape(cutoffs);
  std::vector<std::pair<double, FockState>> parts;
  parts.reserve(components.size());
  for (const CoherentComponent& c : components)
    parts.emplace_back(c.weight, make_coherent(shape, c.alpha, opt));
  return mix(parts);
}

std::string CoherentMixtureSpec::describe() const {
  std::string s = "coherent mixture:";
  for (const CoherentComponent& c : components) {
    s += " w=" + std::to_string(c.weight) + " alpha=(";
    for (std::size_t m = 0; m < c.alpha.size(); ++m) {
      if (m) s += ", ";
      s += format_complex(c.alpha[m]);
    }
    s += ")";
  }
  return s;
}

CoherentMixtureSpec random_coherent_mixture(Rng& rng, std::size_t num_modes,
                                            std::size_t max_components,
                                            double alpha_max,
                                            std::size_t cutoff) {
  CoherentMixtureSpec spec;
  spec.cutoffs.assign(num_modes, cutoff);
  const std::size_t k = 1 + rng.index(max_components);
  double wsum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    CoherentComponent c;
    c.weight = 0.05 + rng.uniform();
    wsum += c.weight;
    for (std::size_t m = 0; m < num_modes; ++m) {
      const double r = alpha_max * std::sqrt(rng.uniform());
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      c.alpha.push_back(std::polar(r, phase));
    }
    spec.components.push_back(std::move(c));
  }
  for (CoherentComponent& c : spec.components) c.weight /= wsum;
  // exact unit weight for the last component
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < spec.components.size(); ++i)
    head += spec.components[i].weight;
  spec.components.back().weight = 1.0 - head;
  return spec;
}

FockState random_pure_state(Rng& rng, const std::vector<std::size_t>& cutoffs,
                            std::size_t headroom) {
  const ModeShape shape(cutoffs);
  for (std::size_t d : cutoffs)
    if (d <= headroom + 1)
      throw error("random_pure_state: cutoffs too small for the headroom");
  std::vector<cplx> amp(shape.dim());
  double norm2 = 0.0;
  for (std::size_t idx = 0; idx < amp.size(); ++idx) {
    std::size_t rest = idx;
    std::size_t total = 0;
    bool in_support = true;
    for (std::size_t m = 0; m < cutoffs.size(); ++m) {
      const std::size_t n = rest / shape.stride(m);
      rest %= shape.stride(m);
      total += n;
      if (n + headroom >= cutoffs[m]) in_support = false;
    }
    if (!in_support) continue;
    const cplx g = rng.complex_normal();
    amp[idx] = g * std::pow(0.6, static_cast<double>(total) / 2.0);
    norm2 += std::norm(amp[idx]);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (cplx& c : amp) c *= inv;
  return FockState::pure(shape, std::move(amp));
}

FockState random_mixed_state(Rng& rng, const std::vector<std::size_t>& cutoffs,
                             std::size_t max_components,
                             std::size_t headroom) {
  const std::size_t k = 1 + rng.index(max_components);
  std::vector<std::pair<double, FockState>> parts;
  double wsum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = 0.1 + rng.uniform();
    wsum += w;
    parts.emplace_back(w, random_pure_state(rng, cutoffs, headroom));
  }
  for (auto& [w, s] : parts) w /= wsum;
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) head += parts[i].first;
  parts.back().first = 1.0 - head;
  return mix(parts);
}

}  // namespace mmw

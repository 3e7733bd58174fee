#include "mmw/ops.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace mmw {

namespace {

constexpr std::uint32_t kMaxDegree = 64;

// k! C(q,k) C(p,k) accumulated in extended precision, rounded once.
struct RewriteTables {
  std::array<long double, kMaxDegree + 1> fact{};
  std::array<std::array<long double, kMaxDegree + 1>, kMaxDegree + 1> binom{};

  RewriteTables() {
    fact[0] = 1.0L;
    for (std::uint32_t k = 1; k <= kMaxDegree; ++k)
      fact[k] = fact[k - 1] * static_cast<long double>(k);
    for (std::uint32_t n = 0; n <= kMaxDegree; ++n) {
      binom[n][0] = 1.0L;
      for (std::uint32_t k = 1; k <= n; ++k)
        binom[n][k] = binom[n - 1][k - 1] + (k <= n - 1 ? binom[n - 1][k] : 0.0L);
    }
  }

  double swap_coeff(std::uint32_t q, std::uint32_t p, std::uint32_t k) const {
    return static_cast<double>(fact[k] * binom[q][k] * binom[p][k]);
  }
};

const RewriteTables& tables() {
  static const RewriteTables t;
  return t;
}

void check_degree(std::uint32_t d) {
  if (d > kMaxDegree)
    throw error("operator degree exceeds the supported maximum of 64");
}

ModeExp* find_mode(MonoKey& key, std::size_t mode) {
  for (auto& f : key)
    if (f.mode == mode) return &f;
  return nullptr;
}

void normalize_key(MonoKey& key) {
  std::erase_if(key, [](const ModeExp& f) { return f.p == 0 && f.q == 0; });
  std::sort(key.begin(), key.end(),
            [](const ModeExp& a, const ModeExp& b) { return a.mode < b.mode; });
}

}  // namespace

Word adjoint(const Word& w) {
  Word r;
  r.coeff = std::conj(w.coeff);
  r.letters.assign(w.letters.rbegin(), w.letters.rend());
  for (Letter& l : r.letters) l.dagger = !l.dagger;
  return r;
}

PolyOperator PolyOperator::identity(cplx c) {
  PolyOperator p;
  p.add_term(c, {});
  return p;
}

PolyOperator PolyOperator::monomial(cplx c, MonoKey key) {
  PolyOperator p;
  p.add_term(c, std::move(key));
  return p;
}

PolyOperator PolyOperator::ladder(std::size_t mode, bool dagger, cplx c) {
  return monomial(c, {ModeExp{mode, dagger ? 1u : 0u, dagger ? 0u : 1u}});
}

PolyOperator PolyOperator::number(std::size_t mode) {
  return monomial(1.0, {ModeExp{mode, 1, 1}});
}

std::size_t PolyOperator::arity() const {
  std::size_t a = 0;
  for (const auto& [key, c] : terms_)
    for (const ModeExp& f : key) a = std::max(a, f.mode + 1);
  return a;
}

std::uint32_t PolyOperator::degree() const {
  std::uint32_t d = 0;
  for (const auto& [key, c] : terms_) {
    std::uint32_t t = 0;
    for (const ModeExp& f : key) t += f.p + f.q;
    d = std::max(d, t);
  }
  return d;
}

void PolyOperator::add_term(cplx c, MonoKey key) {
  if (c == cplx{}) return;
  normalize_key(key);
  auto [it, inserted] = terms_.try_emplace(std::move(key), c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

PolyOperator& PolyOperator::operator+=(const PolyOperator& o) {
  for (const auto& [key, c] : o.terms_) add_term(c, key);
  return *this;
}

PolyOperator& PolyOperator::operator-=(const PolyOperator& o) {
  for (const auto& [key, c] : o.terms_) add_term(-c, key);
  return *this;
}

PolyOperator& PolyOperator::operator*=(cplx c) {
  if (c == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, v] : terms_) v *= c;
  return *this;
}

void PolyOperator::simplify() {
  double peak = 0.0;
  for (const auto& [key, c] : terms_) peak = std::max(peak, std::abs(c));
  const double floor = 1e-14 * peak;
  std::erase_if(terms_,
                [floor](const auto& kv) { return std::abs(kv.second) <= floor; });
}

PolyOperator adjoint(const PolyOperator& op) {
  PolyOperator r;
  for (const auto& [key, c] : op.terms()) {
    MonoKey k = key;
    for (ModeExp& f : k) std::swap(f.p, f.q);
    r.add_term(std::conj(c), std::move(k));
  }
  return r;
}

PolyOperator normal_product(const PolyOperator& f, const PolyOperator& g) {
  PolyOperator r;
  for (const auto& [fk, fc] : f.terms()) {
    for (const auto& [gk, gc] : g.terms()) {
      MonoKey key = gk;
      for (const ModeExp& m : fk) {
        // f enters daggered: (p,q) contributes as (q,p)
        if (ModeExp* e = find_mode(key, m.mode)) {
          e->p += m.q;
          e->q += m.p;
          check_degree(std::max(e->p, e->q));
        } else {
          key.push_back(ModeExp{m.mode, m.q, m.p});
        }
      }
      r.add_term(std::conj(fc) * gc, std::move(key));
    }
  }
  return r;
}

namespace {

// a^+p1 a^q1 * a^+p2 a^q2 on one mode, via the k-sum swap of a^q1 a^+p2.
void mode_product_terms(const ModeExp& x, const ModeExp& y,
                        std::vector<std::pair<double, ModeExp>>& out) {
  out.clear();
  const std::uint32_t kmax = std::min(x.q, y.p);
  check_degree(x.p + y.p);
  check_degree(x.q + y.q);
  for (std::uint32_t k = 0; k <= kmax; ++k) {
    out.push_back({tables().swap_coeff(x.q, y.p, k),
                   ModeExp{x.mode, x.p + y.p - k, x.q + y.q - k}});
  }
}

}  // namespace

PolyOperator operator*(const PolyOperator& a, const PolyOperator& b) {
  PolyOperator r;
  std::vector<std::pair<double, ModeExp>> mode_terms;
  for (const auto& [ak, ac] : a.terms()) {
    for (const auto& [bk, bc] : b.terms()) {
      // Expand mode by mode; modes appearing on only one side pass through.
      std::vector<std::pair<cplx, MonoKey>> partial{{ac * bc, {}}};
      std::size_t ia = 0, ib = 0;
      while (ia < ak.size() || ib < bk.size()) {
        if (ib == bk.size() ||
            (ia < ak.size() && ak[ia].mode < bk[ib].mode)) {
          for (auto& [c, key] : partial) key.push_back(ak[ia]);
          ++ia;
        } else if (ia == ak.size() || bk[ib].mode < ak[ia].mode) {
          for (auto& [c, key] : partial) key.push_back(bk[ib]);
          ++ib;
        } else {
          mode_product_terms(ak[ia], bk[ib], mode_terms);
          std::vector<std::pair<cplx, MonoKey>> next;
          next.reserve(partial.size() * mode_terms.size());
          for (const auto& [c, key] : partial) {
            for (const auto& [w, me] : mode_terms) {
              next.push_back({c * w, key});
              next.back().second.push_back(me);
            }
          }
          partial = std::move(next);
          ++ia;
          ++ib;
        }
      }
      for (auto& [c, key] : partial) r.add_term(c, std::move(key));
    }
  }
  r.simplify();
  return r;
}

PolyOperator rewrite_normal(const Word& w) {
  PolyOperator p = PolyOperator::identity(w.coeff);
  for (const Letter& l : w.letters)
    p = p * PolyOperator::ladder(l.mode, l.dagger);
  return p;
}

PolyOperator commutator(const PolyOperator& f, const PolyOperator& g) {
  PolyOperator r = f * g - g * f;
  r.simplify();
  return r;
}

std::vector<Letter> monomial_letters(const MonoKey& key) {
  std::vector<Letter> letters;
  for (const ModeExp& f : key)
    for (std::uint32_t i = 0; i < f.p; ++i)
      letters.push_back(Letter{f.mode, true});
  for (const ModeExp& f : key)
    for (std::uint32_t i = 0; i < f.q; ++i)
      letters.push_back(Letter{f.mode, false});
  return letters;
}

cplx expect(const FockState& state, const PolyOperator& op) {
  cplx acc{};
  for (const auto& [key, c] : op.terms())
    acc += c * expect_word(state, monomial_letters(key));
  return acc;
}

PolyOperator shift_by_mean(const PolyOperator& op, const FockState& state) {
  return op - PolyOperator::identity(expect(state, op));
}

std::string format_complex(cplx z) {
  auto fmt = [](double v) {
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
  };
  std::string s = "(" + fmt(z.real());
  s += z.imag() < 0 ? "-" : "+";
  s += fmt(std::abs(z.imag())) + "i)";
  return s;
}

std::string to_string(const PolyOperator& op, std::size_t num_modes) {
  if (op.is_zero()) return "(0+0i)";
  std::string s;
  for (const auto& [key, c] : op.terms()) {
    if (!s.empty()) s += " + ";
    s += format_complex(c);
    for (std::size_t m = 0; m < num_modes; ++m) {
      std::uint32_t p = 0, q = 0;
      for (const ModeExp& f : key)
        if (f.mode == m) {
          p = f.p;
          q = f.q;
        }
      const std::string letter =
          m < 3 ? std::string(1, static_cast<char>('a' + m))
                : "o" + std::to_string(m);
      s += " " + letter + "d^" + std::to_string(p) + " " + letter + "^" +
           std::to_string(q);
    }
  }
  return s;
}

// --- named operators ------------------------------------------------------

PolyOperator quad_x(std::size_t mode, double phi) {
  return PolyOperator::ladder(mode, false, std::polar(1.0, phi)) +
         PolyOperator::ladder(mode, true, std::polar(1.0, -phi));
}

PolyOperator quad_X(std::span<const double> phis, std::span<const double> cs) {
  if (phis.size() != cs.size() || phis.empty())
    throw error("quad_X: phase and weight lists must match and be non-empty");
  PolyOperator X;
  for (std::size_t m = 0; m < phis.size(); ++m)
    X += cs[m] * quad_x(m, phis[m]);
  return X;
}

PolyOperator pair_sum_a12() {
  return PolyOperator::ladder(0, false) + PolyOperator::ladder(1, false);
}

PolyOperator sum_squeeze_V(double phi) {
  return PolyOperator::monomial(0.5 * std::polar(1.0, -phi),
                                {ModeExp{0, 0, 1}, ModeExp{1, 0, 1}}) +
         PolyOperator::monomial(0.5 * std::polar(1.0, phi),
                                {ModeExp{0, 1, 0}, ModeExp{1, 1, 0}});
}

PolyOperator sum_squeeze_Vz() {
  return 0.5 * (PolyOperator::number(0) + PolyOperator::number(1) +
                PolyOperator::identity());
}

PolyOperator diff_squeeze_W(double phi) {
  return PolyOperator::monomial(0.5 * std::polar(1.0, phi),
                                {ModeExp{0, 0, 1}, ModeExp{1, 1, 0}}) +
         PolyOperator::monomial(0.5 * std::polar(1.0, -phi),
                                {ModeExp{0, 1, 0}, ModeExp{1, 0, 1}});
}

PolyOperator diff_squeeze_Wz() {
  return 0.5 * (PolyOperator::number(0) - PolyOperator::number(1));
}

PolyOperator sum_squeeze_V_mm(std::size_t num_modes, double phi) {
  if (num_modes < 2) throw error("sum_squeeze_V_mm: need >= 2 modes");
  MonoKey lower, raise;
  for (std::size_t m = 0; m < num_modes; ++m) {
    lower.push_back(ModeExp{m, 0, 1});
    raise.push_back(ModeExp{m, 1, 0});
  }
  return PolyOperator::monomial(0.5 * std::polar(1.0, -phi), lower) +
         PolyOperator::monomial(0.5 * std::polar(1.0, phi), raise);
}

namespace {

// prod over `modes` of (n_m + shift_m), expanded symbolically.
PolyOperator number_product(std::span<const std::size_t> modes,
                            std::span<const int> shifts) {
  PolyOperator r = PolyOperator::identity();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    PolyOperator f = PolyOperator::number(modes[i]);
    if (shifts[i] != 0)
      f += PolyOperator::identity(static_cast<double>(shifts[i]));
    r = r * f;
  }
  return r;
}

}  // namespace

PolyOperator sum_commutant_C(std::size_t num_modes) {
  std::vector<std::size_t> modes(num_modes);
  for (std::size_t m = 0; m < num_modes; ++m) modes[m] = m;
  std::vector<int> ones(num_modes, 1), zeros(num_modes, 0);
  return number_product(modes, ones) - number_product(modes, zeros);
}

PolyOperator diff_squeeze_W_mm(std::size_t num_modes, std::size_t K,
                               double phi) {
  if (K < 1 || K >= num_modes)
    throw error("diff_squeeze_W_mm: need 1 <= K < num_modes");
  MonoKey fwd, bwd;
  for (std::size_t m = 0; m < num_modes; ++m) {
    fwd.push_back(m < K ? ModeExp{m, 0, 1} : ModeExp{m, 1, 0});
    bwd.push_back(m < K ? ModeExp{m, 1, 0} : ModeExp{m, 0, 1});
  }
  return PolyOperator::monomial(0.5 * std::polar(1.0, -phi), fwd) +
         PolyOperator::monomial(0.5 * std::polar(1.0, phi), bwd);
}

namespace {

PolyOperator split_number_product(std::size_t num_modes, std::size_t K,
                                  int shift_low, int shift_high) {
  std::vector<std::size_t> modes(num_modes);
  std::vector<int> shifts(num_modes);
  for (std::size_t m = 0; m < num_modes; ++m) {
    modes[m] = m;
    shifts[m] = m < K ? shift_low : shift_high;
  }
  return number_product(modes, shifts);
}

}  // namespace

PolyOperator diff_commutant_C(std::size_t num_modes, std::size_t K) {
  if (K < 1 || K >= num_modes)
    throw error("diff_commutant_C: need 1 <= K < num_modes");
  return split_number_product(num_modes, K, 1, 0) -
         split_number_product(num_modes, K, 0, 1);
}

PolyOperator diff_offset_D(std::size_t num_modes, std::size_t K) {
  if (K < 1 || K >= num_modes)
    throw error("diff_offset_D: need 1 <= K < num_modes");
  return split_number_product(num_modes, K, 1, 0) +
         split_number_product(num_modes, K, 0, 1) -
         2.0 * split_number_product(num_modes, K, 0, 0);
}

PolyOperator photon_number_pm(bool plus) {
  return plus ? PolyOperator::number(0) + PolyOperator::number(1)
              : PolyOperator::number(0) - PolyOperator::number(1);
}

PolyOperator build_named(const std::string& name, const NamedParams& p) {
  const double phi = p.phis.empty() ? 0.0 : p.phis.front();
  if (name == "X_phi") return quad_X(p.phis, p.cs);
  if (name == "x") return quad_x(p.mode, phi);
  if (name == "a12") return pair_sum_a12();
  if (name == "V_phi") return sum_squeeze_V(phi);
  if (name == "V_z") return sum_squeeze_Vz();
  if (name == "W_phi") return diff_squeeze_W(phi);
  if (name == "W_z") return diff_squeeze_Wz();
  if (name == "Vcal_phi") return sum_squeeze_V_mm(p.num_modes, phi);
  if (name == "Wcal_phi") return diff_squeeze_W_mm(p.num_modes, p.K, phi);
  if (name == "C_sum") return sum_commutant_C(p.num_modes);
  if (name == "C_diff") return diff_commutant_C(p.num_modes, p.K);
  if (name == "D_diff") return diff_offset_D(p.num_modes, p.K);
  if (name == "n_plus") return photon_number_pm(true);
  if (name == "n_minus") return photon_number_pm(false);
  throw error("build_named: unknown operator id '" + name + "'");
}

}  // namespace mmw

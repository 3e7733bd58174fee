#ifndef MMW_OPS_HPP
#define MMW_OPS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mmw/fock.hpp"

// Symbolic layer over the ladder algebra: normally ordered monomials with
// complex weights, exact products and commutators, and the rewriting of
// arbitrary operator words into normal order.

namespace mmw {

// a^+m^p a_m^q on one mode; modes with (0,0) are never stored.
struct ModeExp {
  std::size_t mode = 0;
  std::uint32_t p = 0;  // creation exponent
  std::uint32_t q = 0;  // annihilation exponent
  auto operator<=>(const ModeExp&) const = default;
};

using MonoKey = std::vector<ModeExp>;  // sorted by mode, no (0,0) entries

struct Monomial {
  cplx coeff{};
  MonoKey key;
};

// Ordered product of ladder letters before any reordering.
struct Word {
  cplx coeff = 1.0;
  std::vector<Letter> letters;
};

Word adjoint(const Word& w);

// Finite complex-weighted sum of normally ordered monomials. Terms are kept
// in a sorted map so iteration (and floating-point summation) order is
// deterministic.
class PolyOperator {
 public:
  PolyOperator() = default;

  static PolyOperator zero() { return {}; }
  static PolyOperator identity(cplx c = 1.0);
  static PolyOperator monomial(cplx c, MonoKey key);
  static PolyOperator ladder(std::size_t mode, bool dagger, cplx c = 1.0);
  static PolyOperator number(std::size_t mode);  // a^+ a

  const std::map<MonoKey, cplx>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }

  // Highest mode index referenced plus one (0 for scalars).
  std::size_t arity() const;
  // Max over terms of the total exponent sum.
  std::uint32_t degree() const;

  PolyOperator& operator+=(const PolyOperator& o);
  PolyOperator& operator-=(const PolyOperator& o);
  PolyOperator& operator*=(cplx c);

  friend PolyOperator operator+(PolyOperator a, const PolyOperator& b) {
    a += b;
    return a;
  }
  friend PolyOperator operator-(PolyOperator a, const PolyOperator& b) {
    a -= b;
    return a;
  }
  friend PolyOperator operator*(cplx c, PolyOperator a) {
    a *= c;
    return a;
  }
  // True operator product, expanded back into normal order exactly.
  friend PolyOperator operator*(const PolyOperator& a, const PolyOperator& b);

  bool operator==(const PolyOperator& o) const { return terms_ == o.terms_; }

  // Drops terms below 1e-14 of the largest magnitude.
  void simplify();

  void add_term(cplx c, MonoKey key);

 private:
  std::map<MonoKey, cplx> terms_;
};

PolyOperator adjoint(const PolyOperator& op);

// :f^+ g: -- pure exponent addition per mode, no commutators.
PolyOperator normal_product(const PolyOperator& f, const PolyOperator& g);

// Exact normal-order expansion of a word, using
// a^q a^+p = sum_k k! C(q,k) C(p,k) a^+(p-k) a^(q-k) per mode.
PolyOperator rewrite_normal(const Word& w);

PolyOperator commutator(const PolyOperator& f, const PolyOperator& g);

// <op> by contraction of each normally ordered term on the state.
cplx expect(const FockState& state, const PolyOperator& op);

// op - <op> 1, with <op> evaluated on the given state.
PolyOperator shift_by_mean(const PolyOperator& op, const FockState& state);

// Letters of one normally ordered monomial (daggers first, then lowering,
// modes ascending); contraction of this word is exact on the truncation.
std::vector<Letter> monomial_letters(const MonoKey& key);

// e.g. "(0.5+0i) ad^1 a^0 bd^0 b^1 + ..." over num_modes modes.
std::string to_string(const PolyOperator& op, std::size_t num_modes);
std::string format_complex(cplx z);

// --- named operators of the witness catalog ------------------------------

// x_m(phi) = a_m e^{i phi} + a_m^+ e^{-i phi}
PolyOperator quad_x(std::size_t mode, double phi);

// X_phi = sum_m c_m x_m(phi_m), real c_m.
PolyOperator quad_X(std::span<const double> phis, std::span<const double> cs);

// a12 = a_1 + a_2
PolyOperator pair_sum_a12();

// V_phi = (a b e^{-i phi} + a^+ b^+ e^{i phi}) / 2
PolyOperator sum_squeeze_V(double phi);
// V_z = (n1 + n2 + 1) / 2
PolyOperator sum_squeeze_Vz();

// W_phi = (a b^+ e^{i phi} + a^+ b e^{-i phi}) / 2
PolyOperator diff_squeeze_W(double phi);
// W_z = (n1 - n2) / 2
PolyOperator diff_squeeze_Wz();

// Vcal_phi = (e^{-i phi} prod_j a_j + e^{i phi} prod_j a_j^+) / 2
PolyOperator sum_squeeze_V_mm(std::size_t num_modes, double phi);
// C = prod_j (1 + n_j) - prod_j n_j
PolyOperator sum_commutant_C(std::size_t num_modes);

// Wcal_phi = (e^{-i phi} prod_{k<=K} a_k prod_{m>K} a_m^+ + h.c.) / 2
PolyOperator diff_squeeze_W_mm(std::size_t num_modes, std::size_t K,
                               double phi);
// C = prod_k (1+n_k) prod_m n_m - prod_k n_k prod_m (1+n_m)
PolyOperator diff_commutant_C(std::size_t num_modes, std::size_t K);
// D = prod_k (1+n_k) prod_m n_m + prod_k n_k prod_m (1+n_m) - 2 prod_j n_j
PolyOperator diff_offset_D(std::size_t num_modes, std::size_t K);

// n1 + n2 (plus) or n1 - n2 (minus)
PolyOperator photon_number_pm(bool plus);

// Catalog-id dispatcher for the operators above.
struct NamedParams {
  std::vector<double> phis;  // phase(s)
  std::vector<double> cs;    // quadrature weights
  std::size_t num_modes = 2;
  std::size_t K = 1;
  std::size_t mode = 0;
};
PolyOperator build_named(const std::string& name, const NamedParams& p);

}  // namespace mmw

#endif  // MMW_OPS_HPP

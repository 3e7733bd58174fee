#include "mmw/moments.hpp"

#include <algorithm>
#include <map>

#include "mmw/parallel.hpp"

namespace mmw {

OperatorSet::OperatorSet(std::vector<PolyOperator> ops,
                         std::vector<std::string> labels)
    : ops_(std::move(ops)), labels_(std::move(labels)) {
  if (ops_.empty()) throw error("OperatorSet: need at least one operator");
  if (labels_.size() != ops_.size())
    throw error("OperatorSet: one label per operator required");
  std::vector<std::string> sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw error("OperatorSet: labels must be unique");
}

OperatorSet OperatorSet::without(std::size_t k) const {
  if (k >= ops_.size()) throw error("OperatorSet::without: index out of range");
  std::vector<PolyOperator> o;
  std::vector<std::string> l;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (i == k) continue;
    o.push_back(ops_[i]);
    l.push_back(labels_[i]);
  }
  return OperatorSet(std::move(o), std::move(l));
}

std::size_t OperatorSet::arity() const {
  std::size_t a = 0;
  for (const PolyOperator& op : ops_) a = std::max(a, op.arity());
  return a;
}

namespace {

// Symbolic entry expansions are collected first, the unique monomial
// expectations are contracted (in parallel), and the matrix is then filled
// from the cache. Keeps the summation order per entry deterministic.
class ExpectationCache {
 public:
  void request(const PolyOperator& p) {
    for (const auto& [key, c] : p.terms()) values_.try_emplace(key, cplx{});
  }

  void evaluate(const FockState& state) {
    std::vector<const MonoKey*> keys;
    keys.reserve(values_.size());
    for (auto& kv : values_) keys.push_back(&kv.first);
    std::vector<cplx> out(keys.size());
    parallel_index_for(keys.size(), [&](std::size_t i) {
      out[i] = expect_word(state, monomial_letters(*keys[i]));
    });
    std::size_t i = 0;
    for (auto& kv : values_) kv.second = out[i++];
  }

  cplx value(const PolyOperator& p) const {
    cplx acc{};
    for (const auto& [key, c] : p.terms()) acc += c * values_.at(key);
    return acc;
  }

 private:
  std::map<MonoKey, cplx> values_;
};

MomentMatrix assemble(const OperatorSet& F, const FockState& state,
                      MatrixMode mode, const std::set<std::size_t>& pt_modes,
                      const std::vector<std::vector<PolyOperator>>& products) {
  const std::size_t N = F.size();
  ExpectationCache cache;
  for (const auto& row : products)
    for (const PolyOperator& p : row) cache.request(p);
  cache.evaluate(state);

  MomentMatrix m;
  m.mode = mode;
  m.pt_modes = pt_modes;
  m.labels = F.labels();
  const std::size_t arity =
      std::max(F.arity(), state.shape().num_modes());
  for (const PolyOperator& op : F.ops())
    m.rendered_ops.push_back(to_string(op, arity));
  m.entries.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      m.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          cache.value(products[i][j]);

  m.scale = m.entries.cwiseAbs().maxCoeff();
  m.asymmetry = (m.entries - m.entries.adjoint()).cwiseAbs().maxCoeff();
  if (m.asymmetry > std::max(1e-8 * m.scale, 1e-12))
    throw numerical_error(
        "moment matrix deviates from Hermitian by " +
        std::to_string(m.asymmetry) +
        " (cutoff leakage or operator/state mismatch)");
  m.entries = 0.5 * (m.entries + m.entries.adjoint()).eval();
  return m;
}

// Exchange pt-mode exponent pairs between the (pre-dagger) i and j monomials.
void swap_pt_exponents(MonoKey& mi, MonoKey& mj,
                       const std::set<std::size_t>& pt_modes) {
  for (std::size_t mode : pt_modes) {
    auto geti = std::find_if(mi.begin(), mi.end(),
                             [&](const ModeExp& f) { return f.mode == mode; });
    auto getj = std::find_if(mj.begin(), mj.end(),
                             [&](const ModeExp& f) { return f.mode == mode; });
    ModeExp ei = geti == mi.end() ? ModeExp{mode, 0, 0} : *geti;
    ModeExp ej = getj == mj.end() ? ModeExp{mode, 0, 0} : *getj;
    std::swap(ei.p, ej.p);
    std::swap(ei.q, ej.q);
    if (geti != mi.end()) mi.erase(geti);
    if (getj != mj.end()) mj.erase(getj);
    if (ei.p || ei.q) mi.push_back(ei);
    if (ej.p || ej.q) mj.push_back(ej);
  }
}

// Plain product (mi)^+ mj expanded into normal order.
PolyOperator plain_pair_product(const MonoKey& mi, const MonoKey& mj) {
  Word w;
  MonoKey dag = mi;
  for (ModeExp& f : dag) std::swap(f.p, f.q);
  w.letters = monomial_letters(dag);
  const std::vector<Letter> right = monomial_letters(mj);
  w.letters.insert(w.letters.end(), right.begin(), right.end());
  return rewrite_normal(w);
}

}  // namespace

MomentMatrix build_normal(const OperatorSet& F, const FockState& state) {
  const std::size_t N = F.size();
  std::vector<std::vector<PolyOperator>> products(
      N, std::vector<PolyOperator>(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      products[i][j] = normal_product(F.op(i), F.op(j));
  return assemble(F, state, MatrixMode::normal, {}, products);
}

MomentMatrix build_gamma(const OperatorSet& F, const FockState& state,
                         const std::set<std::size_t>& pt_modes) {
  const std::size_t N = F.size();
  std::vector<std::vector<PolyOperator>> products(
      N, std::vector<PolyOperator>(N));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      PolyOperator entry;
      for (const auto& [ki, ci] : F.op(i).terms()) {
        for (const auto& [kj, cj] : F.op(j).terms()) {
          MonoKey mi = ki, mj = kj;
          swap_pt_exponents(mi, mj, pt_modes);
          entry += std::conj(ci) * cj * plain_pair_product(mi, mj);
        }
      }
      products[i][j] = std::move(entry);
    }
  }
  return assemble(F, state, MatrixMode::gamma, pt_modes, products);
}

double hermitian_determinant(const Eigen::MatrixXcd& m) {
  if (m.rows() == 1) return m(0, 0).real();
  if (m.rows() == 2)
    return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant().real();
}

double determinant(const MomentMatrix& m) {
  return hermitian_determinant(m.entries);
}

PositivityReport positivity(const MomentMatrix& m, double tol_rel) {
  PositivityReport rep;
  rep.determinant = determinant(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      m.entries, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();

  const double tol = std::max(tol_rel * m.scale, 1e-12);
  const std::size_t N = static_cast<std::size_t>(m.entries.rows());
  bool negative_minor = false;
  if (N <= 6) {
    bool all_nonneg = true;
    for (std::size_t mask = 1; mask < (1u << N); ++mask) {
      std::vector<Eigen::Index> idx;
      for (std::size_t k = 0; k < N; ++k)
        if (mask & (1u << k)) idx.push_back(static_cast<Eigen::Index>(k));
      Eigen::MatrixXcd sub(idx.size(), idx.size());
      for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b)
          sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
              m.entries(idx[a], idx[b]);
      if (hermitian_determinant(sub) < -tol) {
        all_nonneg = false;
        break;
      }
    }
    rep.all_principal_minors_nonneg = all_nonneg;
    negative_minor = !all_nonneg;
  }

  if (rep.min_eigenvalue < -tol)
    rep.verdict = PositivityReport::Verdict::npd;
  else if (negative_minor)
    rep.verdict = PositivityReport::Verdict::indefinite_negative_minor;
  else
    rep.verdict = PositivityReport::Verdict::psd;
  return rep;
}

bool separability_psd_check(const OperatorSet& F, const FockState& state) {
  // Structure required by the factorized-state positivity argument: each
  // mode is touched by at most one operator of the set, and only through
  // creation operators alone or annihilation operators alone.
  std::map<std::size_t, std::size_t> owner;
  for (std::size_t i = 0; i < F.size(); ++i) {
    std::map<std::size_t, std::pair<bool, bool>> uses;  // mode -> (p>0, q>0)
    for (const auto& [key, c] : F.op(i).terms())
      for (const ModeExp& f : key) {
        uses[f.mode].first |= f.p > 0;
        uses[f.mode].second |= f.q > 0;
      }
    for (const auto& [mode, pq] : uses) {
      if (pq.first && pq.second)
        throw error(
            "separability_psd_check: operator " + F.labels()[i] +
            " mixes creation and annihilation operators on mode " +
            std::to_string(mode));
      auto [it, inserted] = owner.try_emplace(mode, i);
      if (!inserted && it->second != i)
        throw error("separability_psd_check: mode " + std::to_string(mode) +
                    " is used by more than one operator of the set");
    }
  }
  const MomentMatrix m = build_normal(F, state);
  return positivity(m).verdict == PositivityReport::Verdict::psd;
}

}  // namespace mmw

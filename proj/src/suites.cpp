#include "mmw/suites.hpp"

#include <algorithm>
#include <cmath>

#include "mmw/oracle.hpp"
#include "mmw/parallel.hpp"
#include "mmw/random_states.hpp"

namespace mmw {

namespace {

struct DrawOutcome {
  double worst = -std::numeric_limits<double>::infinity();
  std::string worst_what;
  std::size_t checks = 0;
  std::vector<SuiteFailure> failures;

  void record(double value, const std::string& what, bool failed,
              std::size_t draw, const std::string& desc) {
    ++checks;
    if (value > worst) {
      worst = value;
      worst_what = what;
    }
    if (failed) failures.push_back({draw, what, desc, value});
  }
};

SuiteResult collect(std::string name, std::uint64_t seed, std::size_t count,
                    std::vector<DrawOutcome>&& outcomes) {
  SuiteResult res;
  res.name = std::move(name);
  res.seed = seed;
  res.count = count;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const DrawOutcome& o = outcomes[i];
    res.checks += o.checks;
    if (o.worst > res.worst) {
      res.worst = o.worst;
      res.worst_what = o.worst_what;
      res.worst_draw = i;
    }
    res.failures.insert(res.failures.end(), o.failures.begin(),
                        o.failures.end());
  }
  return res;
}

void require_count(std::size_t count) {
  if (count == 0) throw error("suite: count must be positive");
}

}  // namespace

SuiteResult suite_classical_closure(std::uint64_t seed, std::size_t count,
                                    double tol_rel) {
  require_count(count);
  std::vector<DrawOutcome> outcomes(count);
  parallel_index_for(count, [&](std::size_t i) {
    Rng rng = Rng::for_draw(seed, i);
    const CoherentMixtureSpec spec =
        random_coherent_mixture(rng, 2, 5, 1.5, 20);
    const FockState state = spec.build();
    WitnessContext ctx;
    ctx.tol_rel = tol_rel;
    WitnessParams params;
    params.phis = {rng.uniform(0.0, 6.283185307179586),
                   rng.uniform(0.0, 6.283185307179586)};
    params.K = 1;
    DrawOutcome& out = outcomes[i];
    for (const std::string& id : applicable_ids(2, 1)) {
      try {
        const WitnessVerdict v =
            registry().at(id).eval(state, params, ctx);
        out.record(v.margin / std::max(v.tol / tol_rel, 1e-12), id,
                   v.verdict != Verdict::classical_consistent, i,
                   spec.describe());
      } catch (const error& e) {
        out.record(0.0, id + ": " + e.what(), true, i, spec.describe());
      }
    }
  });
  return collect("classical-closure", seed, count, std::move(outcomes));
}

SuiteResult suite_separable_closure(std::uint64_t seed, std::size_t count,
                                    double tol_rel) {
  require_count(count);
  std::vector<DrawOutcome> outcomes(count);
  parallel_index_for(count, [&](std::size_t i) {
    Rng rng = Rng::for_draw(seed, i);
    WitnessContext ctx;
    ctx.tol_rel = tol_rel;
    DrawOutcome& out = outcomes[i];

    const CoherentMixtureSpec spec2 =
        random_coherent_mixture(rng, 2, 5, 1.5, 20);
    const FockState state2 = spec2.build();
    WitnessParams params;
    params.mn = {1 + static_cast<int>(i % 2), 1};
    params.klm = {1 + static_cast<int>(i % 2), 1, 1};
    for (const std::string& id : applicable_ids(2, 2)) {
      try {
        const WitnessVerdict v = registry().at(id).eval(state2, params, ctx);
        out.record(v.margin / std::max(v.tol / tol_rel, 1e-12), id,
                   v.verdict != Verdict::classical_consistent, i,
                   spec2.describe());
      } catch (const error& e) {
        out.record(0.0, id + ": " + e.what(), true, i, spec2.describe());
      }
    }

    const CoherentMixtureSpec spec3 =
        random_coherent_mixture(rng, 3, 3, 0.6, 10);
    const FockState state3 = spec3.build();
    for (const std::string& id : applicable_ids(3, 2)) {
      if (registry().at(id).min_modes != 3) continue;
      try {
        const WitnessVerdict v = registry().at(id).eval(state3, params, ctx);
        out.record(v.margin / std::max(v.tol / tol_rel, 1e-12), id,
                   v.verdict != Verdict::classical_consistent, i,
                   spec3.describe());
      } catch (const error& e) {
        out.record(0.0, id + ": " + e.what(), true, i, spec3.describe());
      }
    }
  });
  return collect("separable-closure", seed, count, std::move(outcomes));
}

SuiteResult suite_identities(std::uint64_t seed, std::size_t count,
                             double tol_rel) {
  require_count(count);
  std::vector<DrawOutcome> outcomes(count);
  parallel_index_for(count, [&](std::size_t i) {
    Rng rng = Rng::for_draw(seed, i);
    const FockState state = random_pure_state(rng, {10, 10}, 4);
    DrawOutcome& out = outcomes[i];
    WitnessContext ctx;
    const std::string desc = "random pure state, draw " + std::to_string(i);

    const DecompIdentity ids[] = {DecompIdentity::simon_x43,
                                  DecompIdentity::x56, DecompIdentity::x57,
                                  DecompIdentity::x58, DecompIdentity::x59};
    for (DecompIdentity id : ids) {
      try {
        const WitnessVerdict v = w_decomposition(state, id, ctx);
        double lhs = 0.0, rhs = 0.0, scale = 1.0;
        for (const auto& [name, value] : v.determinants) {
          if (name == "d_gamma") lhs = value;
          if (name == "rhs_sum") rhs = value;
          scale = std::max(scale, std::abs(value));
        }
        const double rel = std::abs(lhs - rhs) / scale;
        out.record(rel - tol_rel, v.witness_id + " residual",
                   rel > tol_rel, i, desc);
      } catch (const error& e) {
        out.record(0.0, std::string("decomposition: ") + e.what(), true, i,
                   desc);
      }
    }

    // dual-path witnesses assert their own route equalities
    for (const char* wid :
         {"table2.duan", "table1.principal_squeezing", "table2.hz.x1",
          "table2.hz.x4", "table1.sum_squeezing.hillery",
          "table1.difference_squeezing.hillery"}) {
      try {
        WitnessParams params;
        params.phis = {rng.uniform(0.0, 6.283185307179586)};
        (void)registry().at(wid).eval(state, params, ctx);
        out.record(-tol_rel, wid, false, i, desc);
      } catch (const error& e) {
        out.record(0.0, std::string(wid) + ": " + e.what(), true, i, desc);
      }
    }
  });
  return collect("identities", seed, count, std::move(outcomes));
}

namespace {

struct OracleCase {
  OperatorSet F;
  std::set<std::size_t> pt;
  std::size_t modes;
};

std::vector<OracleCase> oracle_cases() {
  auto one = PolyOperator::identity();
  auto a = PolyOperator::ladder(0, false), ad = PolyOperator::ladder(0, true);
  auto b = PolyOperator::ladder(1, false), bd = PolyOperator::ladder(1, true);
  auto mono = [](std::initializer_list<ModeExp> e) {
    return PolyOperator::monomial(1.0, MonoKey(e));
  };
  std::vector<OracleCase> cases;
  cases.push_back({OperatorSet({one, mono({{0, 0, 1}, {1, 0, 1}})},
                               {"1", "ab"}),
                   {1},
                   2});
  cases.push_back({OperatorSet({a, b}, {"a", "b"}), {1}, 2});
  cases.push_back({OperatorSet({one, a, ad, b, bd},
                               {"1", "a", "ad", "b", "bd"}),
                   {1},
                   2});
  cases.push_back({OperatorSet({one, a + b, ad + bd}, {"1", "a+b", "ad+bd"}),
                   {1},
                   2});
  cases.push_back({OperatorSet({one, a + bd, ad + b}, {"1", "a+bd", "ad+b"}),
                   {1},
                   2});
  cases.push_back({OperatorSet({one, mono({{0, 0, 2}, {1, 1, 0}})},
                               {"1", "a^2 bd"}),
                   {1},
                   2});
  cases.push_back(
      {OperatorSet({PolyOperator::number(0), PolyOperator::number(1)},
                   {"n1", "n2"}),
       {1},
       2});
  cases.push_back({OperatorSet({one, mono({{0, 0, 1}, {1, 0, 1}, {2, 0, 1}})},
                               {"1", "abc"}),
                   {0},
                   3});
  cases.push_back({OperatorSet({a, mono({{1, 0, 1}, {2, 0, 1}})},
                               {"a", "bc"}),
                   {0},
                   3});
  // complex-coefficient polynomials and multi-mode transposes
  cases.push_back({OperatorSet({one, sum_squeeze_V(0.7)}, {"1", "V"}),
                   {1},
                   2});
  cases.push_back({OperatorSet({one, diff_squeeze_W_mm(3, 1, 0.4)},
                               {"1", "W31"}),
                   {1, 2},
                   3});
  cases.push_back({OperatorSet({one, mono({{0, 0, 2}, {1, 0, 1}, {2, 0, 1}})},
                               {"1", "a^2 bc"}),
                   {0},
                   3});
  cases.push_back(
      {OperatorSet({quad_X(std::vector<double>{0.0, 1.1},
                           std::vector<double>{1.0, -2.0}),
                    mono({{0, 0, 1}, {1, 1, 0}})},
                   {"X", "abd"}),
       {0, 1},
       2});
  return cases;
}

}  // namespace

SuiteResult suite_oracle_equivalence(std::uint64_t seed, std::size_t count,
                                     double tol_rel) {
  require_count(count);
  const std::vector<OracleCase> cases = oracle_cases();
  std::vector<DrawOutcome> outcomes(count);
  parallel_index_for(count, [&](std::size_t i) {
    Rng rng = Rng::for_draw(seed, i);
    DrawOutcome& out = outcomes[i];
    const OracleCase& oc = cases[i % cases.size()];
    const std::vector<std::size_t> cutoffs(oc.modes, oc.modes == 3 ? 8 : 10);
    const FockState state =
        (i % 2 == 0) ? random_pure_state(rng, cutoffs, 4)
                     : random_mixed_state(rng, cutoffs, 3, 4);
    const std::string desc =
        "oracle draw " + std::to_string(i) + ", set " +
        std::to_string(i % cases.size());
    try {
      for (MatrixMode mode : {MatrixMode::normal, MatrixMode::gamma}) {
        const MomentMatrix main =
            mode == MatrixMode::normal ? build_normal(oc.F, state)
                                       : build_gamma(oc.F, state, oc.pt);
        const MomentMatrix ref =
            oracle::moment_matrix(oc.F, state, mode, oc.pt);
        const double scale = std::max({main.scale, ref.scale, 1e-12});
        const double rel =
            (main.entries - ref.entries).cwiseAbs().maxCoeff() / scale;
        out.record(rel - tol_rel,
                   (mode == MatrixMode::normal ? "normal/" : "gamma/") +
                       oc.F.labels().back(),
                   rel > tol_rel, i, desc);
      }
      // partial transpose is an involution
      const FockState rho = state.to_density();
      const FockState pt1 = oracle::partial_transpose(rho, oc.pt);
      const FockState pt2 = oracle::partial_transpose(pt1, oc.pt);
      double diff = 0.0;
      for (std::size_t k = 0; k < rho.amplitudes().size(); ++k)
        diff = std::max(diff,
                        std::abs(rho.amplitudes()[k] - pt2.amplitudes()[k]));
      out.record(diff, "pt involution", diff != 0.0, i, desc);
    } catch (const error& e) {
      out.record(0.0, std::string("oracle: ") + e.what(), true, i, desc);
    }
  });
  return collect("oracle-equivalence", seed, count, std::move(outcomes));
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed,
                      std::size_t count) {
  if (name == "classical-closure") return suite_classical_closure(seed, count);
  if (name == "separable-closure") return suite_separable_closure(seed, count);
  if (name == "identities") return suite_identities(seed, count);
  if (name == "oracle-equivalence")
    return suite_oracle_equivalence(seed, count);
  throw error("unknown suite '" + name +
              "' (valid: classical-closure, separable-closure, identities, "
              "oracle-equivalence)");
}

}  // namespace mmw

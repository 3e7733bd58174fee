#ifndef MMW_WITNESSES_HPP
#define MMW_WITNESSES_HPP

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmw/moments.hpp"

// Named nonclassicality and NPT-entanglement witnesses. Each witness builds
// one or more moment matrices for a fixed operator set, reports the decisive
// determinants, and classifies the state against its classical bound.
// Where two derivation routes of the same determinant exist they are both
// evaluated and required to agree.

namespace mmw {

enum class Verdict { classical_consistent, nonclassical, entangled_npt };

std::string to_string(Verdict v);

struct WitnessVerdict {
  std::string witness_id;
  // Decisive determinant first, then auxiliary named values (cross-check
  // determinants, thresholds, commutant means, ...), in report order.
  std::vector<std::pair<std::string, double>> determinants;
  double threshold = 0.0;  // classical bound on the decisive value
  double margin = 0.0;     // threshold - value; positive = violation
  double tol = 0.0;        // decision tolerance actually used
  Verdict verdict = Verdict::classical_consistent;
  std::string notes;
  std::vector<std::string> operator_labels;
  std::vector<std::size_t> pt_modes;           // empty for table-1 witnesses
  std::vector<MomentMatrix> matrices;          // only when embed_matrices

  double value() const { return determinants.front().second; }
};

struct WitnessContext {
  double tol_rel = 1e-8;
  bool embed_matrices = false;
  // Overrides a table-2 witness's default partial-transpose mode set.
  std::optional<std::vector<std::size_t>> pt_modes;
};

// Scalar/integer parameters a registry witness may consume.
struct WitnessParams {
  std::vector<double> phis;   // phases; first entry used by scalar-phi tests
  std::vector<double> cs;     // quadrature weights, broadcast to 1 if empty
  std::size_t K = 1;          // mode-split for multimode difference squeezing
  std::array<int, 2> mn{1, 1};
  std::array<int, 3> klm{1, 1, 1};
};

// Two-time intensity correlation samples on a rectangular (t, tau) grid;
// value[i][j] = G2(t_i, t_i + tau_j). Lookups require exact sample matches.
struct CorrelationGrid {
  std::vector<double> ts;
  std::vector<double> taus;
  std::vector<std::vector<double>> g2;
  std::vector<double> g1;  // optional intensity samples per t
  bool stationary = false;

  void validate() const;
  double g2_at(double t, double tau) const;
  double g1_at(double t) const;
  bool has_g1() const { return !g1.empty(); }
};

// --- single-time nonclassicality witnesses (table 1) ---------------------

WitnessVerdict w_quadrature_squeezing(const FockState& state,
                                      std::span<const double> phis,
                                      std::span<const double> cs,
                                      const WitnessContext& ctx = {});

WitnessVerdict w_principal_squeezing(const FockState& state,
                                     const WitnessContext& ctx = {});

WitnessVerdict w_sum_squeezing(const FockState& state, double phi,
                               const WitnessContext& ctx = {});
WitnessVerdict w_sum_squeezing_mm(const FockState& state, double phi,
                                  const WitnessContext& ctx = {});

WitnessVerdict w_difference_squeezing(const FockState& state, double phi,
                                      const WitnessContext& ctx = {});
WitnessVerdict w_difference_squeezing_mm(const FockState& state, double phi,
                                         std::size_t K,
                                         const WitnessContext& ctx = {});

WitnessVerdict w_sub_poisson(const FockState& state, bool plus,
                             const WitnessContext& ctx = {});

// Generic two-operator Cauchy-Schwarz witness.
WitnessVerdict w_csi(const FockState& state, const PolyOperator& f1,
                     const PolyOperator& f2, const std::string& l1,
                     const std::string& l2, const WitnessContext& ctx = {});
// Photon-number CSI test, reporting the normalized parameter as well.
WitnessVerdict w_agarwal(const FockState& state,
                         const WitnessContext& ctx = {});

WitnessVerdict w_lee(const FockState& state, const WitnessContext& ctx = {});

WitnessVerdict w_antibunching(const CorrelationGrid& grid, double t,
                              double tau, const WitnessContext& ctx = {});
WitnessVerdict w_hyperbunching(const CorrelationGrid& grid, double t,
                               double tau, const WitnessContext& ctx = {});

enum class ZooVariant { x72, x78, x84, x90, x36 };
WitnessVerdict w_zoo(const FockState& state, ZooVariant variant,
                     const WitnessContext& ctx = {});

// --- NPT entanglement witnesses (table 2) --------------------------------

enum class HzVariant { x1, x4, x34, x49, x60, z24, z26 };
WitnessVerdict w_hz(const FockState& state, HzVariant variant,
                    std::array<int, 2> mn = {1, 1},
                    std::array<int, 3> klm = {1, 1, 1},
                    const WitnessContext& ctx = {});

WitnessVerdict w_duan(const FockState& state, const WitnessContext& ctx = {});

enum class DecompIdentity { simon_x43, x56, x57, x58, x59 };
WitnessVerdict w_decomposition(const FockState& state, DecompIdentity id,
                               const WitnessContext& ctx = {});

WitnessVerdict w_simon(const FockState& state, const WitnessContext& ctx = {});
WitnessVerdict w_mancini(const FockState& state,
                         const WitnessContext& ctx = {});

// --- parameter sweeps -----------------------------------------------------

struct SweepPoint {
  double param;
  double value;
};

struct SweepResult {
  std::vector<SweepPoint> trace;
  double best_param = 0.0;
  WitnessVerdict best;
};

// Deterministic grid scan plus golden-section refinement (fixed 40
// iterations) of the decisive determinant over one scalar parameter.
SweepResult sweep_scalar(const std::function<WitnessVerdict(double)>& eval,
                         double lo, double hi, std::size_t grid_points = 64);

// Phase sweep for the scalar-phase witnesses in the registry.
SweepResult sweep_phi(const std::string& witness_id, const FockState& state,
                      double lo, double hi, std::size_t grid_points = 64,
                      const WitnessContext& ctx = {});

// Integer sweep over the exponent box for the generalized photon-number
// product witness; returns the verdict at the most negative determinant.
SweepResult sweep_mn(const FockState& state, int m_max, int n_max,
                     const WitnessContext& ctx = {});

// Evaluates a two-time witness at every tau of the grid.
SweepResult sweep_tau(const std::string& witness_id,
                      const CorrelationGrid& grid, double t,
                      const WitnessContext& ctx = {});

// --- registry -------------------------------------------------------------

struct WitnessDescriptor {
  std::string id;
  int table = 1;
  std::size_t min_modes = 2;
  std::size_t max_modes = 2;  // 0 = unbounded
  bool needs_grid = false;
  std::string summary;
  std::function<WitnessVerdict(const FockState&, const WitnessParams&,
                               const WitnessContext&)>
      eval;
  std::function<WitnessVerdict(const CorrelationGrid&, double, double,
                               const WitnessContext&)>
      eval_grid;
};

// Stable, id-ordered witness catalog. Ids are the CLI contract.
const std::map<std::string, WitnessDescriptor>& registry();

std::vector<std::string> registry_ids();

// Ids applicable to a state with the given mode count (grid witnesses
// excluded), in registry order.
std::vector<std::string> applicable_ids(std::size_t num_modes,
                                        std::optional<int> table = {});

}  // namespace mmw

#endif  // MMW_WITNESSES_HPP

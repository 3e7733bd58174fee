#ifndef MMW_MOMENTS_HPP
#define MMW_MOMENTS_HPP

#include <Eigen/Dense>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mmw/ops.hpp"

// Matrices of moments over an operator set, in normally ordered or
// partial-transpose (gamma) form, plus robust positivity decisions.

namespace mmw {

class OperatorSet {
 public:
  OperatorSet(std::vector<PolyOperator> ops, std::vector<std::string> labels);

  std::size_t size() const { return ops_.size(); }
  const PolyOperator& op(std::size_t i) const { return ops_[i]; }
  const std::vector<PolyOperator>& ops() const { return ops_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // Set without the k-th operator (row/column deletion counterpart).
  OperatorSet without(std::size_t k) const;

  std::size_t arity() const;

 private:
  std::vector<PolyOperator> ops_;
  std::vector<std::string> labels_;
};

enum class MatrixMode { normal, gamma };

struct MomentMatrix {
  Eigen::MatrixXcd entries;
  MatrixMode mode = MatrixMode::normal;
  std::set<std::size_t> pt_modes;  // empty unless gamma
  std::vector<std::string> labels;
  std::vector<std::string> rendered_ops;  // full text form of each operator
  double scale = 0.0;      // max |entry| before symmetrization
  double asymmetry = 0.0;  // max |M - M^+| entry, recorded at assembly
};

struct PositivityReport {
  double determinant = 0.0;
  double min_eigenvalue = 0.0;
  // Only evaluated for N <= 6 (2^N - 1 principal minors).
  std::optional<bool> all_principal_minors_nonneg;
  enum class Verdict { psd, npd, indefinite_negative_minor } verdict =
      Verdict::psd;
};

// Entry (i,j) = <:f_i^+ f_j:>. Throws numerical_error if the assembled
// matrix deviates from Hermitian by more than 1e-8 * scale.
MomentMatrix build_normal(const OperatorSet& F, const FockState& state);

// Entry (i,j) = <(f_i^+ f_j)^Gamma>: per monomial pair the exponents on
// pt_modes are exchanged between the i and j sides, then the plain product
// is expanded into normal order and contracted.
MomentMatrix build_gamma(const OperatorSet& F, const FockState& state,
                         const std::set<std::size_t>& pt_modes);

double determinant(const MomentMatrix& m);

PositivityReport positivity(const MomentMatrix& m, double tol_rel = 1e-9);

// Hermitian determinant of an Eigen matrix via pivoted LU.
double hermitian_determinant(const Eigen::MatrixXcd& m);

// PSD check used as the positivity harness for section-structured operator
// sets (each mode owned by at most one f_i, creation-only or
// annihilation-only per mode). Throws if F lacks that structure.
bool separability_psd_check(const OperatorSet& F, const FockState& state);

}  // namespace mmw

#endif  // MMW_MOMENTS_HPP

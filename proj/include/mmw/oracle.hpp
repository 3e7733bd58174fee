#ifndef MMW_ORACLE_HPP
#define MMW_ORACLE_HPP

#include <Eigen/Dense>
#include <set>

#include "mmw/moments.hpp"

// Brute-force checker: operators materialized as dense matrices on the
// truncated space, expectations and partial transposes computed by direct
// matrix algebra. Commutation happens through matrix products and the
// partial transpose through explicit index transposition, so none of the
// symbolic rewriting or the contraction kernel is on this path. Test
// instrument, not a production path.

namespace mmw {
namespace oracle {

struct DenseOperator {
  ModeShape shape;
  Eigen::MatrixXcd matrix;
};

// Size guard: dense work is quadratic in dim; override for bigger cases.
inline constexpr std::size_t kDefaultDimCap = 1024;

DenseOperator materialize(const PolyOperator& op, const ModeShape& shape,
                          std::size_t dim_cap = kDefaultDimCap);

cplx expect(const FockState& state, const PolyOperator& op,
            std::size_t dim_cap = kDefaultDimCap);

// rho^Gamma by swapping the pt-mode index digits between row and column.
FockState partial_transpose(const FockState& state,
                            const std::set<std::size_t>& pt_modes);

Eigen::VectorXd eigenvalues(const FockState& density);

MomentMatrix moment_matrix(const OperatorSet& F, const FockState& state,
                           MatrixMode mode,
                           const std::set<std::size_t>& pt_modes = {},
                           std::size_t dim_cap = kDefaultDimCap);

}  // namespace oracle
}  // namespace mmw

#endif  // MMW_ORACLE_HPP

#include "mmw/oracle.hpp"

#include <string>

namespace mmw {
namespace oracle {

namespace {

void check_cap(const ModeShape& shape, std::size_t dim_cap) {
  if (shape.dim() > dim_cap)
    throw error("oracle: dense dimension " + std::to_string(shape.dim()) +
                " exceeds the cap of " + std::to_string(dim_cap) +
                "; pass a larger dim_cap to override");
}

Eigen::MatrixXcd lowering(std::size_t d) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                              static_cast<Eigen::Index>(d));
  for (std::size_t n = 1; n < d; ++n)
    a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) =
        std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  Eigen::MatrixXcd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

Eigen::MatrixXcd materialize_key(const MonoKey& key, const ModeShape& shape) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t m = 0; m < shape.num_modes(); ++m) {
    const std::size_t d = shape.cutoff(m);
    Eigen::MatrixXcd local =
        Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(d),
                                   static_cast<Eigen::Index>(d));
    for (const ModeExp& f : key) {
      if (f.mode != m) continue;
      const Eigen::MatrixXcd a = lowering(d);
      const Eigen::MatrixXcd ad = a.adjoint();
      for (std::uint32_t k = 0; k < f.p; ++k) local = (ad * local).eval();
      for (std::uint32_t k = 0; k < f.q; ++k) local = (local * a).eval();
    }
    acc = kron(acc, local);
  }
  return acc;
}

Eigen::MatrixXcd density_of(const FockState& state) {
  const FockState rho = state.to_density();
  const std::size_t D = rho.dim();
  return Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(
      rho.amplitudes().data(), static_cast<Eigen::Index>(D),
      static_cast<Eigen::Index>(D));
}

}  // namespace

DenseOperator materialize(const PolyOperator& op, const ModeShape& shape,
                          std::size_t dim_cap) {
  check_cap(shape, dim_cap);
  const Eigen::Index D = static_cast<Eigen::Index>(shape.dim());
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(D, D);
  for (const auto& [key, c] : op.terms())
    acc += c * materialize_key(key, shape);
  return DenseOperator{shape, std::move(acc)};
}

cplx expect(const FockState& state, const PolyOperator& op,
            std::size_t dim_cap) {
  const DenseOperator dense = materialize(op, state.shape(), dim_cap);
  if (state.kind() == StateKind::pure) {
    const Eigen::Map<const Eigen::VectorXcd> psi(
        state.amplitudes().data(), static_cast<Eigen::Index>(state.dim()));
    return psi.dot(dense.matrix * psi);  // dot conjugates its first argument
  }
  return (dense.matrix * density_of(state)).trace();
}

FockState partial_transpose(const FockState& state,
                            const std::set<std::size_t>& pt_modes) {
  if (state.kind() != StateKind::density)
    throw error("partial_transpose: density operator required");
  const ModeShape& shape = state.shape();
  for (std::size_t m : pt_modes)
    if (m >= shape.num_modes())
      throw error("partial_transpose: pt mode out of range");
  const std::size_t D = shape.dim();
  const std::size_t M = shape.num_modes();
  std::vector<cplx> out(D * D);
  std::vector<std::size_t> di(M), dj(M);
  for (std::size_t i = 0; i < D; ++i) {
    std::size_t rest = i;
    for (std::size_t m = 0; m < M; ++m) {
      di[m] = rest / shape.stride(m);
      rest %= shape.stride(m);
    }
    for (std::size_t j = 0; j < D; ++j) {
      rest = j;
      for (std::size_t m = 0; m < M; ++m) {
        dj[m] = rest / shape.stride(m);
        rest %= shape.stride(m);
      }
      std::size_t si = 0, sj = 0;
      for (std::size_t m = 0; m < M; ++m) {
        const bool swap = pt_modes.count(m) > 0;
        si += (swap ? dj[m] : di[m]) * shape.stride(m);
        sj += (swap ? di[m] : dj[m]) * shape.stride(m);
      }
      out[i * D + j] = state.amplitudes()[si * D + sj];
    }
  }
  StateOptions opt;
  opt.leakage_tol = 1.0;
  return FockState::density(shape, std::move(out), opt);
}

Eigen::VectorXd eigenvalues(const FockState& density) {
  if (density.kind() != StateKind::density)
    throw error("eigenvalues: density operator required");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(density_of(density),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

MomentMatrix moment_matrix(const OperatorSet& F, const FockState& state,
                           MatrixMode mode,
                           const std::set<std::size_t>& pt_modes,
                           std::size_t dim_cap) {
  const ModeShape& shape = state.shape();
  check_cap(shape, dim_cap);
  const std::size_t N = F.size();

  Eigen::MatrixXcd rho;
  if (mode == MatrixMode::gamma) {
    rho = density_of(partial_transpose(state.to_density(), pt_modes));
  } else {
    rho = density_of(state);
  }

  std::vector<Eigen::MatrixXcd> dense(N);
  for (std::size_t i = 0; i < N; ++i)
    dense[i] = materialize(F.op(i), shape, dim_cap).matrix;

  MomentMatrix m;
  m.mode = mode;
  m.pt_modes = pt_modes;
  m.labels = F.labels();
  m.entries.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      Eigen::MatrixXcd prod;
      if (mode == MatrixMode::normal) {
        // Normally ordered product, assembled mode by mode from exponent
        // sums so commutators never enter.
        PolyOperator np = normal_product(F.op(i), F.op(j));
        prod = materialize(np, shape, dim_cap).matrix;
      } else {
        prod = dense[i].adjoint() * dense[j];
      }
      m.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (prod * rho).trace();
    }
  }
  m.scale = m.entries.cwiseAbs().maxCoeff();
  m.asymmetry = (m.entries - m.entries.adjoint()).cwiseAbs().maxCoeff();
  m.entries = 0.5 * (m.entries + m.entries.adjoint()).eval();
  return m;
}

}  // namespace oracle
}  // namespace mmw

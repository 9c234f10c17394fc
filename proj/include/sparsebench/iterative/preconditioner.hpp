#pragma once

#include <chrono>
#include <string>
#include <variant>

#include "sparsebench/direct/lu.hpp"

namespace sparsebench {

enum class PreconditionerKind { identity, jacobi, block_jacobi, ilu0 };

inline std::string to_string(PreconditionerKind k) {
  switch (k) {
    case PreconditionerKind::identity: return "none";
    case PreconditionerKind::jacobi: return "jacobi";
    case PreconditionerKind::block_jacobi: return "bjacobi";
    case PreconditionerKind::ilu0: return "ilu0";
  }
  return "none";
}

inline PreconditionerKind parse_preconditioner(const std::string& s) {
  if (s == "none" || s == "identity") return PreconditionerKind::identity;
  if (s == "jacobi") return PreconditionerKind::jacobi;
  if (s == "bjacobi" || s == "block-jacobi") return PreconditionerKind::block_jacobi;
  if (s == "ilu0") return PreconditionerKind::ilu0;
  throw Error(ErrorCode::invalid_argument, "unknown preconditioner '" + s + "'");
}

struct IdentityPreconditioner {
  Index n = 0;
};

struct JacobiPreconditioner {
  DenseVector inv_diag;
};

/// One LU factorization per contiguous row range.
struct BlockJacobiPreconditioner {
  std::vector<Index> offsets;  // block b covers [offsets[b], offsets[b+1])
  std::vector<LuFactors> blocks;
};

/// Incomplete LU on A's own pattern. `factors` holds strict L and U in the
/// slots of A; `diag_pos[i]` locates U(i,i).
struct Ilu0Preconditioner {
  CsrMatrix factors;
  std::vector<Index> diag_pos;
};

/// Approximate inverse M^-1 applied as an operator.
class Preconditioner {
public:
  using Variant = std::variant<IdentityPreconditioner, JacobiPreconditioner,
                               BlockJacobiPreconditioner, Ilu0Preconditioner>;

  explicit Preconditioner(Variant impl, double setup_s = 0.0)
      : impl_(std::move(impl)), setup_s_(setup_s) {}

  PreconditionerKind kind() const noexcept { return static_cast<PreconditionerKind>(impl_.index()); }
  const Variant& impl() const noexcept { return impl_; }
  double setup_seconds() const noexcept { return setup_s_; }

  Index size() const {
    return std::visit(
        [](const auto& p) -> Index {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, IdentityPreconditioner>) return p.n;
          else if constexpr (std::is_same_v<T, JacobiPreconditioner>) return p.inv_diag.size();
          else if constexpr (std::is_same_v<T, BlockJacobiPreconditioner>) return p.offsets.back();
          else return p.factors.n_rows();
        },
        impl_);
  }

  Index block_count() const {
    if (auto* bj = std::get_if<BlockJacobiPreconditioner>(&impl_)) return bj->blocks.size();
    return 0;
  }

  /// Exact flop count of one apply().
  std::uint64_t apply_flops() const {
    return std::visit(
        [](const auto& p) -> std::uint64_t {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, IdentityPreconditioner>) return 0;
          else if constexpr (std::is_same_v<T, JacobiPreconditioner>) return p.inv_diag.size();
          else if constexpr (std::is_same_v<T, BlockJacobiPreconditioner>) {
            std::uint64_t f = 0;
            for (const auto& b : p.blocks) f += b.solve_flops();
            return f;
          } else {
            const Index n = p.factors.n_rows();
            return 2 * (p.factors.nnz() - n) + n;
          }
        },
        impl_);
  }

  /// out = M^-1 in
  void apply(std::span<const double> in, std::span<double> out, OpStats* stats = nullptr) const {
    detail::require(in.size() == size() && out.size() == size(), ErrorCode::dimension_mismatch,
                    "preconditioner size mismatch");
    std::visit([&](const auto& p) { apply_impl(p, in, out); }, impl_);
    count(stats, apply_flops());
  }

  DenseVector apply(std::span<const double> in, OpStats* stats = nullptr) const {
    DenseVector out(in.size());
    apply(in, out, stats);
    return out;
  }

private:
  static void apply_impl(const IdentityPreconditioner&, std::span<const double> in, std::span<double> out) {
    std::copy(in.begin(), in.end(), out.begin());
  }
  static void apply_impl(const JacobiPreconditioner& p, std::span<const double> in, std::span<double> out) {
    for (Index i = 0; i < in.size(); ++i) out[i] = p.inv_diag[i] * in[i];
  }
  static void apply_impl(const BlockJacobiPreconditioner& p, std::span<const double> in,
                         std::span<double> out) {
    for (Index b = 0; b < p.blocks.size(); ++b) {
      const Index lo = p.offsets[b], len = p.offsets[b + 1] - lo;
      lu_solve_into(p.blocks[b], in.subspan(lo, len), out.subspan(lo, len));
    }
  }
  static void apply_impl(const Ilu0Preconditioner& p, std::span<const double> in, std::span<double> out) {
    const Index n = p.factors.n_rows();
    const auto& ptr = p.factors.row_ptr();
    const auto& col = p.factors.col_idx();
    const auto& val = p.factors.values();
    for (Index i = 0; i < n; ++i) {
      double s = in[i];
      for (Index k = ptr[i]; k < p.diag_pos[i]; ++k) s -= val[k] * out[col[k]];
      out[i] = s;
    }
    for (Index i = n; i-- > 0;) {
      double s = out[i];
      for (Index k = p.diag_pos[i] + 1; k < ptr[i + 1]; ++k) s -= val[k] * out[col[k]];
      out[i] = s / val[p.diag_pos[i]];
    }
  }

  Variant impl_;
  double setup_s_ = 0.0;
};

inline Preconditioner build_identity(const CsrMatrix& a) {
  return Preconditioner(IdentityPreconditioner{a.n_rows()});
}

inline Preconditioner build_jacobi(const CsrMatrix& a) {
  detail::require(a.is_square(), ErrorCode::dimension_mismatch, "matrix must be square");
  const auto start = std::chrono::steady_clock::now();
  JacobiPreconditioner p;
  p.inv_diag.resize(a.n_rows());
  for (Index i = 0; i < a.n_rows(); ++i) {
    const double d = a.at(i, i);
    if (d == 0.0) throw IndexedError(ErrorCode::zero_diagonal, i, "zero diagonal entry");
    p.inv_diag[i] = 1.0 / d;
  }
  return Preconditioner(std::move(p), detail::seconds_since(start));
}

/// Splits the rows into `blocks` contiguous ranges (the first n mod blocks
/// ranges one row longer) and LU-factors each diagonal block.
inline Preconditioner build_block_jacobi(const CsrMatrix& a, Index blocks,
                                         OrderingMethod ordering = OrderingMethod::minimum_degree) {
  detail::require(a.is_square(), ErrorCode::dimension_mismatch, "matrix must be square");
  const Index n = a.n_rows();
  detail::require(blocks >= 1 && blocks <= n, ErrorCode::invalid_argument,
                  "block count must lie in [1, n]");
  const auto start = std::chrono::steady_clock::now();
  BlockJacobiPreconditioner p;
  p.offsets.resize(blocks + 1, 0);
  const Index base = n / blocks, extra = n % blocks;
  for (Index b = 0; b < blocks; ++b) p.offsets[b + 1] = p.offsets[b] + base + (b < extra ? 1 : 0);
  p.blocks.reserve(blocks);
  for (Index b = 0; b < blocks; ++b) {
    const CsrMatrix block = diagonal_block(a, p.offsets[b], p.offsets[b + 1]);
    try {
      p.blocks.push_back(factorize(block, block.n_rows() == 1 ? OrderingMethod::natural : ordering));
    } catch (const IndexedError& e) {
      if (e.code() != ErrorCode::zero_pivot && e.code() != ErrorCode::structurally_singular) throw;
      throw IndexedError(ErrorCode::zero_pivot, p.offsets[b] + e.index(),
                         "block " + std::to_string(b) + " cannot be factored");
    }
  }
  return Preconditioner(std::move(p), detail::seconds_since(start));
}

/// ILU(0): Gaussian elimination that discards every update falling outside
/// A's sparsity pattern.
inline Preconditioner build_ilu0(const CsrMatrix& a) {
  detail::require(a.is_square(), ErrorCode::dimension_mismatch, "matrix must be square");
  const auto start = std::chrono::steady_clock::now();
  const Index n = a.n_rows();
  Ilu0Preconditioner p;
  p.factors = a;
  p.diag_pos.resize(n);
  for (Index i = 0; i < n; ++i) {
    auto pos = a.find(i, i);
    if (!pos) throw IndexedError(ErrorCode::zero_pivot, i, "missing diagonal entry");
    p.diag_pos[i] = *pos;
  }
  const double pivot_tol = 1e-14 * a.max_abs();
  const auto& ptr = p.factors.row_ptr();
  const auto& col = p.factors.col_idx();
  auto& val = p.factors.mutable_values();
  // slot[j] = position of (i, j) in row i, or none.
  constexpr Index none = std::numeric_limits<Index>::max();
  std::vector<Index> slot(n, none);
  for (Index i = 0; i < n; ++i) {
    for (Index k = ptr[i]; k < ptr[i + 1]; ++k) slot[col[k]] = k;
    for (Index kk = ptr[i]; kk < p.diag_pos[i]; ++kk) {
      const Index k = col[kk];
      val[kk] /= val[p.diag_pos[k]];
      const double lik = val[kk];
      for (Index q = p.diag_pos[k] + 1; q < ptr[k + 1]; ++q)
        if (slot[col[q]] != none) val[slot[col[q]]] -= lik * val[q];
    }
    for (Index k = ptr[i]; k < ptr[i + 1]; ++k) slot[col[k]] = none;
    if (!(std::abs(val[p.diag_pos[i]]) >= pivot_tol) || pivot_tol == 0.0)
      throw IndexedError(ErrorCode::zero_pivot, i, "incomplete factorization pivot too small");
  }
  return Preconditioner(std::move(p), detail::seconds_since(start));
}

inline Preconditioner build_preconditioner(const CsrMatrix& a, PreconditionerKind kind, Index blocks = 1) {
  switch (kind) {
    case PreconditionerKind::identity: return build_identity(a);
    case PreconditionerKind::jacobi: return build_jacobi(a);
    case PreconditionerKind::block_jacobi: return build_block_jacobi(a, blocks);
    case PreconditionerKind::ilu0: return build_ilu0(a);
  }
  return build_identity(a);
}

}  // namespace sparsebench

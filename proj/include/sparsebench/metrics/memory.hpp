#pragma once

#include "sparsebench/iterative/preconditioner.hpp"

namespace sparsebench {

// Byte estimates from storage formulas: 8-byte indices and values.

inline std::uint64_t memory_estimate(const CsrMatrix& a) { return 16 * a.nnz() + 8 * (a.n_rows() + 1); }

inline std::uint64_t memory_estimate(const DenseBlock& b) { return 8 * b.n_rows() * b.n_cols(); }

inline std::uint64_t memory_estimate(std::span<const double> v) { return 8 * v.size(); }

inline std::uint64_t memory_estimate(const LuFactors& f) {
  return memory_estimate(f.L) + memory_estimate(f.U) + 16 * f.size();
}

inline std::uint64_t memory_estimate(const Preconditioner& m) {
  return std::visit(
      [](const auto& p) -> std::uint64_t {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IdentityPreconditioner>) return 0;
        else if constexpr (std::is_same_v<T, JacobiPreconditioner>) return 8 * p.inv_diag.size();
        else if constexpr (std::is_same_v<T, BlockJacobiPreconditioner>) {
          std::uint64_t bytes = 0;
          for (const auto& b : p.blocks) bytes += memory_estimate(b);
          return bytes;
        } else
          return memory_estimate(p.factors);
      },
      m.impl());
}

/// Matrix + preconditioner + `vectors` work vectors of length n.
inline std::uint64_t iterative_working_set(const CsrMatrix& a, const Preconditioner& m, Index vectors = 8) {
  return memory_estimate(a) + memory_estimate(m) + 8 * vectors * a.n_rows();
}

/// Work vectors held by each solver (solution and right-hand side included).
inline Index bicgstab_vector_count() { return 10; }
inline Index gmres_vector_count(Index restart) { return restart + 6; }

}  // namespace sparsebench

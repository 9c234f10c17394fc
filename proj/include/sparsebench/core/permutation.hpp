#pragma once

#include <numeric>
#include <vector>

#include "sparsebench/core/dense.hpp"

namespace sparsebench {

/// Bijection on [0, n). `apply(i)` is the source index placed at position i.
class Permutation {
public:
  Permutation() = default;

  explicit Permutation(std::vector<Index> forward) : forward_(std::move(forward)) {
    std::vector<bool> seen(forward_.size(), false);
    for (Index p : forward_) {
      if (p >= forward_.size() || seen[p])
        detail::fail(ErrorCode::invalid_argument, "permutation is not a bijection");
      seen[p] = true;
    }
  }

  static Permutation identity(Index n) {
    std::vector<Index> f(n);
    std::iota(f.begin(), f.end(), Index{0});
    Permutation p;
    p.forward_ = std::move(f);
    return p;
  }

  Index size() const noexcept { return forward_.size(); }
  Index operator()(Index i) const { return forward_[i]; }
  const std::vector<Index>& forward() const noexcept { return forward_; }

  Permutation inverse() const {
    std::vector<Index> inv(forward_.size());
    for (Index i = 0; i < forward_.size(); ++i) inv[forward_[i]] = i;
    Permutation p;
    p.forward_ = std::move(inv);
    return p;
  }

  bool is_identity() const {
    for (Index i = 0; i < forward_.size(); ++i)
      if (forward_[i] != i) return false;
    return true;
  }

  /// out[i] = v[p(i)]
  template <class T>
  std::vector<T> gather(std::span<const T> v) const {
    detail::require(v.size() == forward_.size(), ErrorCode::dimension_mismatch,
                    "permutation size mismatch");
    std::vector<T> out(v.size());
    for (Index i = 0; i < forward_.size(); ++i) out[i] = v[forward_[i]];
    return out;
  }

  /// out[p(i)] = v[i]
  template <class T>
  std::vector<T> scatter(std::span<const T> v) const {
    detail::require(v.size() == forward_.size(), ErrorCode::dimension_mismatch,
                    "permutation size mismatch");
    std::vector<T> out(v.size());
    for (Index i = 0; i < forward_.size(); ++i) out[forward_[i]] = v[i];
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

private:
  std::vector<Index> forward_;
};

}  // namespace sparsebench

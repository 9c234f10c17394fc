#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sparsebench {

enum class ErrorCode {
  index_out_of_range,
  dimension_mismatch,
  invalid_argument,
  grid_too_small,
  not_an_edge,
  degenerate_tet,
  jitter_too_large,
  parse_error,
  invalid_index,
  structurally_singular,
  zero_pivot,
  zero_diagonal,
  breakdown,
  not_converged,
  zero_ground_truth,
  missing_baseline,
  io_error,
  degenerate_kmax,
  incomplete_requirements,
  non_finite,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::grid_too_small: return "GridTooSmall";
    case ErrorCode::not_an_edge: return "NotAnEdge";
    case ErrorCode::degenerate_tet: return "DegenerateTet";
    case ErrorCode::jitter_too_large: return "JitterTooLarge";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::invalid_index: return "InvalidIndex";
    case ErrorCode::structurally_singular: return "StructurallySingular";
    case ErrorCode::zero_pivot: return "ZeroPivot";
    case ErrorCode::zero_diagonal: return "ZeroDiagonal";
    case ErrorCode::breakdown: return "Breakdown";
    case ErrorCode::not_converged: return "NotConverged";
    case ErrorCode::zero_ground_truth: return "ZeroGroundTruth";
    case ErrorCode::missing_baseline: return "MissingBaseline";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::degenerate_kmax: return "DegenerateKmax";
    case ErrorCode::incomplete_requirements: return "IncompleteRequirements";
    case ErrorCode::non_finite: return "NonFinite";
  }
  return "Unknown";
}

/// Base of every error raised by the library. `code()` is the stable tag
/// written into reports; `what()` is for humans.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Error tied to a specific row/column/vertex/line.
class IndexedError : public Error {
public:
  IndexedError(ErrorCode code, std::uint64_t index, const std::string& message)
      : Error(code, message + " (at " + std::to_string(index) + ")"), index_(index) {}

  std::uint64_t index() const noexcept { return index_; }

private:
  std::uint64_t index_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) throw Error(code, message);
}

}  // namespace detail
}  // namespace sparsebench

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <variant>

#include "sparsebench/core/error.hpp"

namespace sparsebench {

using Point3 = std::array<double, 3>;

// Harmonic fields used as Dirichlet data and exact solutions.

/// u = a x + b y + c z + d
struct LinearField {
  double a = 1.0, b = 0.0, c = 0.0, d = 0.0;
};
/// u = x^2 + y^2 - 2 z^2
struct QuadHarmonicField {};
/// u = sin(x) sinh(y)
struct TrigHarmonicField {};

using AnalyticField = std::variant<LinearField, QuadHarmonicField, TrigHarmonicField>;

inline double evaluate(const AnalyticField& f, const Point3& p) {
  const auto [x, y, z] = p;
  return std::visit(
      [&](const auto& field) -> double {
        using T = std::decay_t<decltype(field)>;
        if constexpr (std::is_same_v<T, LinearField>)
          return field.a * x + field.b * y + field.c * z + field.d;
        else if constexpr (std::is_same_v<T, QuadHarmonicField>)
          return x * x + y * y - 2.0 * z * z;
        else
          return std::sin(x) * std::sinh(y);
      },
      f);
}

inline std::string field_name(const AnalyticField& f) {
  switch (f.index()) {
    case 0: return "linear";
    case 1: return "quad";
    default: return "trig";
  }
}

/// Accepts "linear", "quad", "trig".
inline AnalyticField parse_field(const std::string& name) {
  if (name == "linear") return LinearField{1.0, 2.0, -0.5, 0.25};
  if (name == "quad") return QuadHarmonicField{};
  if (name == "trig") return TrigHarmonicField{};
  throw Error(ErrorCode::invalid_argument, "unknown field '" + name + "'");
}

}  // namespace sparsebench

#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace rach {

/// Traffic class of a user equipment.
enum class UeClass : int { H2H = 0, M2M = 1 };

inline constexpr std::array<UeClass, 2> kUeClasses{UeClass::H2H, UeClass::M2M};

constexpr std::size_t index_of(UeClass c) { return static_cast<std::size_t>(c); }

constexpr std::string_view to_string(UeClass c) {
  return c == UeClass::H2H ? "h2h" : "m2m";
}

/// Metric scope: one class or both combined.
enum class Scope : int { H2H = 0, M2M = 1, Total = 2 };

inline constexpr std::array<Scope, 3> kScopes{Scope::H2H, Scope::M2M, Scope::Total};

constexpr std::size_t index_of(Scope s) { return static_cast<std::size_t>(s); }

constexpr Scope scope_of(UeClass c) { return static_cast<Scope>(static_cast<int>(c)); }

constexpr std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::H2H: return "h2h";
    case Scope::M2M: return "m2m";
    case Scope::Total: return "total";
  }
  return "total";
}

constexpr bool includes(Scope s, UeClass c) {
  return s == Scope::Total || static_cast<int>(s) == static_cast<int>(c);
}

}  // namespace rach

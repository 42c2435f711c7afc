#pragma once
// Shared scalar type, work budget, and numeric validation helpers.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace jetplane {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Relative rank cutoff for all small dense solves, scaled by the largest
// singular value of the system at hand.
inline constexpr double kRankTol = 1e-9;

// Generated point sets and grids refuse to exceed this many elements unless
// the caller raises the cap through JETPLANE_POINT_BUDGET.
inline constexpr std::size_t kDefaultBudget = 1000000;

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonFiniteValue : std::domain_error {
  explicit NonFiniteValue(const std::string& msg) : std::domain_error(msg) {}
};

inline std::size_t point_budget() {
  if (const char* env = std::getenv("JETPLANE_POINT_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultBudget;
}

inline void check_budget(std::size_t requested, const char* what) {
  std::size_t cap = point_budget();
  if (requested > cap)
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(requested) +
                         " elements exceed budget " + std::to_string(cap));
}

inline bool is_finite(cdouble z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(cdouble z, const char* where) {
  if (!is_finite(z))
    throw NonFiniteValue(std::string(where) + ": non-finite value");
}

}  // namespace jetplane

#pragma once
// Catalog of smooth test functions with exact Wirtinger derivatives.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"

namespace jetplane {

struct SmoothFunction {
  std::string id;
  std::function<cdouble(cdouble)> f;
  std::function<cdouble(cdouble)> dz;     // d/dz
  std::function<cdouble(cdouble)> dzbar;  // d/dzbar
  bool has_derivatives = false;
};

inline SmoothFunction fn_z() {
  return {"z", [](cdouble z) { return z; }, [](cdouble) { return cdouble(1, 0); },
          [](cdouble) { return cdouble(0, 0); }, true};
}

inline SmoothFunction fn_conj_z() {
  return {"conj-z", [](cdouble z) { return std::conj(z); },
          [](cdouble) { return cdouble(0, 0); }, [](cdouble) { return cdouble(1, 0); },
          true};
}

inline SmoothFunction fn_z2() {
  return {"z2", [](cdouble z) { return z * z; }, [](cdouble z) { return 2.0 * z; },
          [](cdouble) { return cdouble(0, 0); }, true};
}

inline SmoothFunction fn_z_conj_z() {
  return {"z-conj-z", [](cdouble z) { return z * std::conj(z); },
          [](cdouble z) { return std::conj(z); }, [](cdouble z) { return z; }, true};
}

// Smooth cutoff exp(1 - 1/u) with u = 1 - |(z-c)/R|^2, identically zero
// outside the disk of radius R about c.  All derivatives vanish at the rim,
// which keeps finite-difference convergence clean across the support edge.
inline SmoothFunction fn_bump(cdouble c = cdouble(0, 0), double R = 1.0) {
  if (!(R > 0)) throw std::invalid_argument("fn_bump: radius must be positive");
  auto u_of = [c, R](cdouble z) {
    cdouble w = (z - c) / R;
    return 1.0 - std::norm(w);
  };
  auto val = [u_of](cdouble z) -> cdouble {
    double u = u_of(z);
    if (u < 1e-8) return 0;
    return std::exp(1.0 - 1.0 / u);
  };
  // dF = F' (u) du with F(u) = exp(1 - 1/u):  F' = F / u^2.
  auto dz = [u_of, c, R](cdouble z) -> cdouble {
    double u = u_of(z);
    if (u < 1e-8) return 0;
    double F = std::exp(1.0 - 1.0 / u);
    return -(F / (u * u)) * std::conj(z - c) / (R * R);  // du/dz = -conj(z-c)/R^2
  };
  auto dzb = [u_of, c, R](cdouble z) -> cdouble {
    double u = u_of(z);
    if (u < 1e-8) return 0;
    double F = std::exp(1.0 - 1.0 / u);
    return -(F / (u * u)) * (z - c) / (R * R);  // du/dzbar = -(z-c)/R^2
  };
  return {"bump", val, dz, dzb, true};
}

inline SmoothFunction fn_poly(const std::vector<cdouble>& coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("fn_poly: empty coefficient list");
  auto val = [coeffs](cdouble z) {
    cdouble acc = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
    return acc;
  };
  auto dz = [coeffs](cdouble z) {
    cdouble acc = 0;
    for (std::size_t k = coeffs.size(); k-- > 1;)
      acc = acc * z + double(k) * coeffs[k];
    return acc;
  };
  return {"poly", val, dz, [](cdouble) { return cdouble(0, 0); }, true};
}

// Names an experiment input rather than a plane function: the parameter
// value t along a snowflake curve, defined on curve samples only.
inline const char* kKochParameterId = "koch-parameter";

inline SmoothFunction function_by_id(const std::string& id) {
  if (id == "z") return fn_z();
  if (id == "conj-z") return fn_conj_z();
  if (id == "z2") return fn_z2();
  if (id == "z-conj-z") return fn_z_conj_z();
  if (id == "bump") return fn_bump();
  throw std::invalid_argument("function_by_id: unknown id " + id);
}

}  // namespace jetplane

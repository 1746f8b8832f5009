#pragma once

#include <string>

#include "floq/scalar.hpp"

namespace floq {

enum class Family { SSEP, ASEP, FusedSSEP, FusedASEP };

// Spectral-parameter convention. The symmetric families use an additive
// parameter (regular point 0, unitarity R12(z)R21(-z)=1); the asymmetric
// ones a multiplicative parameter (regular point 1, R12(z)R21(1/z)=1).
enum class Convention { Additive, Multiplicative };

enum class Boundary { Open, Periodic };

inline bool is_asymmetric(Family f) { return f == Family::ASEP || f == Family::FusedASEP; }
inline bool is_fused(Family f) { return f == Family::FusedSSEP || f == Family::FusedASEP; }

inline Convention convention_of(Family f) {
  return is_asymmetric(f) ? Convention::Multiplicative : Convention::Additive;
}

inline int max_occupancy(Family f) { return is_fused(f) ? 2 : 1; }
inline int local_dim(Family f) { return max_occupancy(f) + 1; }

inline std::string family_name(Family f) {
  switch (f) {
    case Family::SSEP: return "ssep";
    case Family::ASEP: return "asep";
    case Family::FusedSSEP: return "fused-ssep";
    case Family::FusedASEP: return "fused-asep";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  if (s == "ssep") return Family::SSEP;
  if (s == "asep") return Family::ASEP;
  if (s == "fused-ssep" || s == "fused_ssep") return Family::FusedSSEP;
  if (s == "fused-asep" || s == "fused_asep") return Family::FusedASEP;
  throw Error("unknown family: " + s);
}

// Full parameterization of one of the four integrable families: boundary
// injection/extraction rates (a,b,c,d), the staggering parameter kappa and,
// for the asymmetric families, the hopping bias t with 0 < t < 1.
struct ModelSpec {
  Family family = Family::SSEP;
  Rat t = rat(1, 2);      // asymmetry (ASEP families only)
  Rat kappa = rat(1, 2);  // staggering
  Rat a = rat(1), b = rat(1), c = rat(0), d = rat(0);

  Convention convention() const { return convention_of(family); }
  int s() const { return max_occupancy(family); }
  int dim_local() const { return local_dim(family); }

  void check_basic() const {
    if (a < 0 || b < 0 || c < 0 || d < 0) throw Error("boundary rates must be nonnegative");
    if (a == 0 || b == 0) throw Error("a > 0 and b > 0 required");
    if (is_asymmetric(family) && !(t > 0 && t < 1)) throw Error("ASEP families need 0 < t < 1");
    if (kappa <= 0) throw Error("kappa must be positive");
  }
};

// Regular point of the spectral parameter (R = P, K = 1 there).
inline Rat regular_point(Convention c) { return c == Convention::Additive ? Rat(0) : Rat(1); }

// The "reflected" argument z-check entering unitarity and the GZ relations:
// -z additive, 1/z multiplicative.
inline Rat reflected(Convention c, const Rat& z) {
  if (c == Convention::Additive) return -z;
  if (z == 0) throw Error("reflected argument: z = 0");
  return 1 / z;
}

// Argument composition for the two-parameter identities: difference/ratio
// and sum/product.
inline Rat arg_diff(Convention c, const Rat& z1, const Rat& z2) {
  if (c == Convention::Additive) return z1 - z2;
  if (z2 == 0) throw Error("argument ratio: z2 = 0");
  return z1 / z2;
}
inline Rat arg_sum(Convention c, const Rat& z1, const Rat& z2) {
  return c == Convention::Additive ? Rat(z1 + z2) : Rat(z1 * z2);
}

}  // namespace floq

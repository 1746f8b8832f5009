#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace floq {

// Exact rational scalar used throughout the algebraic core. All identity
// checks run in this type with zero tolerance.
using Rat = mpq_class;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw Error("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p", "p/q" or a plain decimal like "0.5" into an exact rational.
inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      mpz_class num(s.substr(0, slash), 10);
      mpz_class den(s.substr(slash + 1), 10);
      if (den == 0) throw Error("rational with zero denominator: " + s);
      Rat r(num, den);
      r.canonicalize();
      return r;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      // base 10 explicitly: a leading zero must not trigger octal parsing
      mpz_class num(digits, 10);
      mpz_class den(1);
      for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
      Rat r(num, den);
      r.canonicalize();
      return r;
    }
    return Rat(mpz_class(s, 10));
  } catch (const std::invalid_argument&) {
    throw Error("cannot parse rational: " + s);
  }
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

// Scalar conversion shim so matrix builders can be instantiated over the
// exact field or over double (Monte Carlo, limit checks).
template <class T>
inline T scalar_cast(const Rat& r);

template <>
inline Rat scalar_cast<Rat>(const Rat& r) {
  return r;
}

template <>
inline double scalar_cast<double>(const Rat& r) {
  return r.get_d();
}

template <class T>
inline bool is_zero(const T& x) {
  return x == T(0);
}

inline double abs_val(double x) { return std::fabs(x); }
inline Rat abs_val(const Rat& x) { return abs(x); }

}  // namespace floq

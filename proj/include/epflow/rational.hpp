#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace epflow {

// Exact arithmetic used by the identity and property checks. The numeric
// pipeline runs in floating point; identities are verified in rationals.
using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

inline double to_double(const rational& r) { return r.convert_to<double>(); }

// Converts a big integer into the scalar type of the computation. Exact for
// rationals; exact for doubles as long as the value fits in 53 bits, which
// covers every binomial and factorial this library evaluates.
template <class T>
T scalar_from_bigint(const bigint& v) {
  if constexpr (std::is_floating_point_v<T>) {
    return v.convert_to<T>();
  } else {
    return T(v);
  }
}

}  // namespace epflow

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

namespace solwalk {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

inline double to_double(const BigRational& v) { return v.convert_to<double>(); }

/// Exact "p/q" rendering (integers render as "p/1" so the format is uniform).
inline std::string to_fraction_string(const BigRational& v) {
  return numerator(v).str() + "/" + denominator(v).str();
}

/// v^(-kappa) as a double, usable even when v itself overflows double range.
inline double neg_pow(const BigInt& v, double kappa) {
  if (v <= 0) return std::numeric_limits<double>::quiet_NaN();
  const double d = to_double(v);
  if (std::isfinite(d)) return std::pow(d, -kappa);
  // log2 via bit length plus the leading 64-bit window.
  const auto bits = boost::multiprecision::msb(v);
  const BigInt top = v >> static_cast<int>(bits > 62 ? bits - 62 : 0);
  const double log2v =
      std::log2(to_double(top)) + static_cast<double>(bits > 62 ? bits - 62 : 0);
  return std::exp2(-kappa * log2v);
}

}  // namespace solwalk

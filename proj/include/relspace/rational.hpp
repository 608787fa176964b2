#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace relspace {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

using QVec = std::vector<Rational>;

/// Parse "p" or "p/q" (q != 0); result is canonicalized. Throws
/// std::invalid_argument on malformed input.
Rational parse_rational(const std::string& s);

/// Serialize as "p" or "p/q" with gcd(p,q)=1, q>0.
std::string rational_str(const Rational& q);

bool is_integer(const Rational& q);

Rational dot(const QVec& a, const QVec& b);

bool is_zero_vec(const QVec& v);

QVec scaled(const QVec& v, const Rational& c);

QVec vec_sub(const QVec& a, const QVec& b);
QVec vec_add(const QVec& a, const QVec& b);

}  // namespace relspace

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hdg {

// Exact arbitrary-precision rational. mpq_class keeps values canonical
// (lowest terms, positive denominator) after arithmetic.
using Rat = mpq_class;
using Int = mpz_class;

/// Parses "n", "n/d" or a plain decimal like "0.25" / "-1.5" into an exact rational.
Rat rat_from_string(const std::string& s);

/// Canonical wire form "num/den", lowest terms, den > 0 (always carries the "/den").
std::string rat_to_string(const Rat& q);

double to_double(const Rat& q);

/// Natural log of a positive rational, computed from big-integer mantissa and
/// exponent so it stays accurate when num/den overflow double range.
double rat_log(const Rat& q);

Int floor_int(const Rat& q);
Int ceil_int(const Rat& q);
Rat pow_int(const Rat& base, long e);
Int ipow(const Int& base, unsigned long e);

/// floor(sqrt(v)) for v >= 0.
Int isqrt_floor(const Int& v);

// Rational bounds on sqrt(q), q >= 0, within 2^-bits relative slack.
// Both are exact when q is the square of a rational.
Rat sqrt_lb(const Rat& q, unsigned bits = 64);
Rat sqrt_ub(const Rat& q, unsigned bits = 64);

/// Rational upper bound on sqrt(d) for an integer dimension, exact for squares.
Rat sqrt_ub_int(long d, unsigned bits = 48);

struct Point {
  std::vector<Rat> c;

  Point() = default;
  explicit Point(std::vector<Rat> coords) : c(std::move(coords)) {}

  int dim() const { return static_cast<int>(c.size()); }
  bool operator==(const Point& o) const { return c == o.c; }
  bool operator!=(const Point& o) const { return !(*this == o); }
};

/// Lexicographic order on exact coordinates; fixes all greedy tie-breaking.
bool lex_less(const Point& a, const Point& b);

/// Squared Euclidean distance, exact. Throws on dimension mismatch.
Rat dist2(const Point& a, const Point& b);

std::string point_to_string(const Point& p);                  // "a/b,c/d"
Point point_from_string(const std::string& s);
std::vector<std::string> point_to_strings(const Point& p);

Point zero_point(int d);
Point point_of(std::initializer_list<Rat> coords);

}  // namespace hdg

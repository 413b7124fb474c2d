#pragma once

#include <string>

#include "hdgame/rational.hpp"

namespace hdg::eng {

// A named beta-sequence. Whether beta_i -> 0 is a declared property of the
// family, not something decided from a finite prefix.
class Schedule {
 public:
  enum class Kind { Harmonic, Constant, Geometric, Staircase };

  static Schedule harmonic(long offset = 3);
  static Schedule constant(const Rat& value);
  static Schedule geometric(const Rat& base, const Rat& ratio);
  /// beta_i = high for i < drop, then 1/(1/low + (i - drop)): a slow prefix
  /// followed by a fine-scale harmonic tail.
  static Schedule staircase(const Rat& high, const Rat& low, long drop);

  /// Parses "harmonic:offset=3", "constant:value=1/3",
  /// "geometric:base=1/3,ratio=1/2", "staircase:high=1/3,low=1/150,drop=6".
  static Schedule parse(const std::string& spec);

  Rat beta(long i) const;
  bool tends_to_zero() const;
  std::string spec() const;
  Kind kind() const { return kind_; }

 private:
  Kind kind_ = Kind::Harmonic;
  long offset_ = 3;
  Rat value_;
  Rat base_, ratio_;
  Rat high_, low_;
  long drop_ = 0;
};

}  // namespace hdg::eng

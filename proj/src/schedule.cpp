#include "hdgame/schedule.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace hdg::eng {

namespace {

std::map<std::string, std::string> parse_args(const std::string& s) {
  std::map<std::string, std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("schedule arg needs key=value: " + tok);
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

}  // namespace

Schedule Schedule::harmonic(long offset) {
  if (offset < 3) throw std::invalid_argument("harmonic schedule needs offset >= 3 for beta_0 < 1/2");
  Schedule s;
  s.kind_ = Kind::Harmonic;
  s.offset_ = offset;
  return s;
}

Schedule Schedule::constant(const Rat& value) {
  Schedule s;
  s.kind_ = Kind::Constant;
  s.value_ = value;
  return s;
}

Schedule Schedule::geometric(const Rat& base, const Rat& ratio) {
  if (sgn(base) <= 0 || sgn(ratio) <= 0 || ratio >= 1)
    throw std::invalid_argument("geometric schedule needs base > 0, 0 < ratio < 1");
  Schedule s;
  s.kind_ = Kind::Geometric;
  s.base_ = base;
  s.ratio_ = ratio;
  return s;
}

Schedule Schedule::staircase(const Rat& high, const Rat& low, long drop) {
  if (sgn(high) <= 0 || high >= Rat(1, 2) || sgn(low) <= 0 || low > high || drop < 0)
    throw std::invalid_argument("staircase needs 0 < low <= high < 1/2, drop >= 0");
  if (low.get_num() != 1) throw std::invalid_argument("staircase low must be 1/k");
  Schedule s;
  s.kind_ = Kind::Staircase;
  s.high_ = high;
  s.low_ = low;
  s.drop_ = drop;
  return s;
}

Schedule Schedule::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  auto args = colon == std::string::npos ? std::map<std::string, std::string>{}
                                         : parse_args(spec.substr(colon + 1));
  if (name == "harmonic") {
    long offset = args.count("offset") ? std::stol(args.at("offset")) : 3;
    return harmonic(offset);
  }
  if (name == "constant") {
    if (!args.count("value")) throw std::invalid_argument("constant schedule needs value=");
    return constant(rat_from_string(args.at("value")));
  }
  if (name == "geometric") {
    if (!args.count("base") || !args.count("ratio"))
      throw std::invalid_argument("geometric schedule needs base=,ratio=");
    return geometric(rat_from_string(args.at("base")), rat_from_string(args.at("ratio")));
  }
  if (name == "staircase") {
    if (!args.count("high") || !args.count("low") || !args.count("drop"))
      throw std::invalid_argument("staircase schedule needs high=,low=,drop=");
    return staircase(rat_from_string(args.at("high")), rat_from_string(args.at("low")),
                     std::stol(args.at("drop")));
  }
  throw std::invalid_argument("unknown schedule: " + name);
}

Rat Schedule::beta(long i) const {
  if (i < 0) throw std::invalid_argument("beta index < 0");
  switch (kind_) {
    case Kind::Harmonic:
      return Rat(1, offset_ + i);
    case Kind::Constant:
      return value_;
    case Kind::Geometric:
      return base_ * pow_int(ratio_, i);
    case Kind::Staircase:
      if (i < drop_) return high_;
      return Rat(1, low_.get_den().get_si() + (i - drop_));
  }
  throw std::logic_error("unreachable");
}

bool Schedule::tends_to_zero() const { return kind_ != Kind::Constant; }

std::string Schedule::spec() const {
  switch (kind_) {
    case Kind::Harmonic:
      return "harmonic:offset=" + std::to_string(offset_);
    case Kind::Constant:
      return "constant:value=" + rat_to_string(value_);
    case Kind::Geometric:
      return "geometric:base=" + rat_to_string(base_) + ",ratio=" + rat_to_string(ratio_);
    case Kind::Staircase:
      return "staircase:high=" + rat_to_string(high_) + ",low=" + rat_to_string(low_) +
             ",drop=" + std::to_string(drop_);
  }
  throw std::logic_error("unreachable");
}

}  // namespace hdg::eng

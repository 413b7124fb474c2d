#include "hdgame/rational.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hdg {

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
  }
  // decimal: sign + integer part + fractional part
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  size_t frac_len = s.size() - dot - 1;
  if (frac_len == 0) throw std::invalid_argument("bad decimal: " + s);
  Int num(digits, 10);
  Int den = ipow(Int(10), frac_len);
  Rat q(num, den);
  q.canonicalize();
  return q;
}

std::string rat_to_string(const Rat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rat& q) { return q.get_d(); }

double rat_log(const Rat& q) {
  if (sgn(q) <= 0) throw std::domain_error("rat_log of non-positive value");
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q.get_num().get_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den().get_mpz_t());
  return std::log(mn) - std::log(md) + (static_cast<double>(en) - ed) * std::log(2.0);
}

Int floor_int(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

Int ceil_int(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

Rat pow_int(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  bool inv = e < 0;
  unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Rat r;
  mpz_pow_ui(r.get_num().get_mpz_t(), base.get_num().get_mpz_t(), k);
  mpz_pow_ui(r.get_den().get_mpz_t(), base.get_den().get_mpz_t(), k);
  r.canonicalize();
  if (inv) {
    if (sgn(r) == 0) throw std::domain_error("0 to negative power");
    r = 1 / r;
  }
  return r;
}

Int ipow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Int isqrt_floor(const Int& v) {
  if (sgn(v) < 0) throw std::domain_error("isqrt of negative");
  Int r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

// sqrt(n/d) = sqrt(n*d)/d. Scale by 2^bits before the integer sqrt.
Rat sqrt_lb(const Rat& q, unsigned bits) {
  if (sgn(q) < 0) throw std::domain_error("sqrt of negative");
  if (sgn(q) == 0) return Rat(0);
  Int scale = Int(1) << bits;
  Int v = q.get_num() * q.get_den() * scale * scale;
  Int root = isqrt_floor(v);
  Rat r(root, q.get_den() * scale);
  r.canonicalize();
  return r;
}

Rat sqrt_ub(const Rat& q, unsigned bits) {
  if (sgn(q) < 0) throw std::domain_error("sqrt of negative");
  if (sgn(q) == 0) return Rat(0);
  Int scale = Int(1) << bits;
  Int v = q.get_num() * q.get_den() * scale * scale;
  Int root = isqrt_floor(v);
  if (root * root != v) root += 1;
  Rat r(root, q.get_den() * scale);
  r.canonicalize();
  return r;
}

Rat sqrt_ub_int(long d, unsigned bits) { return sqrt_ub(Rat(d), bits); }

bool lex_less(const Point& a, const Point& b) {
  size_t n = std::min(a.c.size(), b.c.size());
  for (size_t i = 0; i < n; ++i) {
    int c = cmp(a.c[i], b.c[i]);
    if (c != 0) return c < 0;
  }
  return a.c.size() < b.c.size();
}

Rat dist2(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  Rat s(0);
  for (int i = 0; i < a.dim(); ++i) {
    Rat diff = a.c[i] - b.c[i];
    s += diff * diff;
  }
  return s;
}

std::string point_to_string(const Point& p) {
  std::string s;
  for (int i = 0; i < p.dim(); ++i) {
    if (i) s += ",";
    s += rat_to_string(p.c[i]);
  }
  return s;
}

Point point_from_string(const std::string& s) {
  Point p;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) p.c.push_back(rat_from_string(tok));
  if (p.c.empty()) throw std::invalid_argument("empty point literal");
  return p;
}

std::vector<std::string> point_to_strings(const Point& p) {
  std::vector<std::string> out;
  out.reserve(p.c.size());
  for (const auto& q : p.c) out.push_back(rat_to_string(q));
  return out;
}

Point zero_point(int d) {
  Point p;
  p.c.assign(d, Rat(0));
  return p;
}

Point point_of(std::initializer_list<Rat> coords) {
  Point p;
  p.c.assign(coords.begin(), coords.end());
  return p;
}

}  // namespace hdg

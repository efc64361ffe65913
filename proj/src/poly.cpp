#include "pcontest/poly.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pcontest::alg {

namespace {

constexpr Expo kZeroExpo{};

Expo add_expo(const Expo& a, const Expo& b) {
  Expo r{};
  for (int i = 0; i < kNumVars; ++i) {
    const int s = int(a[i]) + int(b[i]);
    if (s > 255) throw std::overflow_error("poly: exponent overflow");
    r[i] = std::uint8_t(s);
  }
  return r;
}

bool expo_divides(const Expo& d, const Expo& n) {
  for (int i = 0; i < kNumVars; ++i)
    if (d[i] > n[i]) return false;
  return true;
}

Expo sub_expo(const Expo& a, const Expo& b) {
  Expo r{};
  for (int i = 0; i < kNumVars; ++i) r[i] = std::uint8_t(a[i] - b[i]);
  return r;
}

}  // namespace

std::optional<Var> var_from_name(std::string_view name) {
  for (int i = 0; i < kNumVars; ++i)
    if (kVarNames[i] == name) return Var(i);
  return std::nullopt;
}

Poly Poly::constant(Rat c) {
  Poly p;
  if (c != 0) p.terms_.emplace(kZeroExpo, std::move(c));
  return p;
}

Poly Poly::variable(Var v) {
  Expo e{};
  e[int(v)] = 1;
  return monomial(Rat(1), e);
}

Poly Poly::monomial(Rat c, const Expo& e) {
  Poly p;
  if (c != 0) p.terms_.emplace(e, std::move(c));
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == kZeroExpo);
}

Rat Poly::constant_value() const {
  auto it = terms_.find(kZeroExpo);
  return it == terms_.end() ? Rat(0) : it->second;
}

int Poly::degree(Var v) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, int(e[int(v)]));
  return d;
}

int Poly::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int i = 0; i < kNumVars; ++i) s += e[i];
    d = std::max(d, s);
  }
  return d;
}

std::vector<Var> Poly::vars_used() const {
  std::vector<Var> out;
  for (int i = 0; i < kNumVars; ++i)
    if (degree(Var(i)) > 0) out.push_back(Var(i));
  return out;
}

void Poly::add_term(const Expo& e, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly operator*(const Poly& l, const Poly& r) {
  Poly out;
  for (const auto& [el, cl] : l.terms_)
    for (const auto& [er, cr] : r.terms_) out.add_term(add_expo(el, er), cl * cr);
  return out;
}

Poly& Poly::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Poly Poly::pow(unsigned e) const {
  Poly r = Poly::constant(1);
  Poly base = *this;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

Poly Poly::subst(Var v, const Poly& repl) const {
  const int vi = int(v);
  // Cache powers of the replacement up to the degree actually used.
  std::vector<Poly> powers{Poly::constant(1)};
  Poly out;
  for (const auto& [e, c] : terms_) {
    const int k = e[vi];
    while (int(powers.size()) <= k) powers.push_back(powers.back() * repl);
    Expo rest = e;
    rest[vi] = 0;
    out += Poly::monomial(c, rest) * powers[k];
  }
  return out;
}

RationalFn Poly::subst(Var v, const RationalFn& repl) const {
  if (repl.is_poly()) return RationalFn(subst(v, repl.as_poly()));
  const int vi = int(v);
  const int d = degree(v);
  // sum_t c_t * rest_t * num^{e} * den^{d-e}   over   den^d
  std::vector<Poly> num_pow{Poly::constant(1)}, den_pow{Poly::constant(1)};
  for (int i = 1; i <= d; ++i) {
    num_pow.push_back(num_pow.back() * repl.num());
    den_pow.push_back(den_pow.back() * repl.den());
  }
  Poly acc;
  for (const auto& [e, c] : terms_) {
    const int k = e[vi];
    Expo rest = e;
    rest[vi] = 0;
    acc += Poly::monomial(c, rest) * num_pow[k] * den_pow[d - k];
  }
  return RationalFn(std::move(acc), den_pow[d]);
}

Poly Poly::derivative(Var v) const {
  const int vi = int(v);
  Poly r;
  for (const auto& [e, c] : terms_) {
    if (e[vi] == 0) continue;
    Expo d = e;
    d[vi] -= 1;
    r.add_term(d, c * int(e[vi]));
  }
  return r;
}

Poly Poly::antiderivative(Var v) const {
  const int vi = int(v);
  Poly r;
  for (const auto& [e, c] : terms_) {
    Expo d = e;
    if (d[vi] == 255) throw std::overflow_error("poly: exponent overflow");
    d[vi] += 1;
    r.add_term(d, c / int(d[vi]));
  }
  return r;
}

std::map<int, Poly> Poly::coeffs_in(Var v) const {
  const int vi = int(v);
  std::map<int, Poly> out;
  for (const auto& [e, c] : terms_) {
    Expo rest = e;
    rest[vi] = 0;
    out[int(e[vi])].add_term(rest, c);
  }
  return out;
}

double Poly::eval_double(const std::array<double, kNumVars>& pt) const {
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (int i = 0; i < kNumVars; ++i) {
      double pw = 1.0, base = pt[i];
      for (int k = e[i]; k > 0; k >>= 1) {
        if (k & 1) pw *= base;
        base *= base;
      }
      t *= pw;
    }
    acc += t;
  }
  return acc;
}

Rat Poly::eval_rat(const std::array<Rat, kNumVars>& pt) const {
  // Per-variable power tables sized by the degree in that variable.
  std::array<std::vector<Rat>, kNumVars> pow;
  for (int i = 0; i < kNumVars; ++i) {
    pow[i].push_back(Rat(1));
    const int d = degree(Var(i));
    for (int k = 1; k <= d; ++k) pow[i].push_back(pow[i].back() * pt[i]);
  }
  Rat acc(0);
  for (const auto& [e, c] : terms_) {
    Rat t = c;
    for (int i = 0; i < kNumVars; ++i)
      if (e[i]) t *= pow[i][e[i]];
    acc += t;
  }
  return acc;
}

Rat Poly::content() const {
  if (terms_.empty()) return Rat(1);
  Int g(0), l(1);
  for (const auto& [e, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rat r(g, l);
  r.canonicalize();
  return r;
}

Poly Poly::primitive_part(bool positive_leading) const {
  if (terms_.empty()) return *this;
  Rat c = content();
  if (positive_leading && terms_.rbegin()->second < 0) c = -c;
  Poly r = *this;
  const Rat inv = 1 / c;
  for (auto& [e, v] : r.terms_) v *= inv;
  return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) throw std::invalid_argument("poly: division by zero polynomial");
  Poly rem = *this;
  Poly quot;
  const auto& dlt = *d.terms_.rbegin();  // lex-leading term of the divisor
  while (!rem.is_zero()) {
    const auto& rlt = *rem.terms_.rbegin();
    if (!expo_divides(dlt.first, rlt.first)) return std::nullopt;
    const Expo qe = sub_expo(rlt.first, dlt.first);
    const Rat qc = rlt.second / dlt.second;
    const Poly qt = Poly::monomial(qc, qe);
    quot += qt;
    rem -= qt * d;
  }
  return quot;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Print leading (lex-largest) terms first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const Rat& c = it->second;
    const bool neg = c < 0;
    Rat ac = neg ? Rat(-c) : c;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    bool has_var = false;
    for (int i = 0; i < kNumVars; ++i)
      if (it->first[i]) has_var = true;
    if (ac != 1 || !has_var) {
      os << ac.get_str();
      if (has_var) os << "*";
    }
    bool firstv = true;
    for (int i = 0; i < kNumVars; ++i) {
      const int e = it->first[i];
      if (!e) continue;
      if (!firstv) os << "*";
      firstv = false;
      os << kVarNames[i];
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

RationalFn::RationalFn(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::invalid_argument("rationalfn: zero denominator");
  normalize();
}

void RationalFn::normalize() {
  if (num_.is_zero()) {
    den_ = Poly::constant(1);
    return;
  }
  // Remove the shared rational factor: divide both parts by
  // gcd(content(num), content(den)), after which both have integer
  // coefficients with coprime contents. Sign goes with the denominator.
  const Rat cn = num_.content();
  const Rat cd = den_.content();
  Int gn, ld;
  mpz_gcd(gn.get_mpz_t(), cn.get_num().get_mpz_t(), cd.get_num().get_mpz_t());
  mpz_lcm(ld.get_mpz_t(), cn.get_den().get_mpz_t(), cd.get_den().get_mpz_t());
  Rat g(gn, ld);
  g.canonicalize();
  if (den_.terms().rbegin()->second < 0) g = -g;
  const Rat inv = 1 / g;
  num_ *= inv;
  den_ *= inv;
}

Poly RationalFn::as_poly() const {
  if (!is_poly()) throw std::domain_error("rationalfn: not a polynomial");
  const Rat d = den_.constant_value();
  Poly r = num_;
  r *= 1 / d;
  return r;
}

RationalFn RationalFn::operator-() const {
  RationalFn r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFn operator+(const RationalFn& l, const RationalFn& r) {
  if (l.den_ == r.den_) return RationalFn(l.num_ + r.num_, l.den_);
  return RationalFn(l.num_ * r.den_ + r.num_ * l.den_, l.den_ * r.den_);
}

RationalFn operator-(const RationalFn& l, const RationalFn& r) {
  if (l.den_ == r.den_) return RationalFn(l.num_ - r.num_, l.den_);
  return RationalFn(l.num_ * r.den_ - r.num_ * l.den_, l.den_ * r.den_);
}

RationalFn operator*(const RationalFn& l, const RationalFn& r) {
  return RationalFn(l.num_ * r.num_, l.den_ * r.den_);
}

RationalFn operator/(const RationalFn& l, const RationalFn& r) {
  if (r.num_.is_zero()) throw std::domain_error("rationalfn: division by zero");
  return RationalFn(l.num_ * r.den_, l.den_ * r.num_);
}

RationalFn RationalFn::pow(unsigned e) const {
  RationalFn r = RationalFn(Poly::constant(1));
  RationalFn base = *this;
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

RationalFn RationalFn::subst(Var v, const RationalFn& repl) const {
  const RationalFn n = num_.subst(v, repl);
  const RationalFn d = den_.subst(v, repl);
  return n / d;
}

bool RationalFn::equals(const RationalFn& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

double RationalFn::eval_double(const std::array<double, kNumVars>& pt) const {
  return num_.eval_double(pt) / den_.eval_double(pt);
}

std::optional<Rat> RationalFn::eval_rat(const std::array<Rat, kNumVars>& pt) const {
  const Rat d = den_.eval_rat(pt);
  if (d == 0) return std::nullopt;
  return num_.eval_rat(pt) / d;
}

std::string RationalFn::to_string() const {
  if (is_poly()) return as_poly().to_string();
  return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
}

RationalFn definite_integral(const RationalFn& f, Var v, const RationalFn& lo,
                             const RationalFn& hi) {
  if (f.den().degree(v) != 0)
    throw std::domain_error("definite_integral: denominator depends on the integration variable");
  const Poly anti = f.num().antiderivative(v);
  const RationalFn at_hi = anti.subst(v, hi);
  const RationalFn at_lo = anti.subst(v, lo);
  return (at_hi - at_lo) / RationalFn(f.den());
}

// --------------------------- expression parser -----------------------------

namespace {

struct Parser {
  std::string_view s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("parse_poly: " + what + " at offset " + std::to_string(i));
  }

  Poly parse_expr() {
    skip_ws();
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    Poly acc = parse_term();
    if (neg) acc = -acc;
    for (;;) {
      skip_ws();
      if (eat('+'))
        acc += parse_term();
      else if (eat('-'))
        acc -= parse_term();
      else
        break;
    }
    return acc;
  }

  Poly parse_term() {
    Poly acc = parse_factor();
    for (;;) {
      skip_ws();
      if (eat('*')) {
        acc = acc * parse_factor();
      } else if (eat('/')) {
        Poly d = parse_factor();
        if (!d.is_constant() || d.is_zero()) fail("division only by nonzero constants");
        acc *= 1 / d.constant_value();
      } else {
        break;
      }
    }
    return acc;
  }

  Poly parse_factor() {
    Poly base = parse_primary();
    skip_ws();
    if (eat('^')) {
      skip_ws();
      std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (start == i) fail("expected integer exponent");
      const unsigned long e = std::stoul(std::string(s.substr(start, i - start)));
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Poly parse_primary() {
    skip_ws();
    if (i >= s.size()) fail("unexpected end of input");
    if (eat('(')) {
      Poly inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      return Poly::constant(Rat(Int(std::string(s.substr(start, i - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
      const auto name = s.substr(start, i - start);
      const auto v = var_from_name(name);
      if (!v) fail("unknown variable '" + std::string(name) + "'");
      return Poly::variable(*v);
    }
    fail("unexpected character");
  }
};

}  // namespace

Poly parse_poly(std::string_view text) {
  Parser p{text};
  Poly r = p.parse_expr();
  p.skip_ws();
  if (p.i != text.size()) p.fail("trailing input");
  return r;
}

int sign_at(const Poly& p, const std::array<Rat, kNumVars>& pt) {
  if (p.is_zero()) return 0;
  // Clear coefficient denominators (positive factor, sign preserved), then
  // evaluate num^e * den^(deg-e) per variable so everything stays integral.
  const Poly prim = p.primitive_part();
  std::array<std::vector<Int>, kNumVars> tab;
  std::array<int, kNumVars> deg{};
  for (int i = 0; i < kNumVars; ++i) {
    deg[i] = prim.degree(Var(i));
    const Int& n = pt[i].get_num();
    const Int& d = pt[i].get_den();
    std::vector<Int> npow{Int(1)}, dpow{Int(1)};
    for (int k = 1; k <= deg[i]; ++k) {
      npow.push_back(npow.back() * n);
      dpow.push_back(dpow.back() * d);
    }
    tab[i].resize(deg[i] + 1);
    for (int k = 0; k <= deg[i]; ++k) tab[i][k] = npow[k] * dpow[deg[i] - k];
  }
  Int acc(0), t;
  for (const auto& [e, c] : prim.terms()) {
    t = c.get_num();  // integer by primitivity
    for (int i = 0; i < kNumVars; ++i)
      if (deg[i]) t *= tab[i][e[i]];
    acc += t;
  }
  return sgn(acc);
}

// ----------------------------- serialization -------------------------------

void write_poly(std::ostream& os, const std::string& name, const Poly& p) {
  os << "poly " << name << "\n";
  os << "vars";
  const auto vars = p.vars_used();
  for (Var v : vars) os << " " << kVarNames[int(v)];
  os << "\n";
  for (const auto& [e, c] : p.terms()) {
    os << c.get_num().get_str() << "/" << c.get_den().get_str();
    for (Var v : vars) os << " " << int(e[int(v)]);
    os << "\n";
  }
  os << "end\n";
}

std::string poly_to_text(const std::string& name, const Poly& p) {
  std::ostringstream os;
  write_poly(os, name, p);
  return os.str();
}

std::vector<NamedPoly> read_polys(std::istream& is) {
  std::vector<NamedPoly> out;
  std::string line;
  std::optional<std::string> cur_name;
  std::vector<Var> cur_vars;
  Poly cur;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "poly") {
      if (cur_name) throw std::invalid_argument("corpus: nested poly block");
      std::string name;
      ls >> name;
      cur_name = name;
      cur_vars.clear();
      cur = Poly();
    } else if (head == "vars") {
      std::string vn;
      while (ls >> vn) {
        auto v = var_from_name(vn);
        if (!v) throw std::invalid_argument("corpus: unknown variable " + vn);
        cur_vars.push_back(*v);
      }
    } else if (head == "end") {
      if (!cur_name) throw std::invalid_argument("corpus: stray end");
      out.push_back({*cur_name, cur});
      cur_name.reset();
    } else {
      if (!cur_name) throw std::invalid_argument("corpus: term outside poly block");
      // head is "num/den"
      const auto slash = head.find('/');
      if (slash == std::string::npos) throw std::invalid_argument("corpus: bad coefficient");
      Rat c(Int(head.substr(0, slash)), Int(head.substr(slash + 1)));
      c.canonicalize();
      Expo e{};
      for (Var v : cur_vars) {
        int k;
        if (!(ls >> k)) throw std::invalid_argument("corpus: short exponent row");
        e[int(v)] = std::uint8_t(k);
      }
      cur += Poly::monomial(c, e);
    }
  }
  if (cur_name) throw std::invalid_argument("corpus: unterminated poly block");
  return out;
}

std::vector<NamedPoly> parse_polys(std::string_view text) {
  std::istringstream is{std::string(text)};
  return read_polys(is);
}

}  // namespace pcontest::alg

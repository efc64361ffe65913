#include "pcontest/corpus.hpp"

#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pcontest::corpus {

using alg::Rat;
using alg::Var;

namespace {

Poly P(std::string_view s) { return alg::parse_poly(s); }
RationalFn RF(std::string_view n, std::string_view d) {
  return RationalFn(P(n), P(d));
}

Poly to_poly_exact(const RationalFn& f, const char* what) {
  auto q = f.num().divide_exact(f.den());
  if (!q) throw std::runtime_error(std::string("corpus: not a polynomial: ") + what);
  return *q;
}

// Cancels the common polynomial factors of num and den drawn from the
// denominator's known factorization, so the pair is the fully reduced
// fraction (the appendix states numerators of reduced fractions).
void reduce_pair(Poly& num, Poly& den) {
  const Poly factors[] = {P("p"), P("M"), P("M-1"), P("M+1-2*p")};
  for (const Poly& f : factors) {
    for (;;) {
      auto qn = num.divide_exact(f);
      if (!qn) break;
      auto qd = den.divide_exact(f);
      if (!qd) break;
      num = *qn;
      den = *qd;
    }
  }
}

Corpus build() {
  Corpus c;
  const RationalFn k = RF("M^2*(1-p)", "M-1");
  const RationalFn M_over(RF("1", "M"));

  // h-increment when the minimum point a (resp. the maximum 1) is replaced
  // by the sample z; both quadratic in z.
  c.delta_a = RF("z-a", "M") * (RationalFn(P("(M-1)*z + (M+1)*a - 2*M*mu")) +
                                k * M_over * RationalFn(P("z - a + 2*M*mu")));
  c.delta_1 = RF("z-1", "M") * (RationalFn(P("(M-1)*z + (M+1) - 2*M*mu")) +
                                k * M_over * RationalFn(P("z - 1 + 2*M*mu")));

  c.t_z1 = RF("M*(2*p*mu-1)-1", "M+1-2*p");
  c.t_a1 = RF("(M+1)*(a+1)-2*M*mu*p", "2*p");
  c.t_za = RF("2*M*mu*p-(M+1)*a", "M+1-2*p");

  c.p1 = RF("M+1", "2*M*mu");
  c.p2 = RF("(M+1)*(a+1)", "2*M*mu+2*a");
  c.p3 = RF("(M+1)*(a+1)", "2*M*mu+2");
  const RationalFn p_rf{P("p")};
  c.X1 = p_rf - c.p1;
  c.X2 = p_rf - c.p2;
  c.X3 = p_rf - c.p3;
  c.nX1 = P("M*(2*mu*p-1)-1");
  c.nX2 = P("2*a*p-a-1+(2*mu*p-a-1)*M");
  c.nX3 = P("2*p-a-1+(2*mu*p-a-1)*M");

  const RationalFn zero{Poly()};
  const RationalFn one{P("1")};
  const RationalFn a_rf{P("a")};
  const Var z = Var::z;
  c.A[0] = definite_integral(c.delta_1, z, zero, one);
  c.A[1] = definite_integral(c.delta_a, z, a_rf, c.t_za);
  c.A[2] = definite_integral(c.delta_1, z, c.t_z1, c.t_a1) +
           definite_integral(c.delta_a, z, c.t_a1, c.t_za);
  c.A[3] = definite_integral(c.delta_1, z, c.t_z1, one);
  c.A[4] = definite_integral(c.delta_1, z, zero, c.t_a1) +
           definite_integral(c.delta_a, z, c.t_a1, c.t_za);

  c.denA_stated[0] = P("3*M*(M-1)");
  c.denA_stated[1] = c.denA_stated[3] = P("3*M*(M-1)*(M+1-2*p)^3");
  c.denA_stated[2] = c.denA_stated[4] = P("12*M*(M-1)*(M+1-2*p)^3*p^3");
  for (int j = 0; j < 5; ++j) {
    c.nA[j] = to_poly_exact(c.A[j] * RationalFn(c.denA_stated[j]), "nA_j");
    c.denA[j] = c.denA_stated[j];
    reduce_pair(c.nA[j], c.denA[j]);
  }

  // s1: n(A1)|_{p=p1} = -s1/(2 mu)
  c.s[0] = to_poly_exact(-(RationalFn(c.nA[0]).subst(Var::p, c.p1)) * RationalFn(P("2*mu")),
                         "s1");
  // s2: n(A2) = -4 [a(M-p+1) - M mu p]^2 s2
  c.s[1] = to_poly_exact(RationalFn(c.nA[1]) / RationalFn(P("-4*(a*(M-p+1)-M*mu*p)^2")),
                         "s2");
  // s3 = 2M s2 - 2M^3 (M mu + a) X2, then p = ((M+1)+(M-1)w)/(2M).
  {
    const Poly s3_p = P("2*M") * c.s[1] - P("M^3") * c.nX2;
    // The substitution leaves a polynomial: p only enters through 2Mp-like
    // combinations, so the 2M denominators cancel on their own.
    RationalFn w_sub = RationalFn(s3_p).subst(Var::p, RF("(M+1)+(M-1)*w", "2*M"));
    c.s[2] = to_poly_exact(w_sub, "s3");
    c.s[3] = c.s[2].subst(Var::a, P("1"));
  }
  // s5: n(A3) = -(M+1)(1-a) s5
  c.s[4] = to_poly_exact(RationalFn(c.nA[2]) / RationalFn(P("-(M+1)*(1-a)")), "s5");
  // s6: n(A4) = -4 (M mu p - M + p - 1)^2 s6
  c.s[5] = to_poly_exact(RationalFn(c.nA[3]) / RationalFn(P("-4*(M*mu*p-M+p-1)^2")), "s6");
  // s7: n(A5) = -s7
  c.s[6] = -c.nA[4];

  // Case-5 substitution a = 2bp/(M+1); clearing (M+1)^deg_a keeps it
  // polynomial (deg_a = 3, matching the 27 in the M=2 display).
  const int da = c.s[6].degree(Var::a);
  RationalFn s7a = RationalFn(c.s[6]).subst(Var::a, RF("2*b*p", "M+1"));
  c.s7_sub = to_poly_exact(s7a * RationalFn(P("M+1").pow(unsigned(da))), "s7_sub");

  // s8: with M=2 the core mean is forced, mu=(1+a)/2; paper scales by
  // 27/(3-2p).
  {
    Poly s7m2 = c.s[6].subst(Var::M, P("2")).subst(Var::mu, P("(1+a)/2"));
    RationalFn sub = RationalFn(s7m2).subst(Var::a, RF("2*b*p", "3"));
    c.s[7] = to_poly_exact(sub * RF("27", "3-2*p"), "s8");
  }

  // e1..e10: delta-expansion of s7_sub at M = 3 + delta.
  {
    Poly s7d = c.s7_sub.subst(Var::M, P("3+delta"));
    auto coeffs = s7d.coeffs_in(Var::delta);
    for (auto& ei : c.e) ei = Poly();
    for (auto& [deg, poly] : coeffs) {
      if (deg > 9) throw std::runtime_error("corpus: s7 delta-degree exceeds 9");
      c.e[std::size_t(deg)] = poly;
    }
  }

  // Unit-cube transport of e1..e8: p=(1+x1)/2, b=x2, mu=x3. Change of
  // variables only; coefficients keep their powers of two.
  for (int j = 0; j < 8; ++j) {
    RationalFn t = RationalFn(c.e[std::size_t(j)]).subst(Var::p, RF("1+x1", "2"));
    Poly q = t.num()
                 .subst(Var::b, Poly::variable(Var::x2))
                 .subst(Var::mu, Poly::variable(Var::x3));
    q *= Rat(1) / t.den().constant_value();
    c.e_cube[std::size_t(j)] = q;
  }

  // Case-3 family: delta^5 coefficient of s5 at M = 3 + delta.
  {
    auto coeffs = c.s[4].subst(Var::M, P("3+delta")).coeffs_in(Var::delta);
    c.case3_e6 = coeffs.count(5) ? coeffs.at(5) : Poly();
  }

  // e9 endpoint reductions. b's coefficient is 6p^2(1-2mu p)(2mu p+1), so
  // the minimum over b in [0,1] sits at an endpoint: b=0 with mu = w/(2p)
  // (w = 2p*mu <= 1), b=1 with mu = (1 + w(2p-1))/(2p) (w in [0,1]).
  c.e9a = to_poly_exact(
      RationalFn(c.e[8].subst(Var::b, Poly())).subst(Var::mu, RF("w", "2*p")), "e9a");
  c.e9b = to_poly_exact(
      RationalFn(c.e[8].subst(Var::b, P("1"))).subst(Var::mu, RF("1+w*(2*p-1)", "2*p")),
      "e9b");

  for (int j = 0; j < 5; ++j) c.named["nA" + std::to_string(j + 1)] = c.nA[j];
  for (int j = 0; j < 8; ++j) c.named["s" + std::to_string(j + 1)] = c.s[j];
  for (int j = 0; j < 10; ++j) c.named["e" + std::to_string(j + 1)] = c.e[j];
  for (int j = 0; j < 8; ++j) c.named["e" + std::to_string(j + 1) + "_cube"] = c.e_cube[j];
  c.named["nX1"] = c.nX1;
  c.named["nX2"] = c.nX2;
  c.named["nX3"] = c.nX3;
  c.named["s7_sub"] = c.s7_sub;
  c.named["case3_e6"] = c.case3_e6;
  c.named["e9a"] = c.e9a;
  c.named["e9b"] = c.e9b;
  return c;
}

}  // namespace

const Corpus& corpus() {
  static const Corpus c = build();
  return c;
}

const Poly& named_poly(const std::string& name) { return corpus().named.at(name); }

// ---------------------------------------------------------------------------
// Transcriptions. Copied from the source text as printed, typos and all; the
// comparison below reports disagreements instead of fixing them.
// ---------------------------------------------------------------------------

namespace {

const std::map<std::string, std::string>& transcription_text() {
  static const std::map<std::string, std::string> t = {
      {"nA1", "-2*M^2 - 3*M*mu + 2*M + 1 + (3*M*mu-1)*M*p"},
      {"s1", "(M^2-2)*mu + (1-6*mu)*(1-mu)*M + 1"},
      {"s2",
       "M^3*mu*p - 4*M^2*mu*p^2 - M^3*a + 2*M^2*a*p + 5*M^2*mu*p + 2*M*a*p^2"
       " - 3*M^2*mu - 6*M*a*p + 4*M*mu*p + 3*M*a - 3*M*mu - 2*a*p + 2*a"},
      {"s3",
       "M*(-2*M^2*mu*w^2 + M^2*mu*w + 4*M*mu*w^2 + M^3 - 3*M^2*mu - M*mu*w"
       " - 2*mu*w^2 + M^2 - M*mu + 2*mu)"
       " - a*(M-1)*(M*((M-1)^2 - (w-2)^2) + (1-w)*(M^2 - w - 1))"},
      {"s4",
       "-2*M^3*mu*w^2 + M^3*mu*w + 4*M^2*mu*w^2 - 3*M^3*mu + M^3*w - M^2*mu*w"
       " + M^2*w^2 - 2*M*mu*w^2 + 3*M^3 - M^2*mu - 5*M^2*w - 2*M*w^2 + 2*M^2"
       " + 2*M*mu + 4*M*w + w^2 - 2*M - 1"},
      {"s5_M2",
       "3*(3-2*p)*((1-a)^2*(8*p-5) + (32*(1-a)^2 + 144*a)*(1-p)^4"
       " + 12*(1-p)^2*(4*p + a*(4*a*p + 10*p - 3)))"},
      {"s6",
       "2*p - 2 + (3*mu + 6*p - 3 - 4*mu*p - 2*p^2)*M"
       " + (4*mu*p^2 - 5*mu*p + 3*mu - 2*p)*M^2 + (1 - mu*p)*M^3"},
      {"case3_e6", "360*p*(a + 1 - 2*mu*p)^2"},
      {"s8",
       "512*b^3*p^8 - 2688*b^3*p^7 + 5760*b^3*p^6 + 3456*b^2*p^7 - 6912*b^3*p^5"
       " - 12672*b^2*p^6 + 5184*b^3*p^4 + 16416*b^2*p^5 + 5184*b*p^6"
       " - 1944*b^3*p^3 - 11664*b^2*p^4 - 10368*b*p^5 + 7776*b^2*p^3"
       " + 1728*p^5 - 2916*b^2*p^2 + 11664*b*p^3 - 11664*b*p^2 - 7776*p^3"
       " + 4374*b*p + 17496*p^2 - 17496*p + 6561"},
      {"e1",
       "196608 + (98304*b - 393216)*p"
       " + (-49152*b^2 - 442368*mu^2 - 196608*b - 737280*mu + 589824)*p^2"
       " + (-24576*b^3 + 221184*b*mu^2 + 98304*b^2 + 1990656*mu^2 + 294912*b"
       "    + 663552*mu - 540672)*p^3"
       " + (49152*b^3 + 73728*b^2*mu - 552960*b*mu^2 - 331776*mu^3 - 147456*b^2"
       "    - 2322432*mu^2 - 270336*b + 110592*mu + 233472)*p^4"
       " + (-83968*b^3 + 184320*b^2*mu - 55296*b*mu^2 + 774144*mu^3 + 135168*b^2"
       "    + 1050624*mu^2 + 116736*b - 239616*mu - 36864)*p^5"
       " + (52224*b^3 - 175104*b^2*mu + 165888*b*mu^2 - 331776*mu^3 - 58368*b^2"
       "    - 165888*mu^2 - 18432*b + 55296*mu)*p^6"
       " + (-9216*b^3 + 27648*b^2*mu + 9216*b^2)*p^7"},
      {"e2",
       "393216 + (172032*b - 540672)*p"
       " + (-73728*b^2 - 958464*mu^2 - 221184*b - 2088960*mu + 835584)*p^2"
       " + (-30720*b^3 + 423936*b*mu^2 + 86016*b^2 + 4589568*mu^2 + 344064*b"
       "    + 1898496*mu - 823296)*p^3"
       " + (30720*b^3 + 282624*b^2*mu - 1308672*b*mu^2 - 663552*mu^3 - 135168*b^2"
       "    - 5031936*mu^2 - 344064*b - 18432*mu + 344064)*p^4"
       " + (-77312*b^3 + 181248*b^2*mu + 4608*b*mu^2 + 1658880*mu^3 + 138240*b^2"
       "    + 2068992*mu^2 + 142848*b - 360960*mu - 49152)*p^5"
       " + (50176*b^3 - 228864*b^2*mu + 290304*b*mu^2 - 691200*mu^3 - 56832*b^2"
       "    - 290304*mu^2 - 19968*b + 78336*mu)*p^6"
       " + (-7680*b^3 + 32256*b^2*mu + 7680*b^2)*p^7"},
      {"e3",
       "344064 + (129024*b - 208896)*p"
       " + (-46080*b^2 - 906240*mu^2 - 49152*b - 2558976*mu + 430080)*p^2"
       " + (-15360*b^3 + 347136*b*mu^2 + 3072*b^2 + 4718592*mu^2 + 129024*b"
       "    + 2217984*mu - 522240)*p^3"
       " + (-6144*b^3 + 334848*b^2*mu - 1337856*b*mu^2 - 566784*mu^3 - 30720*b^2"
       "    - 4778496*mu^2 - 175104*b - 198144*mu + 210432)*p^4"
       " + (-24448*b^3 + 42240*b^2*mu + 100992*b*mu^2 + 1543680*mu^3 + 52992*b^2"
       "    + 1744512*mu^2 + 69504*b - 223872*mu - 26112)*p^5"
       " + (17856*b^3 - 118464*b^2*mu + 210816*b*mu^2 - 615168*mu^3 - 20544*b^2"
       "    - 210816*mu^2 - 8064*b + 44160*mu)*p^6"
       " + (-2112*b^3 + 14016*b^2*mu + 2112*b^2)*p^7"},
      {"e4",
       "172032 + (53760*b + 64512)*p"
       " + (-15360*b^2 - 488448*mu^2 + 44544*b - 1790976*mu + 64512)*p^2"
       " + (-3840*b^3 + 157440*b*mu^2 - 23040*b^2 + 2843904*mu^2 + 1416960*mu"
       "    - 176640)*p^3"
       " + (-9984*b^3 + 193536*b^2*mu - 772608*b*mu^2 - 268032*mu^3 + 7680*b^2"
       "    - 2598912*mu^2 - 44544*b - 170496*mu + 68352)*p^4"
       " + (93024*b*mu^2 - 13632*b^2*mu + 32*mu*(25448*mu^2 + 25515*mu - 2283)"
       "    - 32*b*(77*b^2 - 282*b - 525) - 6912)*p^5"
       " + (2784*b^3 - 30336*b^2*mu + 81312*b*mu^2 - 303168*mu^3 - 3264*b^2"
       "    - 81312*mu^2 - 1440*b + 12384*mu)*p^6"
       " + (-192*b^3 + 2688*b^2*mu + 192*b^2)*p^7"},
      {"e5",
       "53760 + (13440*b + 91392)*p"
       " + (-2880*b^2 - 164160*mu^2 + 34560*b - 792768*mu - 26880)*p^2"
       " + (-480*b^3 + 42720*b*mu^2 - 11520*b^2 + 1109088*mu^2 - 13440*b"
       "    + 548640*mu - 33600)*p^3"
       " + (62496*b^2*mu - 275952*b*mu^2 - 885744*mu^2 - 67536*mu - 75792*mu^3"
       "    - 96*b*(34*b^2 - 50*b + 59) + 12432)*p^4"
       " + (160*b^3 - 8544*b^2*mu + 38928*b*mu^2 + 266192*mu^3 + 576*b^2"
       "    + 229104*mu^2 + 2016*b - 13200*mu - 912)*p^5"
       " + (160*b^3 - 3840*b^2*mu + 17568*b*mu^2 - 89344*mu^3 - 192*b^2"
       "    - 17568*mu^2 - 96*b + 1728*mu)*p^6"
       " + 192*b^2*mu*p^7"},
      {"e6",
       "10752 + (2016*b + 38976)*p"
       " + (-288*b^2 - 35232*mu^2 + 10848*b - 230880*mu - 14784)*p^2"
       " + (-24*b^3 + 6936*b*mu^2 - 2544*b^2 + 290664*mu^2 - 4032*b + 132888*mu"
       "    - 3408)*p^3"
       " + (11568*b^2*mu - 456*b^3 - 62472*b*mu^2 - 12816*mu^3 + 816*b^2"
       "    - 193752*mu^2 - 288*b - 14328*mu + 1200)*p^4"
       " + (32*b^3 - 1536*b^2*mu + 8688*b*mu^2 + 55168*mu^3 + 38544*mu^2 + 96*b"
       "    - 1248*mu - 48)*p^5"
       " + (-192*b^2*mu + 2016*b*mu^2 - 15744*mu^3 - 2016*mu^2 + 96*mu)*p^6"},
      {"e7",
       "1344 + (168*b + 9072)*p"
       " + (-12*b^2 - 4716*mu^2 + 1824*b - 44340*mu - 3024)*p^2"
       " + (624*b*mu^2 - 276*b^2 + 51252*mu^2 - 504*b + 19764*mu - 144)*p^3"
       " + (-24*b^3 + 1152*b^2*mu - 8760*b*mu^2 - 1200*mu^3 + 48*b^2 - 26568*mu^2"
       "    - 1584*mu + 48)*p^4"
       " + (-96*b^2*mu + 1008*b*mu^2 + 7072*mu^3 + 3600*mu^2 - 48*mu)*p^5"
       " + (96*b*mu^2 - 1536*mu^3 - 96*mu^2)*p^6"},
      {"e8",
       "96 + (6*b + 1236)*p"
       " + (-360*mu^2 + 162*b - 5424*mu - 300)*p^2"
       " + (24*b*mu^2 - 12*b^2 + 5868*mu^2 - 24*b + 1656*mu)*p^3"
       " + (48*b^2*mu - 696*b*mu^2 - 48*mu^3 - 2088*mu^2 - 72*mu)*p^4"
       " + (48*b*mu^2 + 512*mu^3 + 144*mu^2)*p^5"
       " - 64*mu^3*p^6"},
      {"e9",
       "4*p^2*mu*(4*mu^2*p^3 - 18*mu*p^2 + 99*mu*p - 3 + 15*p - 96)"
       " - 12*p^2 + 93*p + 3 + (6*p^2*(1 - 2*mu*p)*(2*mu*p + 1))*b"},
      {"e10", "3*p*(2*mu*p-1)^2"},
      {"e9a",
       "2*w^3*p^2 - 18*p^2*w^2 + 30*w*p^2 + 99*w^2*p - 12*p^2 - 192*p*w"
       " - 3*w^2 + 93*p + 3"},
      {"e9b",
       "16*p^5*w^3 - 24*p^4*w^3 - 72*p^4*w^2 + 12*p^3*w^3 + 468*p^3*w^2"
       " - 2*w^3*p^2 - 24*p^3*w - 426*p^2*w^2 + 24*w*p^2 + 111*w^2*p + 2*p^2"
       " - 18*p*w - 3*w^2 + 6*w"},
  };
  return t;
}

}  // namespace

const std::map<std::string, Poly>& transcribed() {
  static const std::map<std::string, Poly> m = [] {
    std::map<std::string, Poly> out;
    for (const auto& [name, text] : transcription_text()) out.emplace(name, P(text));
    return out;
  }();
  return m;
}

std::vector<ComparisonEntry> compare_to_paper(int points_per_poly, unsigned long seed) {
  const Corpus& c = corpus();
  const auto& paper = transcribed();

  // Derived counterparts in the displayed coordinates.
  std::map<std::string, Poly> derived;
  for (const auto& [name, p] : paper) {
    if (name == "s5_M2") {
      RationalFn f = RationalFn(c.s[4].subst(Var::M, P("2"))).subst(Var::mu, RF("1+a", "2"));
      derived[name] = to_poly_exact(f, "s5_M2");
    } else {
      derived[name] = c.named.at(name);
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<ComparisonEntry> out;
  for (const auto& [name, paper_poly] : paper) {
    const Poly& mine = derived.at(name);
    ComparisonEntry entry;
    entry.name = name;
    entry.symbolic_equal = (mine == paper_poly);
    for (int i = 0; i < points_per_poly; ++i) {
      std::array<Rat, alg::kNumVars> pt{};
      for (auto& x : pt) x = 0;
      constexpr long den = 1009;
      for (Var v : {Var::a, Var::b, Var::mu, Var::p, Var::w}) {
        pt[int(v)] = Rat(long(rng() % (den + 1)), den);
        pt[int(v)].canonicalize();
      }
      pt[int(Var::M)] = Rat(long(2 + rng() % 7));  // formal variable; any value works
      ++entry.points;
      const Rat lhs = mine.eval_rat(pt);
      const Rat rhs = paper_poly.eval_rat(pt);
      if (lhs != rhs) {
        ++entry.mismatches;
        if (entry.note.empty()) {
          std::ostringstream os;
          os << "first mismatch: derived=" << lhs.get_str() << " paper=" << rhs.get_str();
          entry.note = os.str();
        }
      }
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::string corpus_to_text() {
  std::ostringstream os;
  os << "# p-contest derived corpus\n";
  for (const auto& [name, p] : corpus().named) alg::write_poly(os, name, p);
  return os.str();
}

}  // namespace pcontest::corpus

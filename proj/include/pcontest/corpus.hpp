#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "pcontest/poly.hpp"

namespace pcontest::corpus {

using alg::Poly;
using alg::RationalFn;

/// Everything the drift analysis needs, derived symbolically in exact
/// arithmetic from the increment formulas and the cut points. The derived
/// forms are authoritative; the transcribed text blocks below exist only as
/// a cross-check corpus.
struct Corpus {
  // Increment formulas (quadratic in z) and cut points, in (a, mu, p, M).
  RationalFn delta_a, delta_1;
  RationalFn t_z1, t_a1, t_za;
  RationalFn p1, p2, p3;
  RationalFn X1, X2, X3;          // p - p_i
  Poly nX1, nX2, nX3;             // numerators over positive denominators

  // Five drift integrals A_j; nA/denA is the fully reduced fraction and
  // denA_stated the denominator form quoted in the sign analysis (both are
  // positive on the drift domain).
  std::array<RationalFn, 5> A;
  std::array<Poly, 5> nA;
  std::array<Poly, 5> denA;
  std::array<Poly, 5> denA_stated;

  // Sign-analysis kernels s1..s8 (s3, s4 in the w parametrization
  // p = ((M+1)+(M-1)w)/(2M); s8 in (b, p) after M=2, mu=(1+a)/2, a=2bp/3).
  std::array<Poly, 8> s;

  // delta-expansion of (M+1)^3 * s7|_{a = 2bp/(M+1)} at M = 3 + delta:
  // e[i] is the coefficient of delta^i, a polynomial in (b, mu, p).
  Poly s7_sub;
  std::array<Poly, 10> e;

  // e1..e8 transported to the unit cube via p=(1+x1)/2, b=x2, mu=x3.
  std::array<Poly, 8> e_cube;

  // Coefficient of delta^5 in the expansion of s5 at M = 3 + delta
  // (the displayed 360p(a+1-2mu p)^2 square).
  Poly case3_e6;

  // e9 at its b endpoints, reduced to (w, p): e9a = e9|_{b=0, mu=w/(2p)},
  // e9b = e9|_{b=1, mu=(1+w(2p-1))/(2p)}.
  Poly e9a, e9b;

  // Canonical name -> polynomial map (serialization / lookup surface).
  std::map<std::string, Poly> named;
};

/// Derives the corpus once and caches it (thread-safe).
const Corpus& corpus();

/// The paper text blocks, transcribed faithfully (typos included), keyed by
/// the same names as Corpus::named where a displayed form exists.
const std::map<std::string, Poly>& transcribed();

struct ComparisonEntry {
  std::string name;
  bool symbolic_equal = false;
  long points = 0;
  long mismatches = 0;
  std::string note;  // first mismatching point and the two values
};

/// Dual-path check: derived expressions against the transcribed text at
/// random rational points (plus exact polynomial comparison). Mismatches are
/// reported, never patched.
std::vector<ComparisonEntry> compare_to_paper(int points_per_poly, unsigned long seed);

/// Serializes the whole named corpus in the plain-text polynomial format.
std::string corpus_to_text();

/// Lookup in the named corpus ("nA1".."nA5", "s1".."s8", "e1".."e10",
/// "e1_cube".."e8_cube", ...); throws std::out_of_range if absent.
const Poly& named_poly(const std::string& name);

}  // namespace pcontest::corpus

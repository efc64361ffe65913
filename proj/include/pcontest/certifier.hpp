#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcontest/poly.hpp"

namespace pcontest::cert {

using alg::Poly;
using alg::Rat;

/// f = plus - minus with both parts having only non-negative coefficients.
struct SignSplit {
  Poly plus;
  Poly minus;
};

SignSplit sign_split(const Poly& f);

/// Exact lower bound G_{f,M} for min f over the unit cube: the positive part
/// is evaluated at cell lower corners, the negative part at upper corners.
/// Works for polynomials in up to three variables (unused axes collapse).
/// argmin, if given, receives a cell index attaining the bound.
Rat grid_lower_bound(const Poly& f, long grid_m, int threads = 0,
                     std::array<long, 3>* argmin = nullptr);

struct GridCertificate {
  std::string poly_id;
  long grid_m = 0;
  Rat bound;                      // exact G_{f,M}
  std::optional<Rat> threshold;   // strict table threshold, when applicable
  bool certified = false;         // bound > threshold, or bound >= 0 if none
  std::array<long, 3> argmin{};   // cell achieving the bound
  double wall_ms = 0.0;
  int chunks = 0;

  std::string bound_str() const;  // "num/den"
};

GridCertificate certify_grid(const std::string& poly_id, const Poly& f, long grid_m,
                             std::optional<Rat> threshold = std::nullopt,
                             int threads = 0);

struct TableEntry {
  std::string id;    // "e1".."e8"
  long stated_m;     // published resolution
  long run_m;        // resolution at which the published bound actually holds
  long threshold;    // published bound (strict)
};

/// The eight (polynomial, resolution, bound) rows of the certification table.
const std::vector<TableEntry>& certification_table();

/// Runs the table rows; e1..e4 only when include_slow is set (they are the
/// long-running resolutions).
std::vector<GridCertificate> certify_table(bool include_slow, int threads = 0);

/// Branch-and-bound alternative to the uniform grid: accept a box when
/// plus(lo) - minus(hi) >= 0, else split its longest axis.
struct AdaptiveResult {
  bool certified = false;
  long evaluations = 0;      // corner evaluations of the split parts
  long boxes_accepted = 0;
  long boxes_rejected = 0;   // boxes on which f is provably negative
  long unresolved = 0;       // boxes still straddling zero at the depth limit
  int depth_reached = 0;
  // First unresolved box at the depth limit (straddles the zero set of f;
  // contains a candidate non-positive point). Empty when none.
  std::vector<std::pair<Rat, Rat>> witness_box;
  // First provably-negative box, when one exists.
  std::vector<std::pair<Rat, Rat>> disproof_box;
};

/// multi_orientation widens the acceptance test to all 2^n axis
/// reflections of the box (still sound); switch it off for the plain
/// single-split behavior.
AdaptiveResult adaptive_certify(const Poly& f, int max_depth,
                                bool multi_orientation = true);

/// The two expansion coefficients the grid cannot certify (they touch zero):
/// e10 is a square times a positive factor, e9 is affine in b and is checked
/// at its b-endpoints.
struct E9E10Report {
  bool e10_square_form = false;       // e10 == 3p(2 mu p - 1)^2 exactly
  double e10_at_half = 0.0;           // e10 at mu*p = 1/2 (should be 0)
  bool e9_affine_in_b = false;
  bool e9_b_coeff_matches = false;    // == 6p^2(1-2 mu p)(2 mu p + 1)
  Rat e9a_box_bound, e9b_box_bound;   // exact Box bounds on [1/2,1]x[0,1]
  double e9a_grid_min = 0.0;          // dense double grids over the same area
  double e9b_grid_min = 0.0;
  double critical_min = 0.0;          // min over p of the closed-form minimum
  bool critical_above_02858 = false;

  bool ok() const;
};

E9E10Report check_e9_e10();

}  // namespace pcontest::cert

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "keel/collections.hpp"

// Euler-pairing Gram matrices by independent routes, numerical
// exceptionality checks, rank counting, and cohomology-level verification on
// the 5-pointed surface.

namespace keel::verify {

using collections::Collection;
using collections::ExceptionalObject;
using intersect::TowerGeometry;
using picard::ll;

struct GramMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<ll>> m;

  int size() const { return static_cast<int>(m.size()); }
};

// chi(E_i, E_j) expanded over the K-classes of the objects; jobs > 1 fills
// the entries in parallel, jobs == 1 is the serial reference.
GramMatrix gram_hrr(const Collection& c, const TowerGeometry& geom, int jobs = 1);

// Same matrix through the pushforward-sequence evaluator instead of the
// Riemann-Roch form; exercises an independent arithmetic route.
GramMatrix gram_descent(const Collection& c, const TowerGeometry& geom, int jobs = 1);

// Blockwise Gram of the unmutated blow-up collection of one substep, computed
// from center data alone: pushforward blocks carry the center collection,
// distinct center blocks are orthogonal, the base block is the given Gram,
// base-to-center entries vanish and center-to-base entries are
// -chi_center(F, restriction).
struct CenterBlock {
  bool point = false;
  std::vector<ll> f_degrees;            // empty for a point center
  std::vector<ll> e_restriction_degrees;  // one per base object
};
GramMatrix gram_recursive(const std::vector<CenterBlock>& centers, const GramMatrix& gram_e);

struct UnitriangularVerdict {
  bool ok = true;
  std::vector<std::pair<int, int>> violations;  // 1-based (row, col)
};
UnitriangularVerdict check_unitriangular(const GramMatrix& g);

// Exact determinant (Bareiss elimination).
ll det(const GramMatrix& g);

// Rank of K_0 of the n-pointed space via the tower recursion.
ll rank_k0(int n);

// Diagonal of the Smith normal form of the K-class matrix of a collection:
// rows are objects, columns the distinct line-bundle classes they involve.
std::vector<ll> kclass_snf(const Collection& c);

struct StrongCheck {
  bool lower_vanishing = true;    // h^* (L_j - L_i) = 0 for i > j
  bool diagonal_ok = true;        // (1,0,0) on the diagonal
  bool strong = true;             // upper entries concentrated in degree 0
  std::vector<std::string> failures;
};
StrongCheck strong_check_m05(const std::vector<picard::DivisorClass>& classes,
                             const intersect::M05Model& m05);

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool pass() const;
  std::string to_json() const;
  std::string to_text() const;
};

// Run every check that applies to the n-pointed pipeline.
VerificationReport verify_pipeline(int n_points, const std::string& data_dir, int jobs = 1);

}  // namespace keel::verify

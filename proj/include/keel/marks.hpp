#pragma once

#include <optional>
#include <string>
#include <vector>

// Combinatorics of marked sets and stable 2-/3-partitions.
//
// A marked set S carries an inductive structure: the subset P of its first
// three labels (under the natural order).  Stable 2-partitions of S index
// boundary divisors of the moduli space of stable S-pointed rational curves;
// the ones singled out by keel_exceptional() are exactly the divisors
// contracted by the product of forgetful maps in Keel's factorization.
//
// All values are immutable after construction and every operation is a pure
// function, so concurrent use needs no synchronization.

namespace keel::marks {

using Label = int;
using LabelSet = std::vector<Label>;  // sorted ascending, labels distinct

struct MarkedSet {
  LabelSet labels;
  std::optional<Label> bullet;  // distinguished extra label, not in `labels`

  // S = {1,...,n}, bullet = n+1, P = {1,2,3}.
  static MarkedSet standard(int n);
  static MarkedSet plain(LabelSet ls);

  int size() const { return static_cast<int>(labels.size()); }
  LabelSet p_subset() const;   // first three labels; requires size >= 3
  LabelSet with_bullet() const;
  bool contains(Label l) const;
};

struct StablePartition {
  LabelSet part1, part2;  // disjoint, nonempty, union = ambient set
  bool ordered = false;   // |part1 ∩ P| <= 1 has been certified

  LabelSet ambient() const;
  bool same_ambient(const StablePartition& o) const;
  // unordered equality (parts may be swapped)
  bool same_partition(const StablePartition& o) const;
};

// Codimension-two stratum witness; the middle part is distinguished, the two
// end parts can be interchanged.
struct ThreePartition {
  LabelSet part1, part2, part3;
  bool ordered = false;  // |(part1 ∪ part2) ∩ P| <= 1
};

// Every stable unordered 2-partition of m.labels exactly once, each returned
// in ordered form; list sorted lexicographically on part1.
std::vector<StablePartition> stable_2partitions(const MarkedSet& m);

// Orient sigma so that |part1 ∩ p| <= 1; |p| = 3 makes the result unique.
StablePartition order_parts(const StablePartition& sigma, const LabelSet& p);

// sigma_bar partitions S ∪ {bullet}; true iff the part containing the bullet
// has at most one element of P and at least three elements.
bool keel_exceptional(const StablePartition& sigma_bar, const MarkedSet& m);

// Cardinality of the part not containing the bullet; requires ordered input.
int height(const StablePartition& sigma_bar);

// Remove the bullet from its part; the result is stable over S.
StablePartition delete_bullet(const StablePartition& sigma_bar, const MarkedSet& m);

// True iff the corresponding boundary divisors meet: sigma == tau or a part
// of one is contained in a part of the other (equivalently, one of the four
// pairwise part intersections is empty).
bool compatible(const StablePartition& a, const StablePartition& b);

// All keel_exceptional partitions of S ∪ {bullet}, sorted by (height, part1).
// This is the enumeration order used to number exceptional divisors.
std::vector<StablePartition> keel_exceptional_partitions(const MarkedSet& m);

// Stable 3-partitions of m.labels, each unordered triple once, in ordered
// form where the ordering rule applies.
std::vector<ThreePartition> stable_3partitions(const MarkedSet& m);
ThreePartition order_three(const ThreePartition& t, const LabelSet& p);

std::string to_string(const StablePartition& s);

LabelSet set_union(const LabelSet& a, const LabelSet& b);
LabelSet set_intersection(const LabelSet& a, const LabelSet& b);
bool is_subset(const LabelSet& a, const LabelSet& b);

}  // namespace keel::marks

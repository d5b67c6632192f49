#pragma once

#include <string>
#include <utility>
#include <vector>

#include "keel/marks.hpp"

// Keel's factorization of the product of forgetful maps into codimension-two
// blow-ups, grouped by height.  Floors and centers are pure descriptions; the
// intersection theory lives elsewhere.

namespace keel::tower {

struct CenterDescriptor {
  marks::StablePartition sigma_bar;  // ordered partition of S ∪ {bullet}
  std::string name;                  // "E4", or "Dσ2" on the 5-point tower
  int height = 0;
  marks::MarkedSet factor1, factor2;  // S1 ∪ {glued}, S2 ∪ {glued}
  marks::Label glued = 0;             // label of the node shared by the factors

  int dim() const {
    return (factor1.size() - 3) + (factor2.size() - 3);
  }
};

struct BlowUpStep {
  int source_floor = 0;  // blow-up of target_floor along the centers
  int target_floor = 0;
  int height = 0;        // all centers have this height
  std::vector<CenterDescriptor> centers;
};

struct Floor {
  int index = 0;  // 1 .. n-2
};

struct KeelTower {
  marks::MarkedSet base;  // S with bullet; P = first three labels of S
  std::vector<Floor> floors;
  std::vector<BlowUpStep> steps;  // heights increasing from 2

  int n() const { return base.size(); }
  int center_count() const;
  const CenterDescriptor& center(const std::string& name) const;
  std::vector<const CenterDescriptor*> all_centers() const;  // enumeration order
};

KeelTower build_tower(const marks::MarkedSet& m);

std::pair<marks::MarkedSet, marks::MarkedSet> center_factors(const CenterDescriptor& c);

// One substep per center, in the deterministic enumeration order of the
// partitions; composing the substeps recovers the step.
std::vector<const CenterDescriptor*> substep_order(const BlowUpStep& step);

}  // namespace keel::tower

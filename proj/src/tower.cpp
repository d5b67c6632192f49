#include "keel/tower.hpp"

#include <algorithm>
#include <stdexcept>

namespace keel::tower {

using marks::LabelSet;
using marks::MarkedSet;
using marks::StablePartition;

int KeelTower::center_count() const {
  int total = 0;
  for (const auto& s : steps) total += static_cast<int>(s.centers.size());
  return total;
}

const CenterDescriptor& KeelTower::center(const std::string& name) const {
  for (const auto& s : steps)
    for (const auto& c : s.centers)
      if (c.name == name) return c;
  throw std::invalid_argument("unknown center: " + name);
}

std::vector<const CenterDescriptor*> KeelTower::all_centers() const {
  std::vector<const CenterDescriptor*> out;
  for (const auto& s : steps)
    for (const auto& c : s.centers) out.push_back(&c);
  return out;
}

static CenterDescriptor make_center(const StablePartition& sb, const MarkedSet& m,
                                    const std::string& name) {
  CenterDescriptor c;
  c.sigma_bar = sb;
  c.name = name;
  c.height = marks::height(sb);
  StablePartition sigma = marks::delete_bullet(sb, m);
  // The glued label stands for the node; reusing the bullet value keeps the
  // factor sets inside the parent label range.
  c.glued = *m.bullet;
  LabelSet f1 = sigma.part1, f2 = sigma.part2;
  f1.push_back(c.glued);
  f2.push_back(c.glued);
  std::sort(f1.begin(), f1.end());
  std::sort(f2.begin(), f2.end());
  c.factor1 = MarkedSet::plain(f1);
  c.factor2 = MarkedSet::plain(f2);
  return c;
}

KeelTower build_tower(const MarkedSet& m) {
  if (m.size() < 3) throw std::domain_error("tower needs at least three labels");
  if (!m.bullet) throw std::invalid_argument("tower needs a marked set with a bullet");

  KeelTower t;
  t.base = m;
  const int n = m.size();
  for (int k = 1; k <= std::max(1, n - 2); ++k) t.floors.push_back(Floor{k});

  if (n == 3) return t;  // single floor, nothing to blow up

  auto parts = marks::keel_exceptional_partitions(m);  // sorted by (height, part1)
  const bool five_point = (n == 4);  // tower of the 5-pointed space
  int index = 0;
  for (int h = 2; h <= n - 2; ++h) {
    BlowUpStep step;
    step.source_floor = h;
    step.target_floor = h - 1;
    step.height = h;
    for (const auto& sb : parts) {
      if (marks::height(sb) != h) continue;
      ++index;
      std::string name = five_point ? ("D\xCF\x83" + std::to_string(index))
                                    : ("E" + std::to_string(index));
      step.centers.push_back(make_center(sb, m, name));
    }
    // Centers blown up together must be pairwise disjoint.
    for (size_t i = 0; i < step.centers.size(); ++i)
      for (size_t j = i + 1; j < step.centers.size(); ++j)
        if (marks::compatible(step.centers[i].sigma_bar, step.centers[j].sigma_bar))
          throw std::logic_error("centers of one step are not disjoint");
    t.steps.push_back(std::move(step));
  }
  return t;
}

std::pair<MarkedSet, MarkedSet> center_factors(const CenterDescriptor& c) {
  return {c.factor1, c.factor2};
}

std::vector<const CenterDescriptor*> substep_order(const BlowUpStep& step) {
  std::vector<const CenterDescriptor*> out;
  for (const auto& c : step.centers) out.push_back(&c);
  return out;
}

}  // namespace keel::tower

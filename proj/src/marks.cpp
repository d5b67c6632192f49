#include "keel/marks.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace keel::marks {

MarkedSet MarkedSet::standard(int n) {
  if (n < 1) throw std::invalid_argument("marked set needs at least one label");
  MarkedSet m;
  m.labels.resize(n);
  std::iota(m.labels.begin(), m.labels.end(), 1);
  m.bullet = n + 1;
  return m;
}

MarkedSet MarkedSet::plain(LabelSet ls) {
  std::sort(ls.begin(), ls.end());
  if (std::adjacent_find(ls.begin(), ls.end()) != ls.end())
    throw std::invalid_argument("labels must be distinct");
  MarkedSet m;
  m.labels = std::move(ls);
  return m;
}

LabelSet MarkedSet::p_subset() const {
  if (size() < 3) throw std::domain_error("p_subset needs at least three labels");
  return {labels[0], labels[1], labels[2]};
}

LabelSet MarkedSet::with_bullet() const {
  if (!bullet) throw std::domain_error("marked set has no bullet");
  LabelSet out = labels;
  out.push_back(*bullet);
  std::sort(out.begin(), out.end());
  return out;
}

bool MarkedSet::contains(Label l) const {
  return std::binary_search(labels.begin(), labels.end(), l);
}

LabelSet set_union(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

LabelSet set_intersection(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const LabelSet& a, const LabelSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

LabelSet StablePartition::ambient() const { return set_union(part1, part2); }

bool StablePartition::same_ambient(const StablePartition& o) const {
  return ambient() == o.ambient();
}

bool StablePartition::same_partition(const StablePartition& o) const {
  return (part1 == o.part1 && part2 == o.part2) ||
         (part1 == o.part2 && part2 == o.part1);
}

std::vector<StablePartition> stable_2partitions(const MarkedSet& m) {
  const int n = m.size();
  if (n < 4) throw std::domain_error("no stable 2-partitions");
  const LabelSet p = m.p_subset();
  std::vector<StablePartition> out;
  // Canonical representative of an unordered partition: the side holding the
  // smallest label.  Masks run over subsets containing labels[0].
  for (unsigned mask = 1; mask < (1u << n); mask += 2) {
    LabelSet a, b;
    for (int i = 0; i < n; ++i)
      ((mask >> i) & 1u ? a : b).push_back(m.labels[i]);
    if (a.size() < 2 || b.size() < 2) continue;
    StablePartition s{a, b, false};
    out.push_back(order_parts(s, p));
  }
  std::sort(out.begin(), out.end(), [](const StablePartition& x, const StablePartition& y) {
    return x.part1 < y.part1;
  });
  return out;
}

StablePartition order_parts(const StablePartition& sigma, const LabelSet& p) {
  if (p.size() != 3) throw std::invalid_argument("inductive structure needs |P| = 3");
  const size_t in1 = set_intersection(sigma.part1, p).size();
  const size_t in2 = set_intersection(sigma.part2, p).size();
  if (in1 + in2 != 3)
    throw std::invalid_argument("P is not contained in the ambient set");
  StablePartition out = sigma;
  if (in1 > 1) std::swap(out.part1, out.part2);
  out.ordered = true;
  return out;
}

static const LabelSet& bullet_part(const StablePartition& s, Label bullet) {
  if (std::binary_search(s.part1.begin(), s.part1.end(), bullet)) return s.part1;
  if (std::binary_search(s.part2.begin(), s.part2.end(), bullet)) return s.part2;
  throw std::invalid_argument("bullet not in ambient set");
}

bool keel_exceptional(const StablePartition& sigma_bar, const MarkedSet& m) {
  if (!m.bullet) throw std::invalid_argument("bullet not in ambient set");
  const LabelSet& bp = bullet_part(sigma_bar, *m.bullet);
  if (bp.size() < 3) return false;
  return set_intersection(bp, m.p_subset()).size() <= 1;
}

int height(const StablePartition& sigma_bar) {
  if (!sigma_bar.ordered) throw std::invalid_argument("height requires an ordered partition");
  return static_cast<int>(sigma_bar.part2.size());
}

StablePartition delete_bullet(const StablePartition& sigma_bar, const MarkedSet& m) {
  if (!keel_exceptional(sigma_bar, m))
    throw std::invalid_argument("delete_bullet requires a keel-exceptional partition");
  const Label b = *m.bullet;
  StablePartition out = sigma_bar;
  auto strip = [b](LabelSet& ls) {
    ls.erase(std::remove(ls.begin(), ls.end(), b), ls.end());
  };
  strip(out.part1);
  strip(out.part2);
  if (out.part1.size() < 2 || out.part2.size() < 2)
    throw std::logic_error("deleting the bullet produced an unstable partition");
  return out;
}

bool compatible(const StablePartition& a, const StablePartition& b) {
  if (!a.same_ambient(b)) throw std::invalid_argument("partitions over different ambient sets");
  if (a.same_partition(b)) return true;
  return set_intersection(a.part1, b.part1).empty() ||
         set_intersection(a.part1, b.part2).empty() ||
         set_intersection(a.part2, b.part1).empty() ||
         set_intersection(a.part2, b.part2).empty();
}

std::vector<StablePartition> keel_exceptional_partitions(const MarkedSet& m) {
  MarkedSet full = MarkedSet::plain(m.with_bullet());
  std::vector<StablePartition> all;
  {
    // Enumerate over S ∪ {bullet} but order by P ⊂ S.
    const int n = full.size();
    if (n < 4) return {};
    const LabelSet p = m.p_subset();
    for (unsigned mask = 1; mask < (1u << n); mask += 2) {
      LabelSet a, b;
      for (int i = 0; i < n; ++i)
        ((mask >> i) & 1u ? a : b).push_back(full.labels[i]);
      if (a.size() < 2 || b.size() < 2) continue;
      StablePartition s = order_parts(StablePartition{a, b, false}, p);
      if (keel_exceptional(s, m)) all.push_back(s);
    }
  }
  std::sort(all.begin(), all.end(), [](const StablePartition& x, const StablePartition& y) {
    if (x.part2.size() != y.part2.size()) return x.part2.size() < y.part2.size();
    return x.part1 < y.part1;
  });
  return all;
}

ThreePartition order_three(const ThreePartition& t, const LabelSet& p) {
  if (p.size() != 3) throw std::invalid_argument("inductive structure needs |P| = 3");
  ThreePartition out = t;
  auto light = [&](const LabelSet& x, const LabelSet& y) {
    return set_intersection(set_union(x, y), p).size() <= 1;
  };
  if (light(out.part1, out.part2)) {
    out.ordered = true;
  } else if (light(out.part3, out.part2)) {
    std::swap(out.part1, out.part3);
    out.ordered = true;
  } else {
    out.ordered = false;  // neither orientation satisfies the rule
  }
  return out;
}

std::vector<ThreePartition> stable_3partitions(const MarkedSet& m) {
  const int n = m.size();
  std::vector<ThreePartition> out;
  if (n < 5) return out;
  const LabelSet p = m.p_subset();
  // part assignment digits 0/1/2; ends interchangeable, so keep the
  // representative where the smallest label sits in part 0.
  std::vector<int> digit(n, 0);
  const long long total = static_cast<long long>(std::pow(3.0, n) + 0.5);
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    LabelSet parts[3];
    for (int i = 0; i < n; ++i) {
      parts[c % 3].push_back(m.labels[i]);
      c /= 3;
    }
    if (parts[0].size() < 2 || parts[2].size() < 2 || parts[1].empty()) continue;
    if (parts[2] < parts[0]) continue;  // dedupe end swap
    out.push_back(order_three(ThreePartition{parts[0], parts[1], parts[2], false}, p));
  }
  std::sort(out.begin(), out.end(), [](const ThreePartition& a, const ThreePartition& b) {
    if (a.part1 != b.part1) return a.part1 < b.part1;
    return a.part2 < b.part2;
  });
  return out;
}

std::string to_string(const StablePartition& s) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < s.part1.size(); ++i) os << (i ? "," : "") << s.part1[i];
  os << "|";
  for (size_t i = 0; i < s.part2.size(); ++i) os << (i ? "," : "") << s.part2[i];
  os << ")";
  return os.str();
}

}  // namespace keel::marks

#pragma once

#include <memory>
#include <string>
#include <vector>

// Picard lattices of tower floors.  A divisor class is an integer vector over
// a named basis; pulling back along a blow-up is zero-extension to the
// enlarged basis, so the bases of consecutive floors are nested.

namespace keel::picard {

using ll = long long;

struct PicBasis {
  std::vector<std::string> names;

  int rank() const { return static_cast<int>(names.size()); }
  int index_of(const std::string& name) const;  // -1 if absent
  // true iff `smaller` is a prefix of this basis
  bool extends(const PicBasis& smaller) const;
};

using BasisPtr = std::shared_ptr<const PicBasis>;

BasisPtr make_basis(std::vector<std::string> names);
BasisPtr append_generator(const BasisPtr& b, const std::string& name);

struct DivisorClass {
  BasisPtr basis;
  std::vector<ll> coeffs;
  std::string label;

  ll coeff(const std::string& name) const;
  DivisorClass& operator+=(const DivisorClass& o);
  DivisorClass& operator-=(const DivisorClass& o);
};

DivisorClass zero_class(const BasisPtr& b);
DivisorClass generator_class(const BasisPtr& b, const std::string& name);
DivisorClass make_class(const BasisPtr& b, std::vector<ll> coeffs, std::string label = "");

DivisorClass operator+(DivisorClass a, const DivisorClass& b);
DivisorClass operator-(DivisorClass a, const DivisorClass& b);
DivisorClass operator*(ll k, DivisorClass a);
bool same_class(const DivisorClass& a, const DivisorClass& b);

// Zero-extension to a larger (nested) basis; injective and additive.
DivisorClass pullback(const DivisorClass& d, const BasisPtr& larger);

// Add one to each named coordinate.
DivisorClass twist(const DivisorClass& d, const std::vector<std::string>& gens);

// Rank of the Picard lattice of the moduli space of stable n-pointed rational
// curves: 2^{n-1} - n(n-1)/2 - 1, via the tower recursion.
ll pic_rank_moduli(int n);

std::string to_json_string(const DivisorClass& d);

}  // namespace keel::picard

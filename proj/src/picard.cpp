#include "keel/picard.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace keel::picard {

int PicBasis::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

bool PicBasis::extends(const PicBasis& smaller) const {
  if (smaller.names.size() > names.size()) return false;
  return std::equal(smaller.names.begin(), smaller.names.end(), names.begin());
}

BasisPtr make_basis(std::vector<std::string> names) {
  auto b = std::make_shared<PicBasis>();
  b->names = std::move(names);
  return b;
}

BasisPtr append_generator(const BasisPtr& b, const std::string& name) {
  if (b->index_of(name) >= 0)
    throw std::invalid_argument("generator already present: " + name);
  auto nb = std::make_shared<PicBasis>(*b);
  nb->names.push_back(name);
  return nb;
}

ll DivisorClass::coeff(const std::string& name) const {
  int i = basis->index_of(name);
  if (i < 0) throw std::invalid_argument("unknown generator: " + name);
  return coeffs[i];
}

static void check_same_basis(const DivisorClass& a, const DivisorClass& b) {
  if (a.basis->names != b.basis->names)
    throw std::invalid_argument("divisor classes over different bases");
}

DivisorClass& DivisorClass::operator+=(const DivisorClass& o) {
  check_same_basis(*this, o);
  for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}

DivisorClass& DivisorClass::operator-=(const DivisorClass& o) {
  check_same_basis(*this, o);
  for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
  return *this;
}

DivisorClass zero_class(const BasisPtr& b) {
  return DivisorClass{b, std::vector<ll>(b->rank(), 0), ""};
}

DivisorClass generator_class(const BasisPtr& b, const std::string& name) {
  int i = b->index_of(name);
  if (i < 0) throw std::invalid_argument("unknown generator: " + name);
  DivisorClass d = zero_class(b);
  d.coeffs[i] = 1;
  d.label = name;
  return d;
}

DivisorClass make_class(const BasisPtr& b, std::vector<ll> coeffs, std::string label) {
  if (static_cast<int>(coeffs.size()) != b->rank())
    throw std::invalid_argument("coefficient vector length does not match basis rank");
  return DivisorClass{b, std::move(coeffs), std::move(label)};
}

DivisorClass operator+(DivisorClass a, const DivisorClass& b) { a += b; return a; }
DivisorClass operator-(DivisorClass a, const DivisorClass& b) { a -= b; return a; }

DivisorClass operator*(ll k, DivisorClass a) {
  for (auto& c : a.coeffs) c *= k;
  return a;
}

bool same_class(const DivisorClass& a, const DivisorClass& b) {
  return a.basis->names == b.basis->names && a.coeffs == b.coeffs;
}

DivisorClass pullback(const DivisorClass& d, const BasisPtr& larger) {
  if (!larger->extends(*d.basis))
    throw std::invalid_argument("pullback target basis does not extend the source basis");
  DivisorClass out = zero_class(larger);
  std::copy(d.coeffs.begin(), d.coeffs.end(), out.coeffs.begin());
  out.label = d.label;
  return out;
}

DivisorClass twist(const DivisorClass& d, const std::vector<std::string>& gens) {
  DivisorClass out = d;
  for (const auto& g : gens) {
    int i = d.basis->index_of(g);
    if (i < 0) throw std::invalid_argument("unknown generator: " + g);
    out.coeffs[i] += 1;
  }
  return out;
}

ll pic_rank_moduli(int n) {
  if (n < 3) throw std::domain_error("moduli space needs n >= 3");
  // rank(n+1) = rank(n) + 1 + (2^{n-1} - n - 1), rank(3) = 0, rank(4) = 1.
  ll r = 0;
  for (int m = 3; m < n; ++m) r += 1 + ((1LL << (m - 1)) - m - 1);
  return r;
}

std::string to_json_string(const DivisorClass& d) {
  nlohmann::ordered_json j;
  j["basis"] = d.basis->names;
  j["coeffs"] = d.coeffs;
  j["label"] = d.label;
  return j.dump();
}

}  // namespace keel::picard

#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "keel/picard.hpp"
#include "keel/tower.hpp"

// Exact intersection theory on tower floors of dimension <= 3: the pairing
// form on surfaces, the trilinear form on 3-folds, blow-up transfer rules,
// curve classes of blow-up centers, and Euler characteristics.
//
// Euler characteristics on a 3-fold are computed from the cubic form, the
// canonical class and a linear form T with 12*T integer-valued; T is pinned
// on the base floor by the product formula and propagated through blow-ups
// by chi(O(E)) = 1.

namespace keel::intersect {

using picard::BasisPtr;
using picard::DivisorClass;
using picard::ll;

struct SurfaceForm {
  BasisPtr basis;
  std::vector<std::vector<ll>> pair;  // symmetric
  DivisorClass canonical;

  ll dot(const DivisorClass& a, const DivisorClass& b) const;
  ll euler_char(const DivisorClass& d) const;  // 1 + D(D-K)/2
};

struct ThreefoldForm {
  BasisPtr basis;
  std::vector<ll> triple;     // dense rank^3 tensor, fully symmetric
  DivisorClass canonical;
  std::vector<ll> t_times12;  // 12 * T on each generator

  ll cube(const DivisorClass& a, const DivisorClass& b, const DivisorClass& c) const;
  ll euler_char(const DivisorClass& d) const;
};

struct CurveClass {
  std::string center_name;
  std::vector<ll> degrees;  // intersection number with each basis divisor
  ll deg_normal = 0;        // deg N = -2 - K.C for a rational curve
};

// The 5-pointed moduli surface as the two-fiber quadric blown up at the three
// diagonal points; basis (h, v, e1, e2, e3).
struct M05Model {
  SurfaceForm form;
  // ordered stable partitions of {1..5}, keyed by part1, mapped to classes
  std::map<marks::LabelSet, DivisorClass> boundary;
  std::vector<DivisorClass> minus_one_classes;  // the ten (-1)-curves

  DivisorClass boundary_class(const marks::StablePartition& sigma) const;
  // (h0, h1, h2) by fixed-component reduction against the (-1)-curves.
  std::tuple<ll, ll, ll> cohomology_dims(const DivisorClass& d) const;
};

M05Model m05_pairing();

// The 5-pointed surface modelled on the plane blown up at four points;
// basis (l, e1, e2, e3, e4).  Used as an independent surface for the
// point-blow-up collection checks.
SurfaceForm p2_blowup4_form();

SurfaceForm blowup_transfer_point(const SurfaceForm& f, const std::string& gen_name);
ThreefoldForm blowup_transfer_curve(const ThreefoldForm& f, const CurveClass& c,
                                    const std::string& gen_name);

struct IncidenceEntry {
  std::string a, b;    // center names, a before b in enumeration order
  std::string curve;   // name of the intersection curve
};

struct IncidenceTable {
  std::vector<IncidenceEntry> nonempty;  // all other pairs are disjoint
  bool meets(const std::string& a, const std::string& b) const;
};

IncidenceTable predict_incidence(const tower::KeelTower& t);

// Per-substep geometry of a tower, floors indexed 0..#substeps; floor 0 is
// the product base.  The substep order is configurable because it fixes the
// basis order and the intermediate floors.
struct TowerGeometry {
  tower::KeelTower tw;
  std::vector<const tower::CenterDescriptor*> substeps;  // blow order
  std::vector<int> floor_dim;                            // constant across floors
  std::vector<BasisPtr> bases;                           // per floor
  std::vector<SurfaceForm> surfaces;                     // dim 2 floors
  std::vector<ThreefoldForm> threefolds;                 // dim 3 floors
  std::vector<std::optional<CurveClass>> center_class;   // per substep, on its floor
  std::optional<M05Model> m05;                           // base surface factor (dim 3)

  static TowerGeometry build(const tower::KeelTower& t,
                             const std::vector<std::string>& order);
  static TowerGeometry build(const tower::KeelTower& t);  // enumeration order

  int floors() const { return static_cast<int>(bases.size()); }
  int top_floor() const { return floors() - 1; }
  bool point_centers() const { return floor_dim.front() == 2; }

  DivisorClass canonical_class(int floor) const;
  ll euler_char(int floor, const DivisorClass& d) const;
  // Independent route: peel exceptional coordinates through the pushforward
  // sequences; supports coefficients in {-1,0,1} on exceptional generators.
  ll euler_char_descent(int floor, const DivisorClass& d) const;
  // Degree of the restriction of d to the center blown up at substep t;
  // d must live on floor t.  Zero for point centers.
  ll restrict_degree(int substep, const DivisorClass& d) const;
  ll base_product_chi(const DivisorClass& d) const;  // floor 0
};

}  // namespace keel::intersect

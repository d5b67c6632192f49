#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "keel/intersect.hpp"

// Exceptional collections of line bundles and the blow-up rewrite rules that
// transform a collection on a floor into one on the next floor up.  The
// rewrite doubles the objects whose restrictions generate the center and
// twists everything in front of them by the new exceptional divisor.

namespace keel::collections {

using intersect::TowerGeometry;
using picard::DivisorClass;
using picard::ll;

struct Provenance {
  int l = -1;                    // index into the surface-factor collection
  int g = -1;                    // index into the line-factor collection, -1 if n/a
  std::set<std::string> twists;  // exceptional generators added so far
  std::string base_label;        // used when l < 0
};

struct ExceptionalObject {
  DivisorClass cls;                   // line bundle class; for pushforward kind
                                      // this is the twisted side of the K-class
  std::optional<DivisorClass> minus;  // pushforward kind: [obj] = [cls] - [minus]
  Provenance prov;

  bool is_pushforward() const { return minus.has_value(); }
};

struct Collection {
  int floor = 0;  // index into TowerGeometry floors
  std::vector<ExceptionalObject> objs;

  int size() const { return static_cast<int>(objs.size()); }
};

struct ScriptEntry {
  std::string center;
  std::optional<std::pair<int, int>> range;  // 1-based inclusive
};

// Order of the substeps and, per substep, which contiguous block of the
// current collection restricts to the center.  Entries without a range fall
// back to find_range.
struct ChoiceScript {
  std::vector<ScriptEntry> substeps;
  bool auto_order = false;  // ignore `substeps`, use enumeration order
};

ChoiceScript paper_script(int n);          // shipped reconstruction, n in {5,6}
ChoiceScript parse_script(const std::string& json_text);

// Render "q*(L2⊠G1)(E6+E8+E10)"-style labels; maximal tails of at least two
// exceptional indices compress to "E≥k" on the 6-point space.
std::string render_label(const Provenance& p, int n_points);

// (O(-1), O) on a line floor.
Collection base_p1(const picard::BasisPtr& basis, const std::string& gen);

// All products F_i ⊠ G_j in G-major order on the product basis.  The two
// inputs are given by their classes on the factors.
Collection external_product(const std::vector<DivisorClass>& f,
                            const std::vector<DivisorClass>& g,
                            const picard::BasisPtr& product_basis,
                            int g_offset_index);

// First contiguous pair of consecutive increasing degrees (curve center), or
// the first single element (point center); 1-based.
std::pair<int, int> find_range(const std::vector<ll>& degrees, bool point_center);

// The blow-up rewrite: objects before s twist by the new exceptional divisor,
// objects s..r double into (pullback, twisted pullback), objects after r pull
// back unchanged.  Validates that e[s..r] restricts to a generating pair
// (consecutive degrees d, d+1) or a single object on a point center.
Collection apply_cor36(const Collection& e, const TowerGeometry& geom, int substep,
                       std::pair<int, int> range);
// Same with s = 1.
Collection mutate_prop35(const Collection& e, const TowerGeometry& geom, int substep, int r);

// The unmutated blow-up collection: pushforward objects for e[s..r] (K-class
// [q*E(Y~)] - [q*E]) followed by the pullback of all of e.
Collection orlov_collection(const Collection& e, const TowerGeometry& geom, int substep,
                            std::pair<int, int> range);

struct SubstepTrace {
  int substep = 0;
  std::string center;
  std::pair<int, int> range;
  std::vector<ll> degrees;  // restriction degrees of the input collection
  Collection before;        // on floor `substep`
  Collection orlov;         // on floor substep+1
  Collection after;         // on floor substep+1
};

struct PipelineResult {
  tower::KeelTower tw;
  TowerGeometry geom;
  Collection final;
  std::vector<SubstepTrace> trace;
};

// Build the full collection on the n-pointed space, 4 <= n <= 6.  The script
// defaults to the shipped reconstruction for n in {5,6}.
PipelineResult run_pipeline(int n_points, const ChoiceScript* script = nullptr);

std::vector<DivisorClass> default_surface_collection(const intersect::M05Model& m05);

}  // namespace keel::collections

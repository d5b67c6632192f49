#include "keel/collections.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace keel::collections {

using intersect::M05Model;
using picard::BasisPtr;
using picard::generator_class;
using picard::make_basis;
using picard::make_class;
using picard::pullback;
using picard::zero_class;

ChoiceScript paper_script(int n) {
  ChoiceScript s;
  if (n == 5) {
    // Point centers are blown up in reverse enumeration order, always
    // restricting the first object.
    s.substeps = {{"D\xCF\x83" "3", {{1, 1}}},
                  {"D\xCF\x83" "2", {{1, 1}}},
                  {"D\xCF\x83" "1", {{1, 1}}}};
    return s;
  }
  if (n == 6) {
    // Reconstruction of the published run: enumeration order with the pair
    // positions fixed by the generating pairs on each center.
    s.substeps = {{"E1", {{2, 3}}},   {"E2", {{5, 6}}},   {"E3", {{8, 9}}},
                  {"E4", {{14, 15}}}, {"E5", {{15, 16}}}, {"E6", {{19, 20}}},
                  {"E7", {{20, 21}}}, {"E8", {{24, 25}}}, {"E9", {{25, 26}}},
                  {"E10", {{31, 32}}}};
    return s;
  }
  throw std::domain_error("no shipped script for this n");
}

ChoiceScript parse_script(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  ChoiceScript s;
  if (j.contains("auto") && j["auto"].get<bool>()) {
    s.auto_order = true;
    return s;
  }
  for (const auto& e : j.at("substeps")) {
    ScriptEntry entry;
    entry.center = e.at("center").get<std::string>();
    if (e.contains("range")) {
      auto r = e["range"];
      entry.range = std::make_pair(r.at(0).get<int>(), r.at(1).get<int>());
    }
    s.substeps.push_back(entry);
  }
  return s;
}

std::string render_label(const Provenance& p, int n_points) {
  std::ostringstream os;
  if (p.l < 0) {
    os << p.base_label;
  } else if (p.g < 0) {
    os << "q*L" << p.l;
  } else {
    os << "q*(L" << p.l << "\xE2\x8A\xA0"  // ⊠
       << "G" << p.g << ")";
  }
  if (p.twists.empty()) return os.str();

  std::vector<std::string> ts(p.twists.begin(), p.twists.end());
  if (n_points == 6) {
    // numeric E-indices; compress a maximal tail of length >= 2 to E≥k
    std::vector<int> idx;
    for (const auto& t : ts) idx.push_back(std::stoi(t.substr(1)));
    std::sort(idx.begin(), idx.end());
    int tail = 11;
    while (tail > idx.front() &&
           std::find(idx.begin(), idx.end(), tail - 1) != idx.end())
      --tail;
    os << "(";
    bool first = true;
    if (11 - tail < 2) tail = 11;  // tails of length 0 or 1 stay explicit
    for (int i : idx) {
      if (i >= tail) break;
      os << (first ? "" : "+") << "E" << i;
      first = false;
    }
    if (tail <= 10) os << (first ? "" : "+") << "E\xE2\x89\xA5" << tail;  // ≥
    os << ")";
  } else {
    // sort by numeric suffix of the sigma index
    std::sort(ts.begin(), ts.end(), [](const std::string& a, const std::string& b) {
      return a.back() < b.back();
    });
    os << "(";
    for (size_t i = 0; i < ts.size(); ++i) os << (i ? "+" : "") << ts[i];
    os << ")";
  }
  return os.str();
}

Collection base_p1(const BasisPtr& basis, const std::string& gen) {
  Collection c;
  DivisorClass g = generator_class(basis, gen);
  ExceptionalObject a{zero_class(basis) - g, std::nullopt, {}};
  a.prov.base_label = "O(-1)";
  ExceptionalObject b{zero_class(basis), std::nullopt, {}};
  b.prov.base_label = "O";
  c.objs = {a, b};
  return c;
}

Collection external_product(const std::vector<DivisorClass>& f,
                            const std::vector<DivisorClass>& g,
                            const BasisPtr& product_basis, int g_offset_index) {
  Collection out;
  for (size_t j = 0; j < g.size(); ++j)
    for (size_t i = 0; i < f.size(); ++i) {
      DivisorClass cls = zero_class(product_basis);
      for (size_t k = 0; k < f[i].coeffs.size(); ++k) cls.coeffs[k] += f[i].coeffs[k];
      for (size_t k = 0; k < g[j].coeffs.size(); ++k)
        cls.coeffs[g_offset_index + k] += g[j].coeffs[k];
      ExceptionalObject obj{cls, std::nullopt, {}};
      if (g.size() > 1) {
        obj.prov.l = static_cast<int>(i);
        obj.prov.g = static_cast<int>(j);
      } else {
        obj.prov.l = static_cast<int>(i);
      }
      out.objs.push_back(obj);
    }
  return out;
}

std::pair<int, int> find_range(const std::vector<ll>& degrees, bool point_center) {
  if (point_center) return {1, 1};
  for (size_t s = 0; s + 1 < degrees.size(); ++s)
    if (degrees[s + 1] == degrees[s] + 1)
      return {static_cast<int>(s) + 1, static_cast<int>(s) + 2};
  std::ostringstream os;
  os << "no generating pair restricts to the center; degrees [";
  for (size_t i = 0; i < degrees.size(); ++i) os << (i ? "," : "") << degrees[i];
  os << "]";
  throw std::runtime_error(os.str());
}

static std::vector<ll> restriction_degrees(const Collection& e, const TowerGeometry& geom,
                                           int substep) {
  std::vector<ll> deg;
  deg.reserve(e.objs.size());
  for (const auto& o : e.objs) deg.push_back(geom.restrict_degree(substep, o.cls));
  return deg;
}

static void validate_range(const std::vector<ll>& deg, bool point_center,
                           std::pair<int, int> range, const std::string& center) {
  const int s = range.first, r = range.second;
  if (s < 1 || r < s || r > static_cast<int>(deg.size()))
    throw std::invalid_argument("range out of bounds for center " + center);
  if (point_center) {
    if (r != s)
      throw std::invalid_argument("a point center takes a single object, center " + center);
    return;
  }
  if (r != s + 1 || deg[r - 1] != deg[s - 1] + 1) {
    std::ostringstream os;
    os << "restrictions of objects " << s << ".." << r << " do not generate center "
       << center << "; degrees (";
    for (int i = s; i <= r; ++i) os << (i > s ? "," : "") << deg[i - 1];
    os << ")";
    throw std::runtime_error(os.str());
  }
  // Hom vanishing between the pushforward of the later object and the
  // pullback of the earlier one reduces to chi(O(d_a - d_b)) = 0 on the
  // center, which the consecutive-degree condition guarantees.
  for (int b = s + 1; b <= r; ++b)
    for (int a = s; a < b; ++a)
      if (-(deg[a - 1] - deg[b - 1] + 1) != 0)
        throw std::logic_error("cross-term chi does not vanish for center " + center);
}

Collection apply_cor36(const Collection& e, const TowerGeometry& geom, int substep,
                       std::pair<int, int> range) {
  const auto& center = *geom.substeps[substep];
  const bool point = !geom.center_class[substep].has_value();
  auto deg = restriction_degrees(e, geom, substep);
  validate_range(deg, point, range, center.name);

  const BasisPtr up = geom.bases[substep + 1];
  const std::string gen = center.name;
  Collection out;
  out.floor = substep + 1;
  const int s = range.first, r = range.second;
  for (int i = 1; i <= e.size(); ++i) {
    const auto& o = e.objs[i - 1];
    if (o.is_pushforward())
      throw std::invalid_argument("rewrite expects a collection of line bundles");
    ExceptionalObject lifted{pullback(o.cls, up), std::nullopt, o.prov};
    ExceptionalObject twisted = lifted;
    twisted.cls = picard::twist(twisted.cls, {gen});
    twisted.prov.twists.insert(gen);
    if (i < s) {
      out.objs.push_back(twisted);
    } else if (i <= r) {
      out.objs.push_back(lifted);
      out.objs.push_back(twisted);
    } else {
      out.objs.push_back(lifted);
    }
  }
  return out;
}

Collection mutate_prop35(const Collection& e, const TowerGeometry& geom, int substep, int r) {
  return apply_cor36(e, geom, substep, {1, r});
}

Collection orlov_collection(const Collection& e, const TowerGeometry& geom, int substep,
                            std::pair<int, int> range) {
  const auto& center = *geom.substeps[substep];
  const bool point = !geom.center_class[substep].has_value();
  auto deg = restriction_degrees(e, geom, substep);
  validate_range(deg, point, range, center.name);

  const BasisPtr up = geom.bases[substep + 1];
  const std::string gen = center.name;
  Collection out;
  out.floor = substep + 1;
  for (int a = range.first; a <= range.second; ++a) {
    const auto& o = e.objs[a - 1];
    DivisorClass lifted = pullback(o.cls, up);
    ExceptionalObject push{picard::twist(lifted, {gen}), lifted, o.prov};
    push.prov.base_label = "i_*(" + render_label(o.prov, geom.tw.n() + 1) + "|)";
    push.prov.l = -1;
    push.prov.g = -1;
    push.prov.twists.clear();
    out.objs.push_back(push);
  }
  for (const auto& o : e.objs)
    out.objs.push_back(ExceptionalObject{pullback(o.cls, up), std::nullopt, o.prov});
  return out;
}

std::vector<DivisorClass> default_surface_collection(const M05Model& m05) {
  const BasisPtr b = m05.form.basis;
  auto e = [&](int i) { return generator_class(b, "e" + std::to_string(i)); };
  DivisorClass h = generator_class(b, "h");
  DivisorClass v = generator_class(b, "v");
  // O, O(D1), O(D2), O(D3), O(0,1), O(1,0), O(1,1): satisfies the generating
  // pair conditions on every boundary curve the pipeline restricts to.
  return {zero_class(b), e(1), e(2), e(3), v, h, h + v};
}

static std::vector<std::string> resolve_order(const tower::KeelTower& t,
                                              const ChoiceScript& script) {
  std::vector<std::string> order;
  if (script.auto_order || script.substeps.empty()) {
    for (const auto* c : t.all_centers()) order.push_back(c->name);
  } else {
    for (const auto& e : script.substeps) order.push_back(e.center);
  }
  return order;
}

PipelineResult run_pipeline(int n_points, const ChoiceScript* script) {
  if (n_points < 4) throw std::domain_error("pipeline needs at least four points");

  // Tower of the (n-1)-pointed base with the n-th point as the bullet.
  marks::MarkedSet m = marks::MarkedSet::standard(n_points - 1);
  tower::KeelTower tw = tower::build_tower(m);
  for (const auto* c : tw.all_centers())
    if (c->dim() >= 2) throw std::domain_error("unsupported: restriction beyond curves");

  ChoiceScript local;
  if (!script) {
    if (n_points == 5 || n_points == 6) local = paper_script(n_points);
    else local.auto_order = true;
    script = &local;
  }

  PipelineResult res;
  res.tw = tw;
  res.geom = TowerGeometry::build(tw, resolve_order(tw, *script));
  const auto& geom = res.geom;

  Collection cur;
  cur.floor = 0;
  if (n_points == 4) {
    cur = base_p1(geom.bases[0], "p");
    res.final = cur;
    return res;
  }
  if (n_points == 5) {
    // (F0,F1) ⊠ (G0,G1) on the quadric, classes in the (h, v) basis.
    auto line = [&](const std::string& g) {
      BasisPtr b1 = make_basis({g});
      return std::vector<DivisorClass>{make_class(b1, {-1}), make_class(b1, {0})};
    };
    cur = external_product(line("h"), line("v"), geom.bases[0], 1);
    // flat L-indexing matching the four product classes
    for (int i = 0; i < 4; ++i) {
      cur.objs[i].prov.l = i;
      cur.objs[i].prov.g = -1;
    }
  } else {
    auto ls = default_surface_collection(*geom.m05);
    BasisPtr b1 = make_basis({"H"});
    std::vector<DivisorClass> gs{make_class(b1, {-1}), make_class(b1, {0})};
    cur = external_product(ls, gs, geom.bases[0], geom.m05->form.basis->rank());
  }

  // Walk the substeps, following the script's ranges where given.
  std::vector<std::optional<std::pair<int, int>>> planned(geom.substeps.size());
  if (!script->auto_order && !script->substeps.empty()) {
    for (size_t t = 0; t < geom.substeps.size(); ++t)
      planned[t] = script->substeps[t].range;
  }
  for (size_t t = 0; t < geom.substeps.size(); ++t) {
    SubstepTrace trace;
    trace.substep = static_cast<int>(t);
    trace.center = geom.substeps[t]->name;
    trace.before = cur;
    trace.degrees = restriction_degrees(cur, geom, static_cast<int>(t));
    const bool point = !geom.center_class[t].has_value();
    trace.range = planned[t] ? *planned[t] : find_range(trace.degrees, point);
    trace.orlov = orlov_collection(cur, geom, static_cast<int>(t), trace.range);
    cur = apply_cor36(cur, geom, static_cast<int>(t), trace.range);
    trace.after = cur;
    res.trace.push_back(std::move(trace));
  }
  res.final = cur;
  return res;
}

}  // namespace keel::collections

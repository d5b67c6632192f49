#include "keel/intersect.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace keel::intersect {

using marks::LabelSet;
using marks::StablePartition;
using picard::generator_class;
using picard::make_basis;
using picard::make_class;
using picard::zero_class;

// ---------------------------------------------------------------- surfaces

ll SurfaceForm::dot(const DivisorClass& a, const DivisorClass& b) const {
  ll s = 0;
  const int n = basis->rank();
  for (int i = 0; i < n; ++i) {
    if (a.coeffs[i] == 0) continue;
    for (int j = 0; j < n; ++j) s += a.coeffs[i] * pair[i][j] * b.coeffs[j];
  }
  return s;
}

ll SurfaceForm::euler_char(const DivisorClass& d) const {
  ll num = dot(d, d) - dot(d, canonical);
  if (num % 2 != 0) throw std::logic_error("Riemann-Roch parity violated on a surface");
  return 1 + num / 2;
}

SurfaceForm blowup_transfer_point(const SurfaceForm& f, const std::string& gen_name) {
  SurfaceForm out;
  out.basis = picard::append_generator(f.basis, gen_name);
  const int n = out.basis->rank();
  out.pair.assign(n, std::vector<ll>(n, 0));
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) out.pair[i][j] = f.pair[i][j];
  out.pair[n - 1][n - 1] = -1;
  out.canonical = picard::pullback(f.canonical, out.basis);
  out.canonical.coeffs[n - 1] = 1;
  out.canonical.label = "K";
  return out;
}

// --------------------------------------------------------------- threefolds

static inline ll& tensor_at(std::vector<ll>& t, int n, int i, int j, int k) {
  return t[(static_cast<size_t>(i) * n + j) * n + k];
}
static inline ll tensor_get(const std::vector<ll>& t, int n, int i, int j, int k) {
  return t[(static_cast<size_t>(i) * n + j) * n + k];
}

ll ThreefoldForm::cube(const DivisorClass& a, const DivisorClass& b,
                       const DivisorClass& c) const {
  const int n = basis->rank();
  ll s = 0;
  for (int i = 0; i < n; ++i) {
    if (a.coeffs[i] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (b.coeffs[j] == 0) continue;
      const ll ab = a.coeffs[i] * b.coeffs[j];
      for (int k = 0; k < n; ++k)
        s += ab * tensor_get(triple, n, i, j, k) * c.coeffs[k];
    }
  }
  return s;
}

ll ThreefoldForm::euler_char(const DivisorClass& d) const {
  // chi(D) = D^3/6 + D^2(-K)/4 + T(D) + 1, assembled over the denominator 12.
  DivisorClass mk = canonical;
  for (auto& c : mk.coeffs) c = -c;
  ll d3 = cube(d, d, d);
  ll d2k = cube(d, d, mk);
  ll t = 0;
  for (size_t i = 0; i < d.coeffs.size(); ++i) t += d.coeffs[i] * t_times12[i];
  ll num = 2 * d3 + 3 * d2k + t;
  if (num % 12 != 0) throw std::logic_error("Riemann-Roch integrality violated on a 3-fold");
  return num / 12 + 1;
}

ThreefoldForm blowup_transfer_curve(const ThreefoldForm& f, const CurveClass& c,
                                    const std::string& gen_name) {
  ThreefoldForm out;
  out.basis = picard::append_generator(f.basis, gen_name);
  const int n = out.basis->rank();
  const int m = n - 1;
  if (static_cast<int>(c.degrees.size()) != m)
    throw std::invalid_argument("curve class does not live on the form's floor");
  out.triple.assign(static_cast<size_t>(n) * n * n, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        tensor_at(out.triple, n, i, j, k) = tensor_get(f.triple, m, i, j, k);
  // q*D . E^2 = -(D.C) and E^3 = -deg N; mixed q*D1.q*D2.E vanishes.
  for (int i = 0; i < m; ++i) {
    const ll v = -c.degrees[i];
    tensor_at(out.triple, n, i, m, m) = v;
    tensor_at(out.triple, n, m, i, m) = v;
    tensor_at(out.triple, n, m, m, i) = v;
  }
  tensor_at(out.triple, n, m, m, m) = -c.deg_normal;

  out.canonical = picard::pullback(f.canonical, out.basis);
  out.canonical.coeffs[m] = 1;
  out.canonical.label = "K";

  out.t_times12 = f.t_times12;
  // chi(O(E)) = 1 forces 12 T(E) = -2 E^3 - 3 E^2(-K) = 2 deg N + 6.
  out.t_times12.push_back(2 * c.deg_normal + 6);

  DivisorClass e = generator_class(out.basis, gen_name);
  if (out.euler_char(e) != 1)
    throw std::logic_error("blow-up transfer failed the chi(O(E)) = 1 check");
  if (out.euler_char(zero_class(out.basis)) != 1)
    throw std::logic_error("blow-up transfer failed the chi(O) = 1 check");
  return out;
}

// --------------------------------------------------------------- m05 model

M05Model m05_pairing() {
  M05Model m;
  m.form.basis = make_basis({"h", "v", "e1", "e2", "e3"});
  m.form.pair = {
      {0, 1, 0, 0, 0},
      {1, 0, 0, 0, 0},
      {0, 0, -1, 0, 0},
      {0, 0, 0, -1, 0},
      {0, 0, 0, 0, -1},
  };
  m.form.canonical = make_class(m.form.basis, {-2, -2, 1, 1, 1}, "K");

  marks::MarkedSet s5 = marks::MarkedSet::plain({1, 2, 3, 4, 5});
  auto parts = marks::stable_2partitions(s5);
  auto b = m.form.basis;
  auto cls = [&](std::vector<ll> v, std::string lab) { return make_class(b, std::move(v), std::move(lab)); };
  for (const auto& sp : parts) {
    const LabelSet& light = sp.part1;  // |part1 ∩ {1,2,3}| <= 1
    DivisorClass d = zero_class(b);
    if (light.size() == 3) {
      // {i,4,5}: the exceptional curve over the i-th blown-up point
      int i = light[0];
      d = generator_class(b, "e" + std::to_string(i));
    } else if (light == LabelSet{4, 5}) {
      d = cls({1, 1, -1, -1, -1}, "z");
    } else {
      int i = light[0];
      bool with4 = (light[1] == 4);
      d = with4 ? cls({1, 0, 0, 0, 0}, "") - generator_class(b, "e" + std::to_string(i))
                : cls({0, 1, 0, 0, 0}, "") - generator_class(b, "e" + std::to_string(i));
    }
    d.label = "D" + marks::to_string(sp);
    if (m.form.dot(d, d) != -1)
      throw std::logic_error("boundary dictionary produced a class of wrong self-intersection");
    m.boundary[sp.part1] = d;
    m.minus_one_classes.push_back(d);
  }
  // Pairing rule: distinct boundary classes meet once iff compatible.
  for (const auto& a : parts)
    for (const auto& c : parts) {
      if (a.part1 == c.part1) continue;
      ll want = marks::compatible(a, c) ? 1 : 0;
      if (m.form.dot(m.boundary.at(a.part1), m.boundary.at(c.part1)) != want)
        throw std::logic_error("boundary dictionary violates the compatibility pairing rule");
    }
  return m;
}

DivisorClass M05Model::boundary_class(const StablePartition& sigma) const {
  StablePartition s = sigma;
  if (!s.ordered) s = marks::order_parts(s, {1, 2, 3});
  auto it = boundary.find(s.part1);
  if (it == boundary.end()) throw std::invalid_argument("not a boundary partition of the 5-point surface");
  return it->second;
}

std::tuple<ll, ll, ll> M05Model::cohomology_dims(const DivisorClass& d) const {
  const DivisorClass h = generator_class(form.basis, "h");
  const DivisorClass v = generator_class(form.basis, "v");
  auto h0 = [&](DivisorClass x) -> ll {
    for (int iter = 0; iter < 1000; ++iter) {
      if (form.dot(x, h) < 0 || form.dot(x, v) < 0) return 0;
      const DivisorClass* neg = nullptr;
      for (const auto& l : minus_one_classes)
        if (form.dot(x, l) < 0) { neg = &l; break; }
      if (!neg) return form.euler_char(x);  // nef on a del Pezzo surface
      x -= *neg;
    }
    throw std::logic_error("(-1)-curve reduction did not terminate");
  };
  ll a0 = h0(d);
  ll a2 = h0(form.canonical - d);  // Serre duality
  ll a1 = a0 + a2 - form.euler_char(d);
  if (a1 < 0) throw std::logic_error("cohomology oracle produced a negative h1");
  return {a0, a1, a2};
}

SurfaceForm p2_blowup4_form() {
  SurfaceForm f;
  f.basis = make_basis({"l", "e1", "e2", "e3", "e4"});
  f.pair = {
      {1, 0, 0, 0, 0},
      {0, -1, 0, 0, 0},
      {0, 0, -1, 0, 0},
      {0, 0, 0, -1, 0},
      {0, 0, 0, 0, -1},
  };
  f.canonical = make_class(f.basis, {-3, 1, 1, 1, 1}, "K");
  return f;
}

// --------------------------------------------------------------- incidence

bool IncidenceTable::meets(const std::string& a, const std::string& b) const {
  for (const auto& e : nonempty)
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return true;
  return false;
}

IncidenceTable predict_incidence(const tower::KeelTower& t) {
  IncidenceTable table;
  auto centers = t.all_centers();
  const bool six = (t.n() == 5);  // the 6-pointed space
  for (size_t i = 0; i < centers.size(); ++i)
    for (size_t j = i + 1; j < centers.size(); ++j) {
      const auto& a = *centers[i];
      const auto& b = *centers[j];
      if (!marks::compatible(a.sigma_bar, b.sigma_bar)) continue;
      std::string curve;
      if (six && a.height == 2 && b.height == 3) {
        // height-2 partner i meets E_{2i+2}, E_{2i+3} and E_10
        int ia = std::stoi(a.name.substr(1));
        int ib = std::stoi(b.name.substr(1));
        if (ib == 10) curve = "R" + std::to_string(ia);
        else if (ib == 2 * ia + 2) curve = "P" + std::to_string(ia);
        else if (ib == 2 * ia + 3) curve = "Q" + std::to_string(ia);
        else curve = "C(" + a.name + "," + b.name + ")";
      } else {
        curve = "C(" + a.name + "," + b.name + ")";
      }
      table.nonempty.push_back({a.name, b.name, curve});
    }
  return table;
}

// ----------------------------------------------------------- tower geometry

static ThreefoldForm product_threefold(const M05Model& m05) {
  ThreefoldForm f;
  std::vector<std::string> names = m05.form.basis->names;
  names.push_back("H");
  f.basis = make_basis(names);
  const int n = f.basis->rank();
  const int s = n - 1;  // surface rank
  f.triple.assign(static_cast<size_t>(n) * n * n, 0);
  // Products with exactly one fiber-class factor reduce to the surface pairing.
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      const ll p = m05.form.pair[i][j];
      tensor_at(f.triple, n, i, j, s) = p;
      tensor_at(f.triple, n, i, s, j) = p;
      tensor_at(f.triple, n, s, i, j) = p;
    }
  f.canonical = picard::pullback(m05.form.canonical, f.basis);
  f.canonical.coeffs[s] = -2;
  f.canonical.label = "K";
  // T on a generator g: 12 T(g) = 12 (chi(g) - 1) - 2 g^3 - 3 g^2(-K).
  DivisorClass mk = f.canonical;
  for (auto& c : mk.coeffs) c = -c;
  f.t_times12.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    DivisorClass g = zero_class(f.basis);
    g.coeffs[i] = 1;
    DivisorClass gs = zero_class(m05.form.basis);
    ll gh = 0;
    if (i < s) gs.coeffs[i] = 1; else gh = 1;
    ll chi = m05.form.euler_char(gs) * (gh + 1);
    f.t_times12[i] = 12 * (chi - 1) - 2 * f.cube(g, g, g) - 3 * f.cube(g, g, mk);
  }
  return f;
}

TowerGeometry TowerGeometry::build(const tower::KeelTower& t) {
  std::vector<std::string> order;
  for (const auto* c : t.all_centers()) order.push_back(c->name);
  return build(t, order);
}

TowerGeometry TowerGeometry::build(const tower::KeelTower& t,
                                   const std::vector<std::string>& order) {
  TowerGeometry g;
  g.tw = t;
  const int n = t.n();
  if (n > 5)
    throw std::domain_error("unsupported: restriction beyond curves");

  // Validate the order: every center once, steps in increasing height.
  {
    std::vector<const tower::CenterDescriptor*> seq;
    for (const auto& name : order) seq.push_back(&g.tw.center(name));
    if (seq.size() != static_cast<size_t>(g.tw.center_count()))
      throw std::invalid_argument("substep order must list every center exactly once");
    int last_height = 2;
    std::vector<std::string> seen;
    for (const auto* c : seq) {
      if (c->height < last_height)
        throw std::invalid_argument("substep order may not interleave steps");
      last_height = c->height;
      if (std::find(seen.begin(), seen.end(), c->name) != seen.end())
        throw std::invalid_argument("substep order repeats a center");
      seen.push_back(c->name);
    }
    g.substeps = std::move(seq);
  }

  // Base floor.
  if (n == 3) {
    g.bases.push_back(make_basis({"p"}));
    g.floor_dim.push_back(1);
    return g;
  }
  if (n == 4) {
    SurfaceForm base;
    base.basis = make_basis({"h", "v"});
    base.pair = {{0, 1}, {1, 0}};
    base.canonical = make_class(base.basis, {-2, -2}, "K");
    g.surfaces.push_back(base);
    g.bases.push_back(base.basis);
    g.floor_dim.push_back(2);
  } else {
    g.m05 = m05_pairing();
    ThreefoldForm base = product_threefold(*g.m05);
    g.threefolds.push_back(base);
    g.bases.push_back(base.basis);
    g.floor_dim.push_back(3);
  }

  for (size_t step = 0; step < g.substeps.size(); ++step) {
    const auto& c = *g.substeps[step];
    if (g.floor_dim.back() == 2) {
      if (c.dim() != 0) throw std::logic_error("surface floors expect point centers");
      g.center_class.emplace_back(std::nullopt);
      SurfaceForm next = blowup_transfer_point(g.surfaces.back(), c.name);
      g.surfaces.push_back(next);
      g.bases.push_back(next.basis);
      g.floor_dim.push_back(2);
      continue;
    }
    if (c.dim() != 1) throw std::domain_error("unsupported: restriction beyond curves");
    // Image of the center in the base product: the boundary curve of its
    // partition, crossed with a point of the line factor unless the light
    // part misses P entirely, in which case the second coordinate moves with
    // degree one (the node position traces the cross-ratio).
    StablePartition sigma = marks::delete_bullet(c.sigma_bar, g.tw.base);
    sigma = marks::order_parts(sigma, g.tw.base.p_subset());
    DivisorClass img = g.m05->boundary_class(sigma);
    ll hdeg = marks::set_intersection(sigma.part1, g.tw.base.p_subset()).empty() ? 1 : 0;

    const ThreefoldForm& cur = g.threefolds.back();
    CurveClass cc;
    cc.center_name = c.name;
    cc.degrees.resize(cur.basis->rank(), 0);
    const int srank = g.m05->form.basis->rank();
    for (int i = 0; i < srank; ++i) {
      DivisorClass gi = zero_class(g.m05->form.basis);
      gi.coeffs[i] = 1;
      cc.degrees[i] = g.m05->form.dot(img, gi);
    }
    cc.degrees[srank] = hdeg;
    // Earlier blow-ups: one transversal meeting per compatible center.
    for (size_t u = 0; u < step; ++u) {
      const auto& prev = *g.substeps[u];
      bool meets = marks::compatible(c.sigma_bar, prev.sigma_bar) &&
                   !c.sigma_bar.same_partition(prev.sigma_bar);
      cc.degrees[srank + 1 + u] = meets ? 1 : 0;
    }
    ll kc = 0;
    for (size_t i = 0; i < cc.degrees.size(); ++i)
      kc += cur.canonical.coeffs[i] * cc.degrees[i];
    cc.deg_normal = -2 - kc;  // adjunction for a rational curve

    g.center_class.emplace_back(cc);
    ThreefoldForm next = blowup_transfer_curve(cur, cc, c.name);
    g.threefolds.push_back(next);
    g.bases.push_back(next.basis);
    g.floor_dim.push_back(3);
  }
  return g;
}

DivisorClass TowerGeometry::canonical_class(int floor) const {
  if (floor_dim[floor] == 1) return zero_class(bases[floor]) - 2 * generator_class(bases[floor], "p");
  if (floor_dim[floor] == 2) return surfaces[floor].canonical;
  return threefolds[floor].canonical;
}

ll TowerGeometry::base_product_chi(const DivisorClass& d) const {
  if (floor_dim.front() == 1) return d.coeffs[0] + 1;
  if (floor_dim.front() == 2) {
    // quadric: chi(O(a,b)) = (a+1)(b+1)
    return (d.coeffs[0] + 1) * (d.coeffs[1] + 1);
  }
  DivisorClass s = zero_class(m05->form.basis);
  for (int i = 0; i < m05->form.basis->rank(); ++i) s.coeffs[i] = d.coeffs[i];
  return m05->form.euler_char(s) * (d.coeffs[m05->form.basis->rank()] + 1);
}

ll TowerGeometry::euler_char(int floor, const DivisorClass& d) const {
  if (floor_dim[floor] == 1) return d.coeffs[0] + 1;
  if (floor_dim[floor] == 2) return surfaces[floor].euler_char(d);
  return threefolds[floor].euler_char(d);
}

ll TowerGeometry::euler_char_descent(int floor, const DivisorClass& d) const {
  std::vector<ll> coeffs = d.coeffs;
  ll correction = 0;
  for (int f = floor; f >= 1; --f) {
    const ll c = coeffs.back();
    coeffs.pop_back();
    if (c == 0) continue;
    if (c == 1) continue;  // R(pi) of the relative O(-1) vanishes
    if (c != -1)
      throw std::domain_error("descent evaluator supports exceptional coefficients in {-1,0,1}");
    // chi(q*D - E) = chi(D) - (deg(D|_C) + 1)
    ll deg = 0;
    if (center_class[f - 1]) {
      const auto& cc = *center_class[f - 1];
      for (size_t i = 0; i < coeffs.size(); ++i) deg += coeffs[i] * cc.degrees[i];
    }
    correction -= deg + 1;
  }
  DivisorClass base = zero_class(bases[0]);
  base.coeffs = coeffs;
  return base_product_chi(base) + correction;
}

ll TowerGeometry::restrict_degree(int substep, const DivisorClass& d) const {
  if (substep < 0 || substep >= static_cast<int>(substeps.size()))
    throw std::invalid_argument("substep out of range");
  if (static_cast<int>(d.coeffs.size()) != bases[substep]->rank())
    throw std::invalid_argument("class does not live on the center's floor");
  if (!center_class[substep]) return 0;  // Pic of a point
  const auto& cc = *center_class[substep];
  ll deg = 0;
  for (size_t i = 0; i < d.coeffs.size(); ++i) deg += d.coeffs[i] * cc.degrees[i];
  return deg;
}

}  // namespace keel::intersect

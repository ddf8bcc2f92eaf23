#include "equip/kan.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace equip {

namespace {

int rank_in(std::span<const MorId> hom, MorId m) {
  const auto it = std::find(hom.begin(), hom.end(), m);
  return it == hom.end() ? -1 : static_cast<int>(it - hom.begin());
}

/// The unique u : k.apex → o.apex with u∘k.legs = o.legs, or kNone (none or several).
MorId factor_through(const FinCategory& c, const Cocone& k, const Cocone& o) {
  MorId found = kNone;
  int n = 0;
  for (MorId u : c.hom(k.apex, o.apex)) {
    bool ok = true;
    for (std::size_t i = 0; ok && i < k.legs.size(); ++i) ok = c.compose(u, k.legs[i]) == o.legs[i];
    if (ok) {
      ++n;
      found = u;
    }
  }
  return n == 1 ? found : kNone;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Cocone> enumerate_cocones(const Functor& f, const Bounds& bounds) {
  const FinCategory& i = f.source();
  const FinCategory& c = f.target();
  const int n = i.num_objects();
  std::vector<std::vector<MorId>> by_last(n);
  for (MorId m = 0; m < i.num_morphisms(); ++m) by_last[std::max(i.src(m), i.dst(m))].push_back(m);
  std::vector<Cocone> out;
  Cocone k;
  k.legs.assign(n, kNone);
  std::function<void(int)> rec = [&](int a) {
    if (a == n) {
      if (out.size() >= bounds.max_cocones) throw BoundExceeded("max-cocones", bounds.max_cocones);
      out.push_back(k);
      return;
    }
    for (MorId x : c.hom(f(a), k.apex)) {
      k.legs[a] = x;
      bool ok = true;
      for (MorId m : by_last[a]) {
        if (c.compose(k.legs[i.dst(m)], f.map(m)) != k.legs[i.src(m)]) {
          ok = false;
          break;
        }
      }
      if (ok) rec(a + 1);
    }
    k.legs[a] = kNone;
  };
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    k.apex = o;
    rec(0);
  }
  return out;
}

ColimitCertificate certify_cocone(const Functor& f, const Cocone& k, const Bounds& bounds) {
  ColimitCertificate cert;
  cert.universal = true;
  for (const Cocone& o : enumerate_cocones(f, bounds)) {
    ++cert.cocones;
    if (factor_through(f.target(), k, o) == kNone) {
      cert.universal = false;
      break;
    }
  }
  return cert;
}

std::optional<Colimit> colimit(const Functor& f, const Bounds& bounds) {
  const Slice s = coslice(f, bounds);
  const FinCategory& sc = *s.category;
  std::optional<Cocone> initial;
  for (ObjId o = 0; o < sc.num_objects() && !initial; ++o) {
    bool ok = true;
    for (ObjId t = 0; ok && t < sc.num_objects(); ++t) ok = sc.hom(o, t).size() == 1;
    if (ok) initial = Cocone{s.apex[o], s.legs[o].components};
  }
  std::optional<Cocone> brute;
  for (const Cocone& k : enumerate_cocones(f, bounds)) {
    if (certify_cocone(f, k, bounds).universal) {
      brute = k;
      break;
    }
  }
  if (initial.has_value() != brute.has_value()) throw Error("colimit: coslice search and universal property disagree");
  if (!initial) return std::nullopt;
  Colimit out{*initial, certify_cocone(f, *initial, bounds)};
  if (!out.certificate.universal) throw Error("colimit: initial cocone is not universal");
  return out;
}

// ---------------------------------------------------------------------------

KanExtension pointwise_lke(const Functor& f, const Functor& w, const Bounds& bounds) {
  const CatRef& jr = w.target_ref();
  const FinCategory& j = *jr;
  const FinCategory& c = f.target();
  KanExtension out;
  std::vector<CommaCategory> commas;
  std::vector<Cocone> colims;
  for (ObjId g = 0; g < j.num_objects(); ++g) {
    commas.push_back(comma(w, object_functor(jr, g)));
    const auto col = colimit(compose(f, commas.back().proj_a), bounds);
    if (!col) {
      out.failing = g;
      out.witness = (commas.back().objects.empty() ? "empty comma at " : "no colimit over the comma at ") +
                    j.object_name(g);
      return out;
    }
    colims.push_back(col->cocone);
  }
  auto comma_index = [&](ObjId g, ObjId a, MorId theta) {
    const auto& objs = commas[g].objects;
    for (std::size_t k = 0; k < objs.size(); ++k) {
      if (objs[k].a == a && objs[k].theta == theta) return static_cast<int>(k);
    }
    throw Error("lke: comma object not found");
  };
  std::vector<ObjId> objs;
  for (const Cocone& k : colims) objs.push_back(k.apex);
  std::vector<MorId> mors;
  for (MorId h = 0; h < j.num_morphisms(); ++h) {
    const ObjId g = j.src(h);
    const ObjId g2 = j.dst(h);
    // The cocone over (w ↓ g) into g(g2) through h.
    Cocone via{colims[g2].apex, {}};
    for (const auto& o : commas[g].objects) via.legs.push_back(colims[g2].legs[comma_index(g2, o.a, j.compose(h, o.theta))]);
    const MorId m = factor_through(c, colims[g], via);
    if (m == kNone) throw Error("lke: comparison map is not unique");
    mors.push_back(m);
  }
  Functor ext(jr, f.target_ref(), std::move(objs), std::move(mors));
  std::vector<MorId> unit;
  for (ObjId a = 0; a < f.source().num_objects(); ++a) {
    const ObjId g = w(a);
    unit.push_back(colims[g].legs[comma_index(g, a, j.id(g))]);
  }
  out.unit = NatTransformation{f, compose(ext, w), std::move(unit)};
  out.extension = std::move(ext);
  return out;
}

bool check_lke(const Functor& f, const Functor& w, const Functor& g, const NatTransformation& unit,
               const Bounds& bounds) {
  for (const Functor& h : enumerate_functors(w.target_ref(), f.target_ref(), bounds)) {
    const Functor hw = compose(h, w);
    std::set<std::vector<MorId>> images;
    const auto sigmas = enumerate_transformations(g, h, bounds);
    for (const auto& s : sigmas) images.insert(vertical_compose(whisker_right(s, w), unit).components);
    if (images.size() != sigmas.size()) return false;
    std::set<std::vector<MorId>> targets;
    for (const auto& t : enumerate_transformations(f, hw, bounds)) targets.insert(t.components);
    if (images != targets) return false;
  }
  return true;
}

bool check_pointwise_lke(const Functor& f, const Functor& w, const Functor& g, const NatTransformation& unit,
                         const Bounds& bounds) {
  const FinCategory& j = w.target();
  const FinCategory& c = f.target();
  for (ObjId t = 0; t < j.num_objects(); ++t) {
    const FinSetDiagram weight = hom_weight(w, t);
    WeightedCocone k{g(t), {}};
    for (ObjId a = 0; a < f.source().num_objects(); ++a) {
      k.legs.emplace_back();
      for (MorId theta : j.hom(w(a), t)) k.legs.back().push_back(c.compose(g.map(theta), unit.components[a]));
    }
    if (!is_universal_weighted(weight, f, k, bounds)) return false;
  }
  return true;
}

namespace {

KanExtension search_lke(const Functor& f, const Functor& w, const Bounds& bounds, bool pointwise) {
  KanExtension out;
  for (const Functor& g : enumerate_functors(w.target_ref(), f.target_ref(), bounds)) {
    for (auto& eta : enumerate_transformations(f, compose(g, w), bounds)) {
      if (pointwise ? check_pointwise_lke(f, w, g, eta, bounds) : check_lke(f, w, g, eta, bounds)) {
        out.extension = g;
        out.unit = std::move(eta);
        return out;
      }
    }
  }
  out.witness = "no left Kan extension";
  return out;
}

}  // namespace

KanExtension brute_force_lke(const Functor& f, const Functor& w, const Bounds& bounds) {
  return search_lke(f, w, bounds, true);
}

KanExtension brute_force_global_lke(const Functor& f, const Functor& w, const Bounds& bounds) {
  return search_lke(f, w, bounds, false);
}

bool same_lke(const KanExtension& a, const KanExtension& b, const Functor& w, const Bounds& bounds) {
  if (!a.extension || !b.extension) return !a.extension && !b.extension;
  for (const auto& s : enumerate_transformations(*a.extension, *b.extension, bounds)) {
    if (is_natural_isomorphism(s) &&
        vertical_compose(whisker_right(s, w), *a.unit).components == b.unit->components) {
      return true;
    }
  }
  return false;
}

RestrictionAdjoint restriction_adjoint(const Functor& w, const CatRef& c, const Bounds& bounds) {
  RestrictionAdjoint out;
  out.from = functor_category(w.source_ref(), c, bounds);
  out.to = functor_category(w.target_ref(), c, bounds);
  const FunctorCategory& fi = out.from;
  const FunctorCategory& fj = out.to;
  auto morphism_index = [](const FunctorCategory& fc, ObjId s, ObjId t, const std::vector<MorId>& comps) {
    for (MorId m : fc.category->hom(s, t)) {
      if (fc.morphisms[m].components == comps) return m;
    }
    throw Error("restriction adjoint: transformation not found");
  };

  // w^*
  std::vector<ObjId> ro;
  for (const auto& h : fj.objects) ro.push_back(fi.index_of(compose(h, w)));
  std::vector<MorId> rm;
  for (MorId m = 0; m < fj.category->num_morphisms(); ++m) {
    const auto& t = fj.morphisms[m];
    rm.push_back(morphism_index(fi, ro[fj.category->src(m)], ro[fj.category->dst(m)], whisker_right(t, w).components));
  }
  out.restrict = Functor(fj.category, fi.category, ro, rm);

  // w_! objectwise
  std::vector<ObjId> eo;
  std::vector<NatTransformation> units;
  for (std::size_t k = 0; k < fi.objects.size(); ++k) {
    const auto lke = pointwise_lke(fi.objects[k], w, bounds);
    if (!lke) {
      out.failing = static_cast<ObjId>(k);
      out.witness = "diagram " + std::to_string(k) + ": " + lke.witness;
      return out;
    }
    eo.push_back(fj.index_of(*lke.extension));
    units.push_back(*lke.unit);
  }
  // σ : g ⇒ g' with σw∘η = η'∘τ.
  auto induced = [&](ObjId a, ObjId b, const std::vector<MorId>& target) {
    for (MorId m : fj.category->hom(eo[a], eo[b])) {
      if (vertical_compose(whisker_right(fj.morphisms[m], w), units[a]).components == target) return m;
    }
    return kNone;
  };
  std::vector<MorId> em;
  for (MorId m = 0; m < fi.category->num_morphisms(); ++m) {
    const ObjId a = fi.category->src(m);
    const ObjId b = fi.category->dst(m);
    const MorId s = induced(a, b, vertical_compose(units[b], fi.morphisms[m]).components);
    if (s == kNone) throw Error("restriction adjoint: no induced transformation");
    em.push_back(s);
  }
  out.extend = Functor(fi.category, fj.category, eo, em);
  out.exists = true;

  // Unit f → w^* w_! f and counit w_! w^* h → h as morphisms of the functor categories.
  const FinCategory& ci = *fi.category;
  const FinCategory& cj = *fj.category;
  std::vector<MorId> eta;
  for (std::size_t k = 0; k < fi.objects.size(); ++k) {
    eta.push_back(morphism_index(fi, static_cast<ObjId>(k), ro[eo[k]], units[k].components));
  }
  std::vector<MorId> eps;
  for (ObjId h = 0; h < cj.num_objects(); ++h) {
    const ObjId hw = ro[h];
    MorId found = kNone;
    for (MorId m : cj.hom(eo[hw], h)) {
      if (vertical_compose(whisker_right(fj.morphisms[m], w), units[hw]).components ==
          identity_transformation(fi.objects[hw]).components) {
        found = m;
        break;
      }
    }
    if (found == kNone) throw Error("restriction adjoint: no counit");
    eps.push_back(found);
  }
  out.triangles = true;
  for (ObjId k = 0; k < ci.num_objects(); ++k) {
    // ε_{w_! f} ∘ w_!(η_f) = id
    if (!cj.is_identity(cj.compose(eps[eo[k]], em[eta[k]]))) out.triangles = false;
  }
  for (ObjId h = 0; h < cj.num_objects(); ++h) {
    // w^*(ε_h) ∘ η_{w^* h} = id
    if (!ci.is_identity(ci.compose(rm[eps[h]], eta[ro[h]]))) out.triangles = false;
  }
  out.fully_faithful = is_fully_faithful(*out.extend);
  return out;
}

// ---------------------------------------------------------------------------

ValidationReport check_square(const LaxSquare& s) {
  ValidationReport r;
  auto fail = [&r](std::string m) {
    r.valid = false;
    r.violations.push_back(std::move(m));
  };
  if (s.top.source_ref() != s.left.source_ref()) fail("top and left have different sources");
  if (s.top.target_ref() != s.right.source_ref()) fail("right does not start at the target of top");
  if (s.left.target_ref() != s.bottom.source_ref()) fail("bottom does not start at the target of left");
  if (s.right.target_ref() != s.bottom.target_ref()) fail("right and bottom have different targets");
  if (!r.valid) return r;
  if (!(s.cell.from == compose(s.right, s.top)) || !(s.cell.to == compose(s.bottom, s.left))) {
    fail("cell frame");
    return r;
  }
  if (!check_nat_transformation(s.cell).valid) fail("cell is not natural");
  return r;
}

LaxSquare commuting_square(const Functor& top, const Functor& left, const Functor& right, const Functor& bottom) {
  const Functor rt = compose(right, top);
  if (!(rt == compose(bottom, left))) throw Error("square does not commute");
  return LaxSquare{top, left, right, bottom, identity_transformation(rt)};
}

ExactSquareVerdict is_exact_square(const LaxSquare& s) {
  ExactSquareVerdict out;
  const Span span{s.top.source_ref(), s.left, s.top};
  const Extension c = classify(span);
  const FinCategory& d = s.right.target();
  auto hom_d = share(hom_profunctor(s.right.target_ref()));
  const auto r = restrict_prof(s.right, hom_d, s.bottom);
  const FinCategory& cc = s.left.target();
  const FinCategory& bb = s.top.target();
  out.comparison = ProfCell{c.proarrow, r.proarrow, identity_functor(s.left.target_ref()),
                            identity_functor(s.top.target_ref()), {}};
  out.exact = true;
  for (ObjId b = 0; b < bb.num_objects(); ++b) {
    for (ObjId a = 0; a < cc.num_objects(); ++a) {
      std::vector<int> v;
      for (int k = 0; k < c.proarrow->size(b, a); ++k) {
        const SpanElement el = classify_element(span, c, b, a, k);
        const MorId m = d.compose(s.bottom.map(el.v), d.compose(s.cell.components[el.e], s.right.map(el.u)));
        v.push_back(rank_in(d.hom(s.right(b), s.bottom(a)), m));
      }
      const std::set<int> distinct(v.begin(), v.end());
      if (out.exact && (distinct.size() != v.size() || static_cast<int>(v.size()) != r.proarrow->size(b, a))) {
        out.exact = false;
        out.b = b;
        out.c = a;
        out.witness = distinct.size() != v.size() ? "not injective" : "not surjective";
      }
      out.comparison.components.push_back(std::move(v));
    }
  }
  return out;
}

LaxSquare identity_square(const CatRef& c) {
  const Functor id = identity_functor(c);
  return commuting_square(id, id, id, id);
}

LaxSquare comma_square(const Functor& bottom, const Functor& right) {
  const CommaCategory k = comma(right, bottom);
  return LaxSquare{k.proj_a, k.proj_b, right, bottom, comma_transformation(k, right, bottom)};
}

LaxSquare cocomma_square(const Span& s) {
  const Extension c = classify(s);
  const Collage col = cotabulate(c.proarrow);
  const FinCategory& e = *s.apex;
  const FinCategory& p = *col.category;
  std::vector<MorId> cell;
  for (ObjId o = 0; o < e.num_objects(); ++o) {
    const int k = c.cocartesian.apply(o, o, rank_in(e.hom(o, o), e.id(o)));
    cell.push_back(p.hom(col.j(s.q(o)), col.i(s.p(o)))[k]);
  }
  NatTransformation t{compose(col.j, s.q), compose(col.i, s.p), std::move(cell)};
  return LaxSquare{s.q, s.p, col.j, col.i, std::move(t)};
}

std::vector<std::pair<Functor, Functor>> rectangle_family(const Functor& f, const std::vector<NamedCategory>& tier,
                                                          const Bounds& bounds) {
  std::vector<std::pair<Functor, Functor>> out;
  for (const auto& [jn, j] : tier) {
    for (const auto& k : enumerate_functors(j, f.target_ref(), bounds)) {
      for (const auto& [in, i] : tier) {
        for (auto& w : enumerate_functors(i, j, bounds)) out.emplace_back(std::move(w), k);
      }
    }
  }
  return out;
}

namespace {

ProperReport check_rectangles(const Functor& f, const std::vector<std::pair<Functor, Functor>>& family, bool proper) {
  ProperReport out;
  for (const auto& [w, k] : family) {
    const auto jp = pullback(k, f);           // j' with j' → j and j' → x
    const auto ip = pullback(w, jp.first);    // i' with i' → i and i' → j'
    LaxSquare sq = proper ? commuting_square(ip.second, ip.first, jp.first, w)
                          : commuting_square(ip.first, ip.second, w, jp.first);
    ++out.rectangles;
    const auto v = is_exact_square(sq);
    if (!v.exact) {
      out.holds = false;
      out.witness = v.witness + " at (" + sq.top.target().object_name(v.b) + ", " +
                    sq.left.target().object_name(v.c) + ")";
      out.failing = Rectangle{w, k, std::move(sq)};
      return out;
    }
  }
  return out;
}

}  // namespace

ProperReport check_proper(const Functor& f, const std::vector<std::pair<Functor, Functor>>& family) {
  return check_rectangles(f, family, true);
}

ProperReport check_smooth(const Functor& f, const std::vector<std::pair<Functor, Functor>>& family) {
  return check_rectangles(f, family, false);
}

// ---------------------------------------------------------------------------

std::vector<WeightedCocone> enumerate_weighted_cocones(const FinSetDiagram& weight, const Functor& f,
                                                       const Bounds& bounds) {
  const FinCategory& i = f.source();
  const FinCategory& c = f.target();
  // Slots (i, x) in order; a constraint for m : a → a' and x' ∈ W(a') reads
  // leg(a', x')∘f(m) = leg(a, W(m) x') and is checked at its later slot.
  std::vector<std::pair<ObjId, int>> slots;
  std::vector<int> offset(i.num_objects() + 1, 0);
  for (ObjId a = 0; a < i.num_objects(); ++a) {
    offset[a + 1] = offset[a] + weight.sizes[a];
    for (int x = 0; x < weight.sizes[a]; ++x) slots.emplace_back(a, x);
  }
  struct Constraint {
    int later, hi, lo;
    MorId m;
  };
  std::vector<std::vector<Constraint>> checks(slots.size());
  for (MorId m = 0; m < i.num_morphisms(); ++m) {
    const ObjId a = i.src(m);
    const ObjId a2 = i.dst(m);
    for (int x2 = 0; x2 < weight.sizes[a2]; ++x2) {
      const int hi = offset[a2] + x2;
      const int lo = offset[a] + weight.maps[m][x2];
      checks[std::max(hi, lo)].push_back({std::max(hi, lo), hi, lo, m});
    }
  }
  std::vector<WeightedCocone> out;
  std::vector<MorId> legs(slots.size(), kNone);
  ObjId apex = kNone;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == slots.size()) {
      if (out.size() >= bounds.max_cocones) throw BoundExceeded("max-cocones", bounds.max_cocones);
      WeightedCocone w{apex, std::vector<std::vector<MorId>>(i.num_objects())};
      for (std::size_t s = 0; s < slots.size(); ++s) w.legs[slots[s].first].push_back(legs[s]);
      out.push_back(std::move(w));
      return;
    }
    for (MorId x : c.hom(f(slots[k].first), apex)) {
      legs[k] = x;
      bool ok = true;
      for (const Constraint& q : checks[k]) {
        if (c.compose(legs[q.hi], f.map(q.m)) != legs[q.lo]) {
          ok = false;
          break;
        }
      }
      if (ok) rec(k + 1);
    }
    legs[k] = kNone;
  };
  for (apex = 0; apex < c.num_objects(); ++apex) rec(0);
  return out;
}

FinSetDiagram hom_weight(const Functor& w, ObjId t) {
  const FinCategory& i = w.source();
  const FinCategory& j = w.target();
  FinSetDiagram d{share(opposite(i)), {}, {}};
  for (ObjId a = 0; a < i.num_objects(); ++a) d.sizes.push_back(static_cast<int>(j.hom(w(a), t).size()));
  for (MorId m = 0; m < i.num_morphisms(); ++m) {
    std::vector<int> map;
    for (MorId theta : j.hom(w(i.dst(m)), t)) map.push_back(rank_in(j.hom(w(i.src(m)), t), j.compose(theta, w.map(m))));
    d.maps.push_back(std::move(map));
  }
  return d;
}

namespace {

bool factors_once(const FinCategory& c, const WeightedCocone& k, const WeightedCocone& o) {
  int n = 0;
  for (MorId u : c.hom(k.apex, o.apex)) {
    bool ok = true;
    for (std::size_t a = 0; ok && a < k.legs.size(); ++a) {
      for (std::size_t x = 0; ok && x < k.legs[a].size(); ++x) ok = c.compose(u, k.legs[a][x]) == o.legs[a][x];
    }
    n += ok;
  }
  return n == 1;
}

}  // namespace

bool is_universal_weighted(const FinSetDiagram& weight, const Functor& f, const WeightedCocone& k,
                           const Bounds& bounds) {
  for (const auto& o : enumerate_weighted_cocones(weight, f, bounds)) {
    if (!factors_once(f.target(), k, o)) return false;
  }
  return true;
}

std::optional<WeightedCocone> weighted_colimit(const FinSetDiagram& weight, const Functor& f, const Bounds& bounds) {
  const auto all = enumerate_weighted_cocones(weight, f, bounds);
  for (const auto& k : all) {
    if (std::all_of(all.begin(), all.end(), [&](const auto& o) { return factors_once(f.target(), k, o); })) return k;
  }
  return std::nullopt;
}

ElementsCategory presheaf_elements(const FinSetDiagram& weight, const CatRef& ir) {
  const FinCategory& i = *ir;
  ElementsCategory out;
  std::vector<std::string> onames;
  std::map<std::pair<ObjId, int>, ObjId> where;
  for (ObjId a = 0; a < i.num_objects(); ++a) {
    for (int x = 0; x < weight.sizes[a]; ++x) {
      where[{a, x}] = static_cast<ObjId>(out.elements.size());
      out.elements.emplace_back(a, x);
      onames.push_back(i.object_name(a) + "." + std::to_string(x));
    }
  }
  // (a, x) → (a', x') over m : a → a' with W(m) x' = x.
  std::vector<Arrow> arrows;
  std::vector<std::string> mnames;
  std::vector<MorId> under;
  std::vector<MorId> ids(out.elements.size(), kNone);
  std::map<std::pair<ObjId, MorId>, MorId> index;  // (target element, m)
  for (MorId m = 0; m < i.num_morphisms(); ++m) {
    const ObjId a = i.src(m);
    const ObjId a2 = i.dst(m);
    for (int x2 = 0; x2 < weight.sizes[a2]; ++x2) {
      const ObjId s = where.at({a, weight.maps[m][x2]});
      const ObjId t = where.at({a2, x2});
      const MorId id = static_cast<MorId>(arrows.size());
      if (i.is_identity(m)) ids[s] = id;
      index[{t, m}] = id;
      arrows.push_back({s, t});
      mnames.push_back(i.morphism_name(m) + "@" + std::to_string(x2));
      under.push_back(m);
    }
  }
  out.category = share(assemble_category(onames, mnames, arrows, ids, [&](MorId g, MorId h) {
    return index.at({arrows[g].dst, i.compose(under[g], under[h])});
  }));
  std::vector<ObjId> po;
  for (const auto& e : out.elements) po.push_back(e.first);
  out.projection = Functor(out.category, ir, std::move(po), std::move(under));
  return out;
}

}  // namespace equip

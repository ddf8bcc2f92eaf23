#include "equip/fibration.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "equip/detail/search.hpp"
#include "equip/detail/union_find.hpp"

namespace equip {

namespace {

std::vector<int> ranks(const FinCategory& c) {
  std::vector<int> r(c.num_morphisms(), 0);
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    for (ObjId b = 0; b < c.num_objects(); ++b) {
      const auto& h = c.hom(a, b);
      for (std::size_t i = 0; i < h.size(); ++i) r[h[i]] = static_cast<int>(i);
    }
  }
  return r;
}

std::vector<int> functor_key(const Functor& f) {
  std::vector<int> k = f.object_map();
  k.push_back(-2);
  k.insert(k.end(), f.morphism_map().begin(), f.morphism_map().end());
  return k;
}

MorId find_morphism_over(const FinCategory& e, ObjId s, ObjId t, const Functor& p, MorId f, const Functor& q,
                         MorId g) {
  for (MorId m : e.hom(s, t)) {
    if (p.map(m) == f && q.map(m) == g) return m;
  }
  return kNone;
}

}  // namespace

ValidationReport check_span(const Span& s) {
  ValidationReport r;
  if (!check_functor(s.p).valid || !check_functor(s.q).valid) {
    r.valid = false;
    r.violations.push_back("span legs are not functors");
  }
  if (!s.apex || s.p.source_ref() != s.apex || s.q.source_ref() != s.apex) {
    if (!s.apex || !s.p.source().same_tables(*s.apex) || !s.q.source().same_tables(*s.apex)) {
      r.valid = false;
      r.violations.push_back("span legs do not start at the apex");
    }
  }
  return r;
}

std::vector<Functor> span_morphisms(const Span& a, const Span& b, const Bounds& bounds) {
  // Search only over the fibers of (p, q).
  detail::FunctorSearchOptions opt;
  opt.object_ok = [&](ObjId e, ObjId c) { return b.p(c) == a.p(e) && b.q(c) == a.q(e); };
  opt.morphism_ok = [&](MorId f, MorId c) { return b.p.map(c) == a.p.map(f) && b.q.map(c) == a.q.map(f); };
  std::vector<Functor> out;
  detail::search_functors(*a.apex, *b.apex, opt, [&](const auto& o, const auto& m) {
    if (out.size() >= bounds.max_functors) throw BoundExceeded("max-functors", bounds.max_functors);
    out.emplace_back(a.apex, b.apex, o, m);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------

TabulatorSpan tabulate(const ProfRef& fp) {
  const Profunctor& f = *fp;
  const CatRef& xr = f.source_ref();
  const CatRef& yr = f.target_ref();
  const FinCategory& x = *xr;
  const FinCategory& y = *yr;
  TabulatorSpan out;
  out.proarrow = fp;
  std::vector<std::string> onames;
  for (ObjId a = 0; a < x.num_objects(); ++a) {
    for (ObjId b = 0; b < y.num_objects(); ++b) {
      for (int s = 0; s < f.size(b, a); ++s) {
        out.elements.push_back({a, b, s});
        onames.push_back("(" + x.object_name(a) + "," + y.object_name(b) + "," + std::to_string(s) + ")");
      }
    }
  }
  const int n = static_cast<int>(out.elements.size());
  std::vector<std::string> mnames;
  std::vector<Arrow> arrows;
  std::vector<MorId> pm, qm;
  std::vector<MorId> ids(n, kNone);
  std::map<std::tuple<int, int, MorId, MorId>, MorId> index;
  for (int e1 = 0; e1 < n; ++e1) {
    const Element& s1 = out.elements[e1];
    for (int e2 = 0; e2 < n; ++e2) {
      const Element& s2 = out.elements[e2];
      for (MorId u : x.hom(s1.a, s2.a)) {
        for (MorId g : y.hom(s1.b, s2.b)) {
          if (f.act_y(g, s2.a, s2.s) != f.act_x(s1.b, u, s1.s)) continue;
          const MorId id = static_cast<MorId>(arrows.size());
          index[{e1, e2, u, g}] = id;
          if (e1 == e2 && x.is_identity(u) && y.is_identity(g)) ids[e1] = id;
          arrows.push_back({e1, e2});
          mnames.push_back("(" + x.morphism_name(u) + "," + y.morphism_name(g) + ")");
          pm.push_back(u);
          qm.push_back(g);
        }
      }
    }
  }
  auto apex = share(assemble_category(std::move(onames), std::move(mnames), arrows, ids, [&](MorId g, MorId h) {
    return index.at({arrows[h].src, arrows[g].dst, x.compose(pm[g], pm[h]), y.compose(qm[g], qm[h])});
  }));
  std::vector<ObjId> po, qo;
  for (const Element& e : out.elements) {
    po.push_back(e.a);
    qo.push_back(e.b);
  }
  out.span = Span{apex, Functor(apex, xr, po, pm), Functor(apex, yr, qo, qm)};
  // Tabulating cell: a morphism (u, g) : e' → e goes to g·s_e = u·s_e'.
  auto hom_e = share(hom_profunctor(apex));
  out.cell = ProfCell{hom_e, fp, out.span.p, out.span.q, {}};
  for (int e1 = 0; e1 < n; ++e1) {
    for (int e2 = 0; e2 < n; ++e2) {
      std::vector<int> v;
      for (MorId m : apex->hom(e1, e2)) v.push_back(f.act_y(qm[m], out.elements[e2].a, out.elements[e2].s));
      out.cell.components.push_back(std::move(v));
    }
  }
  return out;
}

TabulatorCheck verify_tabulator(const TabulatorSpan& t, const std::vector<NamedCategory>& probes,
                                const Bounds& bounds) {
  TabulatorCheck out;
  const ProfRef& fp = t.proarrow;
  for (const auto& [name, z] : probes) {
    auto hom_z = share(hom_profunctor(z));
    auto hom_e = t.cell.source;
    std::set<std::vector<int>> images;
    long long functors = 0;
    for (const auto& u : enumerate_functors(z, t.span.apex, bounds)) {
      const auto c = vertical_compose(t.cell, hom_cell(u, hom_z, hom_e));
      std::vector<int> key = functor_key(c.frame_x);
      key.push_back(-3);
      const auto ky = functor_key(c.frame_y);
      key.insert(key.end(), ky.begin(), ky.end());
      for (const auto& comp : c.components) {
        key.push_back(-4);
        key.insert(key.end(), comp.begin(), comp.end());
      }
      images.insert(std::move(key));
      ++functors;
    }
    long long cells = 0;
    for (const auto& g : enumerate_functors(z, fp->source_ref(), bounds)) {
      for (const auto& k : enumerate_functors(z, fp->target_ref(), bounds)) {
        cells += static_cast<long long>(enumerate_cells(hom_z, fp, g, k, bounds).size());
      }
    }
    out.cells += cells;
    out.functors += functors;
    if (static_cast<long long>(images.size()) != functors || functors != cells) {
      if (out.holds) out.probe = name;
      out.holds = false;
    }
  }
  return out;
}

Collage cotabulate(const ProfRef& fp) {
  const Profunctor& f = *fp;
  const CatRef& xr = f.source_ref();
  const CatRef& yr = f.target_ref();
  const FinCategory& x = *xr;
  const FinCategory& y = *yr;
  const int nx = x.num_objects();
  const int mx = x.num_morphisms();
  const int my = y.num_morphisms();
  std::vector<std::string> onames;
  for (ObjId a = 0; a < nx; ++a) onames.push_back(x.object_name(a));
  for (ObjId b = 0; b < y.num_objects(); ++b) onames.push_back(y.object_name(b) + "'");
  std::vector<std::string> mnames;
  std::vector<Arrow> arrows;
  for (MorId u = 0; u < mx; ++u) {
    mnames.push_back(x.morphism_name(u));
    arrows.push_back({x.src(u), x.dst(u)});
  }
  for (MorId g = 0; g < my; ++g) {
    mnames.push_back(y.morphism_name(g) + "'");
    arrows.push_back({nx + y.src(g), nx + y.dst(g)});
  }
  // Heterogeneous morphisms j(b) → i(a), one per element of F(b, a).
  std::vector<int> offset(f.sizes().size() + 1, 0);
  for (ObjId b = 0; b < y.num_objects(); ++b) {
    for (ObjId a = 0; a < nx; ++a) {
      offset[f.cell(b, a) + 1] = f.size(b, a);
      for (int s = 0; s < f.size(b, a); ++s) {
        mnames.push_back("s" + std::to_string(s) + ":" + y.object_name(b) + "'->" + x.object_name(a));
        arrows.push_back({nx + b, a});
      }
    }
  }
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  const int base = mx + my;
  auto het = [&](ObjId b, ObjId a, int s) { return base + offset[f.cell(b, a)] + s; };
  struct Het {
    ObjId b, a;
    int s;
  };
  std::vector<Het> hets;
  for (ObjId b = 0; b < y.num_objects(); ++b) {
    for (ObjId a = 0; a < nx; ++a) {
      for (int s = 0; s < f.size(b, a); ++s) hets.push_back({b, a, s});
    }
  }
  std::vector<MorId> ids;
  for (ObjId a = 0; a < nx; ++a) ids.push_back(x.id(a));
  for (ObjId b = 0; b < y.num_objects(); ++b) ids.push_back(mx + y.id(b));
  auto cat = share(assemble_category(onames, mnames, arrows, ids, [&](MorId g, MorId h) -> MorId {
    if (g < mx && h < mx) return x.compose(g, h);
    if (g >= mx && g < base && h >= mx && h < base) return mx + y.compose(g - mx, h - mx);
    if (g < mx && h >= base) {  // x-morphism after a heterogeneous one
      const Het& e = hets[h - base];
      return het(e.b, x.dst(g), f.act_x(e.b, g, e.s));
    }
    if (g >= base && h >= mx && h < base) {  // heterogeneous after a y-morphism
      const Het& e = hets[g - base];
      return het(y.src(h - mx), e.a, f.act_y(h - mx, e.a, e.s));
    }
    return kNone;
  }));
  Collage out;
  out.category = cat;
  out.proarrow = fp;
  std::vector<ObjId> io(nx), jo(y.num_objects());
  std::iota(io.begin(), io.end(), 0);
  std::iota(jo.begin(), jo.end(), nx);
  std::vector<MorId> im(mx), jm(my);
  std::iota(im.begin(), im.end(), 0);
  std::iota(jm.begin(), jm.end(), mx);
  out.i = Functor(xr, cat, io, im);
  out.j = Functor(yr, cat, jo, jm);
  auto hom_p = share(hom_profunctor(cat));
  out.cell = ProfCell{fp, hom_p, out.i, out.j, {}};
  for (ObjId b = 0; b < y.num_objects(); ++b) {
    for (ObjId a = 0; a < nx; ++a) {
      std::vector<int> v(f.size(b, a));
      std::iota(v.begin(), v.end(), 0);  // hom(j b, i a) lists exactly the heterogeneous morphisms
      out.cell.components.push_back(std::move(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

bool is_discrete_opfibration(const Functor& p) {
  const FinCategory& e = p.source();
  const FinCategory& x = p.target();
  std::vector<int> count(x.num_morphisms());
  for (ObjId o = 0; o < e.num_objects(); ++o) {
    std::fill(count.begin(), count.end(), 0);
    for (ObjId t = 0; t < e.num_objects(); ++t) {
      for (MorId h : e.hom(o, t)) ++count[p.map(h)];
    }
    for (ObjId c = 0; c < x.num_objects(); ++c) {
      for (MorId u : x.hom(p(o), c)) {
        if (count[u] != 1) return false;
      }
    }
  }
  return true;
}

bool is_discrete_fibration(const Functor& p) {
  const FinCategory& e = p.source();
  const FinCategory& x = p.target();
  std::vector<int> count(x.num_morphisms());
  for (ObjId o = 0; o < e.num_objects(); ++o) {
    std::fill(count.begin(), count.end(), 0);
    for (ObjId s = 0; s < e.num_objects(); ++s) {
      for (MorId h : e.hom(s, o)) ++count[p.map(h)];
    }
    for (ObjId c = 0; c < x.num_objects(); ++c) {
      for (MorId u : x.hom(c, p(o))) {
        if (count[u] != 1) return false;
      }
    }
  }
  return true;
}

namespace {

// h : e → e' is p-cocartesian: every h'' : e → e'' with p h'' = k∘p h
// factors as m∘h for exactly one m over k.
bool is_cocartesian(const Functor& p, MorId h) {
  const FinCategory& e = p.source();
  const FinCategory& x = p.target();
  const ObjId from = e.src(h);
  const ObjId mid = e.dst(h);
  for (ObjId t = 0; t < e.num_objects(); ++t) {
    for (MorId h2 : e.hom(from, t)) {
      for (MorId k : x.hom(p(mid), p(t))) {
        if (x.compose(k, p.map(h)) != p.map(h2)) continue;
        int fillers = 0;
        for (MorId m : e.hom(mid, t)) {
          if (p.map(m) == k && e.compose(m, h) == h2) ++fillers;
        }
        if (fillers != 1) return false;
      }
    }
  }
  return true;
}

bool is_cartesian(const Functor& q, MorId h) {
  const FinCategory& e = q.source();
  const FinCategory& y = q.target();
  const ObjId to = e.dst(h);
  const ObjId mid = e.src(h);
  for (ObjId s = 0; s < e.num_objects(); ++s) {
    for (MorId h2 : e.hom(s, to)) {
      for (MorId k : y.hom(q(s), q(mid))) {
        if (y.compose(q.map(h), k) != q.map(h2)) continue;
        int fillers = 0;
        for (MorId m : e.hom(s, mid)) {
          if (q.map(m) == k && e.compose(h, m) == h2) ++fillers;
        }
        if (fillers != 1) return false;
      }
    }
  }
  return true;
}

}  // namespace

TsdFibReport is_tsdfib(const Span& s) {
  TsdFibReport r;
  const FinCategory& e = *s.apex;
  const FinCategory& x = s.p.target();
  const FinCategory& y = s.q.target();
  auto note = [&r](std::string w) {
    if (r.witness.empty()) r.witness = std::move(w);
  };

  // Regularity.
  bool cocart = true;
  for (ObjId o = 0; cocart && o < e.num_objects(); ++o) {
    for (ObjId c = 0; cocart && c < x.num_objects(); ++c) {
      for (MorId u : x.hom(s.p(o), c)) {
        bool found = false;
        for (ObjId t = 0; !found && t < e.num_objects(); ++t) {
          for (MorId h : e.hom(o, t)) {
            if (s.p.map(h) == u && y.is_identity(s.q.map(h)) && is_cocartesian(s.p, h)) {
              found = true;
              break;
            }
          }
        }
        if (!found) {
          cocart = false;
          note("no cocartesian lift of " + x.morphism_name(u) + " at " + e.object_name(o));
          break;
        }
      }
    }
  }
  bool cart = true;
  for (ObjId o = 0; cart && o < e.num_objects(); ++o) {
    for (ObjId d = 0; cart && d < y.num_objects(); ++d) {
      for (MorId g : y.hom(d, s.q(o))) {
        bool found = false;
        for (ObjId t = 0; !found && t < e.num_objects(); ++t) {
          for (MorId h : e.hom(t, o)) {
            if (s.q.map(h) == g && x.is_identity(s.p.map(h)) && is_cartesian(s.q, h)) {
              found = true;
              break;
            }
          }
        }
        if (!found) {
          cart = false;
          note("no cartesian lift of " + y.morphism_name(g) + " at " + e.object_name(o));
          break;
        }
      }
    }
  }
  r.regular = cocart && cart;

  // (p, q) reflects identities.
  r.conservative = true;
  for (MorId h = 0; h < e.num_morphisms(); ++h) {
    if (x.is_identity(s.p.map(h)) && y.is_identity(s.q.map(h)) && !e.is_identity(h)) {
      r.conservative = false;
      note("non-identity " + e.morphism_name(h) + " over identities");
      break;
    }
  }

  // Fibers E_{c,d}.
  r.discrete_fibers = true;
  for (ObjId c = 0; r.discrete_fibers && c < x.num_objects(); ++c) {
    for (ObjId d = 0; d < y.num_objects(); ++d) {
      std::vector<ObjId> fiber;
      for (ObjId o = 0; o < e.num_objects(); ++o) {
        if (s.p(o) == c && s.q(o) == d) fiber.push_back(o);
      }
      std::size_t morphisms = 0;
      for (ObjId a : fiber) {
        for (ObjId b : fiber) {
          for (MorId h : e.hom(a, b)) {
            if (s.p.map(h) == x.id(c) && s.q.map(h) == y.id(d)) ++morphisms;
          }
        }
      }
      if (morphisms != fiber.size()) {
        r.discrete_fibers = false;
        note("fiber over (" + x.object_name(c) + "," + y.object_name(d) + ") is not discrete");
        break;
      }
    }
  }

  // E ×_y {d} → x and {c} ×_x E → y.
  r.left = true;
  for (ObjId d = 0; d < y.num_objects(); ++d) {
    const auto pb = pullback(s.q, object_functor(s.q.target_ref(), d));
    if (!is_discrete_opfibration(compose(s.p, pb.first))) {
      r.left = false;
      note("E over " + y.object_name(d) + " is not a discrete opfibration");
      break;
    }
  }
  r.right = true;
  for (ObjId c = 0; c < x.num_objects(); ++c) {
    const auto pb = pullback(object_functor(s.p.target_ref(), c), s.p);
    if (!is_discrete_fibration(compose(s.q, pb.second))) {
      r.right = false;
      note("E over " + x.object_name(c) + " is not a discrete fibration");
      break;
    }
  }
  const bool conds[4] = {r.conservative, r.discrete_fibers, r.left, r.right};
  for (int i = 0; i < 4; ++i) r.verdicts[i] = r.regular && conds[i];
  r.agree = std::all_of(r.verdicts, r.verdicts + 4, [&](bool v) { return v == r.verdicts[0]; });
  r.holds = r.verdicts[0] && r.agree;
  if (r.holds) r.witness.clear();
  return r;
}

// ---------------------------------------------------------------------------

Extension classify(const Span& s) {
  return extend_prof(s.q, share(hom_profunctor(s.apex)), s.p);
}

namespace {

// Representatives of classify in bulk: one decoding pass per span.
struct ClassifyReader {
  ProfComposite inner;
  ProfComposite outer;
  explicit ClassifyReader(const Span& s)
      : inner(compose_prof(share(hom_profunctor(s.apex)), conjoint_of(s.p).proarrow)),
        outer(compose_prof(companion_of(s.q).proarrow, inner.result)) {}
  SpanElement read(const Span& s, ObjId b, ObjId a, int k) const {
    const FinCategory& e = *s.apex;
    const FinCategory& x = s.p.target();
    const FinCategory& y = s.q.target();
    const auto& o = outer.representatives[outer.result->cell(b, a)][k];
    const MorId u = y.hom(b, s.q(o.b))[o.t];
    const auto& in = inner.representatives[inner.result->cell(o.b, a)][o.s];
    const MorId m = e.hom(o.b, in.b)[in.t];
    const MorId v = x.hom(s.p(in.b), a)[in.s];
    return SpanElement{y.compose(s.q.map(m), u), in.b, v};
  }
};

}  // namespace

SpanElement classify_element(const Span& s, const Extension&, ObjId b, ObjId a, int k) {
  return ClassifyReader(s).read(s, b, a, k);
}

ProfCell reflection_counit(const TabulatorSpan& t, const Extension& c) {
  const Profunctor& f = *t.proarrow;
  const ClassifyReader reader(t.span);
  ProfCell out{c.proarrow, t.proarrow, identity_functor(f.source_ref()), identity_functor(f.target_ref()), {}};
  for (ObjId b = 0; b < f.target().num_objects(); ++b) {
    for (ObjId a = 0; a < f.source().num_objects(); ++a) {
      std::vector<int> v;
      for (int k = 0; k < c.proarrow->size(b, a); ++k) {
        const auto el = reader.read(t.span, b, a, k);
        const Element& e = t.elements[el.e];
        v.push_back(f.act_x(b, el.v, f.act_y(el.u, e.a, e.s)));
      }
      out.components.push_back(std::move(v));
    }
  }
  return out;
}

SpanComposite compose_spans(const Span& first, const Span& second) {
  const auto pb = pullback(first.q, second.p);
  SpanComposite out;
  out.first = pb.first;
  out.second = pb.second;
  out.span = Span{pb.apex, compose(first.p, pb.first), compose(second.q, pb.second)};
  return out;
}

ProfCell laxity_comparison(const TabulatorSpan& tf, const TabulatorSpan& tg, const SpanComposite& comp,
                           const Extension& c, const ProfComposite& gf) {
  const Profunctor& f = *tf.proarrow;
  const Profunctor& g = *tg.proarrow;
  const ClassifyReader reader(comp.span);
  ProfCell out{c.proarrow, gf.result, identity_functor(f.source_ref()), identity_functor(g.target_ref()), {}};
  for (ObjId z = 0; z < g.target().num_objects(); ++z) {
    for (ObjId a = 0; a < f.source().num_objects(); ++a) {
      std::vector<int> v;
      for (int k = 0; k < c.proarrow->size(z, a); ++k) {
        const auto el = reader.read(comp.span, z, a, k);
        const Element& e1 = tf.elements[comp.first(el.e)];
        const Element& e2 = tg.elements[comp.second(el.e)];
        // e1 = (a1, b1, s1 ∈ F(b1, a1)), e2 = (b1, z2, t2 ∈ G(z2, b1)).
        v.push_back(gf.class_of(z, a, e1.b, g.act_y(el.u, e2.a, e2.s), f.act_x(e1.b, el.v, e1.s)));
      }
      out.components.push_back(std::move(v));
    }
  }
  return out;
}

namespace {

Functor functor_into_tabulator(const CatRef& src, const TabulatorSpan& t, const std::vector<Element>& image,
                               const std::vector<std::pair<MorId, MorId>>& legs) {
  std::map<std::tuple<ObjId, ObjId, int>, ObjId> where;
  for (std::size_t i = 0; i < t.elements.size(); ++i) {
    where[{t.elements[i].a, t.elements[i].b, t.elements[i].s}] = static_cast<ObjId>(i);
  }
  std::vector<ObjId> objs;
  for (const Element& el : image) objs.push_back(where.at({el.a, el.b, el.s}));
  const FinCategory& s = *src;
  std::vector<MorId> mors;
  for (MorId h = 0; h < s.num_morphisms(); ++h) {
    const MorId m = find_morphism_over(*t.span.apex, objs[s.src(h)], objs[s.dst(h)], t.span.p, legs[h].first,
                                       t.span.q, legs[h].second);
    if (m == kNone) throw Error("comparison: no morphism over " + s.morphism_name(h));
    mors.push_back(m);
  }
  return Functor(src, t.span.apex, std::move(objs), std::move(mors));
}

}  // namespace

Functor composite_comparison(const TabulatorSpan& tf, const TabulatorSpan& tg, const SpanComposite& comp,
                             const ProfComposite& gf, const TabulatorSpan& tgf) {
  const FinCategory& pb = *comp.span.apex;
  std::vector<Element> image;
  for (ObjId o = 0; o < pb.num_objects(); ++o) {
    const Element& e1 = tf.elements[comp.first(o)];
    const Element& e2 = tg.elements[comp.second(o)];
    image.push_back({e1.a, e2.b, gf.class_of(e2.b, e1.a, e1.b, e2.s, e1.s)});
  }
  std::vector<std::pair<MorId, MorId>> legs;
  for (MorId m = 0; m < pb.num_morphisms(); ++m) legs.emplace_back(comp.span.p.map(m), comp.span.q.map(m));
  return functor_into_tabulator(comp.span.apex, tgf, image, legs);
}

Functor unit_comparison(const TabulatorSpan& thom) {
  const CatRef& xr = thom.proarrow->source_ref();
  const FinCategory& x = *xr;
  std::vector<Element> image;
  for (ObjId a = 0; a < x.num_objects(); ++a) {
    const auto h = x.hom(a, a);
    image.push_back({a, a, static_cast<int>(std::find(h.begin(), h.end(), x.id(a)) - h.begin())});
  }
  std::vector<std::pair<MorId, MorId>> legs;
  for (MorId m = 0; m < x.num_morphisms(); ++m) legs.emplace_back(m, m);
  return functor_into_tabulator(xr, thom, image, legs);
}

Functor reflection_unit(const Span& s, const Extension& c, const TabulatorSpan& t) {
  const FinCategory& e = *s.apex;
  const auto rank = ranks(e);
  std::map<std::tuple<ObjId, ObjId, int>, ObjId> where;
  for (std::size_t i = 0; i < t.elements.size(); ++i) {
    where[{t.elements[i].a, t.elements[i].b, t.elements[i].s}] = static_cast<ObjId>(i);
  }
  std::vector<ObjId> objs;
  for (ObjId o = 0; o < e.num_objects(); ++o) {
    const int k = c.cocartesian.apply(o, o, rank[e.id(o)]);
    objs.push_back(where.at({s.p(o), s.q(o), k}));
  }
  std::vector<MorId> mors;
  const FinCategory& tab = *t.span.apex;
  for (MorId h = 0; h < e.num_morphisms(); ++h) {
    const MorId m = find_morphism_over(tab, objs[e.src(h)], objs[e.dst(h)], t.span.p, s.p.map(h), t.span.q,
                                       s.q.map(h));
    if (m == kNone) throw Error("reflection unit: no morphism over " + e.morphism_name(h));
    mors.push_back(m);
  }
  return Functor(s.apex, t.span.apex, std::move(objs), std::move(mors));
}

TabulatorSpan comma_fibration(const Functor& f, const Functor& g) {
  const CatRef& ar = f.target_ref();
  if (g.target_ref() != ar && !g.target().same_tables(*ar)) throw Error("comma fibration: different targets");
  const auto arrows = tabulate(share(hom_profunctor(ar)));  // (ev₁, ev₀)
  auto aa = share(product(*ar, *ar));
  auto xy = share(product(f.source(), g.source()));
  const Functor fg = product_map(f, g, xy, aa);
  const Functor ev = pairing(arrows.span.p, arrows.span.q, aa);
  const auto pb = pullback(fg, ev);
  TabulatorSpan out;
  const auto px = product_projection_first(f.source_ref(), g.source_ref(), xy);
  const auto py = product_projection_second(f.source_ref(), g.source_ref(), xy);
  out.span = Span{pb.apex, compose(px, pb.first), compose(py, pb.first)};
  out.proarrow = restrict_prof(g, arrows.proarrow, f).proarrow;
  const FinCategory& apex = *pb.apex;
  const FinCategory& e = *arrows.span.apex;
  const auto rank = ranks(e);
  for (ObjId o = 0; o < apex.num_objects(); ++o) {
    const Element& el = arrows.elements[pb.second(o)];
    out.elements.push_back({out.span.p(o), out.span.q(o), el.s});
  }
  auto hom_apex = share(hom_profunctor(pb.apex));
  out.cell = ProfCell{hom_apex, out.proarrow, out.span.p, out.span.q, {}};
  for (ObjId o1 = 0; o1 < apex.num_objects(); ++o1) {
    for (ObjId o2 = 0; o2 < apex.num_objects(); ++o2) {
      std::vector<int> v;
      for (MorId m : apex.hom(o1, o2)) {
        v.push_back(arrows.cell.apply(pb.second(o1), pb.second(o2), rank[pb.second.map(m)]));
      }
      out.cell.components.push_back(std::move(v));
    }
  }
  return out;
}

YonedaUnit fibrational_yoneda(const Functor& f) {
  YonedaUnit out;
  const CatRef& xr = f.source_ref();
  const FinCategory& x = *xr;
  const FinCategory& y = f.target();
  out.representable = Span{xr, identity_functor(xr), f};
  out.comma = tabulate(companion_of(f).proarrow);
  const auto rank = ranks(y);
  std::vector<ObjId> objs;
  for (ObjId a = 0; a < x.num_objects(); ++a) {
    const int s = rank[y.id(f(a))];
    ObjId hit = kNone;
    for (std::size_t i = 0; i < out.comma.elements.size(); ++i) {
      const Element& e = out.comma.elements[i];
      if (e.a == a && e.b == f(a) && e.s == s) hit = static_cast<ObjId>(i);
    }
    objs.push_back(hit);
  }
  std::vector<MorId> mors;
  for (MorId m = 0; m < x.num_morphisms(); ++m) {
    mors.push_back(find_morphism_over(*out.comma.span.apex, objs[x.src(m)], objs[x.dst(m)], out.comma.span.p, m,
                                      out.comma.span.q, f.map(m)));
  }
  out.unit = Functor(xr, out.comma.span.apex, std::move(objs), std::move(mors));
  return out;
}

YonedaCheck check_fibrational_yoneda(const YonedaUnit& yu, const Span& e, const Bounds& bounds) {
  YonedaCheck out;
  const auto from_comma = span_morphisms(yu.comma.span, e, bounds);
  const auto from_point = span_morphisms(yu.representable, e, bounds);
  out.comma_maps = static_cast<int>(from_comma.size());
  out.point_maps = static_cast<int>(from_point.size());
  std::set<std::vector<int>> image;
  for (const auto& m : from_comma) image.insert(functor_key(compose(m, yu.unit)));
  std::set<std::vector<int>> targets;
  for (const auto& m : from_point) targets.insert(functor_key(m));
  out.bijective = image.size() == from_comma.size() && image == targets;
  return out;
}

Functor postcompose(const Functor& p, const FunctorCategory& from, const FunctorCategory& to) {
  std::map<std::tuple<ObjId, ObjId, std::vector<MorId>>, MorId> index;
  for (std::size_t i = 0; i < to.morphisms.size(); ++i) {
    const auto& t = to.morphisms[i];
    index[{to.index_of(t.from), to.index_of(t.to), t.components}] = static_cast<MorId>(i);
  }
  std::vector<ObjId> objs;
  for (const auto& g : from.objects) objs.push_back(to.index_of(compose(p, g)));
  std::vector<MorId> mors;
  for (const auto& t : from.morphisms) {
    const auto w = whisker_left(p, t);
    mors.push_back(index.at({to.index_of(w.from), to.index_of(w.to), w.components}));
  }
  return Functor(from.category, to.category, std::move(objs), std::move(mors));
}

Span functor_span(const Span& s, const CatRef& z, const Bounds& bounds) {
  const auto fe = functor_category(z, s.apex, bounds);
  const auto fx = functor_category(z, s.p.target_ref(), bounds);
  const auto fy = functor_category(z, s.q.target_ref(), bounds);
  return Span{fe.category, postcompose(s.p, fe, fx), postcompose(s.q, fe, fy)};
}

// ---------------------------------------------------------------------------

ElementsCategory category_of_elements(const FinSetDiagram& w) {
  const FinCategory& x = *w.shape;
  ElementsCategory out;
  std::vector<std::vector<ObjId>> obj(x.num_objects());
  std::vector<std::string> onames;
  for (ObjId c = 0; c < x.num_objects(); ++c) {
    for (int k = 0; k < w.sizes[c]; ++k) {
      obj[c].push_back(static_cast<ObjId>(out.elements.size()));
      out.elements.emplace_back(c, k);
      onames.push_back("(" + x.object_name(c) + "," + std::to_string(k) + ")");
    }
  }
  std::vector<int> offset(x.num_morphisms() + 1, 0);
  for (MorId u = 0; u < x.num_morphisms(); ++u) offset[u + 1] = offset[u] + w.sizes[x.src(u)];
  std::vector<std::string> mnames;
  std::vector<Arrow> arrows;
  std::vector<MorId> pm;
  for (MorId u = 0; u < x.num_morphisms(); ++u) {
    for (int k = 0; k < w.sizes[x.src(u)]; ++k) {
      mnames.push_back(x.morphism_name(u) + "@" + std::to_string(k));
      arrows.push_back({obj[x.src(u)][k], obj[x.dst(u)][w.maps[u][k]]});
      pm.push_back(u);
    }
  }
  std::vector<MorId> ids;
  for (const auto& [c, k] : out.elements) ids.push_back(offset[x.id(c)] + k);
  const auto& elements = out.elements;
  out.category = share(assemble_category(onames, mnames, arrows, ids, [&](MorId g, MorId h) {
    return offset[x.compose(pm[g], pm[h])] + elements[arrows[h].src].second;
  }));
  std::vector<ObjId> po;
  for (const auto& [c, k] : out.elements) po.push_back(c);
  out.projection = Functor(out.category, w.shape, std::move(po), std::move(pm));
  return out;
}

ComprehensiveFactorization comprehensive_factorization(const Functor& f) {
  const FinCategory& a = f.source();
  const FinCategory& x = f.target();
  const auto rank = ranks(x);
  FinSetDiagram w{f.target_ref(), {}, {}};
  // classes[c][(a, θ) index] = class in W(c); pairs enumerated by (a, rank θ).
  std::vector<std::vector<int>> pair_offset(x.num_objects(), std::vector<int>(a.num_objects() + 1, 0));
  std::vector<std::vector<int>> classes(x.num_objects());
  for (ObjId c = 0; c < x.num_objects(); ++c) {
    auto& off = pair_offset[c];
    for (ObjId o = 0; o < a.num_objects(); ++o) off[o + 1] = off[o] + static_cast<int>(x.hom(f(o), c).size());
    detail::UnionFind uf(off.back());
    for (MorId m = 0; m < a.num_morphisms(); ++m) {
      // (src m, θ'∘f m) ~ (dst m, θ').
      for (MorId t : x.hom(f(a.dst(m)), c)) {
        uf.unite(off[a.src(m)] + rank[x.compose(t, f.map(m))], off[a.dst(m)] + rank[t]);
      }
    }
    std::vector<int> label(off.back(), -1);
    int next = 0;
    classes[c].resize(off.back());
    for (int i = 0; i < off.back(); ++i) {
      const int root = uf.find(i);
      if (label[root] < 0) label[root] = next++;
      classes[c][i] = label[root];
    }
    w.sizes.push_back(next);
  }
  // W(u)[class of (o, θ)] = class of (o, u∘θ).
  for (MorId u = 0; u < x.num_morphisms(); ++u) {
    const ObjId c = x.src(u);
    const ObjId d = x.dst(u);
    std::vector<int> map(w.sizes[c], -1);
    for (ObjId o = 0; o < a.num_objects(); ++o) {
      for (MorId t : x.hom(f(o), c)) {
        const int from = classes[c][pair_offset[c][o] + rank[t]];
        if (map[from] < 0) map[from] = classes[d][pair_offset[d][o] + rank[x.compose(u, t)]];
      }
    }
    w.maps.push_back(std::move(map));
  }
  const auto el = category_of_elements(w);
  ComprehensiveFactorization out;
  out.middle = el.category;
  out.fibration = el.projection;
  out.copresheaf = w;
  std::map<std::pair<ObjId, int>, ObjId> where;
  for (std::size_t i = 0; i < el.elements.size(); ++i) where[el.elements[i]] = static_cast<ObjId>(i);
  std::vector<ObjId> objs;
  for (ObjId o = 0; o < a.num_objects(); ++o) {
    const ObjId c = f(o);
    objs.push_back(where.at({c, classes[c][pair_offset[c][o] + rank[x.id(c)]]}));
  }
  std::vector<MorId> mors;
  const FinCategory& mid = *el.category;
  for (MorId m = 0; m < a.num_morphisms(); ++m) {
    MorId hit = kNone;
    for (MorId h : mid.hom(objs[a.src(m)], objs[a.dst(m)])) {
      if (el.projection.map(h) == f.map(m)) hit = h;
    }
    if (hit == kNone) throw Error("comprehensive factorization: missing lift");
    mors.push_back(hit);
  }
  out.initial = Functor(f.source_ref(), el.category, std::move(objs), std::move(mors));
  return out;
}

LiftingReport check_unique_lifting(const Functor& i, const Functor& p, const Bounds& bounds) {
  LiftingReport out;
  const CatRef& a = i.source_ref();
  const CatRef& b = i.target_ref();
  const CatRef& e = p.source_ref();
  const CatRef& x = p.target_ref();
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> fillers;
  for (const auto& d : enumerate_functors(b, e, bounds)) {
    ++fillers[{functor_key(compose(d, i)), functor_key(compose(p, d))}];
  }
  const auto us = enumerate_functors(a, e, bounds);
  const auto vs = enumerate_functors(b, x, bounds);
  std::vector<std::vector<int>> pu;
  for (const auto& u : us) pu.push_back(functor_key(compose(p, u)));
  for (const auto& v : vs) {
    const auto vi = functor_key(compose(v, i));
    const auto vk = functor_key(v);
    for (std::size_t k = 0; k < us.size(); ++k) {
      if (pu[k] != vi) continue;
      ++out.squares;
      const auto it = fillers.find({functor_key(us[k]), vk});
      const int n = it == fillers.end() ? 0 : it->second;
      if (n != 1 && out.holds) {
        out.holds = false;
        out.fillers = n;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Slice build_slice(const Functor& f, bool cocones, const Bounds& bounds) {
  const CatRef& ir = f.source_ref();
  const CatRef& cr = f.target_ref();
  const FinCategory& i = *ir;
  const FinCategory& c = *cr;
  Slice out;
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    const Functor k = constant_functor(ir, cr, o);
    auto legs = cocones ? enumerate_transformations(f, k, bounds) : enumerate_transformations(k, f, bounds);
    for (auto& l : legs) {
      if (out.legs.size() >= bounds.max_cocones) throw BoundExceeded("max-cocones", bounds.max_cocones);
      out.apex.push_back(o);
      out.legs.push_back(std::move(l));
    }
  }
  const int n = static_cast<int>(out.apex.size());
  std::vector<std::string> onames;
  for (int s = 0; s < n; ++s) onames.push_back(c.object_name(out.apex[s]) + "#" + std::to_string(s));
  std::vector<std::string> mnames;
  std::vector<Arrow> arrows;
  std::vector<MorId> under;
  std::vector<MorId> ids(n, kNone);
  std::map<std::tuple<int, int, MorId>, MorId> index;
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      for (MorId u : c.hom(out.apex[s], out.apex[t])) {
        bool ok = true;
        for (ObjId k = 0; ok && k < i.num_objects(); ++k) {
          ok = cocones ? c.compose(u, out.legs[s].components[k]) == out.legs[t].components[k]
                       : c.compose(out.legs[t].components[k], u) == out.legs[s].components[k];
        }
        if (!ok) continue;
        const MorId id = static_cast<MorId>(arrows.size());
        index[{s, t, u}] = id;
        if (s == t && c.is_identity(u)) ids[s] = id;
        arrows.push_back({s, t});
        mnames.push_back(c.morphism_name(u));
        under.push_back(u);
      }
    }
  }
  out.category = share(assemble_category(onames, mnames, arrows, ids, [&](MorId g, MorId h) {
    return index.at({arrows[h].src, arrows[g].dst, c.compose(under[g], under[h])});
  }));
  out.projection = Functor(out.category, cr, out.apex, under);
  return out;
}

}  // namespace

Slice coslice(const Functor& f, const Bounds& bounds) { return build_slice(f, true, bounds); }
Slice slice(const Functor& f, const Bounds& bounds) { return build_slice(f, false, bounds); }

}  // namespace equip

#include "equip/span.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "equip/fibration.hpp"
#include "equip/profun.hpp"

namespace equip {

namespace {

struct Cone {
  ObjId d;
  MorId u;
  MorId v;
};

std::vector<Cone> cones_over(const FinCategory& c, MorId f, MorId g) {
  std::vector<Cone> out;
  for (ObjId d = 0; d < c.num_objects(); ++d) {
    for (MorId u : c.hom(d, c.src(f))) {
      for (MorId v : c.hom(d, c.src(g))) {
        if (c.compose(f, u) == c.compose(g, v)) out.push_back({d, u, v});
      }
    }
  }
  return out;
}

std::string cospan_text(const FinCategory& c, MorId f, MorId g) {
  return c.morphism_name(f) + " : " + c.object_name(c.src(f)) + " -> " + c.object_name(c.dst(f)) + " <- " +
         c.object_name(c.src(g)) + " : " + c.morphism_name(g);
}

std::string span_text(const FinCategory& c, const SpanArrow& s) {
  return c.object_name(c.dst(s.left)) + " <-" + c.morphism_name(s.left) + "- " + c.object_name(s.apex) + " -" +
         c.morphism_name(s.right) + "-> " + c.object_name(c.dst(s.right));
}

/// The vertical u : z → t with tab ∘ U_u = beta, when unique; kNone otherwise.
MorId unique_factor(const DoubleCategory& p, CellId tab, ObjId z, ObjId t, CellId beta) {
  MorId found = kNone;
  for (MorId u : p.vertical().hom(z, t)) {
    if (p.vcompose(tab, p.unit_cell(u)) != beta) continue;
    if (found != kNone) return kNone;
    found = u;
  }
  return found;
}

}  // namespace

std::optional<MorId> inverse_of(const FinCategory& c, MorId f) {
  for (MorId g : c.hom(c.dst(f), c.src(f))) {
    if (c.is_identity(c.compose(g, f)) && c.is_identity(c.compose(f, g))) return g;
  }
  return std::nullopt;
}

std::optional<PullbackCone> find_pullback(const FinCategory& c, MorId f, MorId g) {
  if (c.dst(f) != c.dst(g)) throw Error("pullback: not a cospan");
  const auto cones = cones_over(c, f, g);
  for (const Cone& k : cones) {
    bool universal = true;
    for (const Cone& o : cones) {
      int n = 0;
      for (MorId w : c.hom(o.d, k.d)) {
        if (c.compose(k.u, w) == o.u && c.compose(k.v, w) == o.v) ++n;
      }
      if (n != 1) {
        universal = false;
        break;
      }
    }
    if (universal) return PullbackCone{k.d, k.u, k.v};
  }
  return std::nullopt;
}

std::optional<std::pair<MorId, MorId>> missing_pullback(const FinCategory& c) {
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    for (MorId g = 0; g < c.num_morphisms(); ++g) {
      if (c.dst(f) == c.dst(g) && !find_pullback(c, f, g)) return std::pair{f, g};
    }
  }
  return std::nullopt;
}

SpanArrow graph_span(const FinCategory& c, MorId f) { return {c.src(f), c.id(c.src(f)), f}; }
SpanArrow cograph_span(const FinCategory& c, MorId f) { return {c.src(f), f, c.id(c.src(f))}; }

namespace {

std::optional<MorId> span_iso(const FinCategory& c, const SpanArrow& rep, const SpanArrow& s) {
  if (c.dst(rep.left) != c.dst(s.left) || c.dst(rep.right) != c.dst(s.right)) return std::nullopt;
  for (MorId m : c.hom(rep.apex, s.apex)) {
    if (c.compose(s.left, m) == rep.left && c.compose(s.right, m) == rep.right && inverse_of(c, m)) return m;
  }
  return std::nullopt;
}

}  // namespace

std::pair<HorId, MorId> span_class(const SpanDoubleCat& d, const SpanArrow& s) {
  for (std::size_t h = 0; h < d.spans.size(); ++h) {
    if (const auto m = span_iso(*d.base, d.spans[h], s)) return {static_cast<HorId>(h), *m};
  }
  throw Error("span class: not found");
}

SpanDoubleCat build_span_double(const CatRef& cr, const Bounds& bounds) {
  const FinCategory& c = *cr;
  SpanDoubleCat out;
  out.base = cr;
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    for (MorId g = 0; g < c.num_morphisms(); ++g) {
      if (c.dst(f) != c.dst(g)) continue;
      const auto pb = find_pullback(c, f, g);
      if (!pb) throw MissingPullback(f, g, "span double: no pullback of " + cospan_text(c, f, g));
      out.pullbacks[{f, g}] = *pb;
    }
  }

  // Classes of spans, least representative first.
  for (ObjId s = 0; s < c.num_objects(); ++s) {
    for (MorId l = 0; l < c.num_morphisms(); ++l) {
      if (c.src(l) != s) continue;
      for (MorId r = 0; r < c.num_morphisms(); ++r) {
        if (c.src(r) != s) continue;
        const SpanArrow sp{s, l, r};
        const bool known = std::any_of(out.spans.begin(), out.spans.end(),
                                       [&](const SpanArrow& rep) { return span_iso(c, rep, sp).has_value(); });
        if (known) continue;
        if (out.spans.size() >= bounds.max_objects) throw BoundExceeded("max-objects", bounds.max_objects);
        out.spans.push_back(sp);
      }
    }
  }
  const int nh = static_cast<int>(out.spans.size());

  DoubleCategory::Data data;
  data.vertical = cr;
  for (const SpanArrow& s : out.spans) {
    data.horizontals.push_back({c.dst(s.left), c.dst(s.right), "(" + c.morphism_name(s.left) + "," +
                                                                   c.morphism_name(s.right) + ")"});
  }
  std::vector<MorId> unit_iso(c.num_objects());  // rep(U_a).apex → a
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    const auto [h, m] = span_class(out, {a, c.id(a), c.id(a)});
    data.units.push_back(h);
    unit_iso[a] = m;
  }

  // Composites: chosen pullback, then the class representative.
  struct Composite {
    HorId h;
    PullbackCone cone;
    MorId iso;  // rep apex → cone apex
  };
  std::map<std::pair<HorId, HorId>, Composite> composites;
  for (HorId h1 = 0; h1 < nh; ++h1) {
    for (HorId h2 = 0; h2 < nh; ++h2) {
      const SpanArrow& s1 = out.spans[h1];
      const SpanArrow& s2 = out.spans[h2];
      if (c.dst(s1.right) != c.dst(s2.left)) continue;
      const PullbackCone& pb = out.pullbacks.at({s1.right, s2.left});
      const SpanArrow sp{pb.apex, c.compose(s1.left, pb.first), c.compose(s2.right, pb.second)};
      const auto [h, iso] = span_class(out, sp);
      composites[{h2, h1}] = {h, pb, iso};
      out.strictifiers[{h2, h1}] = iso;
      data.hor_compose.emplace_back(h2, h1, h);
    }
  }

  // Cells: apex maps m with left' m = f left and right' m = g right.
  std::map<std::tuple<HorId, HorId, MorId, MorId, MorId>, CellId> index;
  for (HorId h = 0; h < nh; ++h) {
    for (HorId k = 0; k < nh; ++k) {
      const SpanArrow& s = out.spans[h];
      const SpanArrow& t = out.spans[k];
      for (MorId m : c.hom(s.apex, t.apex)) {
        for (MorId f : c.hom(c.dst(s.left), c.dst(t.left))) {
          if (c.compose(t.left, m) != c.compose(f, s.left)) continue;
          for (MorId g : c.hom(c.dst(s.right), c.dst(t.right))) {
            if (c.compose(t.right, m) != c.compose(g, s.right)) continue;
            if (data.cells.size() >= bounds.max_cocones) throw BoundExceeded("max-cocones", bounds.max_cocones);
            index[{h, k, f, g, m}] = static_cast<CellId>(data.cells.size());
            data.cells.push_back({h, k, f, g, c.morphism_name(m)});
            out.cell_maps.push_back(m);
          }
        }
      }
    }
  }
  auto cell_of = [&](HorId h, HorId k, MorId f, MorId g, MorId m) { return index.at({h, k, f, g, m}); };

  for (HorId h = 0; h < nh; ++h) {
    const SpanArrow& s = out.spans[h];
    data.identity_cells.push_back(
        cell_of(h, h, c.id(c.dst(s.left)), c.id(c.dst(s.right)), c.id(s.apex)));
  }
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    const ObjId a = c.src(f);
    const ObjId b = c.dst(f);
    const MorId m = c.compose(*inverse_of(c, unit_iso[b]), c.compose(f, unit_iso[a]));
    data.unit_cells.push_back(cell_of(data.units[a], data.units[b], f, f, m));
  }

  const int nc = static_cast<int>(data.cells.size());
  std::vector<std::vector<CellId>> by_top(nh), by_left(c.num_morphisms());
  for (CellId x = 0; x < nc; ++x) {
    by_top[data.cells[x].top].push_back(x);
    by_left[data.cells[x].left].push_back(x);
  }
  for (CellId a = 0; a < nc; ++a) {
    const DoubleCell& al = data.cells[a];
    for (CellId b : by_top[al.bottom]) {
      const DoubleCell& be = data.cells[b];
      data.cell_vcompose.emplace_back(
          b, a,
          cell_of(al.top, be.bottom, c.compose(be.left, al.left), c.compose(be.right, al.right),
                  c.compose(out.cell_maps[b], out.cell_maps[a])));
    }
  }
  // β ⊙ α: the induced map between chosen pullbacks, conjugated by the strictifiers.
  for (CellId a = 0; a < nc; ++a) {
    const DoubleCell& al = data.cells[a];
    for (CellId b : by_left[al.right]) {
      const DoubleCell& be = data.cells[b];
      const Composite& top = composites.at({be.top, al.top});
      const Composite& bot = composites.at({be.bottom, al.bottom});
      const MorId ma = out.cell_maps[a];
      const MorId mb = out.cell_maps[b];
      MorId w = kNone;
      for (MorId x : c.hom(top.cone.apex, bot.cone.apex)) {
        if (c.compose(bot.cone.first, x) == c.compose(ma, top.cone.first) &&
            c.compose(bot.cone.second, x) == c.compose(mb, top.cone.second)) {
          w = x;
          break;
        }
      }
      if (w == kNone) throw Error("span double: no induced map between pullbacks");
      const MorId m = c.compose(*inverse_of(c, bot.iso), c.compose(w, top.iso));
      data.cell_hcompose.emplace_back(b, a, cell_of(top.h, bot.h, al.left, be.right, m));
    }
  }
  out.dbl = DoubleCategory(std::move(data));
  return out;
}

// ---------------------------------------------------------------------------

std::optional<DoubleTabulator> find_tabulator(const DoubleCategory& p, HorId h) {
  const FinCategory& v = p.vertical();
  for (ObjId t = 0; t < v.num_objects(); ++t) {
    for (CellId tau : p.cells_with_top(p.unit(t))) {
      if (p.cell(tau).bottom != h) continue;
      bool universal = true;
      for (ObjId z = 0; z < v.num_objects() && universal; ++z) {
        for (CellId beta : p.cells_with_top(p.unit(z))) {
          if (p.cell(beta).bottom != h) continue;
          if (unique_factor(p, tau, z, t, beta) == kNone) {
            universal = false;
            break;
          }
        }
      }
      if (universal) return DoubleTabulator{t, p.cell(tau).left, p.cell(tau).right, tau};
    }
  }
  return std::nullopt;
}

SpanRecognition recognize_span(const DoubleCategory& p, const Bounds& bounds) {
  (void)bounds;
  const FinCategory& v = p.vertical();
  SpanRecognition r;
  const auto eq = is_equipment(p);
  r.equipment = eq.holds;
  if (!eq.holds) {
    r.witness_a = "no " + eq.missing + " for " + v.morphism_name(eq.failing);
  }
  auto fail_a = [&](std::string w) {
    if (r.witness_a.empty()) r.witness_a = std::move(w);
  };

  std::vector<std::optional<DoubleTabulator>> tabs;
  r.tabular = true;
  for (HorId h = 0; h < p.num_horizontals(); ++h) {
    tabs.push_back(find_tabulator(p, h));
    if (!tabs.back()) {
      r.tabular = false;
      fail_a("no tabulator for " + p.horizontal(h).name);
    }
  }
  const auto missing = missing_pullback(v);
  r.pullbacks = !missing;
  if (missing) fail_a("no pullback of " + cospan_text(v, missing->first, missing->second));

  r.tabulators_cocartesian = r.tabular;
  if (r.tabular) {
    for (HorId h = 0; h < p.num_horizontals(); ++h) {
      if (!is_cocartesian_cell(p, tabs[h]->cell)) {
        r.tabulators_cocartesian = false;
        fail_a("tabulating cell of " + p.horizontal(h).name + " is not cocartesian");
        break;
      }
    }
  }

  // The pulled-back composite of tabulating cells, and the comparison into
  // the tabulator of the composite.
  bool strict = r.tabular && r.pullbacks;
  r.composites_cocartesian = r.tabular && r.pullbacks;
  if (r.tabular && r.pullbacks) {
    for (const auto& [h2, h1, h] : p.data().hor_compose) {
      const auto& t1 = *tabs[h1];
      const auto& t2 = *tabs[h2];
      const auto pb = *find_pullback(v, t1.right, t2.left);
      const CellId a1 = p.vcompose(t1.cell, p.unit_cell(pb.first));
      const CellId a2 = p.vcompose(t2.cell, p.unit_cell(pb.second));
      const CellId cc = (a1 == kNone || a2 == kNone) ? kNone : p.hcompose(a2, a1);
      const std::string name = p.horizontal(h2).name + " o " + p.horizontal(h1).name;
      if (cc == kNone) {
        r.composites_cocartesian = false;
        strict = false;
        fail_a("composite of tabulating cells undefined for " + name);
        if (r.witness_c.empty()) r.witness_c = "composite of tabulating cells undefined for " + name;
        continue;
      }
      if (r.composites_cocartesian && !is_cocartesian_cell(p, cc)) {
        r.composites_cocartesian = false;
        fail_a("pulled-back composite for " + name + " is not cocartesian");
      }
      const MorId u = unique_factor(p, tabs[h]->cell, pb.apex, tabs[h]->apex, cc);
      if (strict && (u == kNone || !inverse_of(v, u))) {
        strict = false;
        r.witness_c = "composite comparison for " + name + " is not invertible";
      }
    }
  }
  r.fibrational = r.equipment && r.tabular && r.pullbacks && r.tabulators_cocartesian && r.composites_cocartesian;

  if (r.tabular) {
    for (ObjId a = 0; a < v.num_objects() && strict; ++a) {
      const auto& t = *tabs[p.unit(a)];
      const MorId u = unique_factor(p, t.cell, a, t.apex, p.identity_cell(p.unit(a)));
      if (u == kNone || !inverse_of(v, u)) {
        strict = false;
        r.witness_c = "unit comparison at " + v.object_name(a) + " is not invertible";
      }
    }
  }
  r.strict = strict;

  // Cells h ⇒ k over (f, g) against apex maps over (f, g).
  r.bijective_on_cells = r.tabular;
  for (HorId h = 0; h < p.num_horizontals() && r.bijective_on_cells; ++h) {
    for (HorId k = 0; k < p.num_horizontals() && r.bijective_on_cells; ++k) {
      const auto& th = *tabs[h];
      const auto& tk = *tabs[k];
      const HorArrow& hh = p.horizontal(h);
      const HorArrow& kk = p.horizontal(k);
      for (MorId f : v.hom(hh.src, kk.src)) {
        for (MorId g : v.hom(hh.dst, kk.dst)) {
          std::set<MorId> targets;
          for (MorId u : v.hom(th.apex, tk.apex)) {
            if (v.compose(tk.left, u) == v.compose(f, th.left) && v.compose(tk.right, u) == v.compose(g, th.right)) {
              targets.insert(u);
            }
          }
          std::set<MorId> images;
          const auto& cells = p.cells_with_frame(h, k, f, g);
          for (CellId alpha : cells) {
            const CellId beta = p.vcompose(alpha, th.cell);
            images.insert(beta == kNone ? kNone : unique_factor(p, tk.cell, th.apex, tk.apex, beta));
          }
          if (images != targets || images.size() != cells.size()) {
            r.bijective_on_cells = false;
            if (r.witness_c.empty()) {
              r.witness_c = std::to_string(cells.size()) + " cells " + hh.name + " => " + kk.name + " over (" +
                            v.morphism_name(f) + ", " + v.morphism_name(g) + ") against " +
                            std::to_string(targets.size()) + " span maps";
            }
            break;
          }
        }
        if (!r.bijective_on_cells) break;
      }
    }
  }

  // Every span of verticals, pushed forward and tabulated again.
  r.spans_discrete = true;
  r.essentially_surjective = r.tabular;
  for (ObjId e = 0; e < v.num_objects(); ++e) {
    for (MorId f = 0; f < v.num_morphisms(); ++f) {
      if (v.src(f) != e) continue;
      for (MorId g = 0; g < v.num_morphisms(); ++g) {
        if (v.src(g) != e) continue;
        ++r.spans_checked;
        const std::string name = span_text(v, {e, f, g});
        bool found = false;
        for (CellId c : p.cells_with_top(p.unit(e))) {
          const DoubleCell& cell = p.cell(c);
          if (cell.left != f || cell.right != g || !is_cocartesian_cell(p, c)) continue;
          found = true;
          const auto& t = tabs[cell.bottom];
          const MorId u = t ? unique_factor(p, t->cell, e, t->apex, c) : kNone;
          if (r.spans_discrete && (u == kNone || !inverse_of(v, u))) {
            r.spans_discrete = false;
            r.witness_b = "span " + name + " is not the tabulator of its pushforward";
          }
          break;
        }
        if (!found && r.spans_discrete) {
          r.spans_discrete = false;
          r.witness_b = "span " + name + " has no cocartesian pushforward";
        }
        if (r.tabular && r.essentially_surjective) {
          bool hit = false;
          for (HorId h = 0; h < p.num_horizontals() && !hit; ++h) {
            const auto& t = *tabs[h];
            for (MorId m : v.hom(e, t.apex)) {
              if (v.compose(t.left, m) == f && v.compose(t.right, m) == g && inverse_of(v, m)) {
                hit = true;
                break;
              }
            }
          }
          if (!hit) {
            r.essentially_surjective = false;
            if (r.witness_c.empty()) r.witness_c = "span " + name + " is not a tabulator";
          }
        }
      }
    }
  }
  r.representation = r.strict && r.bijective_on_cells && r.essentially_surjective;
  r.consistent = r.representation == (r.fibrational && r.spans_discrete);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::string functor_text(const Functor& f) {
  std::string s = "[";
  for (ObjId a = 0; a < f.source().num_objects(); ++a) {
    s += (a ? "," : "") + f.source().object_name(a) + "->" + f.target().object_name(f(a));
  }
  return s + "]";
}

}  // namespace

SpanRecognition recognize_cat_span(const std::vector<NamedCategory>& tier, const std::vector<NamedCategory>& probes,
                                   int max_size, const Bounds& bounds) {
  SpanRecognition r;
  auto fail = [](std::string& w, std::string text) {
    if (w.empty()) w = std::move(text);
  };

  r.equipment = true;
  r.pullbacks = true;
  for (const auto& [xn, x] : tier) {
    for (const auto& [yn, y] : tier) {
      for (const auto& f : enumerate_functors(x, y, bounds)) {
        const auto frag = functor_fragment(f, bounds);
        if (r.equipment && !is_equipment(frag.dbl)) {
          r.equipment = false;
          fail(r.witness_a, "fragment of " + xn + " -> " + yn + " is not an equipment");
        }
        for (const auto& [wn, w] : tier) {
          for (const auto& g : enumerate_functors(w, y, bounds)) {
            const auto pb = pullback(f, g);
            const bool ok = check_category(*pb.apex).valid && compose(f, pb.first) == compose(g, pb.second);
            if (!ok && r.pullbacks) {
              r.pullbacks = false;
              fail(r.witness_a, "pullback of " + xn + " -> " + yn + " <- " + wn + " fails");
            }
          }
        }
      }
    }
  }

  struct Entry {
    ProfRef f;
    TabulatorSpan t;
  };
  std::vector<Entry> profs;
  r.tabular = true;
  r.tabulators_cocartesian = true;
  for (const auto& [xn, x] : tier) {
    for (const auto& [yn, y] : tier) {
      for (auto& p : enumerate_profunctors(x, y, max_size, bounds)) {
        auto pr = share(std::move(p));
        auto t = tabulate(pr);
        if (r.tabular && !verify_tabulator(t, probes, bounds).holds) {
          r.tabular = false;
          fail(r.witness_a, "tabulator of a profunctor " + xn + " -> " + yn + " is not universal");
        }
        if (r.tabulators_cocartesian && !is_invertible(reflection_counit(t, classify(t.span)))) {
          r.tabulators_cocartesian = false;
          fail(r.witness_a, "reflection counit for a profunctor " + xn + " -> " + yn + " is not invertible");
        }
        profs.push_back({pr, std::move(t)});
      }
    }
  }

  r.composites_cocartesian = true;
  r.strict = true;
  for (const auto& [xn, x] : tier) {
    const auto thom = tabulate(share(hom_profunctor(x)));
    if (r.strict && !is_isomorphism(unit_comparison(thom))) {
      r.strict = false;
      fail(r.witness_c, "unit comparison " + xn + " -> tabulate(hom) is not invertible");
    }
  }
  for (const auto& ef : profs) {
    for (const auto& eg : profs) {
      if (ef.f->target_ref().get() != eg.f->source_ref().get()) continue;
      const auto comp = compose_spans(ef.t.span, eg.t.span);
      const auto gf = compose_prof(eg.f, ef.f);
      if (r.composites_cocartesian &&
          !is_invertible(laxity_comparison(ef.t, eg.t, comp, classify(comp.span), gf))) {
        r.composites_cocartesian = false;
        fail(r.witness_a, "laxity comparison not invertible");
      }
      if (r.strict) {
        const auto tgf = tabulate(gf.result);
        if (!is_isomorphism(composite_comparison(ef.t, eg.t, comp, gf, tgf))) {
          r.strict = false;
          fail(r.witness_c, "composite comparison is not invertible");
        }
      }
    }
  }
  r.fibrational = r.equipment && r.tabular && r.pullbacks && r.tabulators_cocartesian && r.composites_cocartesian;

  // Cells F ⇒ G over (f, g) against span maps tab F → tab G over (f, g).
  r.bijective_on_cells = true;
  for (const auto& ef : profs) {
    for (const auto& eg : profs) {
      if (!r.bijective_on_cells) break;
      const Profunctor& f = *ef.f;
      const Profunctor& g = *eg.f;
      for (const auto& fx : enumerate_functors(f.source_ref(), g.source_ref(), bounds)) {
        for (const auto& fy : enumerate_functors(f.target_ref(), g.target_ref(), bounds)) {
          const auto cells = enumerate_cells(ef.f, eg.f, fx, fy, bounds);
          const Span over{ef.t.span.apex, compose(fx, ef.t.span.p), compose(fy, ef.t.span.q)};
          const auto maps = span_morphisms(over, eg.t.span, bounds);
          if (cells.size() != maps.size() && r.bijective_on_cells) {
            r.bijective_on_cells = false;
            fail(r.witness_c, std::to_string(cells.size()) + " cells against " + std::to_string(maps.size()) +
                                  " span maps");
          }
        }
      }
    }
  }

  r.spans_discrete = true;
  r.essentially_surjective = true;
  for (const auto& [en, e] : tier) {
    for (const auto& [xn, x] : tier) {
      for (const auto& [yn, y] : tier) {
        const auto ps = enumerate_functors(e, x, bounds);
        const auto qs = enumerate_functors(e, y, bounds);
        for (const auto& p : ps) {
          for (const auto& q : qs) {
            const Span s{e, p, q};
            ++r.spans_checked;
            const auto rep = is_tsdfib(s);
            if (!rep.holds && r.spans_discrete) {
              r.spans_discrete = false;
              r.witness_b = xn + " <-" + functor_text(p) + "- " + en + " -" + functor_text(q) + "-> " + yn + ": " +
                            rep.witness;
            }
            if (r.essentially_surjective) {
              const auto c = classify(s);
              if (!is_isomorphism(reflection_unit(s, c, tabulate(c.proarrow)))) {
                r.essentially_surjective = false;
                fail(r.witness_c, "span over " + en + " is not a tabulator");
              }
            }
          }
        }
      }
    }
  }
  r.representation = r.strict && r.bijective_on_cells && r.essentially_surjective;
  r.consistent = r.representation == (r.fibrational && r.spans_discrete);
  return r;
}

}  // namespace equip

#include "equip/profun.hpp"

#include <algorithm>
#include <numeric>

#include "equip/detail/union_find.hpp"

namespace equip {

namespace {

bool same_cat(const CatRef& a, const CatRef& b) { return a == b || a->same_tables(*b); }

// rank[m] = position of m within hom(src m, dst m).
std::vector<int> hom_ranks(const FinCategory& c) {
  std::vector<int> rank(c.num_morphisms());
  for (int a = 0; a < c.num_objects(); ++a) {
    for (int b = 0; b < c.num_objects(); ++b) {
      const auto hs = c.hom(a, b);
      for (std::size_t i = 0; i < hs.size(); ++i) rank[hs[i]] = static_cast<int>(i);
    }
  }
  return rank;
}

Functor identity_on(const CatRef& from, const CatRef& to) {
  std::vector<ObjId> o(from->num_objects());
  std::iota(o.begin(), o.end(), 0);
  std::vector<MorId> m(from->num_morphisms());
  std::iota(m.begin(), m.end(), 0);
  return Functor(from, to, std::move(o), std::move(m));
}

}  // namespace

Profunctor::Profunctor(CatRef source, CatRef target, std::vector<int> sizes,
                       std::vector<std::vector<int>> y_action,
                       std::vector<std::vector<int>> x_action,
                       std::vector<std::vector<std::string>> element_names)
    : source_(std::move(source)),
      target_(std::move(target)),
      sizes_(std::move(sizes)),
      y_action_(std::move(y_action)),
      x_action_(std::move(x_action)),
      names_(std::move(element_names)) {
  const int nx = source_->num_objects();
  const int ny = target_->num_objects();
  if (static_cast<int>(sizes_.size()) != nx * ny) throw Error("profunctor: size table shape");
  if (static_cast<int>(y_action_.size()) != target_->num_morphisms() * nx) {
    throw Error("profunctor: target action table shape");
  }
  if (static_cast<int>(x_action_.size()) != source_->num_morphisms() * ny) {
    throw Error("profunctor: source action table shape");
  }
  for (int g = 0; g < target_->num_morphisms(); ++g) {
    for (int a = 0; a < nx; ++a) {
      const auto& fn = y_action_[g * nx + a];
      if (static_cast<int>(fn.size()) != size(target_->dst(g), a)) {
        throw Error("profunctor: target action has wrong domain");
      }
      for (int v : fn) {
        if (v < 0 || v >= size(target_->src(g), a)) throw Error("profunctor: target action out of range");
      }
    }
  }
  for (int f = 0; f < source_->num_morphisms(); ++f) {
    for (int b = 0; b < ny; ++b) {
      const auto& fn = x_action_[f * ny + b];
      if (static_cast<int>(fn.size()) != size(b, source_->src(f))) {
        throw Error("profunctor: source action has wrong domain");
      }
      for (int v : fn) {
        if (v < 0 || v >= size(b, source_->dst(f))) throw Error("profunctor: source action out of range");
      }
    }
  }
  if (!names_.empty() && static_cast<int>(names_.size()) != nx * ny) {
    throw Error("profunctor: element name table shape");
  }
  offsets_.assign(sizes_.size() + 1, 0);
  for (std::size_t i = 0; i < sizes_.size(); ++i) offsets_[i + 1] = offsets_[i] + sizes_[i];
}

Profunctor::Position Profunctor::position(int global_index) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), global_index);
  const int cell_index = static_cast<int>(it - offsets_.begin()) - 1;
  const int nx = source_->num_objects();
  return {cell_index / nx, cell_index % nx, global_index - offsets_[cell_index]};
}

std::string Profunctor::element_name(ObjId b, ObjId a, int s) const {
  if (!names_.empty()) return names_[cell(b, a)][s];
  return target_->object_name(b) + "," + source_->object_name(a) + "#" + std::to_string(s);
}

bool Profunctor::same_tables(const Profunctor& other) const {
  return same_cat(source_, other.source_) && same_cat(target_, other.target_) &&
         sizes_ == other.sizes_ && y_action_ == other.y_action_ && x_action_ == other.x_action_;
}

ValidationReport check_profunctor(const Profunctor& p) {
  ValidationReport r;
  auto fail = [&r](std::string msg) {
    r.valid = false;
    r.violations.push_back(std::move(msg));
  };
  const FinCategory& x = p.source();
  const FinCategory& y = p.target();
  for (int b = 0; b < y.num_objects(); ++b) {
    for (int a = 0; a < x.num_objects(); ++a) {
      for (int s = 0; s < p.size(b, a); ++s) {
        if (p.act_y(y.id(b), a, s) != s) fail("target identity acts nontrivially at " + p.element_name(b, a, s));
        if (p.act_x(b, x.id(a), s) != s) fail("source identity acts nontrivially at " + p.element_name(b, a, s));
      }
    }
  }
  // (g∘g') acts as g' after g, contravariantly.
  for (int g = 0; g < y.num_morphisms(); ++g) {
    for (int g2 = 0; g2 < y.num_morphisms(); ++g2) {
      const MorId gg = y.compose(g, g2);
      if (gg == kNone) continue;
      for (int a = 0; a < x.num_objects(); ++a) {
        for (int s = 0; s < p.size(y.dst(g), a); ++s) {
          if (p.act_y(gg, a, s) != p.act_y(g2, a, p.act_y(g, a, s))) {
            fail("target action not functorial: " + y.morphism_name(g) + " o " + y.morphism_name(g2));
          }
        }
      }
    }
  }
  for (int f = 0; f < x.num_morphisms(); ++f) {
    for (int f2 = 0; f2 < x.num_morphisms(); ++f2) {
      const MorId ff = x.compose(f, f2);
      if (ff == kNone) continue;
      for (int b = 0; b < y.num_objects(); ++b) {
        for (int s = 0; s < p.size(b, x.src(f2)); ++s) {
          if (p.act_x(b, ff, s) != p.act_x(b, f, p.act_x(b, f2, s))) {
            fail("source action not functorial: " + x.morphism_name(f) + " o " + x.morphism_name(f2));
          }
        }
      }
    }
  }
  for (int g = 0; g < y.num_morphisms(); ++g) {
    for (int f = 0; f < x.num_morphisms(); ++f) {
      const ObjId b = y.dst(g);
      for (int s = 0; s < p.size(b, x.src(f)); ++s) {
        const int l = p.act_x(y.src(g), f, p.act_y(g, x.src(f), s));
        const int rr = p.act_y(g, x.dst(f), p.act_x(b, f, s));
        if (l != rr) {
          fail("actions do not commute: " + y.morphism_name(g) + ", " + x.morphism_name(f));
        }
      }
    }
  }
  return r;
}

Profunctor make_profunctor(const CatRef& source, const CatRef& target,
                           const std::function<int(ObjId, ObjId)>& size,
                           const std::function<int(MorId, ObjId, int)>& act_y,
                           const std::function<int(ObjId, MorId, int)>& act_x) {
  const int nx = source->num_objects();
  const int ny = target->num_objects();
  std::vector<int> sizes(static_cast<std::size_t>(nx) * ny);
  for (int b = 0; b < ny; ++b) {
    for (int a = 0; a < nx; ++a) sizes[b * nx + a] = size(b, a);
  }
  std::vector<std::vector<int>> ya(static_cast<std::size_t>(target->num_morphisms()) * nx);
  for (int g = 0; g < target->num_morphisms(); ++g) {
    for (int a = 0; a < nx; ++a) {
      auto& fn = ya[g * nx + a];
      for (int s = 0; s < sizes[target->dst(g) * nx + a]; ++s) fn.push_back(act_y(g, a, s));
    }
  }
  std::vector<std::vector<int>> xa(static_cast<std::size_t>(source->num_morphisms()) * ny);
  for (int f = 0; f < source->num_morphisms(); ++f) {
    for (int b = 0; b < ny; ++b) {
      auto& fn = xa[f * ny + b];
      for (int s = 0; s < sizes[b * nx + source->src(f)]; ++s) fn.push_back(act_x(b, f, s));
    }
  }
  return Profunctor(source, target, std::move(sizes), std::move(ya), std::move(xa));
}

Profunctor empty_profunctor(const CatRef& source, const CatRef& target) {
  return make_profunctor(
      source, target, [](ObjId, ObjId) { return 0; }, [](MorId, ObjId, int s) { return s; },
      [](ObjId, MorId, int s) { return s; });
}

Profunctor point_profunctor(const CatRef& source, const CatRef& target) {
  return make_profunctor(
      source, target, [](ObjId, ObjId) { return 1; }, [](MorId, ObjId, int) { return 0; },
      [](ObjId, MorId, int) { return 0; });
}

namespace {

// Hom-valued profunctor x → y with value Hom_c(left(b), right(a)), where
// left/right are functors y → c and x → c.  Covers hom, companions and
// conjoints.
Profunctor hom_shaped(const CatRef& x, const CatRef& y, const Functor& left, const Functor& right) {
  const FinCategory& c = left.target();
  const auto rank = hom_ranks(c);
  auto p = make_profunctor(
      x, y, [&](ObjId b, ObjId a) { return static_cast<int>(c.hom(left(b), right(a)).size()); },
      [&](MorId g, ObjId a, int s) {
        const MorId m = c.hom(left(y->dst(g)), right(a))[s];
        return rank[c.compose(m, left.map(g))];
      },
      [&](ObjId b, MorId f, int s) {
        const MorId m = c.hom(left(b), right(x->src(f)))[s];
        return rank[c.compose(right.map(f), m)];
      });
  std::vector<std::vector<std::string>> names(p.sizes().size());
  for (int b = 0; b < y->num_objects(); ++b) {
    for (int a = 0; a < x->num_objects(); ++a) {
      for (MorId m : c.hom(left(b), right(a))) names[p.cell(b, a)].push_back(c.morphism_name(m));
    }
  }
  return Profunctor(x, y, p.sizes(), p.y_action(), p.x_action(), std::move(names));
}

}  // namespace

Profunctor profunctor_from_diagram(const FinSetDiagram& d, const CatRef& source, const CatRef& target) {
  const FinCategory& x = *source;
  const FinCategory& y = *target;
  const int nx = x.num_objects();
  const int mx = x.num_morphisms();
  if (d.shape->num_objects() != y.num_objects() * nx || d.shape->num_morphisms() != y.num_morphisms() * mx) {
    throw Error("profunctor_from_diagram: shape is not y^op × x");
  }
  std::vector<std::vector<int>> ya(static_cast<std::size_t>(y.num_morphisms()) * nx);
  std::vector<std::vector<int>> xa(static_cast<std::size_t>(mx) * y.num_objects());
  for (MorId g = 0; g < y.num_morphisms(); ++g) {
    for (ObjId a = 0; a < nx; ++a) ya[static_cast<std::size_t>(g) * nx + a] = d.maps[g * mx + x.id(a)];
  }
  for (MorId f = 0; f < mx; ++f) {
    for (ObjId b = 0; b < y.num_objects(); ++b) {
      xa[static_cast<std::size_t>(f) * y.num_objects() + b] = d.maps[y.id(b) * mx + f];
    }
  }
  return Profunctor(source, target, d.sizes, std::move(ya), std::move(xa));
}

std::vector<Profunctor> enumerate_profunctors(const CatRef& source, const CatRef& target, int max_size,
                                              const Bounds& bounds) {
  auto shape = share(product(opposite(*target), *source));
  std::vector<Profunctor> out;
  for (const auto& d : enumerate_diagrams(shape, max_size, bounds)) {
    out.push_back(profunctor_from_diagram(d, source, target));
  }
  return out;
}

Profunctor hom_profunctor(const CatRef& c) {
  const Functor id = identity_functor(c);
  return hom_shaped(c, c, id, id);
}

// ---------------------------------------------------------------------------
// Cells

ValidationReport check_cell(const ProfCell& c) {
  ValidationReport r;
  auto fail = [&r](std::string msg) {
    r.valid = false;
    r.violations.push_back(std::move(msg));
  };
  const Profunctor& f = *c.source;
  const Profunctor& g = *c.target;
  const FinCategory& x = f.source();
  const FinCategory& y = f.target();
  for (int b = 0; b < y.num_objects(); ++b) {
    for (int a = 0; a < x.num_objects(); ++a) {
      const auto& comp = c.components[f.cell(b, a)];
      if (static_cast<int>(comp.size()) != f.size(b, a)) {
        fail("component size at " + y.object_name(b) + "," + x.object_name(a));
        return r;
      }
      for (int v : comp) {
        if (v < 0 || v >= g.size(c.frame_y(b), c.frame_x(a))) {
          fail("component out of range at " + y.object_name(b) + "," + x.object_name(a));
          return r;
        }
      }
    }
  }
  for (int m = 0; m < y.num_morphisms(); ++m) {
    for (int a = 0; a < x.num_objects(); ++a) {
      for (int s = 0; s < f.size(y.dst(m), a); ++s) {
        const int l = c.apply(y.src(m), a, f.act_y(m, a, s));
        const int rr = g.act_y(c.frame_y.map(m), c.frame_x(a), c.apply(y.dst(m), a, s));
        if (l != rr) fail("not natural in the target variable at " + y.morphism_name(m));
      }
    }
  }
  for (int m = 0; m < x.num_morphisms(); ++m) {
    for (int b = 0; b < y.num_objects(); ++b) {
      for (int s = 0; s < f.size(b, x.src(m)); ++s) {
        const int l = c.apply(b, x.dst(m), f.act_x(b, m, s));
        const int rr = g.act_x(c.frame_y(b), c.frame_x.map(m), c.apply(b, x.src(m), s));
        if (l != rr) fail("not natural in the source variable at " + x.morphism_name(m));
      }
    }
  }
  return r;
}

ProfCell identity_cell(const ProfRef& f) {
  ProfCell c{f, f, identity_functor(f->source_ref()), identity_functor(f->target_ref()), {}};
  for (int b = 0; b < f->target().num_objects(); ++b) {
    for (int a = 0; a < f->source().num_objects(); ++a) {
      std::vector<int> id(f->size(b, a));
      std::iota(id.begin(), id.end(), 0);
      c.components.push_back(std::move(id));
    }
  }
  return c;
}

ProfCell vertical_compose(const ProfCell& beta, const ProfCell& alpha) {
  ProfCell c{alpha.source, beta.target, compose(beta.frame_x, alpha.frame_x),
             compose(beta.frame_y, alpha.frame_y), {}};
  const Profunctor& f = *alpha.source;
  for (int b = 0; b < f.target().num_objects(); ++b) {
    for (int a = 0; a < f.source().num_objects(); ++a) {
      std::vector<int> comp;
      for (int s = 0; s < f.size(b, a); ++s) {
        comp.push_back(beta.apply(alpha.frame_y(b), alpha.frame_x(a), alpha.apply(b, a, s)));
      }
      c.components.push_back(std::move(comp));
    }
  }
  return c;
}

ProfCell hom_cell(const Functor& f, const ProfRef& hom_x, const ProfRef& hom_y) {
  const FinCategory& x = f.source();
  const FinCategory& y = f.target();
  const auto rank = hom_ranks(y);
  ProfCell c{hom_x, hom_y, f, f, {}};
  for (int b = 0; b < x.num_objects(); ++b) {
    for (int a = 0; a < x.num_objects(); ++a) {
      std::vector<int> comp;
      for (MorId u : x.hom(b, a)) comp.push_back(rank[f.map(u)]);
      c.components.push_back(std::move(comp));
    }
  }
  return c;
}

bool same_components(const ProfCell& a, const ProfCell& b) {
  return a.components == b.components && a.frame_x.object_map() == b.frame_x.object_map() &&
         a.frame_x.morphism_map() == b.frame_x.morphism_map() &&
         a.frame_y.object_map() == b.frame_y.object_map() &&
         a.frame_y.morphism_map() == b.frame_y.morphism_map();
}

bool is_invertible(const ProfCell& c) {
  if (!is_isomorphism(c.frame_x) || !is_isomorphism(c.frame_y)) return false;
  const Profunctor& f = *c.source;
  const Profunctor& g = *c.target;
  for (int b = 0; b < f.target().num_objects(); ++b) {
    for (int a = 0; a < f.source().num_objects(); ++a) {
      const auto& comp = c.components[f.cell(b, a)];
      if (static_cast<int>(comp.size()) != g.size(c.frame_y(b), c.frame_x(a))) return false;
      std::vector<char> hit(comp.size(), 0);
      for (int v : comp) {
        if (hit[v]) return false;
        hit[v] = 1;
      }
    }
  }
  return true;
}

namespace {

// Backtracking cell search with forward propagation along both actions.
// `visit` returns false to stop.
void search_cells(const ProfRef& fp, const ProfRef& gp, const Functor& fx, const Functor& fy,
                  bool injective, const std::function<bool(ProfCell&&)>& visit) {
  const Profunctor& f = *fp;
  const Profunctor& g = *gp;
  const FinCategory& x = f.source();
  const FinCategory& y = f.target();
  const int n = f.total_size();
  std::vector<int> assign(n, kNone);  // global index in g
  std::vector<int> used(injective ? g.total_size() : 0, 0);
  std::vector<int> trail;
  bool stop = false;

  auto set = [&](int e, int v) {
    if (assign[e] != kNone) return assign[e] == v;
    if (injective && used[v]) return false;
    assign[e] = v;
    if (injective) used[v] = 1;
    trail.push_back(e);
    return true;
  };
  auto propagate = [&](int e) {
    const auto p = f.position(e);
    const ObjId tb = fy(p.b);
    const ObjId ta = fx(p.a);
    const int v = assign[e] - g.global(tb, ta, 0);
    for (int m = 0; m < y.num_morphisms(); ++m) {
      if (y.dst(m) != p.b) continue;
      const int e2 = f.global(y.src(m), p.a, f.act_y(m, p.a, p.s));
      const int v2 = g.global(fy(y.src(m)), ta, g.act_y(fy.map(m), ta, v));
      if (!set(e2, v2)) return false;
    }
    for (int m = 0; m < x.num_morphisms(); ++m) {
      if (x.src(m) != p.a) continue;
      const int e2 = f.global(p.b, x.dst(m), f.act_x(p.b, m, p.s));
      const int v2 = g.global(tb, fx(x.dst(m)), g.act_x(tb, fx.map(m), v));
      if (!set(e2, v2)) return false;
    }
    return true;
  };
  auto undo = [&](std::size_t mark) {
    while (trail.size() > mark) {
      const int e = trail.back();
      trail.pop_back();
      if (injective) used[assign[e]] = 0;
      assign[e] = kNone;
    }
  };
  std::function<void(int)> rec = [&](int e) {
    while (e < n && assign[e] != kNone) ++e;
    if (e == n) {
      ProfCell c{fp, gp, fx, fy, {}};
      for (int b = 0; b < y.num_objects(); ++b) {
        for (int a = 0; a < x.num_objects(); ++a) {
          std::vector<int> comp;
          const int base = g.global(fy(b), fx(a), 0);
          for (int s = 0; s < f.size(b, a); ++s) comp.push_back(assign[f.global(b, a, s)] - base);
          c.components.push_back(std::move(comp));
        }
      }
      if (!visit(std::move(c))) stop = true;
      return;
    }
    const auto p = f.position(e);
    const ObjId tb = fy(p.b);
    const ObjId ta = fx(p.a);
    const int base = g.global(tb, ta, 0);
    for (int v = 0; v < g.size(tb, ta) && !stop; ++v) {
      const std::size_t mark = trail.size();
      bool ok = set(e, base + v);
      for (std::size_t i = mark; ok && i < trail.size(); ++i) ok = propagate(trail[i]);
      if (ok) rec(e + 1);
      undo(mark);
    }
  };
  rec(0);
}

}  // namespace

std::vector<ProfCell> enumerate_cells(const ProfRef& fp, const ProfRef& gp, const Functor& fx,
                                      const Functor& fy, const Bounds& bounds, bool injective) {
  std::vector<ProfCell> out;
  search_cells(fp, gp, fx, fy, injective, [&](ProfCell&& c) {
    if (out.size() >= bounds.max_cocones) {
      throw BoundExceeded("max-cocones", bounds.max_cocones);
    }
    out.push_back(std::move(c));
    return true;
  });
  return out;
}

std::optional<ProfCell> find_iso_loose(const ProfRef& f, const ProfRef& g) {
  if (!f->source().same_tables(g->source()) || !f->target().same_tables(g->target())) {
    return std::nullopt;
  }
  if (f->sizes() != g->sizes()) return std::nullopt;
  const Functor fx = identity_on(f->source_ref(), g->source_ref());
  const Functor fy = identity_on(f->target_ref(), g->target_ref());
  // Sizes agree cellwise, so an injective cell is bijective.
  std::optional<ProfCell> found;
  search_cells(f, g, fx, fy, true, [&](ProfCell&& c) {
    found = std::move(c);
    return false;
  });
  return found;
}

std::optional<ProfCell> find_iso(const ProfRef& f, const ProfRef& g) { return find_iso_loose(f, g); }

// ---------------------------------------------------------------------------
// Composition

int ProfComposite::class_of(ObjId c, ObjId a, ObjId b, int t, int s) const {
  const int cell = result->cell(c, a);
  const int pair = pair_offsets[cell][b] + t * first->size(b, a) + s;
  return classes[cell][pair];
}

ProfComposite compose_prof(const ProfRef& gp, const ProfRef& fp) {
  const Profunctor& g = *gp;
  const Profunctor& f = *fp;
  if (!same_cat(g.source_ref(), f.target_ref())) {
    throw Error("compose_prof: middle categories differ");
  }
  const FinCategory& x = f.source();
  const FinCategory& y = f.target();
  const FinCategory& z = g.target();
  const int nx = x.num_objects();
  const int ny = y.num_objects();
  const int nz = z.num_objects();
  ProfComposite out;
  out.first = fp;
  out.second = gp;
  out.pair_offsets.resize(static_cast<std::size_t>(nz) * nx);
  out.classes.resize(out.pair_offsets.size());
  out.representatives.resize(out.pair_offsets.size());
  std::vector<int> sizes(out.pair_offsets.size());
  for (int c = 0; c < nz; ++c) {
    for (int a = 0; a < nx; ++a) {
      const int cell = c * nx + a;
      auto& offs = out.pair_offsets[cell];
      offs.assign(ny + 1, 0);
      for (int b = 0; b < ny; ++b) offs[b + 1] = offs[b] + g.size(c, b) * f.size(b, a);
      detail::UnionFind uf(offs[ny]);
      // m : b → b' identifies (G(c,m) t, s) with (t, F(m,a) s), t ∈ G(c,b), s ∈ F(b',a).
      for (int m = 0; m < y.num_morphisms(); ++m) {
        const ObjId b = y.src(m);
        const ObjId b2 = y.dst(m);
        for (int t = 0; t < g.size(c, b); ++t) {
          const int t2 = g.act_x(c, m, t);
          for (int s = 0; s < f.size(b2, a); ++s) {
            const int s2 = f.act_y(m, a, s);
            uf.unite(offs[b2] + t2 * f.size(b2, a) + s, offs[b] + t * f.size(b, a) + s2);
          }
        }
      }
      int count = 0;
      out.classes[cell] = uf.classes(&count);
      sizes[cell] = count;
      auto& reps = out.representatives[cell];
      reps.assign(count, {kNone, 0, 0});
      for (int b = 0; b < ny; ++b) {
        for (int t = 0; t < g.size(c, b); ++t) {
          for (int s = 0; s < f.size(b, a); ++s) {
            const int k = out.classes[cell][offs[b] + t * f.size(b, a) + s];
            if (reps[k].b == kNone) reps[k] = {b, t, s};
          }
        }
      }
    }
  }
  std::vector<std::vector<int>> ya(static_cast<std::size_t>(z.num_morphisms()) * nx);
  for (int h = 0; h < z.num_morphisms(); ++h) {
    for (int a = 0; a < nx; ++a) {
      for (const auto& r : out.representatives[z.dst(h) * nx + a]) {
        const int t2 = g.act_y(h, r.b, r.t);
        const int cell = z.src(h) * nx + a;
        ya[h * nx + a].push_back(
            out.classes[cell][out.pair_offsets[cell][r.b] + t2 * f.size(r.b, a) + r.s]);
      }
    }
  }
  std::vector<std::vector<int>> xa(static_cast<std::size_t>(x.num_morphisms()) * nz);
  for (int k = 0; k < x.num_morphisms(); ++k) {
    for (int c = 0; c < nz; ++c) {
      for (const auto& r : out.representatives[c * nx + x.src(k)]) {
        const int s2 = f.act_x(r.b, k, r.s);
        const ObjId a2 = x.dst(k);
        const int cell = c * nx + a2;
        xa[k * nz + c].push_back(
            out.classes[cell][out.pair_offsets[cell][r.b] + r.t * f.size(r.b, a2) + s2]);
      }
    }
  }
  std::vector<std::vector<std::string>> names(sizes.size());
  for (std::size_t cell = 0; cell < sizes.size(); ++cell) {
    const ObjId c = static_cast<ObjId>(cell) / nx;
    const ObjId a = static_cast<ObjId>(cell) % nx;
    for (const auto& r : out.representatives[cell]) {
      names[cell].push_back("[" + g.element_name(c, r.b, r.t) + "|" + f.element_name(r.b, a, r.s) + "]");
    }
  }
  out.result = share(Profunctor(fp->source_ref(), gp->target_ref(), std::move(sizes), std::move(ya),
                                std::move(xa), std::move(names)));
  return out;
}

ProfCell horizontal_compose(const ProfCell& beta, const ProfCell& alpha, const ProfComposite& top,
                            const ProfComposite& bottom) {
  if (alpha.frame_y.object_map() != beta.frame_x.object_map() ||
      alpha.frame_y.morphism_map() != beta.frame_x.morphism_map()) {
    throw Error("horizontal_compose: shared vertical sides differ");
  }
  ProfCell c{top.result, bottom.result, alpha.frame_x, beta.frame_y, {}};
  const Profunctor& r = *top.result;
  const FinCategory& x = r.source();
  const FinCategory& z = r.target();
  for (int cz = 0; cz < z.num_objects(); ++cz) {
    for (int a = 0; a < x.num_objects(); ++a) {
      std::vector<int> comp;
      for (const auto& rep : top.representatives[r.cell(cz, a)]) {
        const ObjId mid = alpha.frame_y(rep.b);
        comp.push_back(bottom.class_of(beta.frame_y(cz), alpha.frame_x(a), mid,
                                       beta.apply(cz, rep.b, rep.t), alpha.apply(rep.b, a, rep.s)));
      }
      c.components.push_back(std::move(comp));
    }
  }
  return c;
}

ProfCell left_unitor(const ProfComposite& comp) {
  const Profunctor& f = *comp.first;
  const FinCategory& y = f.target();
  const Profunctor& r = *comp.result;
  ProfCell c{comp.result, comp.first, identity_functor(r.source_ref()), identity_functor(r.target_ref()), {}};
  for (int cc = 0; cc < y.num_objects(); ++cc) {
    for (int a = 0; a < f.source().num_objects(); ++a) {
      std::vector<int> v;
      for (const auto& rep : comp.representatives[r.cell(cc, a)]) {
        const MorId t = y.hom(cc, rep.b)[rep.t];
        v.push_back(f.act_y(t, a, rep.s));
      }
      c.components.push_back(std::move(v));
    }
  }
  return c;
}

ProfCell right_unitor(const ProfComposite& comp) {
  const Profunctor& f = *comp.second;
  const FinCategory& x = f.source();
  const Profunctor& r = *comp.result;
  ProfCell c{comp.result, comp.second, identity_functor(r.source_ref()), identity_functor(r.target_ref()), {}};
  for (int b = 0; b < f.target().num_objects(); ++b) {
    for (int a = 0; a < x.num_objects(); ++a) {
      std::vector<int> v;
      for (const auto& rep : comp.representatives[r.cell(b, a)]) {
        const MorId u = x.hom(rep.b, a)[rep.s];
        v.push_back(f.act_x(b, u, rep.t));
      }
      c.components.push_back(std::move(v));
    }
  }
  return c;
}

ProfCell invert_globular(const ProfCell& c) {
  ProfCell inv{c.target, c.source, identity_functor(c.target->source_ref()),
               identity_functor(c.target->target_ref()), {}};
  const Profunctor& g = *c.target;
  for (int b = 0; b < g.target().num_objects(); ++b) {
    for (int a = 0; a < g.source().num_objects(); ++a) {
      const auto& comp = c.components[g.cell(b, a)];
      std::vector<int> v(g.size(b, a), kNone);
      for (std::size_t s = 0; s < comp.size(); ++s) v[comp[s]] = static_cast<int>(s);
      if (std::find(v.begin(), v.end(), kNone) != v.end()) throw Error("invert_globular: not bijective");
      inv.components.push_back(std::move(v));
    }
  }
  return inv;
}

ProfCell associator(const ProfComposite& hg_f, const ProfComposite& hg, const ProfComposite& h_gf,
                    const ProfComposite& gf) {
  const Profunctor& r = *hg_f.result;
  ProfCell c{hg_f.result, h_gf.result, identity_functor(r.source_ref()), identity_functor(r.target_ref()), {}};
  const FinCategory& x = r.source();
  const FinCategory& w = r.target();
  for (int d = 0; d < w.num_objects(); ++d) {
    for (int a = 0; a < x.num_objects(); ++a) {
      std::vector<int> v;
      for (const auto& outer : hg_f.representatives[r.cell(d, a)]) {
        // outer = (b, u ∈ (H∘G)(d, b), s ∈ F(b, a)); u = [(c, rr ∈ H(d,c), t ∈ G(c,b))].
        const auto& inner = hg.representatives[hg.result->cell(d, outer.b)][outer.t];
        const int gfs = gf.class_of(inner.b, a, outer.b, inner.s, outer.s);
        v.push_back(h_gf.class_of(d, a, inner.b, inner.t, gfs));
      }
      c.components.push_back(std::move(v));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Companions and conjoints

Companionship companion_of(const Functor& f) {
  const CatRef& x = f.source_ref();
  const CatRef& y = f.target_ref();
  Companionship out;
  out.proarrow = share(hom_shaped(x, y, identity_functor(y), f));
  auto hom_x = share(hom_profunctor(x));
  auto hom_y = share(hom_profunctor(y));
  const auto rank = hom_ranks(*y);
  out.unit = ProfCell{hom_x, out.proarrow, identity_functor(x), f, {}};
  for (int b = 0; b < x->num_objects(); ++b) {
    for (int a = 0; a < x->num_objects(); ++a) {
      std::vector<int> v;
      for (MorId u : x->hom(b, a)) v.push_back(rank[f.map(u)]);
      out.unit.components.push_back(std::move(v));
    }
  }
  out.counit = ProfCell{out.proarrow, hom_y, f, identity_functor(y), {}};
  for (int b = 0; b < y->num_objects(); ++b) {
    for (int a = 0; a < x->num_objects(); ++a) {
      std::vector<int> v(out.proarrow->size(b, a));
      std::iota(v.begin(), v.end(), 0);
      out.counit.components.push_back(std::move(v));
    }
  }
  return out;
}

Companionship conjoint_of(const Functor& f) {
  const CatRef& x = f.source_ref();
  const CatRef& y = f.target_ref();
  Companionship out;
  out.proarrow = share(hom_shaped(y, x, f, identity_functor(y)));
  auto hom_x = share(hom_profunctor(x));
  auto hom_y = share(hom_profunctor(y));
  const auto rank = hom_ranks(*y);
  out.unit = ProfCell{hom_x, out.proarrow, f, identity_functor(x), {}};
  for (int b = 0; b < x->num_objects(); ++b) {
    for (int a = 0; a < x->num_objects(); ++a) {
      std::vector<int> v;
      for (MorId u : x->hom(b, a)) v.push_back(rank[f.map(u)]);
      out.unit.components.push_back(std::move(v));
    }
  }
  out.counit = ProfCell{out.proarrow, hom_y, identity_functor(y), f, {}};
  for (int a = 0; a < x->num_objects(); ++a) {
    for (int b = 0; b < y->num_objects(); ++b) {
      std::vector<int> v(out.proarrow->size(a, b));
      std::iota(v.begin(), v.end(), 0);
      out.counit.components.push_back(std::move(v));
    }
  }
  return out;
}

TriangleReport check_companion_triangles(const Functor& f, const Companionship& c) {
  TriangleReport r;
  const auto expected = hom_cell(f, c.unit.source, c.counit.target);
  r.vertical = same_components(vertical_compose(c.counit, c.unit), expected);
  // counit ⊙ unit : f_⊛ ∘ U_x ⇒ U_y ∘ f_⊛, then the unitors.
  const auto top = compose_prof(c.proarrow, c.unit.source);
  const auto bottom = compose_prof(c.counit.target, c.proarrow);
  const auto pasted = horizontal_compose(c.counit, c.unit, top, bottom);
  const auto lhs = vertical_compose(left_unitor(bottom), pasted);
  const auto rhs = right_unitor(top);
  r.horizontal = lhs.components == rhs.components;
  return r;
}

TriangleReport check_conjoint_triangles(const Functor& f, const Companionship& c) {
  TriangleReport r;
  const auto expected = hom_cell(f, c.unit.source, c.counit.target);
  r.vertical = same_components(vertical_compose(c.counit, c.unit), expected);
  // unit ⊙ counit : U_x ∘ f^⊛ ⇒ f^⊛ ∘ U_y, then the unitors.
  const auto top = compose_prof(c.unit.source, c.proarrow);
  const auto bottom = compose_prof(c.proarrow, c.counit.target);
  const auto pasted = horizontal_compose(c.unit, c.counit, top, bottom);
  const auto lhs = vertical_compose(right_unitor(bottom), pasted);
  const auto rhs = left_unitor(top);
  r.horizontal = lhs.components == rhs.components;
  return r;
}

// ---------------------------------------------------------------------------
// Restriction and extension

Restriction restrict_prof(const Functor& g, const ProfRef& fp, const Functor& f) {
  const Profunctor& p = *fp;
  if (!same_cat(f.target_ref(), p.source_ref()) || !same_cat(g.target_ref(), p.target_ref())) {
    throw Error("restrict: frame mismatch");
  }
  auto prof = make_profunctor(
      f.source_ref(), g.source_ref(), [&](ObjId b, ObjId a) { return p.size(g(b), f(a)); },
      [&](MorId h, ObjId a, int s) { return p.act_y(g.map(h), f(a), s); },
      [&](ObjId b, MorId k, int s) { return p.act_x(g(b), f.map(k), s); });
  std::vector<std::vector<std::string>> names(prof.sizes().size());
  for (int b = 0; b < g.source().num_objects(); ++b) {
    for (int a = 0; a < f.source().num_objects(); ++a) {
      for (int s = 0; s < prof.size(b, a); ++s) names[prof.cell(b, a)].push_back(p.element_name(g(b), f(a), s));
    }
  }
  Restriction out;
  out.proarrow = share(Profunctor(prof.source_ref(), prof.target_ref(), prof.sizes(), prof.y_action(),
                                  prof.x_action(), std::move(names)));
  out.cartesian = ProfCell{out.proarrow, fp, f, g, {}};
  for (int b = 0; b < g.source().num_objects(); ++b) {
    for (int a = 0; a < f.source().num_objects(); ++a) {
      std::vector<int> v(prof.size(b, a));
      std::iota(v.begin(), v.end(), 0);
      out.cartesian.components.push_back(std::move(v));
    }
  }
  return out;
}

Extension extend_prof(const Functor& g, const ProfRef& fp, const Functor& f) {
  const Profunctor& p = *fp;
  if (!same_cat(f.source_ref(), p.source_ref()) || !same_cat(g.source_ref(), p.target_ref())) {
    throw Error("extend: frame mismatch");
  }
  const auto conj = conjoint_of(f);
  const auto comp = companion_of(g);
  const auto inner = compose_prof(fp, conj.proarrow);      // x' → y
  const auto outer = compose_prof(comp.proarrow, inner.result);  // x' → y'
  Extension out;
  out.proarrow = outer.result;
  out.cocartesian = ProfCell{fp, out.proarrow, f, g, {}};
  const FinCategory& x2 = f.target();
  const FinCategory& y2 = g.target();
  const auto rank_x2 = hom_ranks(x2);
  const auto rank_y2 = hom_ranks(y2);
  for (int b = 0; b < p.target().num_objects(); ++b) {
    for (int a = 0; a < p.source().num_objects(); ++a) {
      std::vector<int> v;
      for (int s = 0; s < p.size(b, a); ++s) {
        // (a, s, id_{f a}) in F ∘ f^⊛ at (b, f a); conj(f)(a, f a) = Hom(f a, f a).
        const int in = inner.class_of(b, f(a), a, s, rank_x2[x2.id(f(a))]);
        // (b, id_{g b}, in) in g_⊛ ∘ (F ∘ f^⊛) at (g b, f a).
        v.push_back(outer.class_of(g(b), f(a), b, rank_y2[y2.id(g(b))], in));
      }
      out.cocartesian.components.push_back(std::move(v));
    }
  }
  return out;
}

Profunctor transpose(const Profunctor& p, const CatRef& source_op, const CatRef& target_op) {
  // Source of the transpose is y^op, target is x^op.
  return make_profunctor(
      target_op, source_op, [&](ObjId a, ObjId b) { return p.size(b, a); },
      [&](MorId h, ObjId b, int s) { return p.act_x(b, h, s); },
      [&](ObjId a, MorId g, int s) { return p.act_y(g, a, s); });
}

Profunctor product_prof(const Profunctor& f, const Profunctor& g, const CatRef& source_prod,
                        const CatRef& target_prod) {
  const int nx2 = g.source().num_objects();
  const int ny2 = g.target().num_objects();
  const int mx2 = g.source().num_morphisms();
  const int my2 = g.target().num_morphisms();
  return make_profunctor(
      source_prod, target_prod,
      [&](ObjId bd, ObjId ac) { return f.size(bd / ny2, ac / nx2) * g.size(bd % ny2, ac % nx2); },
      [&](MorId hk, ObjId ac, int s) {
        const MorId h = hk / my2, k = hk % my2;
        const ObjId a = ac / nx2, c = ac % nx2;
        const int gs = g.size(g.target().dst(k), c);
        const int s1 = s / gs, s2 = s % gs;
        return f.act_y(h, a, s1) * g.size(g.target().src(k), c) + g.act_y(k, c, s2);
      },
      [&](ObjId bd, MorId uv, int s) {
        const MorId u = uv / mx2, v = uv % mx2;
        const ObjId b = bd / ny2, d = bd % ny2;
        const int gs = g.size(d, g.source().src(v));
        const int s1 = s / gs, s2 = s % gs;
        return f.act_x(b, u, s1) * g.size(d, g.source().dst(v)) + g.act_x(d, v, s2);
      });
}

std::vector<std::vector<int>> cotensor(const CatRef& x_cat, const Profunctor& p, const Functor& g,
                                       const Functor& f) {
  const FinCategory& X = *x_cat;
  const int n = X.num_objects();
  std::vector<std::vector<MorId>> by_last(n);
  for (int m = 0; m < X.num_morphisms(); ++m) by_last[std::max(X.src(m), X.dst(m))].push_back(m);
  std::vector<std::vector<int>> out;
  std::vector<int> fam(n, kNone);
  std::function<void(int)> rec = [&](int o) {
    if (o == n) {
      out.push_back(fam);
      return;
    }
    for (int s = 0; s < p.size(g(o), f(o)); ++s) {
      fam[o] = s;
      bool ok = true;
      for (MorId m : by_last[o]) {
        const ObjId src = X.src(m), dst = X.dst(m);
        // F(g src, f m)(s_src) = F(g m, f dst)(s_dst) in F(g src, f dst).
        const int l = p.act_x(g(src), f.map(m), fam[src]);
        const int r = p.act_y(g.map(m), f(dst), fam[dst]);
        if (l != r) {
          ok = false;
          break;
        }
      }
      if (ok) rec(o + 1);
    }
    fam[o] = kNone;
  };
  rec(0);
  return out;
}

}  // namespace equip

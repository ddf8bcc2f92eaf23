#include "equip/internal.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace equip {

namespace {

bool same_cat(const CatRef& a, const CatRef& b) { return a == b || a->same_tables(*b); }

bool same_maps(const Functor& a, const Functor& b) {
  return a.object_map() == b.object_map() && a.morphism_map() == b.morphism_map();
}

int rank_in(std::span<const MorId> hom, MorId m) {
  const auto it = std::find(hom.begin(), hom.end(), m);
  return it == hom.end() ? -1 : static_cast<int>(it - hom.begin());
}

MorId inverse(const FinCategory& c, MorId f) {
  for (MorId g : c.hom(c.dst(f), c.src(f))) {
    if (c.is_identity(c.compose(g, f)) && c.is_identity(c.compose(f, g))) return g;
  }
  return kNone;
}

std::string name_of(const FinCategory& t, MorId phi) { return t.morphism_name(phi); }

// Pairs (φ, ψ) with φ∘ψ defined, as (φ, ψ, φ∘ψ).
std::vector<std::array<MorId, 3>> composable(const FinCategory& t) {
  std::vector<std::array<MorId, 3>> out;
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    for (MorId psi = 0; psi < t.num_morphisms(); ++psi) {
      const MorId c = t.compose(phi, psi);
      if (c != kNone) out.push_back({phi, psi, c});
    }
  }
  return out;
}

Functor rehome(const Functor& f, const CatRef& s, const CatRef& t) {
  return Functor(s, t, f.object_map(), f.morphism_map());
}

}  // namespace

// ---------------------------------------------------------------------------

ValidationReport check_internal_category(const InternalCategory& c) {
  ValidationReport r;
  auto fail = [&r](std::string m) {
    r.valid = false;
    r.violations.push_back(std::move(m));
  };
  const FinCategory& t = *c.site;
  if (static_cast<int>(c.fibers.size()) != t.num_objects()) {
    fail("fiber count");
    return r;
  }
  if (static_cast<int>(c.restrictions.size()) != t.num_morphisms()) {
    fail("restriction count");
    return r;
  }
  for (ObjId s = 0; s < t.num_objects(); ++s) {
    if (!check_category(*c.fibers[s]).valid) fail("fiber at " + t.object_name(s) + " is not a category");
  }
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    const Functor& f = c.restrictions[phi];
    if (!same_cat(f.source_ref(), c.fibers[t.dst(phi)]) || !same_cat(f.target_ref(), c.fibers[t.src(phi)])) {
      fail("restriction along " + name_of(t, phi) + " has the wrong endpoints");
    } else if (!check_functor(f).valid) {
      fail("restriction along " + name_of(t, phi) + " is not a functor");
    }
  }
  if (!r.valid) return r;
  for (ObjId s = 0; s < t.num_objects(); ++s) {
    if (!same_maps(c.restrictions[t.id(s)], identity_functor(c.fibers[s]))) {
      fail("restriction along " + name_of(t, t.id(s)) + " is not the identity");
    }
  }
  for (const auto& [phi, psi, comp] : composable(t)) {
    if (!same_maps(c.restrictions[comp], compose(c.restrictions[psi], c.restrictions[phi]))) {
      fail("restriction is not functorial at " + name_of(t, phi) + " o " + name_of(t, psi));
    }
  }
  return r;
}

InternalCategory constant_internal(const CatRef& site, const CatRef& c) {
  InternalCategory out{site, std::vector<CatRef>(site->num_objects(), c), {}};
  for (MorId phi = 0; phi < site->num_morphisms(); ++phi) out.restrictions.push_back(identity_functor(c));
  return out;
}

bool InternalFunctor::is_strict() const {
  for (const auto& n : naturality) {
    for (std::size_t a = 0; a < n.components.size(); ++a) {
      if (!n.from.target().is_identity(n.components[a])) return false;
    }
  }
  return true;
}

ValidationReport check_internal_functor(const InternalFunctor& f) {
  ValidationReport r;
  auto fail = [&r](std::string m) {
    r.valid = false;
    r.violations.push_back(std::move(m));
  };
  const FinCategory& t = *f.source.site;
  if (!same_cat(f.source.site, f.target.site)) {
    fail("different sites");
    return r;
  }
  if (static_cast<int>(f.components.size()) != t.num_objects() ||
      static_cast<int>(f.naturality.size()) != t.num_morphisms()) {
    fail("component count");
    return r;
  }
  for (ObjId s = 0; s < t.num_objects(); ++s) {
    const Functor& c = f.components[s];
    if (!same_cat(c.source_ref(), f.source.fibers[s]) || !same_cat(c.target_ref(), f.target.fibers[s]) ||
        !check_functor(c).valid) {
      fail("component at " + t.object_name(s));
    }
  }
  if (!r.valid) return r;
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    const NatTransformation& n = f.naturality[phi];
    const ObjId s = t.src(phi);
    const ObjId u = t.dst(phi);
    const Functor from = compose(f.target.restrictions[phi], f.components[u]);
    const Functor to = compose(f.components[s], f.source.restrictions[phi]);
    if (!same_maps(n.from, from) || !same_maps(n.to, to)) {
      fail("naturality cell at " + name_of(t, phi) + " has the wrong frame");
      continue;
    }
    if (!check_nat_transformation(NatTransformation{from, to, n.components}).valid) {
      fail("naturality cell at " + name_of(t, phi) + " is not natural");
    } else if (!is_natural_isomorphism(NatTransformation{from, to, n.components})) {
      fail("naturality cell at " + name_of(t, phi) + " is not invertible");
    }
    if (t.is_identity(phi)) {
      for (MorId m : n.components) {
        if (!f.target.at(s).is_identity(m)) {
          fail("naturality cell at " + name_of(t, phi) + " is not the identity");
          break;
        }
      }
    }
  }
  if (!r.valid) return r;
  // n_{φψ} = n_ψ φ^* ∘ ψ^* n_φ
  for (const auto& [phi, psi, comp] : composable(t)) {
    const ObjId rr = t.src(psi);
    const FinCategory& d = f.target.at(rr);
    const FinCategory& c = f.source.at(t.dst(phi));
    for (ObjId a = 0; a < c.num_objects(); ++a) {
      const MorId expect = d.compose(f.naturality[psi].components[f.source.restrictions[phi](a)],
                                     f.target.restrictions[psi].map(f.naturality[phi].components[a]));
      if (f.naturality[comp].components[a] != expect) {
        fail("naturality cells are not coherent at " + name_of(t, phi) + " o " + name_of(t, psi));
        break;
      }
    }
  }
  return r;
}

InternalFunctor strict_internal_functor(const InternalCategory& source, const InternalCategory& target,
                                        std::vector<Functor> components) {
  InternalFunctor out{source, target, std::move(components), {}};
  const FinCategory& t = *source.site;
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    const Functor from = compose(target.restrictions[phi], out.components[t.dst(phi)]);
    const Functor to = compose(out.components[t.src(phi)], source.restrictions[phi]);
    if (!same_maps(from, to)) throw Error("internal functor does not commute with restriction along " + name_of(t, phi));
    out.naturality.push_back(identity_transformation(from));
    out.naturality.back().to = to;
  }
  return out;
}

InternalFunctor internal_identity(const InternalCategory& c) {
  std::vector<Functor> comps;
  for (const auto& f : c.fibers) comps.push_back(identity_functor(f));
  return strict_internal_functor(c, c, std::move(comps));
}

InternalFunctor internal_compose(const InternalFunctor& g, const InternalFunctor& f) {
  const FinCategory& t = *f.source.site;
  InternalFunctor out{f.source, g.target, {}, {}};
  for (ObjId s = 0; s < t.num_objects(); ++s) out.components.push_back(compose(g.components[s], f.components[s]));
  // φ^* g_t f_t ⇒ g_s φ^* f_t ⇒ g_s f_s φ^*
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    const ObjId s = t.src(phi);
    const ObjId u = t.dst(phi);
    NatTransformation n{compose(g.target.restrictions[phi], out.components[u]),
                        compose(out.components[s], f.source.restrictions[phi]), {}};
    const FinCategory& e = g.target.at(s);
    for (ObjId a = 0; a < f.source.at(u).num_objects(); ++a) {
      n.components.push_back(e.compose(g.components[s].map(f.naturality[phi].components[a]),
                                       g.naturality[phi].components[f.components[u](a)]));
    }
    out.naturality.push_back(std::move(n));
  }
  return out;
}

// ---------------------------------------------------------------------------

ValidationReport check_internal_profunctor(const InternalProfunctor& f) {
  ValidationReport r;
  auto fail = [&r](std::string m) {
    r.valid = false;
    r.violations.push_back(std::move(m));
  };
  const FinCategory& t = *f.source.site;
  if (static_cast<int>(f.fibers.size()) != t.num_objects() ||
      static_cast<int>(f.restrictions.size()) != t.num_morphisms()) {
    fail("component count");
    return r;
  }
  for (ObjId s = 0; s < t.num_objects(); ++s) {
    const Profunctor& p = *f.fibers[s];
    if (!same_cat(p.source_ref(), f.source.fibers[s]) || !same_cat(p.target_ref(), f.target.fibers[s])) {
      fail("fiber at " + t.object_name(s) + " has the wrong endpoints");
    } else if (!check_profunctor(p).valid) {
      fail("fiber at " + t.object_name(s) + " is not a profunctor");
    }
  }
  if (!r.valid) return r;
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    const ProfCell& c = f.restrictions[phi];
    if (!c.source->same_tables(*f.fibers[t.dst(phi)]) || !c.target->same_tables(*f.fibers[t.src(phi)]) ||
        !same_maps(c.frame_x, f.source.restrictions[phi]) || !same_maps(c.frame_y, f.target.restrictions[phi])) {
      fail("restriction cell along " + name_of(t, phi) + " has the wrong frame");
    } else if (!check_cell(c).valid) {
      fail("restriction cell along " + name_of(t, phi) + " is not natural");
    }
  }
  if (!r.valid) return r;
  for (ObjId s = 0; s < t.num_objects(); ++s) {
    if (!same_components(f.restrictions[t.id(s)], identity_cell(f.fibers[s]))) {
      fail("restriction cell along " + name_of(t, t.id(s)) + " is not the identity");
    }
  }
  for (const auto& [phi, psi, comp] : composable(t)) {
    const Profunctor& p = *f.fibers[t.dst(phi)];
    bool ok = true;
    for (ObjId b = 0; ok && b < p.target().num_objects(); ++b) {
      for (ObjId a = 0; ok && a < p.source().num_objects(); ++a) {
        for (int x = 0; ok && x < p.size(b, a); ++x) {
          const int once = f.restrictions[phi].apply(b, a, x);
          const int twice =
              f.restrictions[psi].apply(f.target.restrictions[phi](b), f.source.restrictions[phi](a), once);
          ok = f.restrictions[comp].apply(b, a, x) == twice;
        }
      }
    }
    if (!ok) fail("restriction cells are not functorial at " + name_of(t, phi) + " o " + name_of(t, psi));
  }
  return r;
}

InternalProfunctor internal_hom(const InternalCategory& c) {
  const FinCategory& t = *c.site;
  InternalProfunctor out{c, c, {}, {}};
  for (const auto& f : c.fibers) out.fibers.push_back(share(hom_profunctor(f)));
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    out.restrictions.push_back(hom_cell(c.restrictions[phi], out.fibers[t.dst(phi)], out.fibers[t.src(phi)]));
  }
  return out;
}

InternalProfunctor internal_companion_of(const InternalFunctor& f) {
  const FinCategory& t = *f.source.site;
  InternalProfunctor out{f.source, f.target, {}, {}};
  for (const auto& c : f.components) out.fibers.push_back(companion_of(c).proarrow);
  // g : b → f_t a  ↦  n_a ∘ φ^* g : φ^* b → f_s φ^* a
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    const ObjId s = t.src(phi);
    const ObjId u = t.dst(phi);
    const Functor& rx = f.source.restrictions[phi];
    const Functor& ry = f.target.restrictions[phi];
    const FinCategory& du = f.target.at(u);
    const FinCategory& ds = f.target.at(s);
    ProfCell cell{out.fibers[u], out.fibers[s], rx, ry, {}};
    for (ObjId b = 0; b < du.num_objects(); ++b) {
      for (ObjId a = 0; a < f.source.at(u).num_objects(); ++a) {
        std::vector<int> v;
        for (MorId g : du.hom(b, f.components[u](a))) {
          const MorId m = ds.compose(f.naturality[phi].components[a], ry.map(g));
          v.push_back(rank_in(ds.hom(ry(b), f.components[s](rx(a))), m));
        }
        cell.components.push_back(std::move(v));
      }
    }
    out.restrictions.push_back(std::move(cell));
  }
  return out;
}

InternalProfunctor internal_conjoint_of(const InternalFunctor& f) {
  const FinCategory& t = *f.source.site;
  InternalProfunctor out{f.target, f.source, {}, {}};
  for (const auto& c : f.components) out.fibers.push_back(conjoint_of(c).proarrow);
  // g : f_t a → b  ↦  φ^* g ∘ n_a⁻¹ : f_s φ^* a → φ^* b
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    const ObjId s = t.src(phi);
    const ObjId u = t.dst(phi);
    const Functor& rx = f.source.restrictions[phi];
    const Functor& ry = f.target.restrictions[phi];
    const FinCategory& du = f.target.at(u);
    const FinCategory& ds = f.target.at(s);
    ProfCell cell{out.fibers[u], out.fibers[s], ry, rx, {}};
    for (ObjId a = 0; a < f.source.at(u).num_objects(); ++a) {
      const MorId back = inverse(ds, f.naturality[phi].components[a]);
      for (ObjId b = 0; b < du.num_objects(); ++b) {
        std::vector<int> v;
        for (MorId g : du.hom(f.components[u](a), b)) {
          const MorId m = ds.compose(ry.map(g), back);
          v.push_back(rank_in(ds.hom(f.components[s](rx(a)), ry(b)), m));
        }
        cell.components.push_back(std::move(v));
      }
    }
    out.restrictions.push_back(std::move(cell));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool compatible_at(const InternalProfunctor& f, const InternalProfunctor& g, const InternalFunctor& fx,
                   const InternalFunctor& fy, const ProfCell& at_t, const ProfCell& at_s, MorId phi) {
  const FinCategory& t = *f.source.site;
  const ObjId u = t.dst(phi);
  const Profunctor& p = *f.fibers[u];
  const Profunctor& q = *g.fibers[t.src(phi)];
  const Functor& rx = f.source.restrictions[phi];
  const Functor& ry = f.target.restrictions[phi];
  const Functor& gy = g.target.restrictions[phi];
  for (ObjId b = 0; b < p.target().num_objects(); ++b) {
    for (ObjId a = 0; a < p.source().num_objects(); ++a) {
      for (int x = 0; x < p.size(b, a); ++x) {
        // around the top: restrict α_t(x), then move along n^{fx}
        const int top = g.restrictions[phi].apply(fy.components[u](b), fx.components[u](a), at_t.apply(b, a, x));
        const int lhs = q.act_x(gy(fy.components[u](b)), fx.naturality[phi].components[a], top);
        // around the bottom: α_s of the restriction, then pull back along n^{fy}
        const int bottom = at_s.apply(ry(b), rx(a), f.restrictions[phi].apply(b, a, x));
        const ObjId fa = fx.components[t.src(phi)](rx(a));
        const int rhs = q.act_y(fy.naturality[phi].components[b], fa, bottom);
        if (lhs != rhs) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool check_internal_cell(const InternalProfunctor& f, const InternalProfunctor& g, const InternalFunctor& fx,
                         const InternalFunctor& fy, const InternalCell& alpha) {
  const FinCategory& t = *f.source.site;
  if (static_cast<int>(alpha.components.size()) != t.num_objects()) return false;
  for (ObjId s = 0; s < t.num_objects(); ++s) {
    const ProfCell& c = alpha.components[s];
    if (!c.source->same_tables(*f.fibers[s]) || !c.target->same_tables(*g.fibers[s]) ||
        !same_maps(c.frame_x, fx.components[s]) || !same_maps(c.frame_y, fy.components[s]) || !check_cell(c).valid) {
      return false;
    }
  }
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    if (!compatible_at(f, g, fx, fy, alpha.components[t.dst(phi)], alpha.components[t.src(phi)], phi)) return false;
  }
  return true;
}

std::vector<InternalCell> enumerate_internal_cells(const InternalProfunctor& f, const InternalProfunctor& g,
                                                   const InternalFunctor& fx, const InternalFunctor& fy,
                                                   const Bounds& bounds) {
  const FinCategory& t = *f.source.site;
  const int n = t.num_objects();
  std::vector<std::vector<ProfCell>> options;
  for (ObjId s = 0; s < n; ++s) {
    options.push_back(enumerate_cells(f.fibers[s], g.fibers[s], fx.components[s], fy.components[s], bounds));
  }
  std::vector<std::vector<MorId>> checks(n);
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) checks[std::max(t.src(phi), t.dst(phi))].push_back(phi);
  std::vector<InternalCell> out;
  std::vector<int> pick(n, -1);
  std::function<void(int)> rec = [&](int s) {
    if (s == n) {
      if (out.size() >= bounds.max_cocones) throw BoundExceeded("max-cocones", bounds.max_cocones);
      InternalCell c;
      for (int k = 0; k < n; ++k) c.components.push_back(options[k][pick[k]]);
      out.push_back(std::move(c));
      return;
    }
    for (int k = 0; k < static_cast<int>(options[s].size()); ++k) {
      pick[s] = k;
      bool ok = true;
      for (MorId phi : checks[s]) {
        if (!compatible_at(f, g, fx, fy, options[t.dst(phi)][pick[t.dst(phi)]], options[t.src(phi)][pick[t.src(phi)]],
                           phi)) {
          ok = false;
          break;
        }
      }
      if (ok) rec(s + 1);
    }
    pick[s] = -1;
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------------------

GroupoidalCover representable_cover(const InternalCategory& c) {
  GroupoidalCover out;
  for (ObjId t = 0; t < static_cast<int>(c.fibers.size()); ++t) {
    for (ObjId x = 0; x < c.at(t).num_objects(); ++x) out.members.emplace_back(t, x);
  }
  return out;
}

namespace {

std::set<std::pair<ObjId, ObjId>> reach(const InternalCategory& c, std::pair<ObjId, ObjId> m) {
  const FinCategory& t = *c.site;
  std::set<std::pair<ObjId, ObjId>> out;
  for (ObjId s = 0; s < t.num_objects(); ++s) {
    for (MorId phi : t.hom(s, m.first)) out.emplace(s, c.restrictions[phi](m.second));
  }
  return out;
}

}  // namespace

bool is_valid_cover(const InternalCategory& c, const GroupoidalCover& cover) {
  std::set<std::pair<ObjId, ObjId>> seen;
  for (const auto& m : cover.members) {
    if (m.first < 0 || m.first >= static_cast<int>(c.fibers.size()) || m.second < 0 ||
        m.second >= c.at(m.first).num_objects()) {
      return false;
    }
    const auto r = reach(c, m);
    seen.insert(r.begin(), r.end());
  }
  return seen.size() == representable_cover(c).members.size();
}

GroupoidalCover minimal_cover(const InternalCategory& c) {
  const auto all = representable_cover(c).members;
  std::set<std::pair<ObjId, ObjId>> seen;
  GroupoidalCover out;
  while (seen.size() < all.size()) {
    std::size_t best = 0;
    std::size_t gain = 0;
    for (std::size_t k = 0; k < all.size(); ++k) {
      std::size_t g = 0;
      for (const auto& e : reach(c, all[k])) g += !seen.count(e);
      if (g > gain) {
        gain = g;
        best = k;
      }
    }
    out.members.push_back(all[best]);
    const auto r = reach(c, all[best]);
    seen.insert(r.begin(), r.end());
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

namespace {

// Companions read F(d, a) contravariantly in d; conjoints read F(a, d)
// covariantly in d.  `a` lives in the category the functor starts from.
struct Reader {
  bool co;
  const InternalProfunctor& f;

  const InternalCategory& from() const { return co ? f.target : f.source; }
  const InternalCategory& to() const { return co ? f.source : f.target; }
  int size(ObjId t, ObjId d, ObjId a) const { return co ? f.fibers[t]->size(a, d) : f.fibers[t]->size(d, a); }
  /// g : b → d (companion) or g : d → b (conjoint) applied to s ∈ F(d, a).
  int act(ObjId t, MorId g, ObjId a, int s) const {
    return co ? f.fibers[t]->act_x(a, g, s) : f.fibers[t]->act_y(g, a, s);
  }
  std::span<const MorId> probe(ObjId t, ObjId d, ObjId b) const {
    return co ? to().at(t).hom(d, b) : to().at(t).hom(b, d);
  }
  int restrict(MorId phi, ObjId d, ObjId a, int s) const {
    return co ? f.restrictions[phi].apply(a, d, s) : f.restrictions[phi].apply(d, a, s);
  }

  bool represents(ObjId t, ObjId a, ObjId d, int u) const {
    for (ObjId b = 0; b < to().at(t).num_objects(); ++b) {
      const auto hom = probe(t, d, b);
      if (static_cast<int>(hom.size()) != size(t, b, a)) return false;
      std::vector<bool> hit(hom.size(), false);
      for (MorId g : hom) {
        const int e = act(t, g, a, u);
        if (hit[e]) return false;
        hit[e] = true;
      }
    }
    return true;
  }

  std::optional<std::pair<ObjId, int>> representation(ObjId t, ObjId a) const {
    for (ObjId d = 0; d < to().at(t).num_objects(); ++d) {
      for (int u = 0; u < size(t, d, a); ++u) {
        if (represents(t, a, d, u)) return std::make_pair(d, u);
      }
    }
    return std::nullopt;
  }

  /// The g between b and d with g·u = e.
  MorId decode(ObjId t, ObjId a, ObjId d, int u, ObjId b, int e) const {
    for (MorId g : probe(t, d, b)) {
      if (act(t, g, a, u) == e) return g;
    }
    return kNone;
  }
};

InternalCompanionVerdict recover(const InternalProfunctor& f, const GroupoidalCover& cover, bool co) {
  InternalCompanionVerdict out;
  const auto valid = check_internal_profunctor(f);
  if (!valid.valid) {
    out.witness = "invalid internal profunctor: " + valid.violations.front();
    return out;
  }
  const Reader rd{co, f};
  const InternalCategory& c = rd.from();
  const InternalCategory& d = rd.to();
  const FinCategory& t = *c.site;
  const std::string what = co ? "corepresentable" : "representable";
  for (const auto& [u, a] : cover.members) {
    const auto rep = rd.representation(u, a);
    if (!rep) {
      out.t = u;
      out.object = a;
      out.witness = "level " + t.object_name(u) + ": F(" + c.at(u).object_name(a) + ") is not " + what;
      return out;
    }
    for (ObjId s = 0; s < t.num_objects(); ++s) {
      for (MorId phi : t.hom(s, u)) {
        const ObjId ra = c.restrictions[phi](a);
        const ObjId rdd = d.restrictions[phi](rep->first);
        if (!rd.represents(s, ra, rdd, rd.restrict(phi, rep->first, a, rep->second))) {
          out.t = u;
          out.phi = phi;
          out.object = a;
          out.witness = "mate at " + t.morphism_name(phi) + " is not invertible at " + c.at(u).object_name(a);
          return out;
        }
      }
    }
  }
  // Assemble the functor levelwise from the least representing elements.
  InternalFunctor g{c, d, {}, {}};
  std::vector<std::vector<std::pair<ObjId, int>>> reps(t.num_objects());
  for (ObjId u = 0; u < t.num_objects(); ++u) {
    const FinCategory& cu = c.at(u);
    for (ObjId a = 0; a < cu.num_objects(); ++a) {
      const auto rep = rd.representation(u, a);
      if (!rep) {
        out.t = u;
        out.object = a;
        out.witness = "level " + t.object_name(u) + ": F(" + cu.object_name(a) + ") is not " + what +
                      " although the cover is";
        return out;
      }
      reps[u].push_back(*rep);
    }
    std::vector<ObjId> objs;
    for (const auto& r : reps[u]) objs.push_back(r.first);
    std::vector<MorId> mors;
    for (MorId m = 0; m < cu.num_morphisms(); ++m) {
      const auto [da, ua] = reps[u][cu.src(m)];
      const auto [db, ub] = reps[u][cu.dst(m)];
      // companion: m·u_a ∈ F(d_a, a') read through u_{a'}; conjoint: u_{a'}·m ∈ F(a, d_{a'}) through u_a
      const MorId h = co ? rd.decode(u, cu.src(m), da, ua, db, f.fibers[u]->act_y(m, db, ub))
                         : rd.decode(u, cu.dst(m), db, ub, da, f.fibers[u]->act_x(da, m, ua));
      mors.push_back(h);
    }
    g.components.emplace_back(c.fibers[u], d.fibers[u], std::move(objs), std::move(mors));
  }
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    const ObjId s = t.src(phi);
    const ObjId u = t.dst(phi);
    const FinCategory& ds = d.at(s);
    NatTransformation n{compose(d.restrictions[phi], g.components[u]), compose(g.components[s], c.restrictions[phi]), {}};
    for (ObjId a = 0; a < c.at(u).num_objects(); ++a) {
      const ObjId ra = c.restrictions[phi](a);
      const auto [dr, ur] = reps[s][ra];
      const ObjId pd = d.restrictions[phi](reps[u][a].first);
      const int e = rd.restrict(phi, reps[u][a].first, a, reps[u][a].second);
      const MorId h = rd.decode(s, ra, dr, ur, pd, e);
      n.components.push_back(co ? inverse(ds, h) : h);
    }
    g.naturality.push_back(std::move(n));
  }
  const auto fv = check_internal_functor(g);
  if (!fv.valid) {
    out.witness = "recovered functor is not internal: " + fv.violations.front();
    return out;
  }
  // Certificate: Hom(−, g −) → F, h ↦ h·u, is bijective and commutes with restriction.
  const InternalProfunctor h = co ? internal_conjoint_of(g) : internal_companion_of(g);
  out.certified = true;
  for (ObjId u = 0; u < t.num_objects() && out.certified; ++u) {
    for (ObjId a = 0; a < c.at(u).num_objects(); ++a) {
      if (!rd.represents(u, a, reps[u][a].first, reps[u][a].second)) out.certified = false;
    }
  }
  auto theta = [&](ObjId u, ObjId a, MorId m) { return rd.act(u, m, a, reps[u][a].second); };
  for (MorId phi = 0; phi < t.num_morphisms() && out.certified; ++phi) {
    const ObjId s = t.src(phi);
    const ObjId u = t.dst(phi);
    const FinCategory& du = d.at(u);
    const FinCategory& ds = d.at(s);
    for (ObjId a = 0; a < c.at(u).num_objects(); ++a) {
      for (ObjId b = 0; b < du.num_objects(); ++b) {
        const auto hom = co ? du.hom(g.components[u](a), b) : du.hom(b, g.components[u](a));
        for (int k = 0; k < static_cast<int>(hom.size()); ++k) {
          const int lhs = rd.restrict(phi, b, a, theta(u, a, hom[k]));
          const ObjId ra = c.restrictions[phi](a);
          const ObjId rb = d.restrictions[phi](b);
          const int hk = co ? h.restrictions[phi].apply(a, b, k) : h.restrictions[phi].apply(b, a, k);
          const auto shom = co ? ds.hom(g.components[s](ra), rb) : ds.hom(rb, g.components[s](ra));
          if (lhs != theta(s, ra, shom[hk])) out.certified = false;
        }
      }
    }
  }
  out.holds = true;
  out.functor = std::move(g);
  return out;
}

}  // namespace

InternalCompanionVerdict internal_companion(const InternalProfunctor& f, const GroupoidalCover& cover) {
  if (!is_valid_cover(f.source, cover)) throw Error("internal companion: invalid cover");
  return recover(f, cover, false);
}

InternalCompanionVerdict internal_companion(const InternalProfunctor& f) {
  return recover(f, representable_cover(f.source), false);
}

InternalCompanionVerdict internal_conjoint(const InternalProfunctor& f, const GroupoidalCover& cover) {
  if (!is_valid_cover(f.target, cover)) throw Error("internal conjoint: invalid cover");
  return recover(f, cover, true);
}

InternalCompanionVerdict internal_conjoint(const InternalProfunctor& f) {
  return recover(f, representable_cover(f.target), true);
}

std::optional<Functor> external_companion(const ProfRef& f, const Bounds& bounds) {
  for (const auto& g : enumerate_functors(f->source_ref(), f->target_ref(), bounds)) {
    if (find_iso(companion_of(g).proarrow, f)) return g;
  }
  return std::nullopt;
}

std::optional<Functor> external_conjoint(const ProfRef& f, const Bounds& bounds) {
  for (const auto& g : enumerate_functors(f->target_ref(), f->source_ref(), bounds)) {
    if (find_iso(conjoint_of(g).proarrow, f)) return g;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

InternalFinality internal_is_final(const InternalFunctor& f) {
  InternalFinality out;
  const FinCategory& t = *f.source.site;
  for (ObjId u = 0; u < t.num_objects(); ++u) {
    const FinCategory& ju = f.target.at(u);
    for (ObjId x = 0; x < ju.num_objects(); ++x) {
      for (ObjId s = 0; s < t.num_objects(); ++s) {
        for (MorId phi : t.hom(s, u)) {
          const ObjId y = f.target.restrictions[phi](x);
          const CommaCategory k = comma(object_functor(f.target.fibers[s], y), f.components[s]);
          const auto parts = connected_components(*k.category);
          if (parts.size() == 1) continue;
          out.holds = false;
          out.failures.push_back({u, x, phi, parts.empty() ? "empty comma" : "disconnected comma"});
        }
      }
    }
  }
  return out;
}

InternalKan internal_lke(const InternalFunctor& f, const InternalFunctor& w, const Bounds& bounds) {
  if (!w.is_strict()) throw Error("internal lke: w must commute strictly with restriction");
  InternalKan out;
  const FinCategory& t = *f.source.site;
  const InternalCategory& cc = f.target;
  const InternalCategory& jj = w.target;
  InternalFunctor g{jj, cc, {}, {}};
  for (ObjId u = 0; u < t.num_objects(); ++u) {
    const auto k = pointwise_lke(f.components[u], w.components[u], bounds);
    if (!k) {
      out.failure = {u, k.failing, t.id(u), k.witness};
      return out;
    }
    g.components.push_back(rehome(*k.extension, jj.fibers[u], cc.fibers[u]));
    out.unit.push_back(*k.unit);
  }
  // c : φ^* g_t x → g_s φ^* x with c ∘ φ^*(g_t θ ∘ η_i) = g_s(φ^* θ) ∘ η_{φ^* i} ∘ n^f_i.
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    const ObjId s = t.src(phi);
    const ObjId u = t.dst(phi);
    const FinCategory& iu = f.source.at(u);
    const FinCategory& ju = jj.at(u);
    const FinCategory& cs = cc.at(s);
    const Functor& rc = cc.restrictions[phi];
    const Functor& rj = jj.restrictions[phi];
    const Functor& ri = f.source.restrictions[phi];
    NatTransformation n{compose(rc, g.components[u]), compose(g.components[s], rj), {}};
    for (ObjId x = 0; x < ju.num_objects(); ++x) {
      std::vector<std::pair<MorId, MorId>> legs;  // (restricted leg, target leg)
      for (ObjId i = 0; i < iu.num_objects(); ++i) {
        for (MorId theta : ju.hom(w.components[u](i), x)) {
          const MorId lt = rc.map(cc.at(u).compose(g.components[u].map(theta), out.unit[u].components[i]));
          const MorId ls = cs.compose(g.components[s].map(rj.map(theta)),
                                      cs.compose(out.unit[s].components[ri(i)], f.naturality[phi].components[i]));
          legs.emplace_back(lt, ls);
        }
      }
      std::vector<MorId> found;
      for (MorId c : cs.hom(rc(g.components[u](x)), g.components[s](rj(x)))) {
        if (std::all_of(legs.begin(), legs.end(), [&](const auto& l) { return cs.compose(c, l.first) == l.second; })) {
          found.push_back(c);
        }
      }
      MorId pick = kNone;
      for (MorId c : found) {
        if (inverse(cs, c) != kNone) {
          pick = c;
          break;
        }
      }
      if (pick == kNone) {
        out.failure = {u, x, phi, found.empty() ? "no comparison map" : "comparison map is not invertible"};
        return out;
      }
      n.components.push_back(pick);
    }
    g.naturality.push_back(std::move(n));
  }
  const auto v = check_internal_functor(g);
  if (!v.valid) {
    out.failure = {kNone, kNone, kNone, "comparisons do not assemble: " + v.violations.front()};
    return out;
  }
  out.extension = std::move(g);
  return out;
}

InternalFullyFaithful internal_fully_faithful(const InternalFunctor& f) {
  InternalFullyFaithful out;
  const FinCategory& t = *f.source.site;
  for (ObjId u = 0; u < t.num_objects(); ++u) {
    const Functor& g = f.components[u];
    const FinCategory& c = g.source();
    const FinCategory& d = g.target();
    for (ObjId a = 0; a < c.num_objects(); ++a) {
      for (ObjId b = 0; b < c.num_objects(); ++b) {
        std::set<MorId> image;
        for (MorId m : c.hom(a, b)) image.insert(g.map(m));
        const bool faithful = image.size() == c.hom(a, b).size();
        const bool full = image.size() == d.hom(g(a), g(b)).size();
        if (faithful && full) continue;
        out.holds = false;
        out.t = u;
        out.a = a;
        out.b = b;
        out.reason = faithful ? "not full" : "not faithful";
        return out;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using CellKey = std::vector<std::vector<std::vector<int>>>;

CellKey key_of(const InternalCell& c) {
  CellKey k;
  for (const auto& p : c.components) k.push_back(p.components);
  return k;
}

bool same_internal_profunctor(const InternalProfunctor& a, const InternalProfunctor& b) {
  for (std::size_t s = 0; s < a.fibers.size(); ++s) {
    if (!a.fibers[s]->same_tables(*b.fibers[s])) return false;
  }
  for (std::size_t p = 0; p < a.restrictions.size(); ++p) {
    if (a.restrictions[p].components != b.restrictions[p].components) return false;
  }
  return true;
}

bool same_internal_functor(const InternalFunctor& a, const InternalFunctor& b) {
  for (std::size_t s = 0; s < a.components.size(); ++s) {
    if (!same_maps(a.components[s], b.components[s])) return false;
  }
  return true;
}

int index_of_object(const std::vector<InternalCategory>& objs, const InternalCategory& c) {
  for (std::size_t k = 0; k < objs.size(); ++k) {
    bool same = objs[k].fibers.size() == c.fibers.size();
    for (std::size_t s = 0; same && s < c.fibers.size(); ++s) same = same_cat(objs[k].fibers[s], c.fibers[s]);
    for (std::size_t p = 0; same && p < c.restrictions.size(); ++p) {
      same = same_maps(objs[k].restrictions[p], c.restrictions[p]);
    }
    if (same) return static_cast<int>(k);
  }
  return kNone;
}

InternalProfunctor rehome(const InternalProfunctor& p, const InternalCategory& x, const InternalCategory& y) {
  InternalProfunctor out{x, y, {}, {}};
  const FinCategory& t = *x.site;
  for (ObjId s = 0; s < t.num_objects(); ++s) {
    const Profunctor& q = *p.fibers[s];
    out.fibers.push_back(share(Profunctor(x.fibers[s], y.fibers[s], q.sizes(), q.y_action(), q.x_action())));
  }
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    out.restrictions.push_back(ProfCell{out.fibers[t.dst(phi)], out.fibers[t.src(phi)], x.restrictions[phi],
                                        y.restrictions[phi], p.restrictions[phi].components});
  }
  return out;
}

}  // namespace

InternalEquipment build_internal_equipment(const std::vector<InternalCategory>& objects,
                                           const std::vector<InternalFunctor>& generators, const Bounds& bounds) {
  InternalEquipment out;
  out.objects = objects;
  const int n = static_cast<int>(objects.size());
  const FinCategory& site = *objects.front().site;
  const int levels = site.num_objects();

  struct V {
    int src, dst;
    InternalFunctor f;
  };
  std::vector<V> vs;
  auto find_v = [&](int s, int t, const InternalFunctor& f) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (vs[i].src == s && vs[i].dst == t && same_internal_functor(vs[i].f, f)) return static_cast<int>(i);
    }
    return static_cast<int>(kNone);
  };
  auto add_v = [&](int s, int t, const InternalFunctor& f) {
    const int i = find_v(s, t, f);
    if (i != kNone) return i;
    if (vs.size() >= bounds.max_functors) throw BoundExceeded("max-functors", bounds.max_functors);
    std::vector<Functor> comps;
    for (int l = 0; l < levels; ++l) {
      comps.push_back(rehome(f.components[l], objects[s].fibers[l], objects[t].fibers[l]));
    }
    vs.push_back({s, t, strict_internal_functor(objects[s], objects[t], std::move(comps))});
    return static_cast<int>(vs.size()) - 1;
  };
  for (int i = 0; i < n; ++i) add_v(i, i, internal_identity(objects[i]));
  for (const auto& g : generators) {
    if (!g.is_strict()) throw Error("internal equipment: generators must be strict");
    const int s = index_of_object(objects, g.source);
    const int t = index_of_object(objects, g.target);
    if (s == kNone || t == kNone) throw Error("internal equipment: generator between unlisted categories");
    add_v(s, t, g);
  }
  for (std::size_t done = 0; done < vs.size();) {
    const std::size_t limit = vs.size();
    for (std::size_t i = 0; i < limit; ++i) {
      for (std::size_t j = 0; j < limit; ++j) {
        if ((i < done && j < done) || vs[i].dst != vs[j].src) continue;
        add_v(vs[i].src, vs[j].dst, internal_compose(vs[j].f, vs[i].f));
      }
    }
    done = limit;
  }
  const int nv = static_cast<int>(vs.size());
  std::vector<std::string> onames;
  std::vector<std::string> mnames;
  std::vector<Arrow> arrows;
  std::vector<MorId> ids;
  for (int i = 0; i < n; ++i) {
    onames.push_back("x" + std::to_string(i));
    ids.push_back(i);
  }
  for (int i = 0; i < nv; ++i) {
    mnames.push_back(i < n ? "id_x" + std::to_string(i) : "v" + std::to_string(i));
    arrows.push_back({vs[i].src, vs[i].dst});
    out.verticals.push_back(vs[i].f);
  }
  std::vector<MorId> table(static_cast<std::size_t>(nv) * nv, kNone);
  for (int g = 0; g < nv; ++g) {
    for (int f = 0; f < nv; ++f) {
      if (vs[f].dst == vs[g].src) {
        table[static_cast<std::size_t>(g) * nv + f] = find_v(vs[f].src, vs[g].dst, internal_compose(vs[g].f, vs[f].f));
      }
    }
  }
  auto vertical = share(FinCategory(onames, mnames, arrows, ids, table));

  DoubleCategory::Data data;
  data.vertical = vertical;
  auto add_h = [&](const std::string& name, const InternalProfunctor& p) {
    const int s = index_of_object(objects, p.source);
    const int t = index_of_object(objects, p.target);
    for (std::size_t i = 0; i < out.horizontals.size(); ++i) {
      if (data.horizontals[i].src == s && data.horizontals[i].dst == t &&
          same_internal_profunctor(out.horizontals[i], p)) {
        return static_cast<HorId>(i);
      }
    }
    out.horizontals.push_back(rehome(p, objects[s], objects[t]));
    data.horizontals.push_back({s, t, name});
    return static_cast<HorId>(out.horizontals.size()) - 1;
  };
  for (int i = 0; i < n; ++i) data.units.push_back(add_h("U_x" + std::to_string(i), internal_hom(objects[i])));
  for (int i = n; i < nv; ++i) {
    add_h("comp(" + mnames[i] + ")", internal_companion_of(vs[i].f));
    add_h("conj(" + mnames[i] + ")", internal_conjoint_of(vs[i].f));
  }
  const int nh = static_cast<int>(out.horizontals.size());

  std::map<std::array<int, 4>, std::map<CellKey, CellId>> by_frame;
  for (HorId t = 0; t < nh; ++t) {
    for (HorId b = 0; b < nh; ++b) {
      const auto& ht = data.horizontals[t];
      const auto& hb = data.horizontals[b];
      for (MorId l : vertical->hom(ht.src, hb.src)) {
        for (MorId r : vertical->hom(ht.dst, hb.dst)) {
          for (auto& c : enumerate_internal_cells(out.horizontals[t], out.horizontals[b], vs[l].f, vs[r].f, bounds)) {
            const CellId id = static_cast<CellId>(out.cells.size());
            if (out.cells.size() >= bounds.max_cocones) throw BoundExceeded("max-cocones", bounds.max_cocones);
            by_frame[{t, b, l, r}].emplace(key_of(c), id);
            out.cells.push_back(std::move(c));
            data.cells.push_back({t, b, l, r, "c" + std::to_string(id)});
          }
        }
      }
    }
  }
  auto find_cell = [&](HorId t, HorId b, MorId l, MorId r, const InternalCell& c) {
    const auto it = by_frame.find({t, b, l, r});
    if (it != by_frame.end()) {
      const auto hit = it->second.find(key_of(c));
      if (hit != it->second.end()) return hit->second;
    }
    throw Error("internal equipment: composite cell not found");
  };
  auto levelwise = [&](auto&& fn) {
    InternalCell c;
    for (int l = 0; l < levels; ++l) c.components.push_back(fn(l));
    return c;
  };
  for (HorId h = 0; h < nh; ++h) {
    const auto& hh = data.horizontals[h];
    data.identity_cells.push_back(
        find_cell(h, h, hh.src, hh.dst, levelwise([&](int l) { return identity_cell(out.horizontals[h].fibers[l]); })));
  }
  for (MorId f = 0; f < nv; ++f) {
    const HorId a = data.units[vs[f].src];
    const HorId b = data.units[vs[f].dst];
    data.unit_cells.push_back(find_cell(a, b, f, f, levelwise([&](int l) {
      return hom_cell(vs[f].f.components[l], out.horizontals[a].fibers[l], out.horizontals[b].fibers[l]);
    })));
  }
  std::vector<std::vector<CellId>> by_top(nh);
  std::vector<std::vector<CellId>> by_left(nv);
  for (CellId c = 0; c < static_cast<CellId>(data.cells.size()); ++c) {
    by_top[data.cells[c].top].push_back(c);
    by_left[data.cells[c].left].push_back(c);
  }
  for (CellId a = 0; a < static_cast<CellId>(data.cells.size()); ++a) {
    const DoubleCell& x = data.cells[a];
    for (CellId b : by_top[x.bottom]) {
      const DoubleCell& y = data.cells[b];
      const auto c = levelwise(
          [&](int l) { return vertical_compose(out.cells[b].components[l], out.cells[a].components[l]); });
      data.cell_vcompose.emplace_back(
          b, a, find_cell(x.top, y.bottom, table[y.left * nv + x.left], table[y.right * nv + x.right], c));
    }
  }
  auto is_unit = [&](HorId h) { return data.units[data.horizontals[h].src] == h; };
  auto hor = [&](HorId h2, HorId h1) -> HorId {
    if (data.horizontals[h1].dst != data.horizontals[h2].src) return kNone;
    if (is_unit(h1)) return h2;
    if (is_unit(h2)) return h1;
    return kNone;
  };
  for (HorId h1 = 0; h1 < nh; ++h1) {
    for (HorId h2 = 0; h2 < nh; ++h2) {
      const HorId h = hor(h2, h1);
      if (h != kNone) data.hor_compose.emplace_back(h2, h1, h);
    }
  }
  struct Glue {
    ProfComposite comp;
    ProfCell to_result;
    ProfCell from_result;
  };
  std::map<std::array<int, 3>, Glue> glue;
  auto get_glue = [&](HorId h2, HorId h1, int l) -> const Glue& {
    auto it = glue.find({h2, h1, l});
    if (it != glue.end()) return it->second;
    Glue g;
    g.comp = compose_prof(out.horizontals[h2].fibers[l], out.horizontals[h1].fibers[l]);
    g.to_result = is_unit(h1) ? right_unitor(g.comp) : left_unitor(g.comp);
    g.from_result = invert_globular(g.to_result);
    return glue.emplace(std::array<int, 3>{h2, h1, l}, std::move(g)).first->second;
  };
  for (CellId a = 0; a < static_cast<CellId>(data.cells.size()); ++a) {
    const DoubleCell& x = data.cells[a];
    for (CellId b : by_left[x.right]) {
      const DoubleCell& y = data.cells[b];
      const HorId top = hor(y.top, x.top);
      const HorId bottom = hor(y.bottom, x.bottom);
      if (top == kNone || bottom == kNone) continue;
      const auto c = levelwise([&](int l) {
        const Glue& gt = get_glue(y.top, x.top, l);
        const Glue& gb = get_glue(y.bottom, x.bottom, l);
        const auto pasted =
            horizontal_compose(out.cells[b].components[l], out.cells[a].components[l], gt.comp, gb.comp);
        return vertical_compose(gb.to_result, vertical_compose(pasted, gt.from_result));
      });
      data.cell_hcompose.emplace_back(b, a, find_cell(top, bottom, x.left, y.right, c));
    }
  }
  out.dbl = DoubleCategory(std::move(data));
  return out;
}

}  // namespace equip

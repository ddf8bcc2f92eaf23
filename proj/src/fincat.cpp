#include "equip/fincat.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "equip/detail/assemble.hpp"
#include "equip/detail/search.hpp"
#include "equip/detail/union_find.hpp"

namespace equip {

FinCategory::FinCategory(std::vector<std::string> object_names,
                         std::vector<std::string> morphism_names, std::vector<Arrow> arrows,
                         std::vector<MorId> identities, std::vector<MorId> compose)
    : object_names_(std::move(object_names)),
      morphism_names_(std::move(morphism_names)),
      arrows_(std::move(arrows)),
      identities_(std::move(identities)),
      compose_(std::move(compose)) {
  const std::size_t n = object_names_.size();
  const std::size_t m = arrows_.size();
  if (morphism_names_.size() != m) throw Error("morphism name count does not match morphisms");
  if (identities_.size() != n) throw Error("identity table size does not match objects");
  if (compose_.size() != m * m) throw Error("composition table has wrong size");
  for (const Arrow& a : arrows_) {
    if (a.src < 0 || a.dst < 0 || static_cast<std::size_t>(a.src) >= n ||
        static_cast<std::size_t>(a.dst) >= n) {
      throw Error("morphism endpoint out of range");
    }
  }
  for (MorId i : identities_) {
    if (i < 0 || static_cast<std::size_t>(i) >= m) throw Error("identity out of range");
  }
  for (MorId h : compose_) {
    if (h != kNone && (h < 0 || static_cast<std::size_t>(h) >= m)) {
      throw Error("composite out of range");
    }
  }
  homs_.assign(n * n, {});
  for (std::size_t f = 0; f < m; ++f) {
    homs_[arrows_[f].src * n + arrows_[f].dst].push_back(static_cast<MorId>(f));
  }
}

std::optional<ObjId> FinCategory::find_object(std::string_view name) const {
  for (int a = 0; a < num_objects(); ++a) {
    if (object_names_[a] == name) return a;
  }
  return std::nullopt;
}

std::optional<MorId> FinCategory::find_morphism(std::string_view name) const {
  for (int f = 0; f < num_morphisms(); ++f) {
    if (morphism_names_[f] == name) return f;
  }
  return std::nullopt;
}

bool FinCategory::same_tables(const FinCategory& other) const {
  if (num_objects() != other.num_objects() || num_morphisms() != other.num_morphisms()) {
    return false;
  }
  for (int f = 0; f < num_morphisms(); ++f) {
    if (arrows_[f].src != other.arrows_[f].src || arrows_[f].dst != other.arrows_[f].dst) {
      return false;
    }
  }
  return identities_ == other.identities_ && compose_ == other.compose_;
}

// ---------------------------------------------------------------------------

ObjId CategoryBuilder::add_object(std::string name) {
  objects_.push_back(std::move(name));
  return static_cast<ObjId>(objects_.size()) - 1;
}

MorId CategoryBuilder::add_morphism(std::string name, ObjId src, ObjId dst) {
  names_.push_back(std::move(name));
  arrows_.push_back({src, dst});
  for (auto& row : composites_) row.push_back(-2);
  composites_.emplace_back(arrows_.size(), -2);
  return static_cast<MorId>(arrows_.size()) - 1;
}

void CategoryBuilder::set_composite(MorId g, MorId f, MorId h) {
  if (arrows_.at(f).dst != arrows_.at(g).src) throw Error("set_composite: not composable");
  composites_[g][f] = h;
}

FinCategory CategoryBuilder::build() const {
  const int n = static_cast<int>(objects_.size());
  const int k = static_cast<int>(arrows_.size());
  const int m = n + k;
  std::vector<std::string> names;
  std::vector<Arrow> arrows;
  std::vector<MorId> ids;
  for (int a = 0; a < n; ++a) {
    names.push_back("id_" + objects_[a]);
    arrows.push_back({a, a});
    ids.push_back(a);
  }
  for (int f = 0; f < k; ++f) {
    names.push_back(names_[f]);
    arrows.push_back(arrows_[f]);
  }
  std::vector<MorId> table(static_cast<std::size_t>(m) * m, kNone);
  for (int g = 0; g < m; ++g) {
    for (int f = 0; f < m; ++f) {
      if (arrows[f].dst != arrows[g].src) continue;
      MorId h;
      if (g < n) {
        h = f;
      } else if (f < n) {
        h = g;
      } else {
        const int c = composites_[g - n][f - n];
        if (c == -2) {
          throw Error("missing composite " + names[g] + " o " + names[f]);
        }
        h = c == kNone ? arrows[f].src : c + n;
      }
      table[static_cast<std::size_t>(g) * m + f] = h;
    }
  }
  return FinCategory(objects_, std::move(names), std::move(arrows), std::move(ids), std::move(table));
}

// ---------------------------------------------------------------------------
// Fixtures

FinCategory empty_category() { return FinCategory({}, {}, {}, {}, {}); }

FinCategory terminal_category() {
  CategoryBuilder b;
  b.add_object("*");
  return b.build();
}

FinCategory preorder(const std::vector<std::vector<bool>>& leq, std::vector<std::string> names) {
  const int n = static_cast<int>(leq.size());
  if (names.empty()) {
    for (int a = 0; a < n; ++a) names.push_back(std::to_string(a));
  }
  CategoryBuilder b;
  for (int a = 0; a < n; ++a) b.add_object(names[a]);
  std::vector<std::vector<MorId>> arrow(n, std::vector<MorId>(n, kNone));
  for (int a = 0; a < n; ++a) {
    if (!leq[a][a]) throw Error("preorder is not reflexive");
    for (int c = 0; c < n; ++c) {
      if (a != c && leq[a][c]) arrow[a][c] = b.add_morphism(names[a] + "<=" + names[c], a, c);
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      for (int e = 0; e < n; ++e) {
        if (arrow[a][c] == kNone || arrow[c][e] == kNone) continue;
        if (!leq[a][e]) throw Error("preorder is not transitive");
        b.set_composite(arrow[c][e], arrow[a][c], a == e ? kNone : arrow[a][e]);
      }
    }
  }
  return b.build();
}

FinCategory ordinal(int n) {
  std::vector<std::vector<bool>> leq(n + 1, std::vector<bool>(n + 1));
  for (int a = 0; a <= n; ++a) {
    for (int b = a; b <= n; ++b) leq[a][b] = true;
  }
  return preorder(leq);
}

FinCategory discrete(int n) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (int a = 0; a < n; ++a) leq[a][a] = true;
  return preorder(leq);
}

FinCategory free_span() {
  std::vector<std::vector<bool>> leq = {{true, true, true}, {false, true, false}, {false, false, true}};
  return preorder(leq, {"top", "s", "t"});
}

FinCategory parallel_pair() {
  CategoryBuilder b;
  const ObjId a = b.add_object("a");
  const ObjId c = b.add_object("b");
  b.add_morphism("u", a, c);
  b.add_morphism("v", a, c);
  return b.build();
}

FinCategory monoid_category(const std::vector<std::vector<int>>& table) {
  const int n = static_cast<int>(table.size());
  std::vector<std::string> names;
  std::vector<Arrow> arrows;
  for (int i = 0; i < n; ++i) {
    names.push_back(i == 0 ? "id_*" : "m" + std::to_string(i));
    arrows.push_back({0, 0});
  }
  std::vector<MorId> comp(static_cast<std::size_t>(n) * n);
  for (int g = 0; g < n; ++g) {
    for (int f = 0; f < n; ++f) comp[static_cast<std::size_t>(g) * n + f] = table[g][f];
  }
  return FinCategory({"*"}, std::move(names), std::move(arrows), {0}, std::move(comp));
}

FinCategory finset_skeleton(int n) {
  std::vector<std::string> objects;
  std::vector<std::string> names;
  std::vector<Arrow> arrows;
  std::vector<std::vector<int>> values;
  std::vector<MorId> ids(n + 1);
  for (int a = 0; a <= n; ++a) objects.push_back(std::to_string(a));
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      int count = 1;
      for (int i = 0; i < a; ++i) count *= b;
      for (int k = 0; k < count; ++k) {
        std::vector<int> v(a);
        std::string name = std::to_string(a) + ":[";
        for (int i = 0, r = k; i < a; ++i, r /= b) {
          v[i] = r % b;
          name += (i ? "," : "") + std::to_string(v[i]);
        }
        bool identity = a == b;
        for (int i = 0; i < a && identity; ++i) identity = v[i] == i;
        if (identity) ids[a] = static_cast<MorId>(arrows.size());
        names.push_back(name + "]");
        arrows.push_back({a, b});
        values.push_back(std::move(v));
      }
    }
  }
  std::map<std::pair<int, std::vector<int>>, MorId> index;
  for (std::size_t m = 0; m < arrows.size(); ++m) index[{arrows[m].dst, values[m]}] = static_cast<MorId>(m);
  return assemble_category(std::move(objects), std::move(names), arrows, std::move(ids), [&](MorId g, MorId f) {
    std::vector<int> v(values[f].size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values[g][values[f][i]];
    return index.at({arrows[g].dst, v});
  });
}

// ---------------------------------------------------------------------------

ValidationReport check_category(const FinCategory& c) {
  ValidationReport r;
  auto fail = [&r](std::string msg) {
    r.valid = false;
    r.violations.push_back(std::move(msg));
  };
  const int m = c.num_morphisms();
  for (int a = 0; a < c.num_objects(); ++a) {
    const MorId i = c.id(a);
    if (c.src(i) != a || c.dst(i) != a) {
      fail("identity of " + c.object_name(a) + " is not an endomorphism of it");
    }
  }
  bool closed = true;
  for (int g = 0; g < m; ++g) {
    for (int f = 0; f < m; ++f) {
      const MorId h = c.compose(g, f);
      const bool composable = c.dst(f) == c.src(g);
      if (composable && h == kNone) {
        fail("closure: " + c.morphism_name(g) + " o " + c.morphism_name(f) + " undefined");
        closed = false;
      } else if (!composable && h != kNone) {
        fail("closure: " + c.morphism_name(g) + " o " + c.morphism_name(f) +
             " defined on a non-composable pair");
        closed = false;
      } else if (composable && (c.src(h) != c.src(f) || c.dst(h) != c.dst(g))) {
        fail("closure: " + c.morphism_name(g) + " o " + c.morphism_name(f) + " = " +
             c.morphism_name(h) + " has wrong endpoints");
        closed = false;
      }
    }
  }
  for (int f = 0; f < m; ++f) {
    const MorId left = c.compose(c.id(c.dst(f)), f);
    const MorId right = c.compose(f, c.id(c.src(f)));
    if (left != f) {
      fail("unit law: id_" + c.object_name(c.dst(f)) + " o " + c.morphism_name(f) + " != " +
           c.morphism_name(f));
    }
    if (right != f) {
      fail("unit law: " + c.morphism_name(f) + " o id_" + c.object_name(c.src(f)) + " != " +
           c.morphism_name(f));
    }
  }
  if (!closed) return r;
  for (int f = 0; f < m; ++f) {
    for (int g = 0; g < m; ++g) {
      if (c.dst(f) != c.src(g)) continue;
      const MorId gf = c.compose(g, f);
      for (int h = 0; h < m; ++h) {
        if (c.dst(g) != c.src(h)) continue;
        if (c.compose(h, gf) != c.compose(c.compose(h, g), f)) {
          fail("associativity: (" + c.morphism_name(h) + ", " + c.morphism_name(g) + ", " +
               c.morphism_name(f) + ")");
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Functors

Functor::Functor(CatRef source, CatRef target, std::vector<ObjId> objects,
                 std::vector<MorId> morphisms)
    : source_(std::move(source)),
      target_(std::move(target)),
      obj_(std::move(objects)),
      mor_(std::move(morphisms)) {
  if (!source_ || !target_) throw Error("functor needs source and target");
  if (static_cast<int>(obj_.size()) != source_->num_objects() ||
      static_cast<int>(mor_.size()) != source_->num_morphisms()) {
    throw Error("functor tables do not match the source category");
  }
  for (ObjId a : obj_) {
    if (a < 0 || a >= target_->num_objects()) throw Error("functor object image out of range");
  }
  for (MorId f : mor_) {
    if (f < 0 || f >= target_->num_morphisms()) throw Error("functor morphism image out of range");
  }
}

bool Functor::operator==(const Functor& other) const {
  auto same = [](const CatRef& a, const CatRef& b) { return a == b || a->same_tables(*b); };
  return obj_ == other.obj_ && mor_ == other.mor_ && same(source_, other.source_) &&
         same(target_, other.target_);
}

ValidationReport check_functor(const Functor& f) {
  ValidationReport r;
  const FinCategory& s = f.source();
  const FinCategory& t = f.target();
  auto fail = [&r](std::string msg) {
    r.valid = false;
    r.violations.push_back(std::move(msg));
  };
  for (int m = 0; m < s.num_morphisms(); ++m) {
    const MorId im = f.map(m);
    if (t.src(im) != f(s.src(m)) || t.dst(im) != f(s.dst(m))) {
      fail("endpoints: image of " + s.morphism_name(m) + " has wrong endpoints");
    }
  }
  for (int a = 0; a < s.num_objects(); ++a) {
    if (f.map(s.id(a)) != t.id(f(a))) fail("identity: " + s.object_name(a));
  }
  if (!r.valid) return r;
  for (int g = 0; g < s.num_morphisms(); ++g) {
    for (int h = 0; h < s.num_morphisms(); ++h) {
      const MorId gh = s.compose(g, h);
      if (gh == kNone) continue;
      if (t.compose(f.map(g), f.map(h)) != f.map(gh)) {
        fail("composition: " + s.morphism_name(g) + " o " + s.morphism_name(h));
      }
    }
  }
  return r;
}

Functor identity_functor(const CatRef& c) {
  std::vector<ObjId> o(c->num_objects());
  std::iota(o.begin(), o.end(), 0);
  std::vector<MorId> m(c->num_morphisms());
  std::iota(m.begin(), m.end(), 0);
  return Functor(c, c, std::move(o), std::move(m));
}

Functor compose(const Functor& g, const Functor& f) {
  if (!(f.target_ref() == g.source_ref() || f.target().same_tables(g.source()))) {
    throw Error("compose: functors are not composable");
  }
  std::vector<ObjId> o;
  for (ObjId a : f.object_map()) o.push_back(g(a));
  std::vector<MorId> m;
  for (MorId x : f.morphism_map()) m.push_back(g.map(x));
  return Functor(f.source_ref(), g.target_ref(), std::move(o), std::move(m));
}

Functor object_functor(const CatRef& c, ObjId a) {
  return Functor(share(terminal_category()), c, {a}, {c->id(a)});
}

Functor constant_functor(const CatRef& source, const CatRef& target, ObjId a) {
  return Functor(source, target, std::vector<ObjId>(source->num_objects(), a),
                 std::vector<MorId>(source->num_morphisms(), target->id(a)));
}

Functor to_terminal(const CatRef& source, const CatRef& terminal) {
  return constant_functor(source, terminal, 0);
}

FinCategory full_subcategory(const FinCategory& c, const std::vector<ObjId>& objects) {
  std::vector<int> index(c.num_objects(), kNone);
  for (std::size_t i = 0; i < objects.size(); ++i) index[objects[i]] = static_cast<int>(i);
  std::vector<int> new_id(c.num_morphisms(), kNone);
  std::vector<std::string> names;
  std::vector<Arrow> arrows;
  std::vector<MorId> back;
  for (int f = 0; f < c.num_morphisms(); ++f) {
    if (index[c.src(f)] == kNone || index[c.dst(f)] == kNone) continue;
    new_id[f] = static_cast<int>(arrows.size());
    arrows.push_back({index[c.src(f)], index[c.dst(f)]});
    names.push_back(c.morphism_name(f));
    back.push_back(f);
  }
  const std::size_t m = arrows.size();
  std::vector<MorId> table(m * m, kNone);
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t f = 0; f < m; ++f) {
      const MorId h = c.compose(back[g], back[f]);
      if (h != kNone) table[g * m + f] = new_id[h];
    }
  }
  std::vector<MorId> ids;
  std::vector<std::string> onames;
  for (ObjId a : objects) {
    ids.push_back(new_id[c.id(a)]);
    onames.push_back(c.object_name(a));
  }
  return FinCategory(std::move(onames), std::move(names), std::move(arrows), std::move(ids),
                     std::move(table));
}

Functor full_inclusion(const CatRef& c, const std::vector<ObjId>& objects) {
  auto sub = share(full_subcategory(*c, objects));
  std::vector<MorId> m;
  for (int f = 0; f < sub->num_morphisms(); ++f) {
    // Morphisms of the subcategory appear in the same relative order.
    const ObjId a = objects[sub->src(f)];
    const ObjId b = objects[sub->dst(f)];
    const auto hs = c->hom(a, b);
    int rank = 0;
    for (int g = 0; g < f; ++g) {
      if (sub->src(g) == sub->src(f) && sub->dst(g) == sub->dst(f)) ++rank;
    }
    m.push_back(hs[rank]);
  }
  return Functor(sub, c, objects, std::move(m));
}

bool is_faithful(const Functor& f) {
  const FinCategory& s = f.source();
  for (int a = 0; a < s.num_objects(); ++a) {
    for (int b = 0; b < s.num_objects(); ++b) {
      std::set<MorId> seen;
      for (MorId m : s.hom(a, b)) {
        if (!seen.insert(f.map(m)).second) return false;
      }
    }
  }
  return true;
}

bool is_full(const Functor& f) {
  const FinCategory& s = f.source();
  for (int a = 0; a < s.num_objects(); ++a) {
    for (int b = 0; b < s.num_objects(); ++b) {
      std::set<MorId> seen;
      for (MorId m : s.hom(a, b)) seen.insert(f.map(m));
      if (seen.size() != f.target().hom(f(a), f(b)).size()) return false;
    }
  }
  return true;
}

bool is_fully_faithful(const Functor& f) { return is_faithful(f) && is_full(f); }

bool is_isomorphism(const Functor& f) {
  if (f.source().num_objects() != f.target().num_objects()) return false;
  std::set<ObjId> objs(f.object_map().begin(), f.object_map().end());
  return static_cast<int>(objs.size()) == f.target().num_objects() && is_fully_faithful(f);
}

ValidationReport check_nat_transformation(const NatTransformation& t) {
  ValidationReport r;
  const FinCategory& s = t.from.source();
  const FinCategory& c = t.from.target();
  if (static_cast<int>(t.components.size()) != s.num_objects()) {
    r.valid = false;
    r.violations.push_back("component count");
    return r;
  }
  for (int a = 0; a < s.num_objects(); ++a) {
    const MorId x = t.components[a];
    if (c.src(x) != t.from(a) || c.dst(x) != t.to(a)) {
      r.valid = false;
      r.violations.push_back("component at " + s.object_name(a) + " has wrong endpoints");
    }
  }
  if (!r.valid) return r;
  for (int f = 0; f < s.num_morphisms(); ++f) {
    const MorId lhs = c.compose(t.to.map(f), t.components[s.src(f)]);
    const MorId rhs = c.compose(t.components[s.dst(f)], t.from.map(f));
    if (lhs != rhs) {
      r.valid = false;
      r.violations.push_back("naturality at " + s.morphism_name(f));
    }
  }
  return r;
}

NatTransformation identity_transformation(const Functor& f) {
  NatTransformation t{f, f, {}};
  for (int a = 0; a < f.source().num_objects(); ++a) t.components.push_back(f.target().id(f(a)));
  return t;
}

NatTransformation vertical_compose(const NatTransformation& beta, const NatTransformation& alpha) {
  NatTransformation t{alpha.from, beta.to, {}};
  const FinCategory& c = alpha.from.target();
  for (std::size_t a = 0; a < alpha.components.size(); ++a) {
    t.components.push_back(c.compose(beta.components[a], alpha.components[a]));
  }
  return t;
}

NatTransformation whisker_left(const Functor& h, const NatTransformation& alpha) {
  NatTransformation t{compose(h, alpha.from), compose(h, alpha.to), {}};
  for (MorId x : alpha.components) t.components.push_back(h.map(x));
  return t;
}

NatTransformation whisker_right(const NatTransformation& alpha, const Functor& k) {
  NatTransformation t{compose(alpha.from, k), compose(alpha.to, k), {}};
  for (int a = 0; a < k.source().num_objects(); ++a) t.components.push_back(alpha.components[k(a)]);
  return t;
}

bool is_natural_isomorphism(const NatTransformation& t) {
  const FinCategory& c = t.from.target();
  for (MorId x : t.components) {
    bool invertible = false;
    for (MorId y : c.hom(c.dst(x), c.src(x))) {
      if (c.compose(y, x) == c.id(c.src(x)) && c.compose(x, y) == c.id(c.dst(x))) {
        invertible = true;
        break;
      }
    }
    if (!invertible) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Constructions

FinCategory opposite(const FinCategory& c) {
  std::vector<Arrow> arrows;
  for (const Arrow& a : c.arrows()) arrows.push_back({a.dst, a.src});
  const std::size_t m = c.num_morphisms();
  std::vector<MorId> table(m * m, kNone);
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t f = 0; f < m; ++f) {
      table[g * m + f] = c.compose(static_cast<MorId>(f), static_cast<MorId>(g));
    }
  }
  return FinCategory(c.object_names(), c.morphism_names(), std::move(arrows), c.identities(),
                     std::move(table));
}

Functor opposite(const Functor& f, const CatRef& source_op, const CatRef& target_op) {
  return Functor(source_op, target_op, f.object_map(), f.morphism_map());
}

FinCategory product(const FinCategory& a, const FinCategory& b) {
  const int na = a.num_objects();
  const int nb = b.num_objects();
  const int ma = a.num_morphisms();
  const int mb = b.num_morphisms();
  std::vector<std::string> onames;
  for (int x = 0; x < na; ++x) {
    for (int y = 0; y < nb; ++y) onames.push_back("(" + a.object_name(x) + "," + b.object_name(y) + ")");
  }
  std::vector<std::string> mnames;
  std::vector<Arrow> arrows;
  for (int f = 0; f < ma; ++f) {
    for (int g = 0; g < mb; ++g) {
      mnames.push_back("(" + a.morphism_name(f) + "," + b.morphism_name(g) + ")");
      arrows.push_back({a.src(f) * nb + b.src(g), a.dst(f) * nb + b.dst(g)});
    }
  }
  std::vector<MorId> ids;
  for (int x = 0; x < na; ++x) {
    for (int y = 0; y < nb; ++y) ids.push_back(a.id(x) * mb + b.id(y));
  }
  const std::size_t m = static_cast<std::size_t>(ma) * mb;
  std::vector<MorId> table(m * m, kNone);
  for (int f1 = 0; f1 < ma; ++f1) {
    for (int f2 = 0; f2 < ma; ++f2) {
      const MorId f = a.compose(f1, f2);
      if (f == kNone) continue;
      for (int g1 = 0; g1 < mb; ++g1) {
        for (int g2 = 0; g2 < mb; ++g2) {
          const MorId g = b.compose(g1, g2);
          if (g == kNone) continue;
          table[static_cast<std::size_t>(f1 * mb + g1) * m + (f2 * mb + g2)] = f * mb + g;
        }
      }
    }
  }
  return FinCategory(std::move(onames), std::move(mnames), std::move(arrows), std::move(ids),
                     std::move(table));
}

Functor product_projection_first(const CatRef& a, const CatRef& b, const CatRef& prod) {
  std::vector<ObjId> o;
  for (int x = 0; x < a->num_objects(); ++x) {
    for (int y = 0; y < b->num_objects(); ++y) o.push_back(x);
  }
  std::vector<MorId> m;
  for (int f = 0; f < a->num_morphisms(); ++f) {
    for (int g = 0; g < b->num_morphisms(); ++g) m.push_back(f);
  }
  return Functor(prod, a, std::move(o), std::move(m));
}

Functor product_projection_second(const CatRef& a, const CatRef& b, const CatRef& prod) {
  std::vector<ObjId> o;
  for (int x = 0; x < a->num_objects(); ++x) {
    for (int y = 0; y < b->num_objects(); ++y) o.push_back(y);
  }
  std::vector<MorId> m;
  for (int f = 0; f < a->num_morphisms(); ++f) {
    for (int g = 0; g < b->num_morphisms(); ++g) m.push_back(g);
  }
  return Functor(prod, b, std::move(o), std::move(m));
}

Functor pairing(const Functor& f, const Functor& g, const CatRef& prod) {
  const int nb = g.target().num_objects();
  const int mb = g.target().num_morphisms();
  std::vector<ObjId> o;
  for (int x = 0; x < f.source().num_objects(); ++x) o.push_back(f(x) * nb + g(x));
  std::vector<MorId> m;
  for (int x = 0; x < f.source().num_morphisms(); ++x) m.push_back(f.map(x) * mb + g.map(x));
  return Functor(f.source_ref(), prod, std::move(o), std::move(m));
}

Functor product_map(const Functor& f, const Functor& g, const CatRef& prod_src,
                    const CatRef& prod_dst) {
  const int nb = g.source().num_objects();
  const int mb = g.source().num_morphisms();
  const int nb2 = g.target().num_objects();
  const int mb2 = g.target().num_morphisms();
  std::vector<ObjId> o(prod_src->num_objects());
  for (int x = 0; x < f.source().num_objects(); ++x) {
    for (int y = 0; y < nb; ++y) o[x * nb + y] = f(x) * nb2 + g(y);
  }
  std::vector<MorId> m(prod_src->num_morphisms());
  for (int x = 0; x < f.source().num_morphisms(); ++x) {
    for (int y = 0; y < mb; ++y) m[x * mb + y] = f.map(x) * mb2 + g.map(y);
  }
  return Functor(prod_src, prod_dst, std::move(o), std::move(m));
}

FinCategory coproduct(const FinCategory& a, const FinCategory& b) {
  const int na = a.num_objects();
  const int ma = a.num_morphisms();
  std::vector<std::string> onames = a.object_names();
  for (const auto& s : b.object_names()) onames.push_back(s);
  std::vector<std::string> mnames = a.morphism_names();
  for (const auto& s : b.morphism_names()) mnames.push_back(s);
  std::vector<Arrow> arrows = a.arrows();
  for (const Arrow& x : b.arrows()) arrows.push_back({x.src + na, x.dst + na});
  std::vector<MorId> ids = a.identities();
  for (MorId i : b.identities()) ids.push_back(i + ma);
  const std::size_t m = arrows.size();
  std::vector<MorId> table(m * m, kNone);
  for (int g = 0; g < ma; ++g) {
    for (int f = 0; f < ma; ++f) table[g * m + f] = a.compose(g, f);
  }
  for (int g = 0; g < b.num_morphisms(); ++g) {
    for (int f = 0; f < b.num_morphisms(); ++f) {
      const MorId h = b.compose(g, f);
      table[(g + ma) * m + (f + ma)] = h == kNone ? kNone : h + ma;
    }
  }
  return FinCategory(std::move(onames), std::move(mnames), std::move(arrows), std::move(ids),
                     std::move(table));
}

CategoryPullback pullback(const Functor& f, const Functor& g) {
  const FinCategory& a = f.source();
  const FinCategory& b = g.source();
  std::vector<std::string> onames;
  std::vector<std::pair<ObjId, ObjId>> objs;
  std::map<std::pair<ObjId, ObjId>, ObjId> index;
  for (int x = 0; x < a.num_objects(); ++x) {
    for (int y = 0; y < b.num_objects(); ++y) {
      if (f(x) != g(y)) continue;
      index[{x, y}] = static_cast<ObjId>(objs.size());
      objs.push_back({x, y});
      onames.push_back("(" + a.object_name(x) + "," + b.object_name(y) + ")");
    }
  }
  std::vector<detail::KeyedMorphism> mors;
  std::vector<detail::Key> ids;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    ids.push_back({a.id(objs[i].first), b.id(objs[i].second)});
    for (std::size_t j = 0; j < objs.size(); ++j) {
      for (MorId u : a.hom(objs[i].first, objs[j].first)) {
        for (MorId v : b.hom(objs[i].second, objs[j].second)) {
          if (f.map(u) != g.map(v)) continue;
          mors.push_back({static_cast<ObjId>(i), static_cast<ObjId>(j), {u, v},
                          "(" + a.morphism_name(u) + "," + b.morphism_name(v) + ")"});
        }
      }
    }
  }
  auto apex = share(detail::assemble_category(
      std::move(onames), mors, ids, [&](const detail::Key& k2, const detail::Key& k1) {
        return detail::Key{a.compose(k2[0], k1[0]), b.compose(k2[1], k1[1])};
      }));
  std::vector<ObjId> o1, o2;
  for (auto& p : objs) {
    o1.push_back(p.first);
    o2.push_back(p.second);
  }
  std::vector<MorId> m1, m2;
  for (auto& k : mors) {
    m1.push_back(k.key[0]);
    m2.push_back(k.key[1]);
  }
  return {apex, Functor(apex, f.source_ref(), std::move(o1), std::move(m1)),
          Functor(apex, g.source_ref(), std::move(o2), std::move(m2))};
}

// ---------------------------------------------------------------------------
// Searches

namespace detail {

FinCategory assemble_category(std::vector<std::string> object_names,
                              const std::vector<KeyedMorphism>& morphisms,
                              const std::vector<Key>& identity_keys,
                              const std::function<Key(const Key&, const Key&)>& compose_keys) {
  std::map<std::tuple<ObjId, ObjId, Key>, MorId> index;
  std::vector<std::string> names;
  std::vector<Arrow> arrows;
  for (std::size_t i = 0; i < morphisms.size(); ++i) {
    index[{morphisms[i].src, morphisms[i].dst, morphisms[i].key}] = static_cast<MorId>(i);
    names.push_back(morphisms[i].name);
    arrows.push_back({morphisms[i].src, morphisms[i].dst});
  }
  std::vector<MorId> ids;
  for (std::size_t a = 0; a < identity_keys.size(); ++a) {
    auto it = index.find({static_cast<ObjId>(a), static_cast<ObjId>(a), identity_keys[a]});
    if (it == index.end()) throw Error("assemble_category: missing identity");
    ids.push_back(it->second);
  }
  const std::size_t m = morphisms.size();
  std::vector<MorId> table(m * m, kNone);
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t f = 0; f < m; ++f) {
      if (morphisms[f].dst != morphisms[g].src) continue;
      auto it = index.find({morphisms[f].src, morphisms[g].dst,
                            compose_keys(morphisms[g].key, morphisms[f].key)});
      if (it == index.end()) throw Error("assemble_category: composite not closed");
      table[g * m + f] = it->second;
    }
  }
  return FinCategory(std::move(object_names), std::move(names), std::move(arrows), std::move(ids),
                     std::move(table));
}

void search_functors(const FinCategory& s, const FinCategory& t, const FunctorSearchOptions& opt,
                     const std::function<bool(const std::vector<ObjId>&, const std::vector<MorId>&)>& visit) {
  const int n = s.num_objects();
  const int m = s.num_morphisms();
  if (opt.injective && (n > t.num_objects() || m > t.num_morphisms())) return;
  if (n > 0 && t.num_objects() == 0) return;
  std::vector<MorId> order;
  std::vector<int> pos(m, -1);
  for (int f = 0; f < m; ++f) {
    if (!s.is_identity(f)) {
      pos[f] = static_cast<int>(order.size());
      order.push_back(f);
    }
  }
  struct Triple {
    MorId g, f, h;
  };
  std::vector<std::vector<Triple>> checks(order.size());
  for (int g = 0; g < m; ++g) {
    for (int f = 0; f < m; ++f) {
      const MorId h = s.compose(g, f);
      if (h == kNone) continue;
      const int last = std::max({pos[g], pos[f], pos[h]});
      if (last >= 0) checks[last].push_back({g, f, h});
    }
  }
  std::vector<ObjId> obj(n, kNone);
  std::vector<MorId> mor(m, kNone);
  std::vector<char> used_obj(t.num_objects(), 0);
  std::vector<char> used_mor(t.num_morphisms(), 0);
  bool stop = false;

  std::function<void(std::size_t)> assign_mor = [&](std::size_t k) {
    if (stop) return;
    if (k == order.size()) {
      if (!visit(obj, mor)) stop = true;
      return;
    }
    const MorId f = order[k];
    for (MorId c : t.hom(obj[s.src(f)], obj[s.dst(f)])) {
      if (opt.injective && used_mor[c]) continue;
      if (opt.morphism_ok && !opt.morphism_ok(f, c)) continue;
      mor[f] = c;
      bool ok = true;
      for (const Triple& tr : checks[k]) {
        if (t.compose(mor[tr.g], mor[tr.f]) != mor[tr.h]) {
          ok = false;
          break;
        }
      }
      if (ok) {
        if (opt.injective) used_mor[c] = 1;
        assign_mor(k + 1);
        if (opt.injective) used_mor[c] = 0;
      }
      mor[f] = kNone;
      if (stop) return;
    }
  };

  std::function<void(int)> assign_obj = [&](int a) {
    if (stop) return;
    if (a == n) {
      bool ok = true;
      for (int x = 0; x < n && ok; ++x) {
        const MorId i = t.id(obj[x]);
        if (opt.morphism_ok && !opt.morphism_ok(s.id(x), i)) ok = false;
        mor[s.id(x)] = i;
      }
      if (ok) {
        if (opt.injective) {
          for (int x = 0; x < n; ++x) used_mor[t.id(obj[x])] = 1;
        }
        assign_mor(0);
        if (opt.injective) {
          for (int x = 0; x < n; ++x) used_mor[t.id(obj[x])] = 0;
        }
      }
      for (int x = 0; x < n; ++x) mor[s.id(x)] = kNone;
      return;
    }
    for (int c = 0; c < t.num_objects(); ++c) {
      if (opt.injective && used_obj[c]) continue;
      if (opt.object_ok && !opt.object_ok(a, c)) continue;
      obj[a] = c;
      used_obj[c] = 1;
      assign_obj(a + 1);
      used_obj[c] = 0;
      if (stop) return;
    }
    obj[a] = kNone;
  };
  assign_obj(0);
}

}  // namespace detail

std::vector<Functor> enumerate_functors(const CatRef& source, const CatRef& target,
                                        const Bounds& bounds) {
  std::vector<Functor> out;
  detail::search_functors(*source, *target, {}, [&](const auto& o, const auto& m) {
    if (out.size() >= bounds.max_functors) throw BoundExceeded("max-functors", bounds.max_functors);
    out.emplace_back(source, target, o, m);
    return true;
  });
  return out;
}

std::vector<NatTransformation> enumerate_transformations(const Functor& f, const Functor& g,
                                                         const Bounds& bounds) {
  const FinCategory& s = f.source();
  const FinCategory& c = f.target();
  const int n = s.num_objects();
  std::vector<std::vector<MorId>> by_last(n);  // morphisms checked once both ends assigned
  for (int m = 0; m < s.num_morphisms(); ++m) by_last[std::max(s.src(m), s.dst(m))].push_back(m);
  std::vector<MorId> comp(n, kNone);
  std::vector<NatTransformation> out;
  std::function<void(int)> rec = [&](int a) {
    if (a == n) {
      if (out.size() >= bounds.max_cocones) throw BoundExceeded("max-cocones", bounds.max_cocones);
      out.push_back({f, g, comp});
      return;
    }
    for (MorId x : c.hom(f(a), g(a))) {
      comp[a] = x;
      bool ok = true;
      for (MorId m : by_last[a]) {
        if (c.compose(g.map(m), comp[s.src(m)]) != c.compose(comp[s.dst(m)], f.map(m))) {
          ok = false;
          break;
        }
      }
      if (ok) rec(a + 1);
    }
    comp[a] = kNone;
  };
  rec(0);
  return out;
}

ObjId FunctorCategory::index_of(const Functor& f) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].object_map() == f.object_map() && objects[i].morphism_map() == f.morphism_map()) {
      return static_cast<ObjId>(i);
    }
  }
  return kNone;
}

FunctorCategory functor_category(const CatRef& source, const CatRef& target, const Bounds& bounds) {
  FunctorCategory fc;
  fc.objects = enumerate_functors(source, target, bounds);
  if (fc.objects.size() > bounds.max_objects) throw BoundExceeded("max-objects", bounds.max_objects);
  std::vector<std::string> onames;
  for (std::size_t i = 0; i < fc.objects.size(); ++i) onames.push_back("F" + std::to_string(i));
  std::vector<detail::KeyedMorphism> mors;
  std::vector<detail::Key> ids;
  for (std::size_t i = 0; i < fc.objects.size(); ++i) {
    ids.push_back(identity_transformation(fc.objects[i]).components);
    for (std::size_t j = 0; j < fc.objects.size(); ++j) {
      for (auto& t : enumerate_transformations(fc.objects[i], fc.objects[j], bounds)) {
        std::string name = "F" + std::to_string(i) + "=>F" + std::to_string(j) + "[";
        for (std::size_t k = 0; k < t.components.size(); ++k) {
          name += (k ? "," : "") + target->morphism_name(t.components[k]);
        }
        mors.push_back({static_cast<ObjId>(i), static_cast<ObjId>(j), t.components, name + "]"});
        fc.morphisms.push_back(std::move(t));
        if (fc.morphisms.size() > bounds.max_cocones) {
          throw BoundExceeded("max-cocones", bounds.max_cocones);
        }
      }
    }
  }
  fc.category = share(detail::assemble_category(
      std::move(onames), mors, ids, [&](const detail::Key& b, const detail::Key& a) {
        detail::Key k(a.size());
        for (std::size_t x = 0; x < a.size(); ++x) k[x] = target->compose(b[x], a[x]);
        return k;
      }));
  return fc;
}

std::optional<Functor> find_isomorphism(const CatRef& a, const CatRef& b,
                                        const std::vector<Functor>& over_a,
                                        const std::vector<Functor>& over_b) {
  if (a->num_objects() != b->num_objects() || a->num_morphisms() != b->num_morphisms()) {
    return std::nullopt;
  }
  if (over_a.size() != over_b.size()) throw Error("find_isomorphism: mismatched over-functors");
  // Cheap invariant: sorted hom-size profile per object.
  auto profile = [](const FinCategory& c, ObjId x) {
    std::vector<int> out, in;
    for (int y = 0; y < c.num_objects(); ++y) {
      out.push_back(static_cast<int>(c.hom(x, y).size()));
      in.push_back(static_cast<int>(c.hom(y, x).size()));
    }
    std::sort(out.begin(), out.end());
    std::sort(in.begin(), in.end());
    out.insert(out.end(), in.begin(), in.end());
    out.push_back(static_cast<int>(c.hom(x, x).size()));
    return out;
  };
  std::vector<std::vector<int>> pa, pb;
  for (int x = 0; x < a->num_objects(); ++x) pa.push_back(profile(*a, x));
  for (int y = 0; y < b->num_objects(); ++y) pb.push_back(profile(*b, y));
  detail::FunctorSearchOptions opt;
  opt.injective = true;
  opt.object_ok = [&](ObjId x, ObjId y) {
    if (pa[x] != pb[y]) return false;
    for (std::size_t k = 0; k < over_a.size(); ++k) {
      if (over_a[k](x) != over_b[k](y)) return false;
    }
    return true;
  };
  opt.morphism_ok = [&](MorId f, MorId g) {
    for (std::size_t k = 0; k < over_a.size(); ++k) {
      if (over_a[k].map(f) != over_b[k].map(g)) return false;
    }
    return true;
  };
  std::optional<Functor> found;
  detail::search_functors(*a, *b, opt, [&](const auto& o, const auto& m) {
    found.emplace(a, b, o, m);
    return false;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Comma categories

CommaCategory comma(const Functor& f, const Functor& g) {
  if (!(f.target_ref() == g.target_ref() || f.target().same_tables(g.target()))) {
    throw Error("comma: functors have different targets");
  }
  const FinCategory& A = f.source();
  const FinCategory& B = g.source();
  const FinCategory& C = f.target();
  CommaCategory out;
  std::vector<std::string> onames;
  for (int a = 0; a < A.num_objects(); ++a) {
    for (int b = 0; b < B.num_objects(); ++b) {
      for (MorId th : C.hom(f(a), g(b))) {
        out.objects.push_back({a, b, th});
        onames.push_back("(" + A.object_name(a) + "," + B.object_name(b) + "," + C.morphism_name(th) + ")");
      }
    }
  }
  std::vector<detail::KeyedMorphism> mors;
  std::vector<detail::Key> ids;
  const auto& objs = out.objects;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    ids.push_back({A.id(objs[i].a), B.id(objs[i].b)});
    for (std::size_t j = 0; j < objs.size(); ++j) {
      for (MorId u : A.hom(objs[i].a, objs[j].a)) {
        for (MorId v : B.hom(objs[i].b, objs[j].b)) {
          if (C.compose(g.map(v), objs[i].theta) != C.compose(objs[j].theta, f.map(u))) continue;
          mors.push_back({static_cast<ObjId>(i), static_cast<ObjId>(j), {u, v},
                          "(" + A.morphism_name(u) + "," + B.morphism_name(v) + ")"});
        }
      }
    }
  }
  out.category = share(detail::assemble_category(
      std::move(onames), mors, ids, [&](const detail::Key& k2, const detail::Key& k1) {
        return detail::Key{A.compose(k2[0], k1[0]), B.compose(k2[1], k1[1])};
      }));
  std::vector<ObjId> oa, ob;
  for (auto& o : objs) {
    oa.push_back(o.a);
    ob.push_back(o.b);
  }
  std::vector<MorId> ma, mb;
  for (auto& k : mors) {
    ma.push_back(k.key[0]);
    mb.push_back(k.key[1]);
  }
  out.proj_a = Functor(out.category, f.source_ref(), std::move(oa), std::move(ma));
  out.proj_b = Functor(out.category, g.source_ref(), std::move(ob), std::move(mb));
  return out;
}

NatTransformation comma_transformation(const CommaCategory& k, const Functor& f, const Functor& g) {
  NatTransformation t{compose(f, k.proj_a), compose(g, k.proj_b), {}};
  for (const CommaObject& o : k.objects) t.components.push_back(o.theta);
  return t;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<ObjId>> connected_components(const FinCategory& c) {
  detail::UnionFind uf(c.num_objects());
  for (const Arrow& a : c.arrows()) uf.unite(a.src, a.dst);
  int count = 0;
  const auto label = uf.classes(&count);
  std::vector<std::vector<ObjId>> out(count);
  for (int a = 0; a < c.num_objects(); ++a) out[label[a]].push_back(a);
  return out;
}

FinalityVerdict is_final(const Functor& f) {
  FinalityVerdict v;
  for (int j = 0; j < f.target().num_objects(); ++j) {
    const auto k = comma(object_functor(f.target_ref(), j), f);
    const auto comps = connected_components(*k.category);
    if (comps.size() != 1) {
      v.holds = false;
      v.witness = j;
      v.reason = comps.empty() ? "empty comma" : "disconnected comma";
      return v;
    }
  }
  return v;
}

FinalityVerdict is_initial(const Functor& f) {
  FinalityVerdict v;
  for (int j = 0; j < f.target().num_objects(); ++j) {
    const auto k = comma(f, object_functor(f.target_ref(), j));
    const auto comps = connected_components(*k.category);
    if (comps.size() != 1) {
      v.holds = false;
      v.witness = j;
      v.reason = comps.empty() ? "empty comma" : "disconnected comma";
      return v;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Set-valued diagrams

ValidationReport check_diagram(const FinSetDiagram& d) {
  ValidationReport r;
  const FinCategory& j = *d.shape;
  auto fail = [&r](std::string msg) {
    r.valid = false;
    r.violations.push_back(std::move(msg));
  };
  if (static_cast<int>(d.sizes.size()) != j.num_objects() ||
      static_cast<int>(d.maps.size()) != j.num_morphisms()) {
    fail("diagram tables do not match the shape");
    return r;
  }
  for (int m = 0; m < j.num_morphisms(); ++m) {
    const auto& fn = d.maps[m];
    if (static_cast<int>(fn.size()) != d.sizes[j.src(m)]) {
      fail("map " + j.morphism_name(m) + " has wrong domain size");
      continue;
    }
    for (int y : fn) {
      if (y < 0 || y >= d.sizes[j.dst(m)]) fail("map " + j.morphism_name(m) + " leaves its codomain");
    }
  }
  if (!r.valid) return r;
  for (int a = 0; a < j.num_objects(); ++a) {
    const auto& fn = d.maps[j.id(a)];
    for (int x = 0; x < d.sizes[a]; ++x) {
      if (fn[x] != x) {
        fail("identity at " + j.object_name(a));
        break;
      }
    }
  }
  for (int g = 0; g < j.num_morphisms(); ++g) {
    for (int f = 0; f < j.num_morphisms(); ++f) {
      const MorId h = j.compose(g, f);
      if (h == kNone) continue;
      for (int x = 0; x < d.sizes[j.src(f)]; ++x) {
        if (d.maps[g][d.maps[f][x]] != d.maps[h][x]) {
          fail("composition: " + j.morphism_name(g) + " o " + j.morphism_name(f));
          break;
        }
      }
    }
  }
  return r;
}

FinCategory assemble_category(std::vector<std::string> objects, std::vector<std::string> morphisms,
                              std::vector<Arrow> arrows, std::vector<MorId> identities,
                              const std::function<MorId(MorId, MorId)>& compose) {
  const std::size_t m = arrows.size();
  std::vector<MorId> table(m * m, kNone);
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t f = 0; f < m; ++f) {
      if (arrows[f].dst == arrows[g].src) {
        table[g * m + f] = compose(static_cast<MorId>(g), static_cast<MorId>(f));
      }
    }
  }
  return FinCategory(std::move(objects), std::move(morphisms), std::move(arrows), std::move(identities),
                     std::move(table));
}

FinSetDiagram corepresentable(const CatRef& c, ObjId j) {
  FinSetDiagram d{c, {}, {}};
  std::vector<int> rank(c->num_morphisms(), kNone);
  for (ObjId a = 0; a < c->num_objects(); ++a) {
    const auto hs = c->hom(j, a);
    d.sizes.push_back(static_cast<int>(hs.size()));
    for (std::size_t i = 0; i < hs.size(); ++i) rank[hs[i]] = static_cast<int>(i);
  }
  for (MorId m = 0; m < c->num_morphisms(); ++m) {
    std::vector<int> fn;
    for (MorId u : c->hom(j, c->src(m))) fn.push_back(rank[c->compose(m, u)]);
    d.maps.push_back(std::move(fn));
  }
  return d;
}

FinSetDiagram precompose(const FinSetDiagram& d, const Functor& f) {
  FinSetDiagram out{f.source_ref(), {}, {}};
  for (ObjId a : f.object_map()) out.sizes.push_back(d.sizes[a]);
  for (MorId m : f.morphism_map()) out.maps.push_back(d.maps[m]);
  return out;
}

FinSetColimit colimit_finset(const FinSetDiagram& d) {
  const FinCategory& j = *d.shape;
  std::vector<int> offset(j.num_objects() + 1, 0);
  for (int a = 0; a < j.num_objects(); ++a) offset[a + 1] = offset[a] + d.sizes[a];
  detail::UnionFind uf(offset.back());
  for (int m = 0; m < j.num_morphisms(); ++m) {
    for (int x = 0; x < d.sizes[j.src(m)]; ++x) {
      uf.unite(offset[j.src(m)] + x, offset[j.dst(m)] + d.maps[m][x]);
    }
  }
  FinSetColimit out;
  const auto label = uf.classes(&out.size);
  out.injections.resize(j.num_objects());
  out.representatives.assign(out.size, {kNone, 0});
  for (int a = 0; a < j.num_objects(); ++a) {
    for (int x = 0; x < d.sizes[a]; ++x) {
      const int c = label[offset[a] + x];
      out.injections[a].push_back(c);
      if (out.representatives[c].first == kNone) out.representatives[c] = {a, x};
    }
  }
  return out;
}

bool certify_colimit(const FinSetDiagram& d, const FinSetColimit& colim, const Bounds& bounds) {
  const FinCategory& j = *d.shape;
  std::vector<std::pair<ObjId, int>> elems;
  for (int a = 0; a < j.num_objects(); ++a) {
    for (int x = 0; x < d.sizes[a]; ++x) elems.push_back({a, x});
  }
  const int total = static_cast<int>(elems.size());
  // The colimit injections must themselves form a cocone.
  for (int m = 0; m < j.num_morphisms(); ++m) {
    for (int x = 0; x < d.sizes[j.src(m)]; ++x) {
      if (colim.injections[j.dst(m)][d.maps[m][x]] != colim.injections[j.src(m)][x]) return false;
    }
  }
  std::size_t budget = 0;
  for (int k = 1; k <= std::max(total, 1); ++k) {
    std::size_t p = 1;
    for (int i = 0; i < total; ++i) {
      p *= static_cast<std::size_t>(k);
      if (p > bounds.max_cocones) throw BoundExceeded("max-cocones", bounds.max_cocones);
    }
    budget += p;
    if (budget > bounds.max_cocones) throw BoundExceeded("max-cocones", bounds.max_cocones);
  }
  std::vector<int> offset(j.num_objects() + 1, 0);
  for (int a = 0; a < j.num_objects(); ++a) offset[a + 1] = offset[a] + d.sizes[a];
  for (int k = 1; k <= std::max(total, 1); ++k) {
    std::vector<int> c(total, 0);
    while (true) {
      bool cocone = true;
      for (int m = 0; m < j.num_morphisms() && cocone; ++m) {
        for (int x = 0; x < d.sizes[j.src(m)]; ++x) {
          if (c[offset[j.dst(m)] + d.maps[m][x]] != c[offset[j.src(m)] + x]) {
            cocone = false;
            break;
          }
        }
      }
      if (cocone) {
        // Existence: u(class) := c(representative) must reproduce c.
        // Uniqueness: every class is hit by some injection.
        std::vector<int> u(colim.size, -1);
        for (int cl = 0; cl < colim.size; ++cl) {
          const auto [a, x] = colim.representatives[cl];
          if (a == kNone) return false;
          u[cl] = c[offset[a] + x];
        }
        for (int i = 0; i < total; ++i) {
          const auto [a, x] = elems[i];
          if (u[colim.injections[a][x]] != c[i]) return false;
        }
      }
      int pos = 0;
      while (pos < total && ++c[pos] == k) c[pos++] = 0;
      if (pos == total) break;
    }
  }
  return true;
}

std::vector<FinSetDiagram> enumerate_diagrams(const CatRef& shape, int max_size, const Bounds& bounds) {
  const FinCategory& j = *shape;
  const int n = j.num_objects();
  std::vector<MorId> order;
  std::vector<int> pos(j.num_morphisms(), -1);
  for (int f = 0; f < j.num_morphisms(); ++f) {
    if (!j.is_identity(f)) {
      pos[f] = static_cast<int>(order.size());
      order.push_back(f);
    }
  }
  struct Triple {
    MorId g, f, h;
  };
  std::vector<std::vector<Triple>> checks(order.size());
  for (int g = 0; g < j.num_morphisms(); ++g) {
    for (int f = 0; f < j.num_morphisms(); ++f) {
      const MorId h = j.compose(g, f);
      if (h == kNone) continue;
      const int last = std::max({pos[g], pos[f], pos[h]});
      if (last >= 0) checks[last].push_back({g, f, h});
    }
  }
  std::vector<FinSetDiagram> out;
  FinSetDiagram cur{shape, std::vector<int>(n, 0), std::vector<std::vector<int>>(j.num_morphisms())};
  std::function<void(std::size_t)> assign_map = [&](std::size_t k) {
    if (k == order.size()) {
      if (out.size() >= bounds.max_functors) throw BoundExceeded("max-functors", bounds.max_functors);
      out.push_back(cur);
      return;
    }
    const MorId f = order[k];
    const int dom = cur.sizes[j.src(f)];
    const int cod = cur.sizes[j.dst(f)];
    if (dom > 0 && cod == 0) return;
    std::vector<int> fn(dom, 0);
    while (true) {
      cur.maps[f] = fn;
      bool ok = true;
      for (const Triple& t : checks[k]) {
        for (int x = 0; x < cur.sizes[j.src(t.f)]; ++x) {
          if (cur.maps[t.g][cur.maps[t.f][x]] != cur.maps[t.h][x]) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (ok) assign_map(k + 1);
      int p = 0;
      while (p < dom && ++fn[p] == cod) fn[p++] = 0;
      if (p == dom) break;
    }
  };
  std::function<void(int)> assign_size = [&](int a) {
    if (a == n) {
      for (int x = 0; x < n; ++x) {
        std::vector<int> idm(cur.sizes[x]);
        std::iota(idm.begin(), idm.end(), 0);
        cur.maps[j.id(x)] = idm;
      }
      assign_map(0);
      return;
    }
    for (int s = 0; s <= max_size; ++s) {
      cur.sizes[a] = s;
      assign_size(a + 1);
    }
  };
  assign_size(0);
  return out;
}

std::vector<int> colimit_comparison(const FinSetDiagram& d, const Functor& f,
                                    const FinSetColimit& restricted, const FinSetColimit& full) {
  (void)d;
  std::vector<int> out;
  for (const auto& [i, x] : restricted.representatives) {
    out.push_back(full.injections[f(i)][x]);
  }
  return out;
}

}  // namespace equip

#include "doctest.h"

#include "equip/corpus.hpp"
#include "equip/internal.hpp"

using namespace equip;

namespace {

CatRef point() {
  static const CatRef p = share(terminal_category());
  return p;
}

CatRef arrow_site() {
  static const CatRef a = share(ordinal(1));
  return a;
}

MorId phi01() { return arrow_site()->hom(0, 1)[0]; }

/// Over T = [1]: C(1) = top, C(0) = bottom, restriction r : top → bottom.
InternalCategory over_arrow(const CatRef& bottom, const CatRef& top, const Functor& r) {
  const CatRef& t = arrow_site();
  InternalCategory c{t, {bottom, top}, std::vector<Functor>(t->num_morphisms())};
  c.restrictions[t->id(0)] = identity_functor(bottom);
  c.restrictions[t->id(1)] = identity_functor(top);
  c.restrictions[phi01()] = Functor(top, bottom, r.object_map(), r.morphism_map());
  return c;
}

InternalProfunctor over_point(const ProfRef& f) {
  return InternalProfunctor{constant_internal(point(), f->source_ref()), constant_internal(point(), f->target_ref()),
                            {f}, {identity_cell(f)}};
}

InternalFunctor strict_over_point(const Functor& f) {
  return strict_internal_functor(constant_internal(point(), f.source_ref()), constant_internal(point(), f.target_ref()),
                                 {f});
}

/// Over T = [1] with both fibers levelwise given and one restriction cell.
InternalProfunctor prof_over_arrow(const InternalCategory& x, const InternalCategory& y, const ProfRef& f0,
                                   const ProfRef& f1, std::vector<std::vector<int>> cell) {
  const CatRef& t = arrow_site();
  InternalProfunctor p{x, y, {f0, f1}, std::vector<ProfCell>(t->num_morphisms())};
  p.restrictions[t->id(0)] = identity_cell(f0);
  p.restrictions[t->id(1)] = identity_cell(f1);
  p.restrictions[phi01()] = ProfCell{f1, f0, x.restrictions[phi01()], y.restrictions[phi01()], std::move(cell)};
  return p;
}

std::vector<NamedCategory> tiny() { return restrict_corpus(small_corpus(3), 2, 3); }

/// Small internal categories over [1] with fibers among 𝟙, [1], discrete 2.
std::vector<InternalCategory> arrow_family() {
  std::vector<CatRef> cats{point(), share(ordinal(1)), share(discrete(2))};
  std::vector<InternalCategory> out;
  for (const auto& bottom : cats) {
    for (const auto& top : cats) {
      for (const auto& r : enumerate_functors(top, bottom)) out.push_back(over_arrow(bottom, top, r));
    }
  }
  return out;
}

/// Independent oracle: some internal functor g (levelwise functors with an
/// invertible naturality cell) has a companion isomorphic to F.
bool has_companion_by_search(const InternalProfunctor& f) {
  const MorId phi = phi01();
  const InternalCategory& x = f.source;
  const InternalCategory& y = f.target;
  for (const auto& g0 : enumerate_functors(x.fibers[0], y.fibers[0])) {
    for (const auto& g1 : enumerate_functors(x.fibers[1], y.fibers[1])) {
      const Functor from = compose(y.restrictions[phi], g1);
      const Functor to = compose(g0, x.restrictions[phi]);
      for (const auto& n : enumerate_transformations(from, to)) {
        if (!is_natural_isomorphism(n)) continue;
        InternalFunctor g{x, y, {g0, g1}, {}};
        g.naturality.resize(3);
        g.naturality[arrow_site()->id(0)] = identity_transformation(g0);
        g.naturality[arrow_site()->id(1)] = identity_transformation(g1);
        g.naturality[phi] = n;
        const auto h = internal_companion_of(g);
        for (const auto& c : enumerate_internal_cells(h, f, internal_identity(x), internal_identity(y))) {
          if (is_invertible(c.components[0]) && is_invertible(c.components[1])) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("internal categories validate restriction tables") {
  auto arr = share(ordinal(1));
  const auto c = over_arrow(point(), arr, to_terminal(arr, point()));
  CHECK(check_internal_category(c).valid);
  auto bad = c;
  bad.restrictions[arrow_site()->id(1)] = Functor(arr, arr, {1, 1}, {arr->id(1), arr->id(1), arr->id(1)});
  const auto r = check_internal_category(bad);
  CHECK_FALSE(r.valid);
  CHECK(r.violations.front().find("not the identity") != std::string::npos);
  for (const auto& x : arrow_family()) CHECK(check_internal_category(x).valid);
}

TEST_CASE("internal functors") {
  auto arr = share(ordinal(1));
  const auto c = constant_internal(arrow_site(), arr);
  const auto id = internal_identity(c);
  CHECK(check_internal_functor(id).valid);
  CHECK(id.is_strict());
  CHECK_THROWS_AS(strict_internal_functor(over_arrow(arr, arr, constant_functor(arr, arr, 0)), c,
                                          {identity_functor(arr), identity_functor(arr)}),
                  Error);
  const auto comp = internal_compose(id, id);
  CHECK(check_internal_functor(comp).valid);
}

TEST_CASE("internal homs and companions of identities") {
  for (const auto& x : arrow_family()) {
    const auto hom = internal_hom(x);
    REQUIRE(check_internal_profunctor(hom).valid);
    const auto comp = internal_companion_of(internal_identity(x));
    CHECK(check_internal_profunctor(comp).valid);
    for (int l = 0; l < 2; ++l) CHECK(comp.fibers[l]->same_tables(*hom.fibers[l]));
    const auto v = internal_companion(hom);
    REQUIRE(v);
    CHECK(v.certified);
    CHECK(internal_fully_faithful(*v.functor));
    const auto w = internal_conjoint(hom);
    REQUIRE(w);
    CHECK(w.certified);
  }
}

TEST_CASE("the point site agrees with the external operations") {
  const auto cats = tiny();
  for (const auto& [xn, x] : cats) {
    for (const auto& [yn, y] : cats) {
      for (const auto& f : enumerate_functors(x, y)) {
        const auto fi = strict_over_point(f);
        REQUIRE(check_internal_functor(fi).valid);
        CHECK(internal_is_final(fi).holds == is_final(f).holds);
        CHECK(internal_fully_faithful(fi).holds == is_fully_faithful(f));

        const auto comp = internal_companion(internal_companion_of(fi));
        REQUIRE(comp);
        CHECK(comp.certified);
        CHECK(find_iso(companion_of(comp.functor->components[0]).proarrow, companion_of(f).proarrow));
        const auto conj = internal_conjoint(internal_conjoint_of(fi));
        REQUIRE(conj);
        CHECK(find_iso(conjoint_of(conj.functor->components[0]).proarrow, conjoint_of(f).proarrow));

        for (const auto& [cn, c] : cats) {
          for (const auto& g : enumerate_functors(x, c)) {
            const auto ext = pointwise_lke(g, f);
            const auto in = internal_lke(strict_over_point(g), fi);
            REQUIRE(ext.extension.has_value() == in.extension.has_value());
            if (ext) {
              CHECK(in.extension->components[0].object_map() == ext.extension->object_map());
              CHECK(in.extension->components[0].morphism_map() == ext.extension->morphism_map());
              CHECK(in.unit[0].components == ext.unit->components);
            } else {
              CHECK(in.failure.object == ext.failing);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("the point site: companions of arbitrary profunctors") {
  const auto cats = restrict_corpus(small_corpus(3), 2, 3);
  int accepted = 0;
  int rejected = 0;
  for (const auto& [xn, x] : cats) {
    for (const auto& [yn, y] : cats) {
      for (const auto& p : enumerate_profunctors(x, y, 1)) {
        const auto pr = share(p);
        const auto f = over_point(pr);
        const bool ext = external_companion(pr).has_value();
        CHECK(internal_companion(f).holds == ext);
        CHECK(internal_conjoint(f).holds == external_conjoint(pr).has_value());
        ++(ext ? accepted : rejected);
      }
    }
  }
  CHECK(accepted > 0);
  CHECK(rejected > 0);
}

TEST_CASE("companions over [1]: accept and reject fixtures") {
  auto arr = share(ordinal(1));
  const auto x = constant_internal(arrow_site(), point());
  const auto y = constant_internal(arrow_site(), arr);
  const auto at0 = companion_of(constant_functor(point(), arr, 0)).proarrow;
  const auto at1 = companion_of(constant_functor(point(), arr, 1)).proarrow;

  // Both levels pick 0; the restriction cell is the identity: the mate is invertible.
  const auto accept = prof_over_arrow(x, y, at0, at0, {{0}, {}});
  REQUIRE(check_internal_profunctor(accept).valid);
  const auto yes = internal_companion(accept);
  REQUIRE(yes);
  CHECK(yes.certified);
  CHECK(yes.functor->components[1](0) == 0);
  CHECK(yes.functor->components[0](0) == 0);
  CHECK(has_companion_by_search(accept));

  // Level 1 picks 0 and level 0 picks 1; the only cell Hom(−, 0) ⇒ Hom(−, 1)
  // is composition with 0 → 1, whose mate is not invertible.
  const auto reject = prof_over_arrow(x, y, at1, at0, {{0}, {}});
  REQUIRE(check_internal_profunctor(reject).valid);
  const auto no = internal_companion(reject);
  CHECK_FALSE(no);
  CHECK(no.phi == phi01());
  CHECK(no.t == 1);
  CHECK(no.witness.find("mate") != std::string::npos);
  CHECK_FALSE(has_companion_by_search(reject));
}

TEST_CASE("companions with broken compatibility are rejected") {
  // Z/2 acting on itself; a constant map is not equivariant.
  auto z2 = share(monoid_category({{0, 1}, {1, 0}}));
  const auto x = constant_internal(arrow_site(), point());
  const auto y = constant_internal(arrow_site(), z2);
  const auto reg = companion_of(constant_functor(point(), z2, 0)).proarrow;
  REQUIRE(reg->size(0, 0) == 2);
  const auto good = prof_over_arrow(x, y, reg, reg, {{1, 0}});
  CHECK(check_internal_profunctor(good).valid);
  CHECK(internal_companion(good));
  const auto broken = prof_over_arrow(x, y, reg, reg, {{0, 0}});
  CHECK_FALSE(check_internal_profunctor(broken).valid);
  const auto v = internal_companion(broken);
  CHECK_FALSE(v);
  CHECK(v.witness.find("invalid internal profunctor") != std::string::npos);
}

TEST_CASE("companion verdicts agree with a search over internal functors") {
  const auto family = arrow_family();
  int accepted = 0;
  int total = 0;
  for (const auto& x : family) {
    for (const auto& y : family) {
      if (x.fibers[1]->num_objects() > 1 && y.fibers[1]->num_objects() > 1 && x.fibers[0]->num_objects() > 1) continue;
      for (const auto& p1 : enumerate_profunctors(x.fibers[1], y.fibers[1], 1)) {
        for (const auto& p0 : enumerate_profunctors(x.fibers[0], y.fibers[0], 1)) {
          const auto f1 = share(p1);
          const auto f0 = share(p0);
          for (auto& c : enumerate_cells(f1, f0, x.restrictions[phi01()], y.restrictions[phi01()])) {
            const auto f = prof_over_arrow(x, y, f0, f1, c.components);
            const auto v = internal_companion(f);
            CHECK(v.holds == has_companion_by_search(f));
            if (v) CHECK(v.certified);
            // Cover independence.
            const auto m = internal_companion(f, minimal_cover(f.source));
            CHECK(m.holds == v.holds);
            if (v && m) CHECK(m.functor->components[0] == v.functor->components[0]);
            accepted += v.holds;
            ++total;
          }
        }
      }
    }
  }
  CHECK(total > 100);
  CHECK(accepted > 0);
  CHECK(accepted < total);
}

TEST_CASE("covers") {
  auto arr = share(ordinal(1));
  const auto c = over_arrow(point(), arr, to_terminal(arr, point()));
  CHECK(is_valid_cover(c, representable_cover(c)));
  const auto m = minimal_cover(c);
  CHECK(is_valid_cover(c, m));
  CHECK(m.members.size() == 2);
  CHECK_FALSE(is_valid_cover(c, GroupoidalCover{{{0, 0}}}));
  CHECK(is_valid_cover(c, GroupoidalCover{{{1, 0}, {1, 1}}}));
}

TEST_CASE("internal finality") {
  auto arr = share(ordinal(1));
  auto d2 = share(discrete(2));
  CHECK(internal_is_final(internal_identity(constant_internal(arrow_site(), arr))));

  // f_1 = id 𝟙 is final, f_0 : 2 → 𝟙 is not; the failure is also seen from
  // level 1 through the restriction.
  const auto i = over_arrow(d2, point(), constant_functor(point(), d2, 0));
  const auto j = constant_internal(arrow_site(), point());
  const auto f = strict_internal_functor(i, j, {to_terminal(d2, point()), identity_functor(point())});
  REQUIRE(check_internal_functor(f).valid);
  CHECK(is_final(f.components[1]));
  const auto v = internal_is_final(f);
  CHECK_FALSE(v);
  bool through_phi = false;
  for (const auto& w : v.failures) {
    CHECK(w.reason == "disconnected comma");
    through_phi |= w.t == 1 && w.phi == phi01();
  }
  CHECK(through_phi);
}

TEST_CASE("internal Kan extensions") {
  auto arr = share(ordinal(1));
  auto empty = share(empty_category());
  const auto c = constant_internal(arrow_site(), arr);

  SUBCASE("along the identity") {
    const auto f = internal_identity(c);
    const auto k = internal_lke(f, internal_identity(c));
    REQUIRE(k);
    CHECK(k.extension->components[0] == f.components[0]);
    CHECK(k.extension->components[1] == f.components[1]);
  }
  const auto i = constant_internal(arrow_site(), empty);
  const auto j = constant_internal(arrow_site(), point());
  const auto w = strict_internal_functor(i, j, {Functor(empty, point(), {}, {}), Functor(empty, point(), {}, {})});
  SUBCASE("restriction preserving the initial object") {
    const auto f = strict_internal_functor(i, c, {Functor(empty, arr, {}, {}), Functor(empty, arr, {}, {})});
    const auto k = internal_lke(f, w);
    REQUIRE(k);
    CHECK(k.extension->components[0](0) == 0);
    CHECK(k.extension->components[1](0) == 0);
  }
  SUBCASE("restriction not preserving the initial object") {
    const auto bad = over_arrow(arr, arr, constant_functor(arr, arr, 1));
    const auto f = strict_internal_functor(i, bad, {Functor(empty, arr, {}, {}), Functor(empty, arr, {}, {})});
    const auto k = internal_lke(f, w);
    CHECK_FALSE(k);
    CHECK(k.failure.phi == phi01());
    CHECK(k.failure.t == 1);
    CHECK(k.failure.reason == "no comparison map");
  }
}

TEST_CASE("internal full faithfulness") {
  auto arr = share(ordinal(1));
  const auto c = constant_internal(arrow_site(), arr);
  CHECK(internal_fully_faithful(internal_identity(c)));
  const auto one = constant_internal(arrow_site(), point());
  const Functor pick1 = constant_functor(point(), arr, 1);
  CHECK(internal_fully_faithful(strict_internal_functor(one, c, {pick1, pick1})));
  auto par = share(parallel_pair());
  const auto p = constant_internal(arrow_site(), par);
  std::vector<MorId> collapse;
  for (MorId m = 0; m < par->num_morphisms(); ++m) {
    collapse.push_back(par->is_identity(m) ? arr->id(par->src(m)) : arr->hom(0, 1)[0]);
  }
  const Functor squash(par, arr, {0, 1}, collapse);
  REQUIRE(check_functor(squash).valid);
  const auto v = internal_fully_faithful(strict_internal_functor(p, c, {squash, squash}));
  CHECK_FALSE(v);
  CHECK(v.t == 0);
  CHECK(v.reason == "not faithful");
}

TEST_CASE("the internal double category is an equipment") {
  auto arr = share(ordinal(1));
  const auto a = constant_internal(arrow_site(), arr);
  const auto b = over_arrow(point(), arr, to_terminal(arr, point()));
  const auto f = strict_internal_functor(a, b, {to_terminal(arr, point()), identity_functor(arr)});
  REQUIRE(check_internal_functor(f).valid);
  const auto e = build_internal_equipment({a, b}, {f});
  CHECK(check_double(e.dbl).valid);
  const auto cert = is_equipment(e.dbl);
  CHECK(cert.holds);
  CHECK(e.dbl.num_cells() > 0);
  for (std::size_t h = 0; h < e.horizontals.size(); ++h) CHECK(check_internal_profunctor(e.horizontals[h]).valid);
}

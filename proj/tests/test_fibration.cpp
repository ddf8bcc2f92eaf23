#include "doctest.h"

#include "equip/corpus.hpp"
#include "equip/fibration.hpp"

using namespace equip;

namespace {

Functor evaluation(const FunctorCategory& fc, ObjId k, const CatRef& c) {
  std::vector<ObjId> o;
  std::vector<MorId> m;
  for (const auto& f : fc.objects) o.push_back(f(k));
  for (const auto& t : fc.morphisms) m.push_back(t.components[k]);
  return Functor(fc.category, c, o, m);
}

Span span_of(const CatRef& e, const Functor& p, const Functor& q) { return Span{e, p, q}; }

}  // namespace

TEST_CASE("tabulate(hom) is the arrow category with (ev1, ev0)") {
  auto arr = share(ordinal(1));
  for (const auto& [name, c] : small_corpus(5)) {
    const auto t = tabulate(share(hom_profunctor(c)));
    REQUIRE(check_category(*t.span.apex).valid);
    const auto fc = functor_category(arr, c);
    const auto iso = find_isomorphism(t.span.apex, fc.category, {t.span.p, t.span.q},
                                      {evaluation(fc, 1, c), evaluation(fc, 0, c)});
    CHECK_MESSAGE(iso.has_value(), name);
    CHECK(check_cell(t.cell).valid);
  }
}

TEST_CASE("tabulator examples") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  const auto t = tabulate(share(point_profunctor(one, one)));
  CHECK(t.span.apex->num_objects() == 1);
  CHECK(t.span.apex->num_morphisms() == 1);
  // Companion of {0} ↪ [1]: elements (0, b, β : b → 0) with b ∈ [1].
  const auto c = tabulate(companion_of(full_inclusion(arr, {0})).proarrow);
  CHECK(c.span.apex->num_objects() == 1);
  CHECK(c.span.q(0) == 0);
}

TEST_CASE("tabulating cells are universal") {
  const auto probes = small_corpus(3);
  for (const auto& [name, c] : small_corpus(4)) {
    const auto t = tabulate(share(hom_profunctor(c)));
    const auto v = verify_tabulator(t, probes);
    CHECK_MESSAGE(v.holds, name << " fails at " << v.probe);
    CHECK(v.cells == v.functors);
  }
  auto arr = share(ordinal(1));
  for (const auto& p : enumerate_profunctors(arr, arr, 2)) {
    const auto t = tabulate(share(p));
    CHECK(verify_tabulator(t, probes).holds);
  }
}

TEST_CASE("collages") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  const auto c = cotabulate(share(hom_profunctor(one)));
  CHECK(find_isomorphism(c.category, arr).has_value());
  CHECK(check_cell(c.cell).valid);
  const auto e = cotabulate(share(empty_profunctor(arr, one)));
  CHECK(find_isomorphism(e.category, share(coproduct(*arr, *one))).has_value());
  const auto corpus = restrict_corpus(small_corpus(3), 2, 3);
  for (const auto& [xn, x] : corpus) {
    for (const auto& [yn, y] : corpus) {
      for (const auto& p : enumerate_profunctors(x, y, 2)) {
        auto pr = share(p);
        const auto k = cotabulate(pr);
        REQUIRE(check_category(*k.category).valid);
        for (ObjId b = 0; b < y->num_objects(); ++b) {
          for (ObjId a = 0; a < x->num_objects(); ++a) {
            CHECK(static_cast<int>(k.category->hom(k.j(b), k.i(a)).size()) == p.size(b, a));
            CHECK(k.category->hom(k.i(a), k.j(b)).empty());
          }
        }
        CHECK(is_fully_faithful(k.i));
        CHECK(is_fully_faithful(k.j));
        CHECK(check_cell(k.cell).valid);
      }
    }
  }
}

TEST_CASE("two-sided discrete fibration examples") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  for (const auto& [name, c] : small_corpus(5)) {
    const auto t = tabulate(share(hom_profunctor(c)));
    const auto r = is_tsdfib(t.span);
    CHECK_MESSAGE(r.holds, name);
    CHECK(r.agree);
    CHECK(r.conservative);
    CHECK(r.discrete_fibers);
    CHECK(r.left);
    CHECK(r.right);
  }
  const auto bad = is_tsdfib(span_of(one, constant_functor(one, arr, 0), identity_functor(one)));
  CHECK_FALSE(bad.holds);
  CHECK(bad.agree);
  CHECK_FALSE(bad.regular);
  CHECK_FALSE(bad.left);
  CHECK(bad.witness.find("cocartesian") != std::string::npos);
  CHECK(is_tsdfib(span_of(one, identity_functor(one), identity_functor(one))).holds);
  // A group acting on a single object: regular, but fibers are not discrete.
  auto z2 = share(monoid_category({{0, 1}, {1, 0}}));
  const auto g = is_tsdfib(span_of(z2, to_terminal(z2, one), to_terminal(z2, one)));
  CHECK(g.regular);
  CHECK_FALSE(g.holds);
  CHECK(g.agree);
}

TEST_CASE("the four characterizations agree on enumerated spans") {
  const auto corpus = small_corpus(3);
  int spans = 0;
  int fibrations = 0;
  for (const auto& [en, e] : corpus) {
    for (const auto& [xn, x] : corpus) {
      for (const auto& [yn, y] : corpus) {
        const auto ps = enumerate_functors(e, x);
        const auto qs = enumerate_functors(e, y);
        for (const auto& p : ps) {
          for (const auto& q : qs) {
            const auto r = is_tsdfib(Span{e, p, q});
            ++spans;
            fibrations += r.holds;
            CHECK_MESSAGE(r.agree, en << " -> " << xn << " x " << yn);
            // A two-sided discrete fibration is recovered from what it classifies.
            if (r.holds) {
              const auto c = classify(Span{e, p, q});
              const auto t = tabulate(c.proarrow);
              const auto unit = reflection_unit(Span{e, p, q}, c, t);
              CHECK(is_isomorphism(unit));
            }
          }
        }
      }
    }
  }
  CHECK(spans >= 200);
  CHECK(fibrations > 0);
  MESSAGE(spans << " spans, " << fibrations << " two-sided discrete fibrations");
}

TEST_CASE("classify") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  SUBCASE("arrow categories classify hom") {
    for (const auto& [name, c] : small_corpus(5)) {
      auto hom = share(hom_profunctor(c));
      const auto t = tabulate(hom);
      const auto cl = classify(t.span);
      const auto counit = reflection_counit(t, cl);
      CHECK(check_cell(counit).valid);
      CHECK_MESSAGE(is_invertible(counit), name);
    }
  }
  SUBCASE("the representable span classifies the companion") {
    for (const auto& [xn, x] : small_corpus(3)) {
      for (const auto& [yn, y] : small_corpus(4)) {
        for (const auto& f : enumerate_functors(x, y)) {
          const auto cl = classify(Span{x, identity_functor(x), f});
          CHECK(find_iso(cl.proarrow, companion_of(f).proarrow).has_value());
        }
      }
    }
  }
  SUBCASE("the empty span") {
    auto empty = share(empty_category());
    const auto cl = classify(Span{empty, to_terminal(empty, one), to_terminal(empty, one)});
    CHECK(cl.proarrow->size(0, 0) == 0);
  }
}

TEST_CASE("local reflection on small profunctors") {
  const auto corpus = restrict_corpus(small_corpus(3), 2, 3);
  for (const auto& [xn, x] : corpus) {
    for (const auto& [yn, y] : corpus) {
      for (const auto& p : enumerate_profunctors(x, y, 2)) {
        const auto t = tabulate(share(p));
        const auto cl = classify(t.span);
        const auto counit = reflection_counit(t, cl);
        REQUIRE(check_cell(counit).valid);
        CHECK_MESSAGE(is_invertible(counit), xn << " -> " << yn);
      }
    }
  }
}

TEST_CASE("laxity comparison for composable pairs") {
  const auto corpus = restrict_corpus(small_corpus(3), 2, 3);
  for (const auto& [xn, x] : corpus) {
    for (const auto& [yn, y] : corpus) {
      for (const auto& [zn, z] : corpus) {
        const auto fs = enumerate_profunctors(x, y, 1);
        const auto gs = enumerate_profunctors(y, z, 1);
        for (const auto& f : fs) {
          for (const auto& g : gs) {
            auto fr = share(f);
            auto gr = share(g);
            const auto tf = tabulate(fr);
            const auto tg = tabulate(gr);
            const auto comp = compose_spans(tf.span, tg.span);
            const auto cl = classify(comp.span);
            const auto gf = compose_prof(gr, fr);
            const auto cmp = laxity_comparison(tf, tg, comp, cl, gf);
            REQUIRE(check_cell(cmp).valid);
            CHECK(is_invertible(cmp));
          }
        }
      }
    }
  }
}

TEST_CASE("comma fibrations") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  const auto id = identity_functor(arr);
  const auto k = comma_fibration(id, id);
  const auto t = tabulate(share(hom_profunctor(arr)));
  CHECK(find_isomorphism(k.span.apex, t.span.apex, {k.span.p, k.span.q}, {t.span.p, t.span.q}).has_value());
  const auto pt = comma_fibration(constant_functor(one, arr, 1), constant_functor(one, arr, 0));
  CHECK(pt.span.apex->num_objects() == 1);
  for (const auto& [xn, x] : small_corpus(3)) {
    for (const auto& [an, a] : small_corpus(4)) {
      for (const auto& f : enumerate_functors(x, a)) {
        for (const auto& g : enumerate_functors(x, a)) {
          const auto c = comma_fibration(f, g);
          const auto r = tabulate(restrict_prof(g, share(hom_profunctor(a)), f).proarrow);
          CHECK(find_isomorphism(c.span.apex, r.span.apex, {c.span.p, c.span.q}, {r.span.p, r.span.q}));
          CHECK(check_cell(c.cell).valid);
          CHECK(is_tsdfib(c.span).holds);
        }
      }
    }
  }
}

TEST_CASE("comprehensive factorization examples") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  SUBCASE("constant at 1") {
    const auto f = comprehensive_factorization(constant_functor(one, arr, 1));
    CHECK(f.copresheaf.sizes == std::vector<int>{0, 1});
    CHECK(is_isomorphism(f.initial));
  }
  SUBCASE("constant at 0") {
    const auto f = comprehensive_factorization(constant_functor(one, arr, 0));
    CHECK(f.copresheaf.sizes == std::vector<int>{1, 1});
    CHECK(is_isomorphism(f.fibration));
    CHECK(f.initial(0) == 0);
  }
  SUBCASE("a discrete opfibration factors trivially") {
    for (const auto& [an, a] : small_corpus(4)) {
      for (const auto& [xn, x] : small_corpus(4)) {
        for (const auto& p : enumerate_functors(a, x)) {
          if (!is_discrete_opfibration(p)) continue;
          CHECK(is_isomorphism(comprehensive_factorization(p).initial));
        }
      }
    }
  }
}

TEST_CASE("comprehensive factorization over the corpus") {
  for (const auto& [an, a] : small_corpus(4)) {
    for (const auto& [xn, x] : small_corpus(4)) {
      for (const auto& f : enumerate_functors(a, x)) {
        const auto fac = comprehensive_factorization(f);
        REQUIRE(check_category(*fac.middle).valid);
        CHECK(is_initial(fac.initial).holds);
        CHECK(is_discrete_opfibration(fac.fibration));
        CHECK(compose(fac.fibration, fac.initial) == f);
      }
    }
  }
}

TEST_CASE("initial functors lift uniquely against discrete opfibrations") {
  const auto corpus = small_corpus(3);
  std::vector<Functor> initials, fibs;
  for (const auto& [an, a] : corpus) {
    for (const auto& [bn, b] : corpus) {
      for (const auto& f : enumerate_functors(a, b)) {
        if (is_initial(f).holds) initials.push_back(f);
        if (is_discrete_opfibration(f)) fibs.push_back(f);
      }
    }
  }
  long long squares = 0;
  for (const auto& i : initials) {
    for (const auto& p : fibs) {
      const auto r = check_unique_lifting(i, p);
      CHECK(r.holds);
      squares += r.squares;
    }
  }
  CHECK(squares > 0);
  // A non-initial map need not lift: 1 → [1] at 1 against the identity of [1].
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  const auto e = comprehensive_factorization(constant_functor(one, arr, 1));
  CHECK_FALSE(check_unique_lifting(constant_functor(one, arr, 1), identity_functor(arr)).holds == false);
  CHECK_FALSE(check_unique_lifting(constant_functor(one, arr, 1), e.fibration).holds);
}

TEST_CASE("discrete opfibrations cancel") {
  const auto corpus = small_corpus(3);
  for (const auto& [en, e] : corpus) {
    for (const auto& [xn, x] : corpus) {
      for (const auto& p : enumerate_functors(e, x)) {
        if (!is_discrete_opfibration(p)) continue;
        for (const auto& [an, a] : corpus) {
          for (const auto& f : enumerate_functors(a, e)) {
            if (is_discrete_opfibration(compose(p, f))) CHECK(is_discrete_opfibration(f));
          }
        }
      }
    }
  }
}

TEST_CASE("coslices") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  auto empty = share(empty_category());
  const auto s1 = coslice(identity_functor(one));
  CHECK(s1.category->num_objects() == 1);
  const auto s2 = coslice(Functor(empty, arr, {}, {}));
  CHECK(find_isomorphism(s2.category, arr).has_value());
  auto two = share(discrete(2));
  const auto s3 = coslice(Functor(two, arr, {0, 1}, {0, 1}));
  CHECK(s3.category->num_objects() == 1);
  CHECK(s3.apex[0] == 1);
  CHECK(is_discrete_opfibration(s3.projection));
  const auto cones = slice(Functor(two, arr, {0, 1}, {0, 1}));
  CHECK(cones.category->num_objects() == 1);
  CHECK(cones.apex[0] == 0);
  Bounds tight;
  tight.max_cocones = 1;
  CHECK_NOTHROW(coslice(identity_functor(arr), tight));
  CHECK_THROWS_AS(coslice(Functor(empty, arr, {}, {}), tight), BoundExceeded);
}

TEST_CASE("fibrational Yoneda") {
  const auto corpus = restrict_corpus(small_corpus(3), 2, 3);
  for (const auto& [xn, x] : corpus) {
    for (const auto& [yn, y] : corpus) {
      for (const auto& f : enumerate_functors(x, y)) {
        const auto yu = fibrational_yoneda(f);
        REQUIRE(check_functor(yu.unit).valid);
        for (const auto& p : enumerate_profunctors(x, y, 1)) {
          const auto e = tabulate(share(p));
          const auto r = check_fibrational_yoneda(yu, e.span);
          CHECK_MESSAGE(r.bijective, xn << " -> " << yn);
          // Both sides are F(f a, a) families: sections of the span.
        }
      }
    }
  }
}

TEST_CASE("representability through functor categories") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  const auto probes = restrict_corpus(small_corpus(3), 2, 3);
  for (const auto& [xn, x] : restrict_corpus(small_corpus(3), 2, 3)) {
    for (const auto& p : enumerate_profunctors(x, arr, 1)) {
      const auto t = tabulate(share(p));
      REQUIRE(is_tsdfib(t.span).holds);
      for (const auto& [zn, z] : probes) {
        const auto fs = functor_span(t.span, z);
        CHECK_MESSAGE(is_tsdfib(fs).holds, xn << " under " << zn);
      }
    }
  }
}

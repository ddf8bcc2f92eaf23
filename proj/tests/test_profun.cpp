#include "doctest.h"

#include "equip/corpus.hpp"
#include "equip/profun.hpp"

using namespace equip;

namespace {

// Brute-force coend: pairs (b, t, s) glued along every middle morphism,
// with classes found by repeated relabeling rather than union-find.
int coend_size(const Profunctor& g, const Profunctor& f, ObjId c, ObjId a) {
  const FinCategory& y = f.target();
  std::vector<std::tuple<int, int, int>> pairs;
  for (int b = 0; b < y.num_objects(); ++b) {
    for (int t = 0; t < g.size(c, b); ++t) {
      for (int s = 0; s < f.size(b, a); ++s) pairs.emplace_back(b, t, s);
    }
  }
  std::vector<int> label(pairs.size());
  for (std::size_t i = 0; i < label.size(); ++i) label[i] = static_cast<int>(i);
  auto index = [&](int b, int t, int s) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i] == std::make_tuple(b, t, s)) return static_cast<int>(i);
    }
    return -1;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int m = 0; m < y.num_morphisms(); ++m) {
      for (int t = 0; t < g.size(c, y.src(m)); ++t) {
        for (int s = 0; s < f.size(y.dst(m), a); ++s) {
          const int i = index(y.dst(m), g.act_x(c, m, t), s);
          const int j = index(y.src(m), t, f.act_y(m, a, s));
          const int lo = std::min(label[i], label[j]);
          if (label[i] != lo || label[j] != lo) {
            const int hi = std::max(label[i], label[j]);
            for (int& l : label) {
              if (l == hi) l = lo;
            }
            changed = true;
          }
        }
      }
    }
  }
  std::sort(label.begin(), label.end());
  return static_cast<int>(std::unique(label.begin(), label.end()) - label.begin());
}

}  // namespace

TEST_CASE("hom profunctors satisfy the bimodule laws") {
  for (const auto& [name, c] : small_corpus(6)) {
    CHECK_MESSAGE(check_profunctor(hom_profunctor(c)).valid, name);
  }
}

TEST_CASE("companion examples") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  SUBCASE("identity companion is the hom profunctor") {
    const auto c = companion_of(identity_functor(arr));
    CHECK(c.proarrow->same_tables(hom_profunctor(arr)));
  }
  SUBCASE("companion of the point at 1") {
    const auto c = companion_of(constant_functor(one, arr, 1));
    CHECK(c.proarrow->size(0, 0) == 1);
    CHECK(c.proarrow->size(1, 0) == 1);
  }
  SUBCASE("companion of the inclusion of 0") {
    const auto c = companion_of(full_inclusion(arr, {0}));
    CHECK(c.proarrow->size(1, 0) == 0);
    CHECK(c.proarrow->size(0, 0) == 1);
  }
}

TEST_CASE("conjoint examples") {
  auto arr = share(ordinal(1));
  CHECK(conjoint_of(identity_functor(arr)).proarrow->same_tables(hom_profunctor(arr)));
  const auto c = conjoint_of(full_inclusion(arr, {1}));
  // f^⊛ : [1] → {1}; value at (a = the point, b = 0) is Hom(1, 0).
  CHECK(c.proarrow->size(0, 0) == 0);
  CHECK(c.proarrow->size(0, 1) == 1);
}

TEST_CASE("transposed conjoint is the companion of the opposite") {
  for (const auto& [xname, x] : small_corpus(4)) {
    for (const auto& [yname, y] : small_corpus(4)) {
      auto xop = share(opposite(*x));
      auto yop = share(opposite(*y));
      for (const auto& f : enumerate_functors(x, y)) {
        const auto conj = conjoint_of(f);
        const auto t = transpose(*conj.proarrow, yop, xop);
        const auto comp = companion_of(opposite(f, xop, yop));
        CHECK_MESSAGE(t.same_tables(*comp.proarrow), xname << " -> " << yname);
      }
    }
  }
}

TEST_CASE("companion and conjoint triangle identities") {
  for (const auto& [xname, x] : small_corpus(4)) {
    for (const auto& [yname, y] : small_corpus(4)) {
      for (const auto& f : enumerate_functors(x, y)) {
        const auto comp = companion_of(f);
        const auto conj = conjoint_of(f);
        REQUIRE(check_cell(comp.unit).valid);
        REQUIRE(check_cell(comp.counit).valid);
        REQUIRE(check_cell(conj.unit).valid);
        REQUIRE(check_cell(conj.counit).valid);
        const auto r1 = check_companion_triangles(f, comp);
        const auto r2 = check_conjoint_triangles(f, conj);
        CHECK_MESSAGE(r1.vertical, xname << " -> " << yname);
        CHECK_MESSAGE(r1.horizontal, xname << " -> " << yname);
        CHECK_MESSAGE(r2.vertical, xname << " -> " << yname);
        CHECK_MESSAGE(r2.horizontal, xname << " -> " << yname);
      }
    }
  }
}

TEST_CASE("composition agrees with a brute-force coend") {
  for (const auto& [xname, x] : small_corpus(4)) {
    for (const auto& [yname, y] : small_corpus(4)) {
      for (const auto& f : enumerate_functors(x, y)) {
        const auto comp = companion_of(f);
        const auto conj = conjoint_of(f);
        const auto gf = compose_prof(conj.proarrow, comp.proarrow);
        REQUIRE(check_profunctor(*gf.result).valid);
        for (int b = 0; b < x->num_objects(); ++b) {
          for (int a = 0; a < x->num_objects(); ++a) {
            CHECK(gf.result->size(b, a) == coend_size(*conj.proarrow, *comp.proarrow, b, a));
            // conj ∘ comp (a', a) ≅ Hom_y(f a', f a).
            CHECK(gf.result->size(b, a) == static_cast<int>(y->hom(f(b), f(a)).size()));
          }
        }
      }
    }
  }
}

TEST_CASE("unit laws are witnessed by the unitors") {
  for (const auto& [name, c] : small_corpus(5)) {
    for (const auto& [dname, d] : small_corpus(3)) {
      for (const auto& f : enumerate_functors(c, d)) {
        const auto p = companion_of(f).proarrow;
        const auto l = compose_prof(share(hom_profunctor(d)), p);
        const auto r = compose_prof(p, share(hom_profunctor(c)));
        const auto lu = left_unitor(l);
        const auto ru = right_unitor(r);
        CHECK(check_cell(lu).valid);
        CHECK(check_cell(ru).valid);
        CHECK(is_invertible(lu));
        CHECK(is_invertible(ru));
        CHECK(find_iso(l.result, p).has_value());
      }
    }
  }
}

TEST_CASE("one-point composite over the point") {
  auto one = share(terminal_category());
  auto p = share(point_profunctor(one, one));
  const auto c = compose_prof(p, p);
  CHECK(c.result->size(0, 0) == 1);
}

TEST_CASE("associator is a bijection") {
  const auto corpus = small_corpus(4);
  for (const auto& [xn, x] : corpus) {
    if (x->num_objects() > 2) continue;
    for (const auto& [yn, y] : corpus) {
      if (y->num_objects() > 2) continue;
      for (const auto& f : enumerate_functors(x, y)) {
        auto F = companion_of(f).proarrow;
        auto G = conjoint_of(f).proarrow;
        auto H = companion_of(f).proarrow;
        const auto gf = compose_prof(G, F);
        const auto hg = compose_prof(H, G);
        const auto hg_f = compose_prof(hg.result, F);
        const auto h_gf = compose_prof(H, gf.result);
        const auto a = associator(hg_f, hg, h_gf, gf);
        CHECK(check_cell(a).valid);
        CHECK(is_invertible(a));
      }
    }
  }
}

TEST_CASE("restriction") {
  auto arr = share(ordinal(1));
  auto hom = share(hom_profunctor(arr));
  const auto id = identity_functor(arr);
  CHECK(restrict_prof(id, hom, id).proarrow->same_tables(*hom));
  auto one = share(terminal_category());
  const auto r = restrict_prof(constant_functor(one, arr, 0), hom, constant_functor(one, arr, 1));
  CHECK(r.proarrow->size(0, 0) == 1);
  CHECK(check_cell(r.cartesian).valid);
  // restrict(g, hom, f) is Hom(g −, f −).
  for (const auto& [name, c] : small_corpus(4)) {
    for (const auto& g : enumerate_functors(arr, c)) {
      for (const auto& f : enumerate_functors(one, c)) {
        const auto rr = restrict_prof(g, share(hom_profunctor(c)), f);
        for (int b = 0; b < 2; ++b) CHECK(rr.proarrow->size(b, 0) == static_cast<int>(c->hom(g(b), f(0)).size()));
      }
    }
  }
}

TEST_CASE("extension") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  auto pt = share(point_profunctor(one, one));
  const auto id1 = identity_functor(one);
  CHECK(find_iso(extend_prof(id1, pt, id1).proarrow, pt).has_value());
  // Along 1 → [1] picking 0 (source) and 1 (target): Hom(−, 1) × Hom(0, −) glued.
  const auto e = extend_prof(constant_functor(one, arr, 1), pt, constant_functor(one, arr, 0));
  CHECK(check_cell(e.cocartesian).valid);
  for (int b = 0; b < 2; ++b) {
    for (int a = 0; a < 2; ++a) {
      const int expected = static_cast<int>(arr->hom(b, 1).size() * arr->hom(0, a).size());
      CHECK(e.proarrow->size(b, a) == expected);
    }
  }
}

TEST_CASE("extension is left adjoint to restriction") {
  const auto corpus = small_corpus(3);
  for (const auto& [xn, x] : corpus) {
    for (const auto& [x2n, x2] : corpus) {
      for (const auto& f : enumerate_functors(x, x2)) {
        for (const auto& g : enumerate_functors(x, x2)) {
          auto F = share(hom_profunctor(x));
          const auto ext = extend_prof(g, F, f);
          auto G = share(hom_profunctor(x2));
          const auto res = restrict_prof(g, G, f);
          const auto id_x = identity_functor(x);
          const auto id_x2 = identity_functor(x2);
          const auto lhs = enumerate_cells(ext.proarrow, G, id_x2, id_x2);
          const auto rhs = enumerate_cells(F, res.proarrow, id_x, id_x);
          CHECK(lhs.size() == rhs.size());
          // The bijection: β ↦ β ∘ cocart, factored through the restriction.
          for (const auto& beta : lhs) {
            const auto pasted = vertical_compose(beta, ext.cocartesian);
            ProfCell through{F, res.proarrow, id_x, id_x, pasted.components};
            CHECK(check_cell(through).valid);
          }
        }
      }
    }
  }
}

TEST_CASE("cotensor") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  auto hom = hom_profunctor(arr);
  SUBCASE("over the point") {
    const auto fam = cotensor(one, hom, constant_functor(one, arr, 0), constant_functor(one, arr, 1));
    CHECK(fam.size() == 1);
  }
  SUBCASE("ends of hom are natural endotransformations") {
    for (const auto& [name, c] : small_corpus(5)) {
      for (const auto& [iname, i] : small_corpus(4)) {
        auto h = hom_profunctor(c);
        for (const auto& f : enumerate_functors(i, c)) {
          CHECK(cotensor(i, h, f, f).size() == enumerate_transformations(f, f).size());
        }
      }
    }
  }
  SUBCASE("constant point") {
    auto p = point_profunctor(arr, arr);
    CHECK(cotensor(arr, p, identity_functor(arr), identity_functor(arr)).size() == 1);
  }
}

TEST_CASE("pointwise product of profunctors") {
  auto a = share(ordinal(1));
  auto b = share(parallel_pair());
  auto ab = share(product(*a, *b));
  const auto p = product_prof(hom_profunctor(a), hom_profunctor(b), ab, ab);
  CHECK(check_profunctor(p).valid);
  CHECK(find_iso_loose(share(p), share(hom_profunctor(ab))).has_value());
}

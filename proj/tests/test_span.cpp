#include "doctest.h"

#include "equip/corpus.hpp"
#include "equip/span.hpp"

using namespace equip;

namespace {

bool all_three(const SpanRecognition& r) { return r.fibrational && r.spans_discrete && r.representation; }

}  // namespace

TEST_CASE("pullbacks by universal search") {
  const auto c = ordinal(2);
  // 0 → 2 ← 1 has pullback 0 in a total order.
  const MorId f = c.hom(0, 2)[0];
  const MorId g = c.hom(1, 2)[0];
  const auto pb = find_pullback(c, f, g);
  REQUIRE(pb);
  CHECK(pb->apex == 0);
  CHECK_FALSE(missing_pullback(c));

  const auto fs = finset_skeleton(2);
  REQUIRE(check_category(fs).valid);
  CHECK(fs.num_morphisms() == 11);
  const auto miss = missing_pullback(fs);
  REQUIRE(miss);
  // 2 → 1 ← 2 would need a 4-element apex.
  CHECK(fs.src(miss->first) == 2);
  CHECK(fs.src(miss->second) == 2);
  CHECK(fs.dst(miss->first) == 1);
}

TEST_CASE("Span(1) has only the unit") {
  const auto d = build_span_double(share(terminal_category()));
  CHECK(d.dbl.num_horizontals() == 1);
  CHECK(d.dbl.is_unit(0));
  CHECK(check_double(d.dbl).valid);
  const auto r = recognize_span(d.dbl);
  CHECK(all_three(r));
  CHECK(r.consistent);
}

TEST_CASE("missing pullbacks are named") {
  CHECK_THROWS_AS(build_span_double(share(finset_skeleton(2))), MissingPullback);
  try {
    build_span_double(share(finset_skeleton(2)));
  } catch (const MissingPullback& e) {
    CHECK(std::string(e.what()).find("2:[0,0]") != std::string::npos);
  }
  // a → c ← b with no lower bound of a and b.
  auto v = share(preorder({{true, false, true}, {false, true, true}, {false, false, true}}, {"a", "b", "c"}));
  CHECK_THROWS_AS(build_span_double(v), MissingPullback);
}

TEST_CASE("span double categories of small categories with pullbacks") {
  std::vector<NamedCategory> bases = {{"[1]", share(ordinal(1))},
                                      {"[2]", share(ordinal(2))},
                                      {"FinSet<=1", share(finset_skeleton(1))},
                                      {"2", share(discrete(2))}};
  for (const auto& [name, c] : bases) {
    const auto d = build_span_double(c);
    const auto v = check_double(d.dbl);
    CHECK_MESSAGE(v.valid, name << ": " << (v.violations.empty() ? "" : v.violations[0]));
    const auto eq = is_equipment(d.dbl);
    CHECK_MESSAGE(eq.holds, name);
    for (MorId f = 0; f < c->num_morphisms(); ++f) {
      // The companion is the graph span, the conjoint the cograph span.
      CHECK(eq.companions[f].proarrow == span_class(d, graph_span(*c, f)).first);
      CHECK(eq.conjoints[f].proarrow == span_class(d, cograph_span(*c, f)).first);
    }
    const auto r = recognize_span(d.dbl);
    CHECK_MESSAGE(all_three(r), name << " " << r.witness_a << r.witness_b << r.witness_c);
    CHECK(r.consistent);
  }
}

TEST_CASE("tabulators in Span(C) are the spans themselves") {
  for (const auto& c : {share(ordinal(2)), share(finset_skeleton(1))}) {
    const auto d = build_span_double(c);
    for (HorId h = 0; h < d.dbl.num_horizontals(); ++h) {
      const auto t = find_tabulator(d.dbl, h);
      REQUIRE(t);
      const SpanArrow s = d.spans[h];
      CHECK(t->apex == s.apex);
      CHECK(t->left == s.left);
      CHECK(t->right == s.right);
      CHECK(d.cell_maps[t->cell] == c->id(s.apex));
    }
  }
}

TEST_CASE("companion then conjoint is the kernel pair") {
  for (const auto& c : {share(ordinal(2)), share(finset_skeleton(1)), share(discrete(2))}) {
    const auto d = build_span_double(c);
    for (MorId f = 0; f < c->num_morphisms(); ++f) {
      const HorId comp = span_class(d, graph_span(*c, f)).first;
      const HorId conj = span_class(d, cograph_span(*c, f)).first;
      const auto pb = *find_pullback(*c, f, f);
      CHECK(d.dbl.compose(conj, comp) == span_class(d, {pb.apex, pb.first, pb.second}).first);
    }
  }
}

TEST_CASE("a group with automorphisms") {
  auto z2 = share(monoid_category({{0, 1}, {1, 0}}));
  const auto d = build_span_double(z2);
  CHECK(d.dbl.num_horizontals() == 2);  // (id, id) and (id, g)
  const auto v = check_double(d.dbl);
  CHECK(v.valid);
  CHECK(is_equipment(d.dbl).holds);
  CHECK(all_three(recognize_span(d.dbl)));
}

TEST_CASE("an equipment fragment without tabulators") {
  auto arr = share(ordinal(1));
  const auto frag = functor_fragment(identity_functor(arr));
  const auto r = recognize_span(frag.dbl);
  CHECK(r.equipment);
  CHECK_FALSE(r.fibrational);
  CHECK(r.consistent);
  CHECK_FALSE(r.witness_a.empty());
}

TEST_CASE("the Cat equipment is fibrational but not a span double category") {
  const auto tier = restrict_corpus(small_corpus(2), 2, 2);
  const auto r = recognize_cat_span(tier, tier, 1);
  CHECK(r.equipment);
  CHECK(r.tabular);
  CHECK(r.pullbacks);
  CHECK(r.tabulators_cocartesian);
  CHECK(r.composites_cocartesian);
  CHECK(r.fibrational);
  CHECK_FALSE(r.spans_discrete);
  CHECK_FALSE(r.witness_b.empty());
  CHECK_FALSE(r.strict);
  CHECK(r.bijective_on_cells);
  CHECK_FALSE(r.representation);
  CHECK(r.consistent);
  MESSAGE("witness (b): " << r.witness_b);
  MESSAGE("witness (c): " << r.witness_c);
}

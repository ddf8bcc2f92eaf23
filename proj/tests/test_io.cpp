#include "doctest.h"

#include "equip/corpus.hpp"
#include "equip/io.hpp"

using namespace equip;
using io::Json;

TEST_CASE("categories round-trip through JSON") {
  for (const auto& [name, c] : default_corpus()) {
    io::Workspace ws;
    const CatRef back = ws.category(io::to_json(*c));
    CHECK_MESSAGE(back->same_tables(*c), name);
    CHECK(back->object_names() == c->object_names());
  }
}

TEST_CASE("functors and profunctors round-trip") {
  const auto cats = restrict_corpus(small_corpus(3), 2, 3);
  for (const auto& [xn, x] : cats) {
    for (const auto& [yn, y] : cats) {
      for (const auto& f : enumerate_functors(x, y)) {
        io::Workspace ws;
        CHECK(ws.functor(io::to_json(f)) == Functor(ws.category(io::to_json(*x)), ws.category(io::to_json(*y)),
                                                    f.object_map(), f.morphism_map()));
      }
      for (const auto& p : enumerate_profunctors(x, y, 1)) {
        io::Workspace ws;
        const ProfRef back = ws.profunctor(io::to_json(p));
        CHECK(back->sizes() == p.sizes());
        CHECK(back->y_action() == p.y_action());
        CHECK(back->x_action() == p.x_action());
      }
    }
  }
}

TEST_CASE("double categories round-trip") {
  auto arr = share(ordinal(1));
  const auto e = functor_fragment(object_functor(arr, 1));
  io::Workspace ws;
  const DoubleCategory back = ws.double_category(io::to_json(e.dbl));
  CHECK(back.num_cells() == e.dbl.num_cells());
  CHECK(back.num_horizontals() == e.dbl.num_horizontals());
  CHECK(io::to_json(back) == io::to_json(e.dbl));
}

TEST_CASE("identities and their composites are inferred") {
  io::Workspace ws;
  const CatRef c = ws.category(Json::parse(R"({"objects": ["a", "b"],
      "morphisms": [{"id": "f", "src": "a", "dst": "b"}]})"));
  CHECK(c->same_tables(ordinal(1)));
  CHECK(c->find_morphism("id_a"));
}

TEST_CASE("structural input errors") {
  io::Workspace ws;
  CHECK_THROWS_AS(io::parse_text("{\"objects\": [", "t"), io::InputError);
  try {
    io::parse_text("{\"a\": }", "t");
  } catch (const io::InputError& e) {
    CHECK(std::string(e.what()).find("at byte") != std::string::npos);
  }
  // e∘e is not given.
  CHECK_THROWS_WITH_AS(ws.category(Json::parse(R"({"objects": ["a"],
      "morphisms": [{"id": "e", "src": "a", "dst": "a"}]})")),
                       doctest::Contains("missing composite"), io::InputError);
  CHECK_THROWS_AS(ws.category(Json("no-such-fixture")), io::InputError);
  CHECK_THROWS_AS(ws.functor(Json::parse(R"({"source": "terminal", "target": "ordinal:1", "objects": {}})")),
                  io::InputError);
}

TEST_CASE("internal categories reject non-functorial restriction tables") {
  // Over [2]: restrictions along 0→1 and 1→2 pick different points of [1],
  // so the composite restriction disagrees with the one given for 0→2.
  const Json doc = Json::parse(R"({
    "categories": {"T": {"fixture": "ordinal:2"}, "A": {"fixture": "ordinal:1"}},
    "site": "T",
    "fibers": {"0": "A", "1": "A", "2": "A"},
    "restrictions": {
      "0<=1": {"objects": {"0": "0", "1": "0"}, "morphisms": {"0<=1": "id_0"}},
      "1<=2": {"objects": {"0": "0", "1": "1"}, "morphisms": {"0<=1": "0<=1"}},
      "0<=2": {"objects": {"0": "1", "1": "1"}, "morphisms": {"0<=1": "id_1"}}
    }})");
  io::Workspace ws;
  ws.load(doc);
  CHECK_THROWS_WITH_AS(ws.internal_category(doc), doctest::Contains("internal category is invalid"),
                       io::InputError);
  const auto c = ws.internal_category(doc, false);
  CHECK_FALSE(check_internal_category(c).valid);

  Json fixed = doc;
  fixed["restrictions"]["0<=2"] = {{"objects", {{"0", "0"}, {"1", "0"}}}, {"morphisms", {{"0<=1", "id_0"}}}};
  io::Workspace ws2;
  ws2.load(fixed);
  const auto good = ws2.internal_category(fixed);
  CHECK(check_internal_category(good).valid);
  io::Workspace ws3;
  const auto back = ws3.internal_category(io::to_json(good));
  for (std::size_t m = 0; m < good.restrictions.size(); ++m) {
    CHECK(back.restrictions[m].object_map() == good.restrictions[m].object_map());
    CHECK(back.restrictions[m].morphism_map() == good.restrictions[m].morphism_map());
  }
}

TEST_CASE("bounds files") {
  const Bounds b = io::bounds_from_json(Json::parse(R"({"max_functors": 7})"));
  CHECK(b.max_functors == 7);
  CHECK(b.max_objects == Bounds{}.max_objects);
  CHECK_THROWS_AS(io::bounds_from_json(Json::parse(R"({"max_things": 1})")), io::InputError);
}

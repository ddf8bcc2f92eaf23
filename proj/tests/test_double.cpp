#include "doctest.h"

#include "equip/corpus.hpp"
#include "equip/double.hpp"

using namespace equip;

TEST_CASE("functor fragments are equipments") {
  const auto corpus = small_corpus(3);
  for (const auto& [xn, x] : corpus) {
    for (const auto& [yn, y] : corpus) {
      for (const auto& f : enumerate_functors(x, y)) {
        const auto e = functor_fragment(f);
        const auto r = check_double(e.dbl);
        REQUIRE_MESSAGE(r.valid, xn << " -> " << yn << ": " << (r.violations.empty() ? "" : r.violations[0]));
        CHECK(check_category(cell_category(e.dbl)).valid);
        const auto cert = is_equipment(e.dbl);
        CHECK_MESSAGE(cert.holds, xn << " -> " << yn);
        const MorId m = find_vertical(e, f);
        REQUIRE(m != kNone);
        const auto comp = find_companion(e.dbl, m);
        const auto conj = find_conjoint(e.dbl, m);
        REQUIRE(comp.has_value());
        REQUIRE(conj.has_value());
        CHECK(find_iso_loose(e.horizontals[comp->proarrow], companion_of(f).proarrow).has_value());
        CHECK(find_iso_loose(e.horizontals[conj->proarrow], conjoint_of(f).proarrow).has_value());
        // The companion counit exhibits f_⊛ as the restriction of the unit.
        CHECK(is_cartesian_cell(e.dbl, comp->counit).holds);
        CHECK(is_cocartesian_cell(e.dbl, comp->unit).holds);
      }
    }
  }
}

TEST_CASE("the companion of an identity is the unit") {
  auto arr = share(ordinal(1));
  const auto e = functor_fragment(identity_functor(arr));
  for (ObjId a = 0; a < e.dbl.num_objects(); ++a) {
    const auto c = find_companion(e.dbl, e.dbl.vertical().id(a));
    REQUIRE(c.has_value());
    CHECK(c->proarrow == e.dbl.unit(a));
    CHECK(c->unit == e.dbl.identity_cell(e.dbl.unit(a)));
  }
}

TEST_CASE("without companions the fragment is not an equipment") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  CatEquipmentSpec spec;
  spec.objects = {one, arr};
  spec.generators = {constant_functor(one, arr, 1)};
  spec.add_companions = false;
  const auto e = build_cat_equipment(spec);
  REQUIRE(check_double(e.dbl).valid);
  const auto cert = is_equipment(e.dbl);
  CHECK_FALSE(cert.holds);
  CHECK(cert.missing == "companion");
  CHECK(e.verticals[cert.failing].source_ref() == one);
}

TEST_CASE("cartesian cells") {
  auto one = share(terminal_category());
  auto arr = share(ordinal(1));
  const auto e = functor_fragment(constant_functor(one, arr, 0));
  const auto& p = e.dbl;
  int cartesian = 0;
  for (CellId c = 0; c < p.num_cells(); ++c) {
    const auto v = is_cartesian_cell(p, c);
    if (v.holds) ++cartesian;
    // Every identity cell is cartesian.
    if (c == p.identity_cell(p.cell(c).top)) CHECK(v.holds);
  }
  CHECK(cartesian > 0);
  CHECK(cartesian < p.num_cells());
  // A cell from the empty profunctor into the point one is not cartesian.
  HorId empty = kNone, point = kNone;
  for (HorId h = 0; h < p.num_horizontals(); ++h) {
    if (p.horizontal(h).name == "empty") empty = h;
    if (p.horizontal(h).name == "point") point = h;
  }
  REQUIRE(empty != kNone);
  REQUIRE(point != kNone);
  const auto& cells = p.cells_with_frame(empty, point, p.vertical().id(p.horizontal(empty).src),
                                         p.vertical().id(p.horizontal(empty).dst));
  REQUIRE(cells.size() == 1);
  const auto v = is_cartesian_cell(p, cells[0]);
  CHECK_FALSE(v.holds);
  CHECK(v.fillers == 0);
}

TEST_CASE("identity lax functor") {
  auto arr = share(ordinal(1));
  auto one = share(terminal_category());
  const auto e = functor_fragment(constant_functor(one, arr, 1));
  const auto id = identity_lax_functor(e.dbl);
  CHECK(check_lax_functor(id).valid);
  CHECK(id.is_strict());
  const auto pres = check_preserves_cartesian(id);
  CHECK(pres.precondition);
  CHECK(pres.holds);
  CHECK(pres.cartesian_cells > 0);
  const auto adj = check_lax_adjunction(id, id);
  CHECK(adj.holds());
  CHECK(adj.v_normal);
  CHECK(adj.unit_mate_invertible);
}

TEST_CASE("check_lax_functor rejects a scrambled cell map") {
  auto arr = share(ordinal(1));
  auto one = share(terminal_category());
  const auto e = functor_fragment(constant_functor(one, arr, 1));
  auto h = identity_lax_functor(e.dbl);
  // Swap two cells with different frames.
  CellId other = kNone;
  for (CellId c = 1; c < e.dbl.num_cells(); ++c) {
    if (e.dbl.cell(c).top != e.dbl.cell(0).top) {
      other = c;
      break;
    }
  }
  REQUIRE(other != kNone);
  std::swap(h.cells[0], h.cells[other]);
  CHECK_FALSE(check_lax_functor(h).valid);
  // A unit comparison that is not an identity makes the functor non-normal.
  auto g = identity_lax_functor(e.dbl);
  const HorId u = e.dbl.unit(0);
  for (CellId c : e.dbl.cells_with_frame(u, u, e.dbl.vertical().id(0), e.dbl.vertical().id(0))) {
    if (c != e.dbl.identity_cell(u)) {
      g.unit_comparisons[0] = c;
      CHECK_FALSE(g.is_normal());
    }
  }
}

TEST_CASE("interchange in fragments") {
  auto arr = share(ordinal(1));
  CatEquipmentSpec spec;
  spec.objects = {arr};
  spec.all_functors = true;
  const auto e = build_cat_equipment(spec);
  const auto r = check_double(e.dbl);
  CHECK_MESSAGE(r.valid, (r.violations.empty() ? "" : r.violations[0]));
  CHECK(is_equipment(e.dbl).holds);
  CHECK(!e.dbl.data().cell_hcompose.empty());
}

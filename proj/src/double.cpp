#include "equip/double.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace equip {

DoubleCategory::DoubleCategory(Data data) : data_(std::move(data)) {
  const FinCategory& v = *data_.vertical;
  if (static_cast<int>(data_.units.size()) != v.num_objects()) throw Error("double: unit table size");
  if (static_cast<int>(data_.identity_cells.size()) != num_horizontals()) {
    throw Error("double: identity cell table size");
  }
  if (static_cast<int>(data_.unit_cells.size()) != v.num_morphisms()) {
    throw Error("double: unit cell table size");
  }
  for (const auto& h : data_.horizontals) {
    if (h.src < 0 || h.src >= v.num_objects() || h.dst < 0 || h.dst >= v.num_objects()) {
      throw Error("double: horizontal endpoint out of range");
    }
  }
  by_top_.assign(num_horizontals(), {});
  by_bottom_.assign(num_horizontals(), {});
  by_left_.assign(v.num_morphisms(), {});
  for (CellId c = 0; c < num_cells(); ++c) {
    const DoubleCell& x = data_.cells[c];
    if (x.top < 0 || x.top >= num_horizontals() || x.bottom < 0 || x.bottom >= num_horizontals() ||
        x.left < 0 || x.left >= v.num_morphisms() || x.right < 0 || x.right >= v.num_morphisms()) {
      throw Error("double: cell frame out of range");
    }
    by_frame_[{x.top, x.bottom, x.left, x.right}].push_back(c);
    by_top_[x.top].push_back(c);
    by_bottom_[x.bottom].push_back(c);
    by_left_[x.left].push_back(c);
  }
  for (const auto& [h2, h1, h] : data_.hor_compose) hor_[key(h2, h1)] = h;
  for (const auto& [b, a, c] : data_.cell_vcompose) vcomp_[key(b, a)] = c;
  for (const auto& [b, a, c] : data_.cell_hcompose) hcomp_[key(b, a)] = c;
}

const std::vector<CellId>& DoubleCategory::cells_with_frame(HorId top, HorId bottom, MorId left,
                                                            MorId right) const {
  const auto it = by_frame_.find({top, bottom, left, right});
  return it == by_frame_.end() ? empty_ : it->second;
}
const std::vector<CellId>& DoubleCategory::cells_with_top(HorId top) const { return by_top_[top]; }
const std::vector<CellId>& DoubleCategory::cells_with_bottom(HorId bottom) const {
  return by_bottom_[bottom];
}
const std::vector<CellId>& DoubleCategory::cells_with_left(MorId left) const { return by_left_[left]; }

std::vector<HorId> DoubleCategory::horizontals_between(ObjId a, ObjId b) const {
  std::vector<HorId> out;
  for (HorId h = 0; h < num_horizontals(); ++h) {
    if (data_.horizontals[h].src == a && data_.horizontals[h].dst == b) out.push_back(h);
  }
  return out;
}

// ---------------------------------------------------------------------------

ValidationReport check_double(const DoubleCategory& p) {
  ValidationReport r;
  constexpr std::size_t kMaxMessages = 64;
  auto fail = [&r](const std::string& msg) {
    r.valid = false;
    if (r.violations.size() < kMaxMessages) r.violations.push_back(msg);
  };
  const FinCategory& v = p.vertical();
  const auto cname = [&](CellId c) { return p.cell(c).name; };

  for (ObjId a = 0; a < p.num_objects(); ++a) {
    const HorArrow& u = p.horizontal(p.unit(a));
    if (u.src != a || u.dst != a) fail("unit of " + v.object_name(a) + " has wrong endpoints");
  }
  for (CellId c = 0; c < p.num_cells(); ++c) {
    const DoubleCell& x = p.cell(c);
    const HorArrow& t = p.horizontal(x.top);
    const HorArrow& b = p.horizontal(x.bottom);
    if (v.src(x.left) != t.src || v.dst(x.left) != b.src || v.src(x.right) != t.dst ||
        v.dst(x.right) != b.dst) {
      fail("cell " + x.name + " has an inconsistent frame");
    }
  }
  for (HorId h = 0; h < p.num_horizontals(); ++h) {
    const DoubleCell& x = p.cell(p.identity_cell(h));
    const HorArrow& hh = p.horizontal(h);
    if (x.top != h || x.bottom != h || x.left != v.id(hh.src) || x.right != v.id(hh.dst)) {
      fail("identity cell of " + hh.name + " has the wrong frame");
    }
  }
  for (MorId f = 0; f < v.num_morphisms(); ++f) {
    const DoubleCell& x = p.cell(p.unit_cell(f));
    if (x.top != p.unit(v.src(f)) || x.bottom != p.unit(v.dst(f)) || x.left != f || x.right != f) {
      fail("unit cell of " + v.morphism_name(f) + " has the wrong frame");
    }
  }
  if (!r.valid) return r;

  // Vertical composition of cells.
  for (CellId a = 0; a < p.num_cells(); ++a) {
    const DoubleCell& x = p.cell(a);
    for (CellId b : p.cells_with_top(x.bottom)) {
      const DoubleCell& y = p.cell(b);
      const CellId ba = p.vcompose(b, a);
      if (ba == kNone) {
        fail("vertical composite " + cname(b) + " o " + cname(a) + " missing");
        continue;
      }
      const DoubleCell& z = p.cell(ba);
      if (z.top != x.top || z.bottom != y.bottom || z.left != v.compose(y.left, x.left) ||
          z.right != v.compose(y.right, x.right)) {
        fail("vertical composite " + cname(b) + " o " + cname(a) + " has the wrong frame");
        continue;
      }
      for (CellId c : p.cells_with_top(y.bottom)) {
        const CellId l = p.vcompose(c, ba);
        const CellId cb = p.vcompose(c, b);
        if (l == kNone || cb == kNone) continue;
        if (l != p.vcompose(cb, a)) fail("vertical associativity fails at " + cname(c) + ", " + cname(b) + ", " + cname(a));
      }
    }
    if (p.vcompose(p.identity_cell(x.bottom), a) != a || p.vcompose(a, p.identity_cell(x.top)) != a) {
      fail("identity cells are not vertical units at " + cname(a));
    }
  }
  for (ObjId a = 0; a < p.num_objects(); ++a) {
    if (p.unit_cell(v.id(a)) != p.identity_cell(p.unit(a))) {
      fail("unit cell of an identity is not the identity of the unit at " + v.object_name(a));
    }
  }
  for (MorId f = 0; f < v.num_morphisms(); ++f) {
    for (MorId g = 0; g < v.num_morphisms(); ++g) {
      const MorId gf = v.compose(g, f);
      if (gf == kNone) continue;
      if (p.vcompose(p.unit_cell(g), p.unit_cell(f)) != p.unit_cell(gf)) {
        fail("unit cells not functorial at " + v.morphism_name(g) + " o " + v.morphism_name(f));
      }
    }
  }

  // Horizontal composition of arrows.
  for (HorId h = 0; h < p.num_horizontals(); ++h) {
    const HorArrow& hh = p.horizontal(h);
    if (p.compose(h, p.unit(hh.src)) != h || p.compose(p.unit(hh.dst), h) != h) {
      fail("horizontal unit law fails at " + hh.name);
    }
  }
  for (const auto& [h2, h1, h] : p.data().hor_compose) {
    const HorArrow& a = p.horizontal(h1);
    const HorArrow& b = p.horizontal(h2);
    const HorArrow& c = p.horizontal(h);
    if (a.dst != b.src || c.src != a.src || c.dst != b.dst) {
      fail("horizontal composite " + b.name + " o " + a.name + " has wrong endpoints");
    }
  }
  for (const auto& [h2, h1, h21] : p.data().hor_compose) {
    for (HorId h3 = 0; h3 < p.num_horizontals(); ++h3) {
      if (p.horizontal(h3).src != p.horizontal(h2).dst) continue;
      const HorId h32 = p.compose(h3, h2);
      if (h32 == kNone) continue;
      const HorId l = p.compose(h3, h21);
      const HorId rr = p.compose(h32, h1);
      if (l != kNone && rr != kNone && l != rr) {
        fail("horizontal associativity fails at " + p.horizontal(h3).name + ", " + p.horizontal(h2).name +
             ", " + p.horizontal(h1).name);
      }
    }
  }

  // Horizontal composition of cells.
  for (CellId a = 0; a < p.num_cells(); ++a) {
    const DoubleCell& x = p.cell(a);
    for (CellId b : p.cells_with_left(x.right)) {
      const DoubleCell& y = p.cell(b);
      const HorId top = p.compose(y.top, x.top);
      const HorId bottom = p.compose(y.bottom, x.bottom);
      const CellId ba = p.hcompose(b, a);
      if (top == kNone || bottom == kNone) {
        if (ba != kNone) fail("horizontal composite " + cname(b) + " | " + cname(a) + " defined without its frame");
        continue;
      }
      if (ba == kNone) {
        fail("horizontal composite " + cname(b) + " | " + cname(a) + " missing");
        continue;
      }
      const DoubleCell& z = p.cell(ba);
      if (z.top != top || z.bottom != bottom || z.left != x.left || z.right != y.right) {
        fail("horizontal composite " + cname(b) + " | " + cname(a) + " has the wrong frame");
      }
    }
    if (p.hcompose(a, p.unit_cell(x.left)) != a || p.hcompose(p.unit_cell(x.right), a) != a) {
      fail("unit cells are not horizontal units at " + cname(a));
    }
  }
  for (const auto& [h2, h1, h] : p.data().hor_compose) {
    if (p.hcompose(p.identity_cell(h2), p.identity_cell(h1)) != p.identity_cell(h)) {
      fail("identity cells not preserved by horizontal composition at " + p.horizontal(h2).name + " o " +
           p.horizontal(h1).name);
    }
  }
  // Horizontal associativity of cells, and interchange.
  for (const auto& [b, a, ba] : p.data().cell_hcompose) {
    for (CellId c : p.cells_with_left(p.cell(b).right)) {
      const CellId cb = p.hcompose(c, b);
      const CellId l = p.hcompose(c, ba);
      if (cb == kNone || l == kNone) continue;
      const CellId rr = p.hcompose(cb, a);
      if (rr != kNone && rr != l) fail("horizontal associativity of cells fails at " + cname(c) + ", " + cname(b) + ", " + cname(a));
    }
    // a over a2 on the left, b over b2 on the right.
    for (CellId a2 : p.cells_with_top(p.cell(a).bottom)) {
      for (CellId b2 : p.cells_with_top(p.cell(b).bottom)) {
        if (p.cell(a2).right != p.cell(b2).left) continue;
        const CellId lower = p.hcompose(b2, a2);
        if (lower == kNone) continue;
        const CellId l = p.vcompose(lower, ba);
        const CellId rr = p.hcompose(p.vcompose(b2, b), p.vcompose(a2, a));
        if (l != rr) {
          fail("interchange fails at " + cname(a) + ", " + cname(b) + " over " + cname(a2) + ", " + cname(b2));
        }
      }
    }
  }
  return r;
}

FinCategory cell_category(const DoubleCategory& p) {
  std::vector<std::string> onames;
  for (HorId h = 0; h < p.num_horizontals(); ++h) onames.push_back(p.horizontal(h).name);
  std::vector<std::string> mnames;
  std::vector<Arrow> arrows;
  for (CellId c = 0; c < p.num_cells(); ++c) {
    mnames.push_back(p.cell(c).name);
    arrows.push_back({p.cell(c).top, p.cell(c).bottom});
  }
  const std::size_t m = arrows.size();
  std::vector<MorId> table(m * m, kNone);
  for (const auto& [b, a, c] : p.data().cell_vcompose) table[static_cast<std::size_t>(b) * m + a] = c;
  return FinCategory(std::move(onames), std::move(mnames), std::move(arrows), p.data().identity_cells,
                     std::move(table));
}

// ---------------------------------------------------------------------------

std::optional<CompanionWitness> find_companion(const DoubleCategory& p, MorId f) {
  const FinCategory& v = p.vertical();
  const ObjId a = v.src(f);
  const ObjId b = v.dst(f);
  for (HorId h : p.horizontals_between(a, b)) {
    for (CellId u : p.cells_with_frame(p.unit(a), h, v.id(a), f)) {
      for (CellId c : p.cells_with_frame(h, p.unit(b), f, v.id(b))) {
        if (p.vcompose(c, u) == p.unit_cell(f) && p.hcompose(c, u) == p.identity_cell(h)) {
          return CompanionWitness{h, u, c};
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<CompanionWitness> find_conjoint(const DoubleCategory& p, MorId f) {
  const FinCategory& v = p.vertical();
  const ObjId a = v.src(f);
  const ObjId b = v.dst(f);
  for (HorId h : p.horizontals_between(b, a)) {
    for (CellId u : p.cells_with_frame(p.unit(a), h, f, v.id(a))) {
      for (CellId c : p.cells_with_frame(h, p.unit(b), v.id(b), f)) {
        if (p.vcompose(c, u) == p.unit_cell(f) && p.hcompose(u, c) == p.identity_cell(h)) {
          return CompanionWitness{h, u, c};
        }
      }
    }
  }
  return std::nullopt;
}

EquipmentCertificate is_equipment(const DoubleCategory& p) {
  EquipmentCertificate cert;
  for (MorId f = 0; f < p.vertical().num_morphisms(); ++f) {
    const auto comp = find_companion(p, f);
    if (!comp) {
      cert.holds = false;
      cert.failing = f;
      cert.missing = "companion";
      return cert;
    }
    const auto conj = find_conjoint(p, f);
    if (!conj) {
      cert.holds = false;
      cert.failing = f;
      cert.missing = "conjoint";
      return cert;
    }
    cert.companions.push_back(*comp);
    cert.conjoints.push_back(*conj);
  }
  return cert;
}

std::optional<CellId> find_globular_iso(const DoubleCategory& p, HorId h, HorId h2) {
  const FinCategory& v = p.vertical();
  const MorId ia = v.id(p.horizontal(h).src);
  const MorId ib = v.id(p.horizontal(h).dst);
  if (p.horizontal(h2).src != p.horizontal(h).src || p.horizontal(h2).dst != p.horizontal(h).dst) {
    return std::nullopt;
  }
  for (CellId a : p.cells_with_frame(h, h2, ia, ib)) {
    for (CellId b : p.cells_with_frame(h2, h, ia, ib)) {
      if (p.vcompose(b, a) == p.identity_cell(h) && p.vcompose(a, b) == p.identity_cell(h2)) return a;
    }
  }
  return std::nullopt;
}

CellVerdict is_cartesian_cell(const DoubleCategory& p, CellId alpha) {
  const FinCategory& v = p.vertical();
  const DoubleCell& a = p.cell(alpha);
  CellVerdict out;
  for (CellId beta : p.cells_with_bottom(a.bottom)) {
    const DoubleCell& b = p.cell(beta);
    const HorArrow& top = p.horizontal(b.top);
    for (MorId h : v.hom(top.src, p.horizontal(a.top).src)) {
      if (v.compose(a.left, h) != b.left) continue;
      for (MorId k : v.hom(top.dst, p.horizontal(a.top).dst)) {
        if (v.compose(a.right, k) != b.right) continue;
        int count = 0;
        for (CellId g : p.cells_with_frame(b.top, a.top, h, k)) {
          if (p.vcompose(alpha, g) == beta) ++count;
        }
        if (count != 1) return CellVerdict{false, beta, count};
      }
    }
  }
  return out;
}

CellVerdict is_cocartesian_cell(const DoubleCategory& p, CellId alpha) {
  const FinCategory& v = p.vertical();
  const DoubleCell& a = p.cell(alpha);
  CellVerdict out;
  for (CellId beta : p.cells_with_top(a.top)) {
    const DoubleCell& b = p.cell(beta);
    const HorArrow& bottom = p.horizontal(b.bottom);
    for (MorId h : v.hom(p.horizontal(a.bottom).src, bottom.src)) {
      if (v.compose(h, a.left) != b.left) continue;
      for (MorId k : v.hom(p.horizontal(a.bottom).dst, bottom.dst)) {
        if (v.compose(k, a.right) != b.right) continue;
        int count = 0;
        for (CellId g : p.cells_with_frame(a.bottom, b.bottom, h, k)) {
          if (p.vcompose(g, alpha) == beta) ++count;
        }
        if (count != 1) return CellVerdict{false, beta, count};
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lax functors

bool LaxDoubleFunctor::is_normal() const {
  for (ObjId x = 0; x < source->num_objects(); ++x) {
    const HorId hu = horizontals[source->unit(x)];
    if (hu != target->unit(vertical(x))) return false;
    if (unit_comparisons[x] != target->identity_cell(hu)) return false;
  }
  return true;
}

bool LaxDoubleFunctor::is_strict() const {
  if (!is_normal()) return false;
  for (const auto& [h2, h1, c] : composite_comparisons) {
    const HorId hc = horizontals[source->compose(h2, h1)];
    if (target->compose(horizontals[h2], horizontals[h1]) != hc) return false;
    if (c != target->identity_cell(hc)) return false;
  }
  return true;
}

ValidationReport check_lax_functor(const LaxDoubleFunctor& h) {
  ValidationReport r;
  auto fail = [&r](const std::string& msg) {
    r.valid = false;
    if (r.violations.size() < 64) r.violations.push_back(msg);
  };
  const DoubleCategory& p = *h.source;
  const DoubleCategory& q = *h.target;
  if (!check_functor(h.vertical).valid) {
    fail("vertical part is not a functor");
    return r;
  }
  if (static_cast<int>(h.horizontals.size()) != p.num_horizontals() ||
      static_cast<int>(h.cells.size()) != p.num_cells() ||
      static_cast<int>(h.unit_comparisons.size()) != p.num_objects()) {
    fail("table sizes do not match the source");
    return r;
  }
  const Functor& v = h.vertical;
  for (HorId x = 0; x < p.num_horizontals(); ++x) {
    const HorArrow& a = p.horizontal(x);
    const HorArrow& b = q.horizontal(h.horizontals[x]);
    if (b.src != v(a.src) || b.dst != v(a.dst)) fail("horizontal " + a.name + " sent to wrong endpoints");
  }
  for (CellId c = 0; c < p.num_cells(); ++c) {
    const DoubleCell& a = p.cell(c);
    const DoubleCell& b = q.cell(h.cells[c]);
    if (b.top != h.horizontals[a.top] || b.bottom != h.horizontals[a.bottom] || b.left != v.map(a.left) ||
        b.right != v.map(a.right)) {
      fail("cell " + a.name + " sent to a cell with the wrong frame");
    }
  }
  if (!r.valid) return r;
  for (const auto& [b, a, c] : p.data().cell_vcompose) {
    if (q.vcompose(h.cells[b], h.cells[a]) != h.cells[c]) fail("vertical composite not preserved at " + p.cell(c).name);
  }
  for (HorId x = 0; x < p.num_horizontals(); ++x) {
    if (h.cells[p.identity_cell(x)] != q.identity_cell(h.horizontals[x])) {
      fail("identity cell not preserved at " + p.horizontal(x).name);
    }
  }
  const FinCategory& pv = p.vertical();
  for (ObjId x = 0; x < p.num_objects(); ++x) {
    const DoubleCell& c = q.cell(h.unit_comparisons[x]);
    const ObjId hx = v(x);
    if (c.top != q.unit(hx) || c.bottom != h.horizontals[p.unit(x)] || c.left != q.vertical().id(hx) ||
        c.right != q.vertical().id(hx)) {
      fail("unit comparison at " + pv.object_name(x) + " has the wrong frame");
    }
  }
  if (!r.valid) return r;
  for (MorId f = 0; f < pv.num_morphisms(); ++f) {
    const CellId l = q.vcompose(h.cells[p.unit_cell(f)], h.unit_comparisons[pv.src(f)]);
    const CellId rr = q.vcompose(h.unit_comparisons[pv.dst(f)], q.unit_cell(v.map(f)));
    if (l != rr) fail("unit comparison not natural at " + pv.morphism_name(f));
  }
  std::map<std::pair<HorId, HorId>, CellId> mu;
  for (const auto& [h2, h1, c] : h.composite_comparisons) {
    mu[{h2, h1}] = c;
    const HorId src = q.compose(h.horizontals[h2], h.horizontals[h1]);
    const HorId composite = p.compose(h2, h1);
    if (src == kNone || composite == kNone) {
      fail("composite comparison given for an undefined composite");
      continue;
    }
    const DoubleCell& x = q.cell(c);
    const ObjId a = v(p.horizontal(h1).src);
    const ObjId b = v(p.horizontal(h2).dst);
    if (x.top != src || x.bottom != h.horizontals[composite] || x.left != q.vertical().id(a) ||
        x.right != q.vertical().id(b)) {
      fail("composite comparison has the wrong frame");
    }
  }
  if (!r.valid) return r;
  // Naturality of μ on horizontally composable cells.
  for (const auto& [b, a, ba] : p.data().cell_hcompose) {
    const DoubleCell& ca = p.cell(a);
    const DoubleCell& cb = p.cell(b);
    const auto top = mu.find({cb.top, ca.top});
    const auto bottom = mu.find({cb.bottom, ca.bottom});
    if (top == mu.end() || bottom == mu.end()) continue;
    const CellId img = q.hcompose(h.cells[b], h.cells[a]);
    if (img == kNone) continue;
    if (q.vcompose(h.cells[ba], top->second) != q.vcompose(bottom->second, img)) {
      fail("composite comparison not natural at " + cb.name + " | " + ca.name);
    }
  }
  // Unit coherence: μ(h, U) ∘ (id_h | φ) = id_h and μ(U, h) ∘ (φ | id_h) = id_h.
  for (HorId x = 0; x < p.num_horizontals(); ++x) {
    const HorArrow& hx = p.horizontal(x);
    const auto right = mu.find({x, p.unit(hx.src)});
    if (right != mu.end()) {
      const CellId pasted = q.hcompose(q.identity_cell(h.horizontals[x]), h.unit_comparisons[hx.src]);
      if (pasted != kNone && q.vcompose(right->second, pasted) != q.identity_cell(h.horizontals[x])) {
        fail("right unit coherence fails at " + hx.name);
      }
    }
    const auto left = mu.find({p.unit(hx.dst), x});
    if (left != mu.end()) {
      const CellId pasted = q.hcompose(h.unit_comparisons[hx.dst], q.identity_cell(h.horizontals[x]));
      if (pasted != kNone && q.vcompose(left->second, pasted) != q.identity_cell(h.horizontals[x])) {
        fail("left unit coherence fails at " + hx.name);
      }
    }
  }
  // Associativity coherence wherever every composite involved exists.
  for (const auto& [key21, m21] : mu) {
    const auto [h2, h1] = key21;
    for (HorId h3 = 0; h3 < p.num_horizontals(); ++h3) {
      if (p.horizontal(h3).src != p.horizontal(h2).dst) continue;
      const auto m32 = mu.find({h3, h2});
      const HorId h21 = p.compose(h2, h1);
      const HorId h32 = p.compose(h3, h2);
      if (m32 == mu.end() || h21 == kNone || h32 == kNone) continue;
      const auto m3_21 = mu.find({h3, h21});
      const auto m32_1 = mu.find({h32, h1});
      if (m3_21 == mu.end() || m32_1 == mu.end()) continue;
      const CellId l1 = q.hcompose(q.identity_cell(h.horizontals[h3]), m21);
      const CellId r1 = q.hcompose(m32->second, q.identity_cell(h.horizontals[h1]));
      if (l1 == kNone || r1 == kNone) continue;
      if (q.vcompose(m3_21->second, l1) != q.vcompose(m32_1->second, r1)) {
        fail("associativity coherence fails at " + p.horizontal(h3).name + ", " + p.horizontal(h2).name +
             ", " + p.horizontal(h1).name);
      }
    }
  }
  return r;
}

LaxDoubleFunctor identity_lax_functor(const DoubleCategory& p) {
  LaxDoubleFunctor h;
  h.source = &p;
  h.target = &p;
  h.vertical = identity_functor(p.vertical_ref());
  for (HorId x = 0; x < p.num_horizontals(); ++x) h.horizontals.push_back(x);
  for (CellId c = 0; c < p.num_cells(); ++c) h.cells.push_back(c);
  for (ObjId x = 0; x < p.num_objects(); ++x) h.unit_comparisons.push_back(p.identity_cell(p.unit(x)));
  for (const auto& [h2, h1, c] : p.data().hor_compose) {
    h.composite_comparisons.emplace_back(h2, h1, p.identity_cell(c));
  }
  return h;
}

Functor cell_functor(const LaxDoubleFunctor& h, const CatRef& p1, const CatRef& q1) {
  return Functor(p1, q1, h.horizontals, h.cells);
}

namespace {

bool is_iso_morphism(const FinCategory& c, MorId f) {
  for (MorId g : c.hom(c.dst(f), c.src(f))) {
    if (c.compose(g, f) == c.id(c.src(f)) && c.compose(f, g) == c.id(c.dst(f))) return true;
  }
  return false;
}

struct Adjunction {
  NatTransformation unit;    // id ⇒ v u
  NatTransformation counit;  // u v ⇒ id
};

// First (η, ε) satisfying both triangle identities, if any.
std::optional<Adjunction> find_adjunction(const Functor& u, const Functor& v, const Bounds& bounds) {
  const Functor vu = compose(v, u);
  const Functor uv = compose(u, v);
  const auto etas = enumerate_transformations(identity_functor(u.source_ref()), vu, bounds);
  const auto epss = enumerate_transformations(uv, identity_functor(u.target_ref()), bounds);
  const FinCategory& c = u.source();
  const FinCategory& d = u.target();
  for (const auto& eta : etas) {
    for (const auto& eps : epss) {
      bool ok = true;
      // ε_{u x} ∘ u(η_x) = id_{u x}
      for (ObjId x = 0; ok && x < c.num_objects(); ++x) {
        ok = d.compose(eps.components[u(x)], u.map(eta.components[x])) == d.id(u(x));
      }
      // v(ε_y) ∘ η_{v y} = id_{v y}
      for (ObjId y = 0; ok && y < d.num_objects(); ++y) {
        ok = c.compose(v.map(eps.components[y]), eta.components[v(y)]) == c.id(v(y));
      }
      if (ok) return Adjunction{eta, eps};
    }
  }
  return std::nullopt;
}

Functor source_functor(const DoubleCategory& p, const CatRef& p1) {
  std::vector<ObjId> o;
  std::vector<MorId> m;
  for (HorId h = 0; h < p.num_horizontals(); ++h) o.push_back(p.horizontal(h).src);
  for (CellId c = 0; c < p.num_cells(); ++c) m.push_back(p.cell(c).left);
  return Functor(p1, p.vertical_ref(), std::move(o), std::move(m));
}

Functor target_functor(const DoubleCategory& p, const CatRef& p1) {
  std::vector<ObjId> o;
  std::vector<MorId> m;
  for (HorId h = 0; h < p.num_horizontals(); ++h) o.push_back(p.horizontal(h).dst);
  for (CellId c = 0; c < p.num_cells(); ++c) m.push_back(p.cell(c).right);
  return Functor(p1, p.vertical_ref(), std::move(o), std::move(m));
}

}  // namespace

LaxAdjunctionReport check_lax_adjunction(const LaxDoubleFunctor& u, const LaxDoubleFunctor& v,
                                         const Bounds& bounds) {
  LaxAdjunctionReport rep;
  auto note = [&rep](const char* what) {
    if (rep.failing.empty()) rep.failing = what;
  };
  const DoubleCategory& p = *u.source;
  const DoubleCategory& q = *u.target;
  rep.u_strict = u.is_strict();
  if (!rep.u_strict) note("u is not strict");
  rep.v_normal = v.is_normal();

  const auto adj0 = find_adjunction(u.vertical, v.vertical, bounds);
  rep.vertical_adjunction = adj0.has_value();
  if (!adj0) note("no adjunction on vertical categories");

  auto p1 = share(cell_category(p));
  auto q1 = share(cell_category(q));
  const Functor u1 = cell_functor(u, p1, q1);
  const Functor v1 = cell_functor(v, q1, p1);
  const auto adj1 = find_adjunction(u1, v1, bounds);
  rep.cell_adjunction = adj1.has_value();
  if (!adj1) note("no adjunction on cell categories");
  if (!adj0 || !adj1) return rep;

  const FinCategory& pv = p.vertical();
  // Mate of s∘u₁ = u₀∘s (and likewise t):  s v₁ ⇒ v₀ u₀ s v₁ = v₀ s u₁ v₁ ⇒ v₀ s.
  auto mate_invertible = [&](const Functor& sp, const Functor& sq) {
    for (HorId g = 0; g < q.num_horizontals(); ++g) {
      const MorId eta = adj0->unit.components[sp(v1(g))];
      const MorId down = v.vertical.map(sq.map(adj1->counit.components[g]));
      const MorId m = pv.compose(down, eta);
      if (m == kNone || !is_iso_morphism(pv, m)) return false;
    }
    return true;
  };
  rep.source_mate_invertible = mate_invertible(source_functor(p, p1), source_functor(q, q1));
  if (!rep.source_mate_invertible) note("mate of the source map is not invertible");
  rep.target_mate_invertible = mate_invertible(target_functor(p, p1), target_functor(q, q1));
  if (!rep.target_mate_invertible) note("mate of the target map is not invertible");

  // Mate of the unit map e : P₀ → P₁:  e v₀ ⇒ v₁ u₁ e v₀ = v₁ e u₀ v₀ ⇒ v₁ e.
  rep.unit_mate_invertible = true;
  for (ObjId y = 0; y < q.num_objects(); ++y) {
    const CellId eta = adj1->unit.components[p.unit(v.vertical(y))];
    const CellId down = v.cells[q.unit_cell(adj0->counit.components[y])];
    const CellId m = p1->compose(down, eta);
    if (m == kNone || !is_iso_morphism(*p1, m)) {
      rep.unit_mate_invertible = false;
      break;
    }
  }
  return rep;
}

PreservationReport check_preserves_cartesian(const LaxDoubleFunctor& h) {
  PreservationReport rep;
  if (!is_equipment(*h.source) || !is_equipment(*h.target)) {
    rep.precondition = false;
    rep.holds = false;
    return rep;
  }
  for (CellId c = 0; c < h.source->num_cells(); ++c) {
    if (!is_cartesian_cell(*h.source, c)) continue;
    ++rep.cartesian_cells;
    if (!is_cartesian_cell(*h.target, h.cells[c])) {
      rep.holds = false;
      rep.failures.push_back(c);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cat equipment fragments

namespace {

int index_of_category(const std::vector<CatRef>& objects, const CatRef& c) {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i] == c) return static_cast<int>(i);
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i]->same_tables(*c)) return static_cast<int>(i);
  }
  return kNone;
}

bool same_functor_data(const Functor& a, const Functor& b) {
  return a.object_map() == b.object_map() && a.morphism_map() == b.morphism_map();
}

}  // namespace

MorId find_vertical(const CatEquipment& e, const Functor& f) {
  const int s = index_of_category(e.objects, f.source_ref());
  const int t = index_of_category(e.objects, f.target_ref());
  const FinCategory& v = e.dbl.vertical();
  for (MorId m = 0; m < v.num_morphisms(); ++m) {
    if (v.src(m) == s && v.dst(m) == t && same_functor_data(e.verticals[m], f)) return m;
  }
  return kNone;
}

CatEquipment build_cat_equipment(const CatEquipmentSpec& spec, const Bounds& bounds) {
  CatEquipment out;
  out.objects = spec.objects;
  const int n = static_cast<int>(out.objects.size());

  // Vertical arrows: identities first, then the closure of the generators.
  struct V {
    int src, dst;
    Functor f;
  };
  std::vector<V> vs;
  auto find_v = [&](int s, int t, const Functor& f) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (vs[i].src == s && vs[i].dst == t && same_functor_data(vs[i].f, f)) return static_cast<int>(i);
    }
    return static_cast<int>(kNone);
  };
  auto add_v = [&](int s, int t, const Functor& f) {
    const int i = find_v(s, t, f);
    if (i != kNone) return i;
    if (vs.size() >= bounds.max_functors) throw BoundExceeded("max-functors", bounds.max_functors);
    vs.push_back({s, t, Functor(out.objects[s], out.objects[t], f.object_map(), f.morphism_map())});
    return static_cast<int>(vs.size()) - 1;
  };
  for (int i = 0; i < n; ++i) add_v(i, i, identity_functor(out.objects[i]));
  if (spec.all_functors) {
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        for (const auto& f : enumerate_functors(out.objects[s], out.objects[t], bounds)) add_v(s, t, f);
      }
    }
  }
  for (const auto& g : spec.generators) {
    const int s = index_of_category(out.objects, g.source_ref());
    const int t = index_of_category(out.objects, g.target_ref());
    if (s == kNone || t == kNone) throw Error("cat equipment: generator between unlisted categories");
    add_v(s, t, g);
  }
  for (std::size_t done = 0; done < vs.size();) {
    const std::size_t limit = vs.size();
    for (std::size_t i = 0; i < limit; ++i) {
      for (std::size_t j = 0; j < limit; ++j) {
        if (i < done && j < done) continue;
        if (vs[i].dst != vs[j].src) continue;
        add_v(vs[i].src, vs[j].dst, compose(vs[j].f, vs[i].f));
      }
    }
    done = limit;
  }
  const int nv = static_cast<int>(vs.size());
  std::vector<std::string> onames;
  for (int i = 0; i < n; ++i) onames.push_back("x" + std::to_string(i));
  std::vector<std::string> mnames;
  std::vector<Arrow> arrows;
  std::vector<MorId> ids;
  for (int i = 0; i < nv; ++i) {
    mnames.push_back(i < n ? "id_x" + std::to_string(i) : "v" + std::to_string(i));
    arrows.push_back({vs[i].src, vs[i].dst});
    out.verticals.push_back(vs[i].f);
  }
  for (int i = 0; i < n; ++i) ids.push_back(i);
  std::vector<MorId> table(static_cast<std::size_t>(nv) * nv, kNone);
  for (int g = 0; g < nv; ++g) {
    for (int f = 0; f < nv; ++f) {
      if (vs[f].dst != vs[g].src) continue;
      table[static_cast<std::size_t>(g) * nv + f] = find_v(vs[f].src, vs[g].dst, compose(vs[g].f, vs[f].f));
    }
  }
  auto vertical = share(FinCategory(onames, mnames, arrows, ids, table));

  // Horizontal arrows.
  DoubleCategory::Data data;
  data.vertical = vertical;
  auto add_h = [&](const std::string& name, const ProfRef& p) {
    const int s = index_of_category(out.objects, p->source_ref());
    const int t = index_of_category(out.objects, p->target_ref());
    if (s == kNone || t == kNone) throw Error("cat equipment: profunctor between unlisted categories");
    for (std::size_t i = 0; i < out.horizontals.size(); ++i) {
      if (data.horizontals[i].src == s && data.horizontals[i].dst == t &&
          out.horizontals[i]->same_tables(*p)) {
        return static_cast<HorId>(i);
      }
    }
    // Rehome onto the listed category objects.
    auto q = share(Profunctor(out.objects[s], out.objects[t], p->sizes(), p->y_action(), p->x_action()));
    out.horizontals.push_back(q);
    data.horizontals.push_back({s, t, name});
    return static_cast<HorId>(out.horizontals.size()) - 1;
  };
  for (int i = 0; i < n; ++i) data.units.push_back(add_h("U_x" + std::to_string(i), share(hom_profunctor(out.objects[i]))));
  if (spec.add_companions) {
    for (int i = n; i < nv; ++i) {
      add_h("comp(" + mnames[i] + ")", companion_of(vs[i].f).proarrow);
      add_h("conj(" + mnames[i] + ")", conjoint_of(vs[i].f).proarrow);
    }
  }
  for (const auto& [name, p] : spec.extra_horizontals) add_h(name, p);
  const int nh = static_cast<int>(out.horizontals.size());

  // Cells: every profunctor morphism between listed horizontals over every frame.
  using Components = decltype(ProfCell::components);
  std::map<std::array<int, 4>, std::map<Components, CellId>> by_frame;
  for (HorId t = 0; t < nh; ++t) {
    for (HorId b = 0; b < nh; ++b) {
      const auto& ht = data.horizontals[t];
      const auto& hb = data.horizontals[b];
      for (MorId l : vertical->hom(ht.src, hb.src)) {
        for (MorId r : vertical->hom(ht.dst, hb.dst)) {
          for (auto& c : enumerate_cells(out.horizontals[t], out.horizontals[b], vs[l].f, vs[r].f, bounds)) {
            const CellId id = static_cast<CellId>(out.cells.size());
            if (out.cells.size() >= bounds.max_cocones) throw BoundExceeded("max-cocones", bounds.max_cocones);
            out.cells.push_back(std::move(c));
            data.cells.push_back({t, b, l, r, "c" + std::to_string(id)});
            by_frame[{t, b, l, r}].emplace(out.cells.back().components, id);
          }
        }
      }
    }
  }
  auto find_cell = [&](HorId t, HorId b, MorId l, MorId r, const ProfCell& c) {
    const auto it = by_frame.find({t, b, l, r});
    if (it != by_frame.end()) {
      const auto hit = it->second.find(c.components);
      if (hit != it->second.end()) return hit->second;
    }
    throw Error("cat equipment: composite cell not found");
  };
  for (HorId h = 0; h < nh; ++h) {
    const auto& hh = data.horizontals[h];
    data.identity_cells.push_back(find_cell(h, h, hh.src, hh.dst, identity_cell(out.horizontals[h])));
  }
  for (MorId f = 0; f < nv; ++f) {
    const HorId a = data.units[vs[f].src];
    const HorId b = data.units[vs[f].dst];
    data.unit_cells.push_back(find_cell(a, b, f, f, hom_cell(vs[f].f, out.horizontals[a], out.horizontals[b])));
  }
  // Vertical composition.
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
      const auto c = vertical_compose(out.cells[b], out.cells[a]);
      data.cell_vcompose.emplace_back(
          b, a, find_cell(x.top, y.bottom, table[y.left * nv + x.left], table[y.right * nv + x.right], c));
    }
  }
  // Horizontal composition with a unit factor.
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
    ProfCell to_result;    // composite ⇒ identified horizontal
    ProfCell from_result;  // inverse
  };
  std::map<std::pair<HorId, HorId>, Glue> glue;
  auto get_glue = [&](HorId h2, HorId h1) -> const Glue& {
    auto it = glue.find({h2, h1});
    if (it != glue.end()) return it->second;
    Glue g;
    g.comp = compose_prof(out.horizontals[h2], out.horizontals[h1]);
    g.to_result = is_unit(h1) ? right_unitor(g.comp) : left_unitor(g.comp);
    g.from_result = invert_globular(g.to_result);
    return glue.emplace(std::make_pair(h2, h1), std::move(g)).first->second;
  };
  for (CellId a = 0; a < static_cast<CellId>(data.cells.size()); ++a) {
    const DoubleCell& x = data.cells[a];
    for (CellId b : by_left[x.right]) {
      const DoubleCell& y = data.cells[b];
      const HorId top = hor(y.top, x.top);
      const HorId bottom = hor(y.bottom, x.bottom);
      if (top == kNone || bottom == kNone) continue;
      const Glue& gt = get_glue(y.top, x.top);
      const Glue& gb = get_glue(y.bottom, x.bottom);
      const auto pasted = horizontal_compose(out.cells[b], out.cells[a], gt.comp, gb.comp);
      const auto c = vertical_compose(gb.to_result, vertical_compose(pasted, gt.from_result));
      data.cell_hcompose.emplace_back(b, a, find_cell(top, bottom, x.left, y.right, c));
    }
  }
  out.dbl = DoubleCategory(std::move(data));
  return out;
}

CatEquipment functor_fragment(const Functor& f, const Bounds& bounds) {
  CatEquipmentSpec spec;
  const CatRef& x = f.source_ref();
  const CatRef& y = f.target_ref();
  const bool endo = x == y || x->same_tables(*y);
  spec.objects = endo ? std::vector<CatRef>{x} : std::vector<CatRef>{x, y};
  spec.generators = {f};
  spec.extra_horizontals = {{"empty", share(empty_profunctor(x, y))}, {"point", share(point_profunctor(x, y))}};
  if (!endo) {
    spec.extra_horizontals.push_back({"empty'", share(empty_profunctor(y, x))});
    spec.extra_horizontals.push_back({"point'", share(point_profunctor(y, x))});
  }
  return build_cat_equipment(spec, bounds);
}

}  // namespace equip

#pragma once

// Finite strict double categories given by explicit cell data.
//
// Horizontal composition may be partial (kNone where undefined); every law
// is checked on the composites that exist.  The materialized Cat equipment
// uses this: profunctor composition is associative only up to iso, so only
// composites with a unit are kept, identified strictly with the other factor.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "equip/fincat.hpp"
#include "equip/profun.hpp"

namespace equip {

using HorId = int;
using CellId = int;

struct HorArrow {
  ObjId src;
  ObjId dst;
  std::string name;
};

///         top
///    a ─────────→ b
///  left│          │right
///    ↓            ↓
///    a' ────────→ b'
///        bottom
struct DoubleCell {
  HorId top;
  HorId bottom;
  MorId left;
  MorId right;
  std::string name;
};

class DoubleCategory {
 public:
  struct Data {
    CatRef vertical;                  // objects and vertical arrows
    std::vector<HorArrow> horizontals;
    std::vector<HorId> units;         // per object
    std::vector<DoubleCell> cells;
    std::vector<CellId> identity_cells;  // per horizontal
    std::vector<CellId> unit_cells;      // per vertical arrow
    /// (h2, h1) ↦ h2∘h1 for h1 : a → b, h2 : b → c; absent = undefined.
    std::vector<std::tuple<HorId, HorId, HorId>> hor_compose;
    /// (β, α) ↦ β∘α with α.bottom = β.top.
    std::vector<std::tuple<CellId, CellId, CellId>> cell_vcompose;
    /// (β, α) ↦ β⊙α with α.right = β.left (α on the left).
    std::vector<std::tuple<CellId, CellId, CellId>> cell_hcompose;
  };

  DoubleCategory() = default;
  explicit DoubleCategory(Data data);

  const FinCategory& vertical() const { return *data_.vertical; }
  const CatRef& vertical_ref() const noexcept { return data_.vertical; }
  int num_objects() const { return data_.vertical->num_objects(); }
  int num_horizontals() const noexcept { return static_cast<int>(data_.horizontals.size()); }
  int num_cells() const noexcept { return static_cast<int>(data_.cells.size()); }
  const HorArrow& horizontal(HorId h) const { return data_.horizontals[h]; }
  const DoubleCell& cell(CellId c) const { return data_.cells[c]; }
  HorId unit(ObjId a) const { return data_.units[a]; }
  bool is_unit(HorId h) const { return data_.units[data_.horizontals[h].src] == h; }
  CellId identity_cell(HorId h) const { return data_.identity_cells[h]; }
  CellId unit_cell(MorId f) const { return data_.unit_cells[f]; }

  HorId compose(HorId h2, HorId h1) const { return lookup(hor_, h2, h1); }
  CellId vcompose(CellId beta, CellId alpha) const { return lookup(vcomp_, beta, alpha); }
  CellId hcompose(CellId beta, CellId alpha) const { return lookup(hcomp_, beta, alpha); }

  /// Cells with the given frame, in id order.
  const std::vector<CellId>& cells_with_frame(HorId top, HorId bottom, MorId left, MorId right) const;
  const std::vector<CellId>& cells_with_top(HorId top) const;
  const std::vector<CellId>& cells_with_bottom(HorId bottom) const;
  const std::vector<CellId>& cells_with_left(MorId left) const;

  /// Horizontal arrows a → b, in id order.
  std::vector<HorId> horizontals_between(ObjId a, ObjId b) const;

  const Data& data() const noexcept { return data_; }

 private:
  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }
  static int lookup(const std::unordered_map<std::uint64_t, int>& m, int a, int b) {
    const auto it = m.find(key(a, b));
    return it == m.end() ? kNone : it->second;
  }

  Data data_;
  std::unordered_map<std::uint64_t, int> hor_, vcomp_, hcomp_;
  std::map<std::array<int, 4>, std::vector<CellId>> by_frame_;
  std::vector<std::vector<CellId>> by_top_, by_bottom_, by_left_;
  std::vector<CellId> empty_;
};

/// Frames, vertical category of cells, horizontal associativity and
/// unitality, identity and unit cells, and interchange on every 2×2 grid
/// whose composites exist.
ValidationReport check_double(const DoubleCategory& p);

/// The category P₁: horizontal arrows and cells under vertical composition.
FinCategory cell_category(const DoubleCategory& p);

// ---------------------------------------------------------------------------
// Companions, conjoints, equipments

struct CompanionWitness {
  HorId proarrow = kNone;
  CellId unit = kNone;
  CellId counit = kNone;
};

/// First horizontal a → b (canonical order) with cells
/// unit : U_a ⇒ h over (id_a, f) and counit : h ⇒ U_b over (f, id_b)
/// satisfying both triangle identities.
std::optional<CompanionWitness> find_companion(const DoubleCategory& p, MorId f);
/// Dual: h : b → a, unit : U_a ⇒ h over (f, id_a), counit : h ⇒ U_b over (id_b, f).
std::optional<CompanionWitness> find_conjoint(const DoubleCategory& p, MorId f);

struct EquipmentCertificate {
  bool holds = true;
  std::vector<CompanionWitness> companions;  // per vertical arrow
  std::vector<CompanionWitness> conjoints;
  MorId failing = kNone;
  std::string missing;  // "companion" or "conjoint"
  explicit operator bool() const noexcept { return holds; }
};

EquipmentCertificate is_equipment(const DoubleCategory& p);

/// An invertible globular cell h ⇒ h', if any.
std::optional<CellId> find_globular_iso(const DoubleCategory& p, HorId h, HorId h2);

struct CellVerdict {
  bool holds = true;
  CellId witness = kNone;   // a cell β with zero or several fillers
  int fillers = 0;          // number of fillers found for the witness
  explicit operator bool() const noexcept { return holds; }
};

/// α : F ⇒ G over (f, g) is cartesian iff every β : H ⇒ G over (f∘h, g∘k)
/// equals α∘γ for exactly one γ : H ⇒ F over (h, k).
CellVerdict is_cartesian_cell(const DoubleCategory& p, CellId alpha);
/// α : F ⇒ G over (f, g) is cocartesian iff every β : F ⇒ H over (h∘f, k∘g)
/// equals γ∘α for exactly one γ : G ⇒ H over (h, k).
CellVerdict is_cocartesian_cell(const DoubleCategory& p, CellId alpha);

// ---------------------------------------------------------------------------
// Lax double functors

struct LaxDoubleFunctor {
  const DoubleCategory* source = nullptr;
  const DoubleCategory* target = nullptr;
  Functor vertical;                    // P₀ → Q₀ (objects and vertical arrows)
  std::vector<HorId> horizontals;      // per source horizontal
  std::vector<CellId> cells;           // per source cell
  std::vector<CellId> unit_comparisons;  // per object x: U_{hx} ⇒ h(U_x)
  /// For every defined composite (h2, h1): h(h2)∘h(h1) ⇒ h(h2∘h1).
  std::vector<std::tuple<HorId, HorId, CellId>> composite_comparisons;

  bool is_normal() const;
  bool is_strict() const;
};

ValidationReport check_lax_functor(const LaxDoubleFunctor& h);
LaxDoubleFunctor identity_lax_functor(const DoubleCategory& p);
/// The induced functor P₁ → Q₁ on cell categories.
Functor cell_functor(const LaxDoubleFunctor& h, const CatRef& p1, const CatRef& q1);

struct LaxAdjunctionReport {
  bool u_strict = false;
  bool vertical_adjunction = false;   // u₀ ⊣ v₀
  bool cell_adjunction = false;       // u₁ ⊣ v₁
  bool source_mate_invertible = false;
  bool target_mate_invertible = false;
  bool unit_mate_invertible = false;  // iff v is normal
  bool v_normal = false;
  std::string failing;                // first failing condition
  bool holds() const {
    return u_strict && vertical_adjunction && cell_adjunction && source_mate_invertible &&
           target_mate_invertible;
  }
};

/// The characterization of lax adjunctions u ⊣ v between double categories
/// through levelwise adjunctions and mates of the inert structure maps.
LaxAdjunctionReport check_lax_adjunction(const LaxDoubleFunctor& u, const LaxDoubleFunctor& v,
                                         const Bounds& bounds = {});

struct PreservationReport {
  bool holds = true;
  bool precondition = true;   // both sides are equipments
  std::vector<CellId> failures;  // cartesian source cells with non-cartesian images
  int cartesian_cells = 0;
};

PreservationReport check_preserves_cartesian(const LaxDoubleFunctor& h);

// ---------------------------------------------------------------------------
// Materialized Cat equipment fragments

/// A finite sub-double-category of the Cat equipment: the given categories,
/// the closure of the given functors under composition (identities added),
/// the hom profunctors, companions and conjoints of every vertical arrow,
/// and any extra profunctors; all cells between them.  Horizontal
/// composites are kept when one factor is a unit.
struct CatEquipment {
  DoubleCategory dbl;
  std::vector<CatRef> objects;
  std::vector<Functor> verticals;   // by vertical morphism id
  std::vector<ProfRef> horizontals; // by horizontal id
  std::vector<ProfCell> cells;      // by cell id
};

struct CatEquipmentSpec {
  std::vector<CatRef> objects;
  std::vector<Functor> generators;
  bool all_functors = false;   // use every functor between the objects
  bool add_companions = true;
  std::vector<std::pair<std::string, ProfRef>> extra_horizontals;
};

CatEquipment build_cat_equipment(const CatEquipmentSpec& spec, const Bounds& bounds = {});

/// The fragment generated by a single functor f : x → y, with the empty and
/// one-point profunctors in both directions as decoys.
CatEquipment functor_fragment(const Functor& f, const Bounds& bounds = {});

/// Vertical arrow id of a functor in the fragment, or kNone.
MorId find_vertical(const CatEquipment& e, const Functor& f);

}  // namespace equip

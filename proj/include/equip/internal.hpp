#pragma once

// Categories internal to presheaves on a finite site T, modelled as strict
// functors T^op → FinCat.  For φ : s → t the restriction φ^* goes C(t) → C(s).
//
// Internal functors carry invertible naturality cells
//   n_φ : φ^*_D ∘ f_t ⇒ f_s ∘ φ^*_C
// so that companions recovered from profunctors (defined up to iso levelwise)
// still assemble.  Internal profunctors carry restriction cells
//   c_φ : F_t ⇒ F_s over (φ^*_C, φ^*_D),
// strictly functorial in φ.

#include <optional>
#include <string>
#include <vector>

#include "equip/double.hpp"
#include "equip/fincat.hpp"
#include "equip/kan.hpp"
#include "equip/profun.hpp"

namespace equip {

struct InternalCategory {
  CatRef site;
  std::vector<CatRef> fibers;          // C(t) by object of T
  std::vector<Functor> restrictions;   // φ^* : C(dst φ) → C(src φ) by morphism of T

  const FinCategory& at(ObjId t) const { return *fibers[t]; }
};

/// Fibers and restrictions have the right endpoints, identities restrict
/// to identities and (φ∘ψ)^* = ψ^* ∘ φ^*.
ValidationReport check_internal_category(const InternalCategory& c);

/// Every fiber c, every restriction the identity.
InternalCategory constant_internal(const CatRef& site, const CatRef& c);

struct InternalFunctor {
  InternalCategory source;
  InternalCategory target;
  std::vector<Functor> components;            // f_t : C(t) → D(t)
  std::vector<NatTransformation> naturality;  // by morphism of T

  bool is_strict() const;
};

/// Components and cells well framed, cells invertible, identity at identities,
/// and n_{φ∘ψ} = n_ψ φ^* ∘ ψ^* n_φ.
ValidationReport check_internal_functor(const InternalFunctor& f);

/// From levelwise functors commuting strictly with the restrictions.
/// Throws Error if they do not commute.
InternalFunctor strict_internal_functor(const InternalCategory& source, const InternalCategory& target,
                                        std::vector<Functor> components);
InternalFunctor internal_identity(const InternalCategory& c);
InternalFunctor internal_compose(const InternalFunctor& g, const InternalFunctor& f);

struct InternalProfunctor {
  InternalCategory source;                  // x
  InternalCategory target;                  // y
  std::vector<ProfRef> fibers;              // F_t : x(t) → y(t)
  std::vector<ProfCell> restrictions;       // c_φ by morphism of T
};

/// Every cell valid over the restriction functors, identities act trivially
/// and c_{φ∘ψ} = c_ψ ∘ c_φ on elements.
ValidationReport check_internal_profunctor(const InternalProfunctor& f);

InternalProfunctor internal_hom(const InternalCategory& c);
/// Levelwise companions Hom(−, f −), restricted through the naturality cells.
InternalProfunctor internal_companion_of(const InternalFunctor& f);
/// Levelwise conjoints Hom(f −, −).
InternalProfunctor internal_conjoint_of(const InternalFunctor& f);

/// An internal cell F ⇒ G over (f, g): levelwise cells commuting with
/// restriction up to the naturality cells of f and g.
struct InternalCell {
  std::vector<ProfCell> components;
};

bool check_internal_cell(const InternalProfunctor& f, const InternalProfunctor& g, const InternalFunctor& fx,
                         const InternalFunctor& fy, const InternalCell& alpha);

std::vector<InternalCell> enumerate_internal_cells(const InternalProfunctor& f, const InternalProfunctor& g,
                                                   const InternalFunctor& fx, const InternalFunctor& fy,
                                                   const Bounds& bounds = {});

// ---------------------------------------------------------------------------
// Covers and companions

/// Generalized objects (t, x ∈ C(t)).  Valid when every object of every
/// fiber is a restriction φ^* x of some member.
struct GroupoidalCover {
  std::vector<std::pair<ObjId, ObjId>> members;
};

GroupoidalCover representable_cover(const InternalCategory& c);
bool is_valid_cover(const InternalCategory& c, const GroupoidalCover& cover);
/// The members needed to reach every object, one per orbit of restriction.
GroupoidalCover minimal_cover(const InternalCategory& c);

struct InternalCompanionVerdict {
  bool holds = false;
  std::optional<InternalFunctor> functor;
  ObjId t = kNone;       // failing level
  MorId phi = kNone;     // failing morphism of T (kNone: representability at t)
  ObjId object = kNone;  // failing object of the fiber at t
  std::string witness;
  bool certified = false;  // companion_of(functor) ≅ F compatibly with restriction
  explicit operator bool() const noexcept { return holds; }
};

/// F is a companion iff each F_t(−, x) is representable for x in the cover,
/// and the restriction of every representing element along every φ is
/// again representing (the mate is invertible).
InternalCompanionVerdict internal_companion(const InternalProfunctor& f, const GroupoidalCover& cover);
InternalCompanionVerdict internal_companion(const InternalProfunctor& f);
/// Dual: F_t(x, −) corepresentable.
InternalCompanionVerdict internal_conjoint(const InternalProfunctor& f, const GroupoidalCover& cover);
InternalCompanionVerdict internal_conjoint(const InternalProfunctor& f);

/// The least functor g with companion_of(g) ≅ F, by search over all functors.
std::optional<Functor> external_companion(const ProfRef& f, const Bounds& bounds = {});
std::optional<Functor> external_conjoint(const ProfRef& f, const Bounds& bounds = {});

// ---------------------------------------------------------------------------
// Finality, Kan extensions, full faithfulness

struct InternalWitness {
  ObjId t = kNone;
  ObjId object = kNone;  // in the fiber at t
  MorId phi = kNone;     // φ : s → t
  std::string reason;
};

struct InternalFinality {
  bool holds = true;
  std::vector<InternalWitness> failures;  // every failing (t, x, φ)
  explicit operator bool() const noexcept { return holds; }
};

/// For every t, x ∈ J(t) and φ : s → t, (φ^* x ↓ f_s) is nonempty and connected.
InternalFinality internal_is_final(const InternalFunctor& f);

struct InternalKan {
  std::optional<InternalFunctor> extension;
  std::vector<NatTransformation> unit;  // f_t ⇒ g_t w_t by level
  InternalWitness failure;
  explicit operator bool() const noexcept { return extension.has_value(); }
};

/// Levelwise pointwise extensions g_t, assembled when every comparison
/// φ^* g_t x → g_s φ^* x, induced by the restricted colimit cocone, exists
/// and is invertible.  Requires w to be strict.
InternalKan internal_lke(const InternalFunctor& f, const InternalFunctor& w, const Bounds& bounds = {});

struct InternalFullyFaithful {
  bool holds = true;
  ObjId t = kNone;
  ObjId a = kNone;
  ObjId b = kNone;
  std::string reason;  // "not full" / "not faithful"
  explicit operator bool() const noexcept { return holds; }
};

InternalFullyFaithful internal_fully_faithful(const InternalFunctor& f);

// ---------------------------------------------------------------------------
// The internal equipment

/// A finite fragment of the double category of internal categories:
/// the given categories and strict functors closed under composition, the
/// internal homs, companions and conjoints, and all internal cells.
/// Horizontal composites are kept when one factor is a unit.
struct InternalEquipment {
  DoubleCategory dbl;
  std::vector<InternalCategory> objects;
  std::vector<InternalFunctor> verticals;
  std::vector<InternalProfunctor> horizontals;
  std::vector<InternalCell> cells;
};

InternalEquipment build_internal_equipment(const std::vector<InternalCategory>& objects,
                                           const std::vector<InternalFunctor>& generators,
                                           const Bounds& bounds = {});

}  // namespace equip

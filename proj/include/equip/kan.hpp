#pragma once

// Colimits in finite categories, pointwise left Kan extensions, exact
// squares, proper and smooth functors, and weighted colimits.
//
// A lax square
//
//     a ──top──→ b
//   left│   ⇒    │right        cell : right∘top ⇒ bottom∘left
//     ↓          ↓
//     c ─bottom→ d
//
// is exact when the comparison classify(left, top) ⇒ Hom_d(right −, bottom −),
// (β, e, γ) ↦ bottom(γ)∘cell_e∘right(β), is a bijection in every component.

#include <optional>
#include <string>
#include <vector>

#include "equip/corpus.hpp"
#include "equip/fibration.hpp"
#include "equip/fincat.hpp"
#include "equip/profun.hpp"

namespace equip {

// ---------------------------------------------------------------------------
// Colimits

struct Cocone {
  ObjId apex = kNone;
  std::vector<MorId> legs;  // f(i) → apex, by object of the diagram shape
  bool operator==(const Cocone&) const = default;
};

/// Every cocone under f, ordered by apex then legs.
std::vector<Cocone> enumerate_cocones(const Functor& f, const Bounds& bounds = {});

struct ColimitCertificate {
  long long cocones = 0;  // cocones checked against the colimit
  bool universal = false;
};

/// Whether every cocone under f factors through k by exactly one morphism.
ColimitCertificate certify_cocone(const Functor& f, const Cocone& k, const Bounds& bounds = {});

struct Colimit {
  Cocone cocone;
  ColimitCertificate certificate;
};

/// The colimit as an initial object of the coslice f/C, certified against
/// every cocone.  Throws Error if the coslice search and the brute-force
/// universal property disagree.
std::optional<Colimit> colimit(const Functor& f, const Bounds& bounds = {});

// ---------------------------------------------------------------------------
// Left Kan extensions

struct KanExtension {
  std::optional<Functor> extension;           // g : J → C
  std::optional<NatTransformation> unit;      // f ⇒ g∘w
  ObjId failing = kNone;                      // object of J with no pointwise colimit
  std::string witness;
  explicit operator bool() const noexcept { return extension.has_value(); }
};

/// g(γ) = colimit of (w ↓ γ) → I → C.
KanExtension pointwise_lke(const Functor& f, const Functor& w, const Bounds& bounds = {});

/// Whether σ ↦ σw ∘ unit is a bijection Nat(g, h) → Nat(f, h∘w) for every h : J → C.
bool check_lke(const Functor& f, const Functor& w, const Functor& g, const NatTransformation& unit,
               const Bounds& bounds = {});

/// Whether every g(j), with legs g(θ)∘unit_i for θ : w i → j, is a universal
/// Hom(w −, j)-weighted cocone under f.  This is the pointwise property;
/// it implies check_lke but not conversely.
bool check_pointwise_lke(const Functor& f, const Functor& w, const Functor& g, const NatTransformation& unit,
                         const Bounds& bounds = {});

/// First (g, unit) in canonical order satisfying check_pointwise_lke.
KanExtension brute_force_lke(const Functor& f, const Functor& w, const Bounds& bounds = {});
/// First (g, unit) in canonical order satisfying check_lke only.
KanExtension brute_force_global_lke(const Functor& f, const Functor& w, const Bounds& bounds = {});

/// A natural isomorphism between the extensions along w compatible with the units.
bool same_lke(const KanExtension& a, const KanExtension& b, const Functor& w, const Bounds& bounds = {});

/// The adjunction w_! ⊣ w^* between materialized functor categories.
struct RestrictionAdjoint {
  bool exists = false;
  FunctorCategory from;        // Fun(I, C)
  FunctorCategory to;          // Fun(J, C)
  std::optional<Functor> extend;    // w_! : Fun(I, C) → Fun(J, C)
  std::optional<Functor> restrict;  // w^* : Fun(J, C) → Fun(I, C)
  bool triangles = false;
  bool fully_faithful = false;  // of w_!
  ObjId failing = kNone;        // object of Fun(I, C) with no extension
  std::string witness;
};

RestrictionAdjoint restriction_adjoint(const Functor& w, const CatRef& c, const Bounds& bounds = {});

// ---------------------------------------------------------------------------
// Exact squares, proper and smooth functors

struct LaxSquare {
  Functor top;
  Functor left;
  Functor right;
  Functor bottom;
  NatTransformation cell;  // right∘top ⇒ bottom∘left
};

ValidationReport check_square(const LaxSquare& s);

/// A commuting square with the identity cell.
LaxSquare commuting_square(const Functor& top, const Functor& left, const Functor& right, const Functor& bottom);

struct ExactSquareVerdict {
  bool exact = false;
  ProfCell comparison;  // classify(left, top) ⇒ restrict(right, hom_d, bottom)
  ObjId b = kNone;      // failing component, b ∈ top's target and c ∈ left's target
  ObjId c = kNone;
  std::string witness;  // "not injective" / "not surjective"
  explicit operator bool() const noexcept { return exact; }
};

ExactSquareVerdict is_exact_square(const LaxSquare& s);

LaxSquare identity_square(const CatRef& c);
/// The comma square of (right ↓ bottom) with its tautological cell.
LaxSquare comma_square(const Functor& bottom, const Functor& right);
/// The cocomma square of a span into its collage.
LaxSquare cocomma_square(const Span& s);

/// A pullback rectangle over f : x → y, determined by w : i → j and k : j → y.
struct Rectangle {
  Functor w;
  Functor k;
  LaxSquare square;  // the square to be exact
};

struct ProperReport {
  bool holds = true;
  int rectangles = 0;
  std::optional<Rectangle> failing;
  std::string witness;
  explicit operator bool() const noexcept { return holds; }
};

/// Every (w : i → j, k : j → y) with i, j in the tier.
std::vector<std::pair<Functor, Functor>> rectangle_family(const Functor& f, const std::vector<NamedCategory>& tier,
                                                          const Bounds& bounds = {});

/// Proper: in  i' → j' → x  over  i → j → y  (both squares pullbacks, j' → x → y
/// the right column with f), the left square is exact.
ProperReport check_proper(const Functor& f, const std::vector<std::pair<Functor, Functor>>& family);
/// Smooth: in the column  i' → i  over  j' → j  over  x → y (bottom row f), the
/// top square is exact.  Here w : i → j is the upper right leg.
ProperReport check_smooth(const Functor& f, const std::vector<std::pair<Functor, Functor>>& family);

// ---------------------------------------------------------------------------
// Weighted colimits

/// A W-cocone under f with weight W : I^op → FinSet (shape = opposite(I)):
/// legs[i][x] : f(i) → apex for x ∈ W(i).
struct WeightedCocone {
  ObjId apex = kNone;
  std::vector<std::vector<MorId>> legs;
};

std::vector<WeightedCocone> enumerate_weighted_cocones(const FinSetDiagram& weight, const Functor& f,
                                                       const Bounds& bounds = {});

/// Hom_J(w −, j) : I^op → FinSet, elements ordered as in J.hom(w i, j).
FinSetDiagram hom_weight(const Functor& w, ObjId j);

/// Whether every W-cocone under f factors through k by exactly one morphism.
bool is_universal_weighted(const FinSetDiagram& weight, const Functor& f, const WeightedCocone& k,
                           const Bounds& bounds = {});

/// The universal W-cocone, if any.
std::optional<WeightedCocone> weighted_colimit(const FinSetDiagram& weight, const Functor& f,
                                               const Bounds& bounds = {});

/// The category of elements of a presheaf W : I^op → FinSet with its
/// discrete fibration to I; objects (i, x ∈ W(i)) ordered by i then x.
ElementsCategory presheaf_elements(const FinSetDiagram& weight, const CatRef& i);

}  // namespace equip

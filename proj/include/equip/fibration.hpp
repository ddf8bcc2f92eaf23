#pragma once

// Spans of functors, tabulators (two-sided categories of elements),
// collages, two-sided discrete fibrations, and the span representation
// F ↦ tabulate(F) with its local left adjoint classify.
//
// Truncation dictionary: left fibration = discrete opfibration, right
// fibration = discrete fibration, "space" = discrete category.

#include <optional>
#include <string>
#include <vector>

#include "equip/corpus.hpp"
#include "equip/fincat.hpp"
#include "equip/profun.hpp"

namespace equip {

/// (p, q) : E → x × y.
struct Span {
  CatRef apex;
  Functor p;
  Functor q;
};

ValidationReport check_span(const Span& s);

/// Functors m : a.apex → b.apex with b.p∘m = a.p and b.q∘m = a.q.
std::vector<Functor> span_morphisms(const Span& a, const Span& b, const Bounds& bounds = {});

// ---------------------------------------------------------------------------
// Tabulators and collages

struct Element {
  ObjId a;  // in the source x
  ObjId b;  // in the target y
  int s;    // s ∈ F(b, a)
};

/// The two-sided category of elements of F : x → y.  A morphism
/// (a, b, s) → (a', b', s') is a pair (f : a → a', g : b → b') with
/// g·s' = f·s in F(b, a').  p and q are the projections to x and y.
struct TabulatorSpan {
  Span span;
  ProfRef proarrow;
  std::vector<Element> elements;  // by apex object
  ProfCell cell;                  // hom_E ⇒ F over (p, q)
};

TabulatorSpan tabulate(const ProfRef& f);

struct TabulatorCheck {
  bool holds = true;
  std::string probe;  // first failing probe
  long long cells = 0;
  long long functors = 0;
};

/// For each probe z: cells hom_z ⇒ F (over any frame) correspond bijectively
/// to functors z → E, by u ↦ cell ∘ hom_cell(u).
TabulatorCheck verify_tabulator(const TabulatorSpan& t, const std::vector<NamedCategory>& probes,
                                const Bounds& bounds = {});

/// The collage of F : x → y: objects of x, then of y; Hom(j b, i a) = F(b, a).
struct Collage {
  CatRef category;
  Functor i;  // x → P
  Functor j;  // y → P
  ProfRef proarrow;
  ProfCell cell;  // F ⇒ hom_P over (i, j)
};

Collage cotabulate(const ProfRef& f);

// ---------------------------------------------------------------------------
// Fibrations

bool is_discrete_opfibration(const Functor& p);
bool is_discrete_fibration(const Functor& p);

struct TsdFibReport {
  /// p has cocartesian lifts over identities of y; q has cartesian lifts over
  /// identities of x.
  bool regular = false;
  bool conservative = false;     // (p, q) reflects identities
  bool discrete_fibers = false;  // each E_{c,d} is discrete
  bool left = false;             // each E ×_y {d} → x is a discrete opfibration
  bool right = false;            // each {c} ×_x E → y is a discrete fibration
  /// Verdicts regular ∧ condition for the four conditions above.
  bool verdicts[4] = {false, false, false, false};
  bool agree = false;
  bool holds = false;
  std::string witness;
  explicit operator bool() const noexcept { return holds; }
};

TsdFibReport is_tsdfib(const Span& s);

// ---------------------------------------------------------------------------
// The span representation

/// The profunctor classified by a span: extend(q, hom_E, p), i.e.
/// ∫^e Hom_y(b, q e) × Hom_x(p e, a).
Extension classify(const Span& s);

/// Normal form of an element of classify(s)(b, a): u : b → q e, v : p e → a.
struct SpanElement {
  MorId u;
  ObjId e;
  MorId v;
};
SpanElement classify_element(const Span& s, const Extension& c, ObjId b, ObjId a, int k);

/// The canonical comparison classify(tabulate F) ⇒ F, (u, e, v) ↦ v·s_e·u.
ProfCell reflection_counit(const TabulatorSpan& t, const Extension& c);

/// Composite of spans E → x × y and E' → y × z by strict pullback over y.
struct SpanComposite {
  Span span;
  Functor first;   // to E
  Functor second;  // to E'
};
SpanComposite compose_spans(const Span& first, const Span& second);

/// The laxity comparison classify(tab G ∘ tab F) ⇒ G ∘ F, where `c` classifies
/// the composite span and `gf` = compose_prof(G, F).
ProfCell laxity_comparison(const TabulatorSpan& tf, const TabulatorSpan& tg, const SpanComposite& comp,
                           const Extension& c, const ProfComposite& gf);

/// The strictness comparison of the representation: the pullback of two
/// tabulators into the tabulator of the composite, (s, t) ↦ [t, s].
/// `tgf` = tabulate(gf.result).
Functor composite_comparison(const TabulatorSpan& tf, const TabulatorSpan& tg, const SpanComposite& comp,
                             const ProfComposite& gf, const TabulatorSpan& tgf);

/// The unit comparison x → tabulate(hom_x), a ↦ (a, a, id_a).
Functor unit_comparison(const TabulatorSpan& thom);

/// The unit E → tabulate(classify E) of the reflection, e ↦ (p e, q e, [id, e, id]).
Functor reflection_unit(const Span& s, const Extension& c, const TabulatorSpan& t);

/// Span (g ↓ f) → x × y for f : x → a, g : y → a: objects (u ∈ x, w ∈ y, θ : g w → f u).
/// Classifies F(b, a) = Hom(g b, f a).
TabulatorSpan comma_fibration(const Functor& f, const Functor& g);

/// The span (id, f) : x → x × y and the map x → tabulate(f_⊛) = (id_y ↓ f),
/// a ↦ (a, f a, id).
struct YonedaUnit {
  Span representable;       // (id, f)
  TabulatorSpan comma;      // id_y ↓ f
  Functor unit;             // x → comma apex
};
YonedaUnit fibrational_yoneda(const Functor& f);

/// Whether restriction along the unit is a bijection Map(id ↓ f, e) → Map(x, e).
struct YonedaCheck {
  bool bijective = false;
  int comma_maps = 0;
  int point_maps = 0;
};
YonedaCheck check_fibrational_yoneda(const YonedaUnit& y, const Span& e, const Bounds& bounds = {});

/// Fun(z, E) → Fun(z, x) × Fun(z, y) by postcomposition.
Span functor_span(const Span& s, const CatRef& z, const Bounds& bounds = {});

/// Postcomposition Fun(z, p) : Fun(z, C) → Fun(z, D) between materialized functor categories.
Functor postcompose(const Functor& p, const FunctorCategory& from, const FunctorCategory& to);

// ---------------------------------------------------------------------------
// Comprehensive factorization

/// f = fibration ∘ initial with W(c) = π₀(f ↓ c) and middle = elements of W.
struct ComprehensiveFactorization {
  CatRef middle;
  Functor initial;    // A → middle
  Functor fibration;  // middle → X, a discrete opfibration
  FinSetDiagram copresheaf;  // W on X
};

ComprehensiveFactorization comprehensive_factorization(const Functor& f);

/// The category of elements of a copresheaf with its discrete opfibration.
struct ElementsCategory {
  CatRef category;
  Functor projection;
  std::vector<std::pair<ObjId, int>> elements;  // by object: (c, w ∈ W(c))
};
ElementsCategory category_of_elements(const FinSetDiagram& w);

struct LiftingReport {
  bool holds = true;
  long long squares = 0;
  int fillers = 0;  // filler count of the first failing square
};

/// Every commutative square v∘i = p∘u has exactly one diagonal d : B → E.
LiftingReport check_unique_lifting(const Functor& i, const Functor& p, const Bounds& bounds = {});

// ---------------------------------------------------------------------------
// Slices

/// f/C (cocones under f with their apex projection) or C/f (cones over f).
struct Slice {
  CatRef category;
  Functor projection;                   // to C
  std::vector<ObjId> apex;              // by slice object
  std::vector<NatTransformation> legs;  // f ⇒ Δc, or Δc ⇒ f for cones
};

/// Throws BoundExceeded("max-cocones") beyond bounds.max_cocones objects.
Slice coslice(const Functor& f, const Bounds& bounds = {});
Slice slice(const Functor& f, const Bounds& bounds = {});

}  // namespace equip

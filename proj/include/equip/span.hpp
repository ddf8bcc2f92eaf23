#pragma once

// The span double category Span(C) of a finite category with pullbacks, and
// recognition of span double categories among finite double categories.
//
// Horizontal arrows are isomorphism classes of spans, each stored as its
// least representative (apex, left, right) in id order.  Composition takes
// the chosen pullback and then the representative of its class, so it is
// strictly associative and unital on arrows.  Cells are transported along
// the recorded isos rep → chosen composite.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "equip/corpus.hpp"
#include "equip/double.hpp"
#include "equip/fincat.hpp"

namespace equip {

/// apex with first : apex → src(f), second : apex → src(g), f∘first = g∘second.
struct PullbackCone {
  ObjId apex = kNone;
  MorId first = kNone;
  MorId second = kNone;
};

/// The least cone (apex, first, second) through which every cone over the
/// cospan (f, g) factors uniquely.
std::optional<PullbackCone> find_pullback(const FinCategory& c, MorId f, MorId g);

/// A cospan with no pullback, in (f, g) id order.
std::optional<std::pair<MorId, MorId>> missing_pullback(const FinCategory& c);

class MissingPullback : public Error {
 public:
  MissingPullback(MorId f, MorId g, const std::string& text) : Error(text), f(f), g(g) {}
  MorId f;
  MorId g;
};

/// a ← apex → b.
struct SpanArrow {
  ObjId apex = kNone;
  MorId left = kNone;
  MorId right = kNone;
  bool operator==(const SpanArrow&) const = default;
};

struct SpanDoubleCat {
  CatRef base;
  DoubleCategory dbl;
  /// Chosen pullback of every cospan (f, g), f∘first = g∘second.
  std::map<std::pair<MorId, MorId>, PullbackCone> pullbacks;
  std::vector<SpanArrow> spans;   // representative per horizontal id
  std::vector<MorId> cell_maps;   // apex morphism per cell id
  /// For every defined composite (h2, h1): the iso rep(h2∘h1) → chosen pullback apex.
  std::map<std::pair<HorId, HorId>, MorId> strictifiers;
};

/// Throws MissingPullback naming the first cospan without a pullback.
SpanDoubleCat build_span_double(const CatRef& c, const Bounds& bounds = {});

/// Horizontal id of the class of s, with an iso rep.apex → s.apex.
std::pair<HorId, MorId> span_class(const SpanDoubleCat& d, const SpanArrow& s);

/// The span f_⊛ = (a, id, f) or f^⊛ = (a, f, id) for f : a → b.
SpanArrow graph_span(const FinCategory& c, MorId f);
SpanArrow cograph_span(const FinCategory& c, MorId f);

// ---------------------------------------------------------------------------
// Tabulators in a double category

struct DoubleTabulator {
  ObjId apex = kNone;
  MorId left = kNone;
  MorId right = kNone;
  CellId cell = kNone;  // U_apex ⇒ h over (left, right)
};

/// The least (apex, cell) such that every cell β : U_z ⇒ h factors as
/// cell ∘ U_u for exactly one vertical u.  Only the one-dimensional
/// universal property is checked.
std::optional<DoubleTabulator> find_tabulator(const DoubleCategory& p, HorId h);

/// Inverse of a vertical arrow, if any.
std::optional<MorId> inverse_of(const FinCategory& c, MorId f);

// ---------------------------------------------------------------------------
// Recognition

struct SpanRecognition {
  // (a) fibrational equipment
  bool equipment = false;
  bool tabular = false;
  bool pullbacks = false;
  bool tabulators_cocartesian = false;  // every tabulating cell is cocartesian
  bool composites_cocartesian = false;  // the pulled-back composite of tabulating cells is cocartesian
  bool fibrational = false;
  // (b) every span of verticals is a two-sided discrete fibration
  bool spans_discrete = false;
  int spans_checked = 0;
  // (c) the representation h ↦ tabulator of h
  bool strict = false;
  bool bijective_on_cells = false;
  bool essentially_surjective = false;
  bool representation = false;

  bool consistent = false;  // representation == (fibrational && spans_discrete)
  std::string witness_a;
  std::string witness_b;
  std::string witness_c;
};

/// Evaluates the three conditions on a finite double category.
SpanRecognition recognize_span(const DoubleCategory& p, const Bounds& bounds = {});

/// The same three conditions for the Cat equipment, evaluated on the given
/// categories and on profunctors with value sets of size ≤ max_size:
/// tabulators by the two-sided category of elements (checked against
/// `probes`), pullbacks of functors, the local reflection and laxity
/// comparisons, and spans of functors by is_tsdfib.
SpanRecognition recognize_cat_span(const std::vector<NamedCategory>& tier, const std::vector<NamedCategory>& probes,
                                   int max_size, const Bounds& bounds = {});

}  // namespace equip

#pragma once

// Finite strict categories, functors, natural transformations, comma
// categories and set-valued diagrams.
//
// Objects and morphisms are dense integer ids.  Every category carries an
// explicit composition table, so all axioms are decidable by table scans.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace equip {

using ObjId = int;
using MorId = int;
inline constexpr int kNone = -1;

/// Base class of all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an enumeration would exceed a caller-supplied bound.
class BoundExceeded : public Error {
 public:
  BoundExceeded(std::string bound, std::size_t limit)
      : Error("bound exceeded: " + bound + " > " + std::to_string(limit)),
        bound_(std::move(bound)),
        limit_(limit) {}
  const std::string& bound() const noexcept { return bound_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::string bound_;
  std::size_t limit_;
};

/// Enumeration guardrails shared by every search in the library.
struct Bounds {
  std::size_t max_objects = 4096;     // objects of any constructed category
  std::size_t max_functors = 20000;   // functors enumerated by one search
  std::size_t max_cocones = 200000;   // cocones / cells examined by one search
};

struct Arrow {
  ObjId src = 0;
  ObjId dst = 0;
};

class FinCategory {
 public:
  FinCategory() = default;

  /// Raw constructor.  Only checks table shapes; axioms are checked by
  /// check_category().  `compose` is row-major [g * m + f] holding g∘f or
  /// kNone when dst(f) != src(g).
  FinCategory(std::vector<std::string> object_names,
              std::vector<std::string> morphism_names, std::vector<Arrow> arrows,
              std::vector<MorId> identities, std::vector<MorId> compose);

  int num_objects() const noexcept { return static_cast<int>(object_names_.size()); }
  int num_morphisms() const noexcept { return static_cast<int>(arrows_.size()); }

  ObjId src(MorId f) const { return arrows_[f].src; }
  ObjId dst(MorId f) const { return arrows_[f].dst; }
  MorId id(ObjId a) const { return identities_[a]; }
  bool is_identity(MorId f) const { return identities_[src(f)] == f; }

  /// g∘f, or kNone when the pair is not composable.
  MorId compose(MorId g, MorId f) const {
    return compose_[static_cast<std::size_t>(g) * arrows_.size() + f];
  }

  /// Morphisms a → b in increasing id order.
  std::span<const MorId> hom(ObjId a, ObjId b) const {
    return homs_[static_cast<std::size_t>(a) * object_names_.size() + b];
  }

  const std::string& object_name(ObjId a) const { return object_names_[a]; }
  const std::string& morphism_name(MorId f) const { return morphism_names_[f]; }
  const std::vector<std::string>& object_names() const noexcept { return object_names_; }
  const std::vector<std::string>& morphism_names() const noexcept { return morphism_names_; }
  const std::vector<Arrow>& arrows() const noexcept { return arrows_; }
  const std::vector<MorId>& identities() const noexcept { return identities_; }
  const std::vector<MorId>& compose_table() const noexcept { return compose_; }

  std::optional<ObjId> find_object(std::string_view name) const;
  std::optional<MorId> find_morphism(std::string_view name) const;

  /// Structural equality of tables (names ignored).
  bool same_tables(const FinCategory& other) const;

 private:
  std::vector<std::string> object_names_;
  std::vector<std::string> morphism_names_;
  std::vector<Arrow> arrows_;
  std::vector<MorId> identities_;
  std::vector<MorId> compose_;
  std::vector<std::vector<MorId>> homs_;
};

using CatRef = std::shared_ptr<const FinCategory>;

inline CatRef share(FinCategory c) { return std::make_shared<const FinCategory>(std::move(c)); }

/// Incremental construction from objects, non-identity morphisms and the
/// composites of non-identity pairs.  Identities and their composites are
/// filled in automatically.
class CategoryBuilder {
 public:
  ObjId add_object(std::string name);
  MorId add_morphism(std::string name, ObjId src, ObjId dst);
  /// Declares g∘f = h for non-identity morphisms (ids as returned by
  /// add_morphism).  Passing kNone for h means "the identity of src(f)".
  void set_composite(MorId g, MorId f, MorId h);
  /// Throws Error when some composable non-identity pair has no composite.
  FinCategory build() const;

 private:
  std::vector<std::string> objects_;
  std::vector<std::string> names_;
  std::vector<Arrow> arrows_;
  std::vector<std::vector<MorId>> composites_;  // [g][f], -2 = unset
};

/// A category from explicit arrows; `compose(g, f)` is called once per
/// composable pair and must return a morphism id.
FinCategory assemble_category(std::vector<std::string> objects, std::vector<std::string> morphisms,
                              std::vector<Arrow> arrows, std::vector<MorId> identities,
                              const std::function<MorId(MorId, MorId)>& compose);

// ---------------------------------------------------------------------------
// Named fixtures

FinCategory empty_category();
FinCategory terminal_category();
/// The ordinal [n] = {0 < 1 < ... < n}.
FinCategory ordinal(int n);
FinCategory discrete(int n);
/// The free span s ← ⊤ → t (objects ordered ⊤, s, t).
FinCategory free_span();
/// a ⇉ b.
FinCategory parallel_pair();
/// A finite preorder; leq[a][b] means a ≤ b.  Must be reflexive and transitive.
FinCategory preorder(const std::vector<std::vector<bool>>& leq,
                     std::vector<std::string> names = {});
/// One-object category of the monoid given by a Cayley table over elements
/// 0..n-1 with unit 0.
FinCategory monoid_category(const std::vector<std::vector<int>>& table);
/// Sets {0, ..., k-1} for k = 0..n with all functions.  A morphism's name
/// lists its values, e.g. "2:[1,0]" from 2 to 2.
FinCategory finset_skeleton(int n);

// ---------------------------------------------------------------------------
// Axiom checks

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
  explicit operator bool() const noexcept { return valid; }
};

ValidationReport check_category(const FinCategory& c);

// ---------------------------------------------------------------------------
// Functors and natural transformations

class Functor {
 public:
  Functor() = default;
  Functor(CatRef source, CatRef target, std::vector<ObjId> objects, std::vector<MorId> morphisms);

  const FinCategory& source() const { return *source_; }
  const FinCategory& target() const { return *target_; }
  const CatRef& source_ref() const noexcept { return source_; }
  const CatRef& target_ref() const noexcept { return target_; }

  ObjId operator()(ObjId a) const { return obj_[a]; }
  MorId map(MorId f) const { return mor_[f]; }
  const std::vector<ObjId>& object_map() const noexcept { return obj_; }
  const std::vector<MorId>& morphism_map() const noexcept { return mor_; }

  bool operator==(const Functor& other) const;

 private:
  CatRef source_;
  CatRef target_;
  std::vector<ObjId> obj_;
  std::vector<MorId> mor_;
};

ValidationReport check_functor(const Functor& f);

Functor identity_functor(const CatRef& c);
/// g∘f.
Functor compose(const Functor& g, const Functor& f);
/// The functor 1 → c picking object `a`.
Functor object_functor(const CatRef& c, ObjId a);
/// Constant functor source → target at object `a`.
Functor constant_functor(const CatRef& source, const CatRef& target, ObjId a);
/// The unique functor to the terminal category.
Functor to_terminal(const CatRef& source, const CatRef& terminal);
/// Full-subcategory inclusion onto the listed objects (in order).
Functor full_inclusion(const CatRef& c, const std::vector<ObjId>& objects);
/// Image data of a full inclusion as its own category.
FinCategory full_subcategory(const FinCategory& c, const std::vector<ObjId>& objects);

bool is_fully_faithful(const Functor& f);
bool is_faithful(const Functor& f);
bool is_full(const Functor& f);
bool is_isomorphism(const Functor& f);

struct NatTransformation {
  Functor from;
  Functor to;
  std::vector<MorId> components;  // indexed by source object
};

ValidationReport check_nat_transformation(const NatTransformation& t);
NatTransformation identity_transformation(const Functor& f);
/// Vertical composite β∘α.
NatTransformation vertical_compose(const NatTransformation& beta, const NatTransformation& alpha);
/// Whiskerings h∘α and α∘k.
NatTransformation whisker_left(const Functor& h, const NatTransformation& alpha);
NatTransformation whisker_right(const NatTransformation& alpha, const Functor& k);
bool is_natural_isomorphism(const NatTransformation& t);

// ---------------------------------------------------------------------------
// Standard constructions

FinCategory opposite(const FinCategory& c);
Functor opposite(const Functor& f, const CatRef& source_op, const CatRef& target_op);

/// Product category; object (a, b) has id a * |B| + b, morphism (f, g) has
/// id f * mor(B) + g.
FinCategory product(const FinCategory& a, const FinCategory& b);
Functor product_projection_first(const CatRef& a, const CatRef& b, const CatRef& prod);
Functor product_projection_second(const CatRef& a, const CatRef& b, const CatRef& prod);
/// Pairing ⟨f, g⟩ : S → A × B.
Functor pairing(const Functor& f, const Functor& g, const CatRef& prod);
/// f × g : A × B → A' × B'.
Functor product_map(const Functor& f, const Functor& g, const CatRef& prod_src, const CatRef& prod_dst);

/// Disjoint union; objects/morphisms of `b` are shifted after those of `a`.
FinCategory coproduct(const FinCategory& a, const FinCategory& b);

/// Strict pullback A ×_C B of f : A → C and g : B → C, with projections.
struct CategoryPullback {
  CatRef apex;
  Functor first;
  Functor second;
};
CategoryPullback pullback(const Functor& f, const Functor& g);

/// Every functor source → target, in canonical (lexicographic) order.
std::vector<Functor> enumerate_functors(const CatRef& source, const CatRef& target,
                                        const Bounds& bounds = {});

/// Every natural transformation f ⇒ g, in canonical order.
std::vector<NatTransformation> enumerate_transformations(const Functor& f, const Functor& g,
                                                         const Bounds& bounds = {});

/// The functor category Fun(I, C) with its objects (functors) and morphisms
/// (transformations) listed in id order.
struct FunctorCategory {
  CatRef category;
  std::vector<Functor> objects;
  std::vector<NatTransformation> morphisms;
  /// Index of a functor among `objects`, or kNone.
  ObjId index_of(const Functor& f) const;
};
FunctorCategory functor_category(const CatRef& source, const CatRef& target,
                                 const Bounds& bounds = {});

/// An isomorphism of categories a → b, if one exists.  When `over_a` and
/// `over_b` are given (functors into a common category), the isomorphism
/// must satisfy over_b ∘ iso = over_a.
std::optional<Functor> find_isomorphism(const CatRef& a, const CatRef& b,
                                        const std::vector<Functor>& over_a = {},
                                        const std::vector<Functor>& over_b = {});

// ---------------------------------------------------------------------------
// Comma categories

struct CommaObject {
  ObjId a;
  ObjId b;
  MorId theta;  // f(a) → g(b)
};

struct CommaCategory {
  CatRef category;
  std::vector<CommaObject> objects;  // indexed by comma object id
  Functor proj_a;
  Functor proj_b;
};

/// (f ↓ g) for f : A → C and g : B → C.  Throws Error on mismatched targets.
CommaCategory comma(const Functor& f, const Functor& g);

/// The comma 2-cell f∘proj_a ⇒ g∘proj_b.
NatTransformation comma_transformation(const CommaCategory& k, const Functor& f, const Functor& g);

// ---------------------------------------------------------------------------
// Connectivity and finality

/// Partition of objects into connected components (each sorted; components
/// ordered by their least object).
std::vector<std::vector<ObjId>> connected_components(const FinCategory& c);

struct FinalityVerdict {
  bool holds = true;
  ObjId witness = kNone;       // failing object of the codomain
  std::string reason;          // "empty comma" / "disconnected comma"
  explicit operator bool() const noexcept { return holds; }
};

/// f : I → J is final iff every comma (j ↓ f) is nonempty and connected.
FinalityVerdict is_final(const Functor& f);
/// f is initial iff every comma (f ↓ j) is nonempty and connected.
FinalityVerdict is_initial(const Functor& f);

// ---------------------------------------------------------------------------
// Finite sets and set-valued diagrams

/// A functor J → FinSet.  Elements of d(j) are 0..sizes[j]-1; maps[m] is the
/// function d(src m) → d(dst m).
struct FinSetDiagram {
  CatRef shape;
  std::vector<int> sizes;
  std::vector<std::vector<int>> maps;
};

ValidationReport check_diagram(const FinSetDiagram& d);

/// Hom(j, −) : c → FinSet, elements ordered as in c.hom(j, −).
FinSetDiagram corepresentable(const CatRef& c, ObjId j);

/// d ∘ f.
FinSetDiagram precompose(const FinSetDiagram& d, const Functor& f);

struct FinSetColimit {
  int size = 0;
  /// injections[j][x] is the class of x ∈ d(j).
  std::vector<std::vector<int>> injections;
  /// Minimum (j, x) representative of each class.
  std::vector<std::pair<ObjId, int>> representatives;
};

/// ∐ d(j) modulo x ~ d(m)(x), by union-find with minimum representatives.
FinSetColimit colimit_finset(const FinSetDiagram& d);

/// Brute-force initiality check: every cocone into a set of size ≤ the
/// coproduct size factors uniquely through `colim`.  Throws BoundExceeded
/// when more than bounds.max_cocones candidate maps would be examined.
bool certify_colimit(const FinSetDiagram& d, const FinSetColimit& colim,
                     const Bounds& bounds = {});

/// Every functor J → FinSet with all value sets of size ≤ max_size.
std::vector<FinSetDiagram> enumerate_diagrams(const CatRef& shape, int max_size,
                                              const Bounds& bounds = {});

/// The canonical comparison colim(d∘f) → colim(d) induced by f.
std::vector<int> colimit_comparison(const FinSetDiagram& d, const Functor& f,
                                    const FinSetColimit& restricted,
                                    const FinSetColimit& full);

}  // namespace equip

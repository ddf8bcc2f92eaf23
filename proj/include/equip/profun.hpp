#pragma once

// Finite-set-valued profunctors.
//
// ORIENTATION.  A profunctor F : x → y is a functor y^op × x → FinSet.  Its
// value at (b, a), b an object of the TARGET y and a an object of the SOURCE
// x, is written F(b, a).
//
//   * a morphism g : b' → b of y acts CONTRAVARIANTLY:  F(b, a) → F(b', a)
//     (act_y; serialized as "lact");
//   * a morphism f : a → a' of x acts COVARIANTLY:      F(b, a) → F(b, a')
//     (act_x; serialized as "ract").
//
// The hom profunctor of C has value Hom_C(b, a) at (b, a); y-morphisms act
// by precomposition and x-morphisms by postcomposition.  Companions are
// f_⊛(b, a) = Hom_y(b, f a); conjoints f^⊛ : y → x are f^⊛(a, b) = Hom_y(f a, b).
//
// Elements of F(b, a) are local indices 0..size(b, a)-1.  Every element
// also has a global index (cells ordered b-major, a-minor).

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "equip/fincat.hpp"

namespace equip {

class Profunctor {
 public:
  Profunctor() = default;

  /// `sizes[b * |x| + a]` = |F(b, a)|.
  /// `y_action[g * |x| + a]` maps F(dst g, a) → F(src g, a).
  /// `x_action[f * |y| + b]` maps F(b, src f) → F(b, dst f).
  Profunctor(CatRef source, CatRef target, std::vector<int> sizes,
             std::vector<std::vector<int>> y_action, std::vector<std::vector<int>> x_action,
             std::vector<std::vector<std::string>> element_names = {});

  const FinCategory& source() const { return *source_; }
  const FinCategory& target() const { return *target_; }
  const CatRef& source_ref() const noexcept { return source_; }
  const CatRef& target_ref() const noexcept { return target_; }

  int cell(ObjId b, ObjId a) const { return b * source_->num_objects() + a; }
  int size(ObjId b, ObjId a) const { return sizes_[cell(b, a)]; }
  int total_size() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }
  int global(ObjId b, ObjId a, int s) const { return offsets_[cell(b, a)] + s; }
  /// (b, a, local index) of a global element.
  struct Position {
    ObjId b;
    ObjId a;
    int s;
  };
  Position position(int global_index) const;

  /// g : b' → b acting on s ∈ F(b, a); result in F(b', a).
  int act_y(MorId g, ObjId a, int s) const {
    return y_action_[static_cast<std::size_t>(g) * source_->num_objects() + a][s];
  }
  /// f : a → a' acting on s ∈ F(b, a); result in F(b, a').
  int act_x(ObjId b, MorId f, int s) const {
    return x_action_[static_cast<std::size_t>(f) * target_->num_objects() + b][s];
  }

  const std::vector<int>& sizes() const noexcept { return sizes_; }
  const std::vector<std::vector<int>>& y_action() const noexcept { return y_action_; }
  const std::vector<std::vector<int>>& x_action() const noexcept { return x_action_; }

  /// Element name; generated as "b,a#s" when none was supplied.
  std::string element_name(ObjId b, ObjId a, int s) const;
  bool has_element_names() const noexcept { return !names_.empty(); }

  bool same_tables(const Profunctor& other) const;

 private:
  CatRef source_;
  CatRef target_;
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  std::vector<std::vector<int>> y_action_;
  std::vector<std::vector<int>> x_action_;
  std::vector<std::vector<std::string>> names_;
};

using ProfRef = std::shared_ptr<const Profunctor>;
inline ProfRef share(Profunctor p) { return std::make_shared<const Profunctor>(std::move(p)); }

ValidationReport check_profunctor(const Profunctor& p);

/// Builds a profunctor from per-cell sizes and functions computing both
/// actions on local indices.
Profunctor make_profunctor(const CatRef& source, const CatRef& target,
                           const std::function<int(ObjId b, ObjId a)>& size,
                           const std::function<int(MorId g, ObjId a, int s)>& act_y,
                           const std::function<int(ObjId b, MorId f, int s)>& act_x);

/// The profunctor x → y given by a diagram on y^op × x (shape = product(opposite(y), x)).
Profunctor profunctor_from_diagram(const FinSetDiagram& d, const CatRef& source, const CatRef& target);

/// Every profunctor x → y with all values of size ≤ max_size, in the order
/// of enumerate_diagrams on y^op × x.
std::vector<Profunctor> enumerate_profunctors(const CatRef& source, const CatRef& target, int max_size,
                                              const Bounds& bounds = {});

/// Profunctor x → y with every value empty.
Profunctor empty_profunctor(const CatRef& source, const CatRef& target);
/// Profunctor x → y with every value a single point.
Profunctor point_profunctor(const CatRef& source, const CatRef& target);

/// Hom_C(−, −) : C → C, the horizontal unit.
Profunctor hom_profunctor(const CatRef& c);

// ---------------------------------------------------------------------------
// 2-cells

/// A 2-cell
///
///        F
///    x ────→ y
///  fx│       │fy
///    ↓       ↓
///    x'────→ y'
///        G
///
/// with components F(b, a) → G(fy b, fx a).
struct ProfCell {
  ProfRef source;
  ProfRef target;
  Functor frame_x;  // source-side vertical: x → x'
  Functor frame_y;  // target-side vertical: y → y'
  /// components[b * |x| + a][s] ∈ G(fy b, fx a).
  std::vector<std::vector<int>> components;

  int apply(ObjId b, ObjId a, int s) const {
    return components[static_cast<std::size_t>(b) * frame_x.source().num_objects() + a][s];
  }
};

ValidationReport check_cell(const ProfCell& c);

/// Vertical identity on F.
ProfCell identity_cell(const ProfRef& f);
/// Vertical composite β∘α (α on top).
ProfCell vertical_compose(const ProfCell& beta, const ProfCell& alpha);
/// The cell hom_x ⇒ hom_y over (f, f) sending u ↦ f(u).
ProfCell hom_cell(const Functor& f, const ProfRef& hom_x, const ProfRef& hom_y);

bool same_components(const ProfCell& a, const ProfCell& b);
bool is_invertible(const ProfCell& c);

/// Every cell F ⇒ G over the frame (fx, fy), in canonical order.  With
/// `injective`, only componentwise injective cells.
std::vector<ProfCell> enumerate_cells(const ProfRef& f, const ProfRef& g, const Functor& fx,
                                      const Functor& fy, const Bounds& bounds = {},
                                      bool injective = false);

/// The first globular isomorphism F ≅ G (identity frames), if any.
std::optional<ProfCell> find_iso(const ProfRef& f, const ProfRef& g);

/// The first globular isomorphism F ≅ G when F and G live over categories
/// with identical tables but possibly different CatRefs.
std::optional<ProfCell> find_iso_loose(const ProfRef& f, const ProfRef& g);

// ---------------------------------------------------------------------------
// Composition

/// G ∘ F for F : x → y, G : y → z, with the coend bookkeeping that cell
/// composition needs.  (G∘F)(c, a) = ∐_b G(c, b) × F(b, a) / (G(c,m)t, s) ~ (t, F(m,a)s).
struct ProfComposite {
  ProfRef result;
  ProfRef first;   // F
  ProfRef second;  // G
  /// Class (local index in result(c, a)) of the pair (b, t, s).
  int class_of(ObjId c, ObjId a, ObjId b, int t, int s) const;
  /// Least (b, t, s) of each class, indexed by result cell then class.
  struct Triple {
    ObjId b;
    int t;
    int s;
  };
  std::vector<std::vector<Triple>> representatives;
  // Internal: per (c, a), per b, offset of (b, 0, 0) in the pair numbering.
  std::vector<std::vector<int>> pair_offsets;
  std::vector<std::vector<int>> classes;
};

/// Throws Error when the middle categories differ.
ProfComposite compose_prof(const ProfRef& g, const ProfRef& f);

/// Horizontal composite β ⊙ α of cells α : F ⇒ F' and β : G ⇒ G' whose
/// shared vertical sides agree.  `top` = G∘F and `bottom` = G'∘F'.
ProfCell horizontal_compose(const ProfCell& beta, const ProfCell& alpha, const ProfComposite& top,
                            const ProfComposite& bottom);

/// λ : Hom_y ∘ F → F and ρ : F ∘ Hom_x → F.  `comp` must be the matching composite.
ProfCell left_unitor(const ProfComposite& comp);
ProfCell right_unitor(const ProfComposite& comp);

/// Inverse of a componentwise-bijective cell (frames must be identities or
/// isomorphisms with the given inverses).
ProfCell invert_globular(const ProfCell& c);

/// Associator comparison (H∘G)∘F → H∘(G∘F), computed on representatives.
ProfCell associator(const ProfComposite& hg_f, const ProfComposite& hg,
                    const ProfComposite& h_gf, const ProfComposite& gf);

// ---------------------------------------------------------------------------
// Companions, conjoints, restriction and extension

/// A proarrow with unit and counit cells exhibiting it as a companion
/// (or conjoint) of a functor.
struct Companionship {
  ProfRef proarrow;
  ProfCell unit;
  ProfCell counit;
};

/// f_⊛ : x → y.  unit: hom_x ⇒ f_⊛ over (id_x, f); counit: f_⊛ ⇒ hom_y over (f, id_y).
Companionship companion_of(const Functor& f);
/// f^⊛ : y → x.  unit: hom_x ⇒ f^⊛ over (f, id_x); counit: f^⊛ ⇒ hom_y over (id_y, f).
Companionship conjoint_of(const Functor& f);

struct TriangleReport {
  bool vertical = false;    // counit ∘ unit = hom cell of f
  bool horizontal = false;  // unitors ∘ (counit ⊙ unit) = identity
  explicit operator bool() const noexcept { return vertical && horizontal; }
};

TriangleReport check_companion_triangles(const Functor& f, const Companionship& c);
TriangleReport check_conjoint_triangles(const Functor& f, const Companionship& c);

/// Cartesian restriction F(g −, f −) : x' → y' of F : x → y along
/// f : x' → x and g : y' → y, with its cartesian cell into F over (f, g).
struct Restriction {
  ProfRef proarrow;
  ProfCell cartesian;
};
Restriction restrict_prof(const Functor& g, const ProfRef& f_prof, const Functor& f);

/// Cocartesian extension g_⊛ ∘ F ∘ f^⊛ : x' → y' of F : x → y along
/// f : x → x' and g : y → y', with its cocartesian cell from F over (f, g).
struct Extension {
  ProfRef proarrow;
  ProfCell cocartesian;
};
Extension extend_prof(const Functor& g, const ProfRef& f_prof, const Functor& f);

/// Transpose F^t : y^op → x^op with F^t(a, b) = F(b, a).
Profunctor transpose(const Profunctor& p, const CatRef& source_op, const CatRef& target_op);

/// Cartesian product F × G : x × x' → y × y' with
/// (F×G)((b,d),(a,c)) = F(b,a) × G(d,c); element (s, t) has index s·|G(d,c)| + t.
Profunctor product_prof(const Profunctor& f, const Profunctor& g, const CatRef& source_prod,
                        const CatRef& target_prod);

/// The end ∫_o F(g o, f o) over X, as the list of matching families
/// (family[o] ∈ F(g o, f o)) in lexicographic order.
std::vector<std::vector<int>> cotensor(const CatRef& x_cat, const Profunctor& p, const Functor& g,
                                       const Functor& f);

}  // namespace equip

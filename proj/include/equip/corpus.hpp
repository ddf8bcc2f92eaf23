#pragma once

// Versioned probe corpora.  Every universally quantified check in the test
// suites ranges over one of these lists, never over an implicit set.

#include <string>
#include <vector>

#include "equip/fincat.hpp"

namespace equip {

inline constexpr int kCorpusVersion = 1;

struct NamedCategory {
  std::string name;
  CatRef category;
};

/// 𝟙, [1], [2], Σ (free span) and the parallel pair.
std::vector<NamedCategory> named_fixtures();

/// Every strict category with at most `max_objects` objects and at most
/// `max_parallel` non-identity morphisms between any ordered pair of objects
/// (endomorphisms included), one representative per isomorphism class, in a
/// deterministic order (by object count, then morphism count, then table).
std::vector<NamedCategory> enumerate_categories(int max_objects, int max_parallel);

/// The default corpus: every category with ≤ 2 objects and ≤ 2 parallel
/// non-identity morphisms, followed by every 3-object category with ≤ 1.
/// Contains all named fixtures up to isomorphism.
const std::vector<NamedCategory>& default_corpus();

/// Default corpus members with at most `max_morphisms` morphisms, followed
/// by the named fixtures not already among them.
std::vector<NamedCategory> small_corpus(int max_morphisms);

/// Filters a corpus by object and morphism counts.
std::vector<NamedCategory> restrict_corpus(const std::vector<NamedCategory>& corpus,
                                           int max_objects, int max_morphisms);

}  // namespace equip

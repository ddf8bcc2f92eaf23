#pragma once

#include <functional>
#include <vector>

#include "equip/fincat.hpp"

namespace equip::detail {

struct FunctorSearchOptions {
  bool injective = false;
  std::function<bool(ObjId, ObjId)> object_ok;    // (source object, candidate image)
  std::function<bool(MorId, MorId)> morphism_ok;  // (source morphism, candidate image)
};

/// Backtracking enumeration of functors in lexicographic order of
/// (object images, non-identity morphism images).  `visit` returns false to
/// stop the search.
void search_functors(const FinCategory& source, const FinCategory& target,
                     const FunctorSearchOptions& options,
                     const std::function<bool(const std::vector<ObjId>&, const std::vector<MorId>&)>& visit);

}  // namespace equip::detail

#pragma once

// Builds a FinCategory from keyed morphisms and a composition rule on keys.
// Used by every derived construction (commas, products, functor categories,
// categories of elements, pullbacks).

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "equip/fincat.hpp"

namespace equip::detail {

using Key = std::vector<int>;

struct KeyedMorphism {
  ObjId src;
  ObjId dst;
  Key key;
  std::string name;
};

/// `identity_keys[a]` is the key of the identity on object a; `compose_keys`
/// receives keys of composable (g, f) and returns the key of g∘f.
FinCategory assemble_category(std::vector<std::string> object_names,
                              const std::vector<KeyedMorphism>& morphisms,
                              const std::vector<Key>& identity_keys,
                              const std::function<Key(const Key&, const Key&)>& compose_keys);

}  // namespace equip::detail

#pragma once

// JSON reading and writing.  All ids in documents are strings (object,
// morphism, element, horizontal and cell names); identities and their
// actions may always be omitted and are inferred.
//
// A document may carry named sections
//   {"categories": {...}, "functors": {...}, "profunctors": {...},
//    "spans": {...}, "internal": {...}, ...}
// and wherever a category (functor, ...) is expected, a string refers to a
// registered entry and an object is parsed inline.

#include <map>
#include <string>

#include <json.hpp>

#include "equip/double.hpp"
#include "equip/fincat.hpp"
#include "equip/internal.hpp"
#include "equip/kan.hpp"
#include "equip/profun.hpp"
#include "equip/span.hpp"

namespace equip::io {

using Json = nlohmann::json;

/// Malformed or ill-typed input.  The CLI maps it to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

struct Provenance {
  std::string source;  // file name, or "<inline>"
  std::string hash;    // FNV-1a of the raw bytes, hex
};

/// Parses text, reporting the byte offset of a syntax error.
Json parse_text(const std::string& text, const std::string& source = "<inline>");
Json read_file(const std::string& path, Provenance* provenance = nullptr);

class Workspace {
 public:
  /// Registers the named sections of a document.  Names must be unique.
  void load(const Json& doc, const Provenance& provenance = {});

  /// When `validate` is set, axiom violations become InputError.
  CatRef category(const Json& j, bool validate = true);
  Functor functor(const Json& j, bool validate = true);
  /// A functor whose source and target are given rather than read.
  Functor functor_between(const Json& j, const CatRef& source, const CatRef& target, bool validate = true);
  ProfRef profunctor(const Json& j, bool validate = true);
  ProfRef profunctor_between(const Json& j, const CatRef& source, const CatRef& target, bool validate = true);
  Span span(const Json& j);
  FinSetDiagram diagram(const Json& j);
  LaxSquare square(const Json& j);
  DoubleCategory double_category(const Json& j, bool validate = true);
  InternalCategory internal_category(const Json& j, bool validate = true);
  /// Strict internal functor from levelwise components.
  InternalFunctor internal_functor(const Json& j);
  InternalProfunctor internal_profunctor(const Json& j, bool validate = true);

  const std::map<std::string, CatRef>& categories() const noexcept { return categories_; }
  const std::vector<Provenance>& provenance() const noexcept { return provenance_; }

 private:
  template <class T>
  const Json* lookup(const Json& j, const std::map<std::string, T>& table, const char* kind) const;

  std::map<std::string, CatRef> categories_;
  std::map<std::string, Json> functors_, profunctors_, spans_, internal_, doubles_, raw_;
  std::vector<Provenance> provenance_;
};

/// Named fixtures: "empty", "terminal", "ordinal:N", "discrete:N", "span",
/// "parallel".  Throws InputError on an unknown name.
FinCategory fixture(const std::string& name);

// ---------------------------------------------------------------------------
// Writers (deterministic: every list in id order)

Json to_json(const FinCategory& c);
/// Object and morphism maps only (non-identity morphisms).
Json maps_json(const Functor& f);
/// Maps plus inline source and target.
Json to_json(const Functor& f);
Json to_json(const NatTransformation& t);
Json to_json(const Profunctor& p);
Json to_json(const ProfCell& c);
Json to_json(const Span& s);
Json to_json(const DoubleCategory& p);
Json to_json(const InternalCategory& c);
Json to_json(const InternalFunctor& f);
Json to_json(const FinSetColimit& c, const FinSetDiagram& d);
Json to_json(const ValidationReport& r);
Json to_json(const Bounds& b);

/// Reads {"max_objects", "max_functors", "max_cocones"} over `base`.
Bounds bounds_from_json(const Json& j, Bounds base = {});

}  // namespace equip::io

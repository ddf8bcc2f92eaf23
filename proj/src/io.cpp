#include "equip/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace equip::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw InputError(what); }

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) fail(std::string(what) + ": missing \"" + key + "\"");
  return j.at(key);
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) fail(std::string(what) + ": expected a string id, got " + j.dump());
  return j.get<std::string>();
}

const Json& object_field(const Json& j, const char* key, const char* what) {
  static const Json empty = Json::object();
  if (!j.contains(key)) return empty;
  const Json& v = j.at(key);
  if (!v.is_object()) fail(std::string(what) + ": \"" + key + "\" must be an object");
  return v;
}

const Json& array_field(const Json& j, const char* key, const char* what) {
  static const Json empty = Json::array();
  if (!j.contains(key)) return empty;
  const Json& v = j.at(key);
  if (!v.is_array()) fail(std::string(what) + ": \"" + key + "\" must be an array");
  return v;
}

ObjId object_of(const FinCategory& c, const std::string& name, const char* what) {
  const auto a = c.find_object(name);
  if (!a) fail(std::string(what) + ": unknown object \"" + name + "\"");
  return *a;
}

MorId morphism_of(const FinCategory& c, const std::string& name, const char* what) {
  const auto f = c.find_morphism(name);
  if (!f) fail(std::string(what) + ": unknown morphism \"" + name + "\"");
  return *f;
}

void require_valid(const ValidationReport& r, const std::string& what) {
  if (r.valid) return;
  std::string msg = what + " is invalid: " + r.violations.front();
  if (r.violations.size() > 1) msg += " (and " + std::to_string(r.violations.size() - 1) + " more)";
  fail(msg);
}

/// Names made unique by suffixing "#k" to repeats; empty names become fallback + index.
std::vector<std::string> unique_names(const std::vector<std::string>& names, const std::string& fallback) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string n = names[i].empty() ? fallback + std::to_string(i) : names[i];
    if (seen.count(n)) {
      int k = 1;
      while (seen.count(n + "#" + std::to_string(k))) ++k;
      n += "#" + std::to_string(k);
    }
    seen.insert(n);
    out.push_back(n);
  }
  return out;
}

std::vector<std::string> object_names(const FinCategory& c) { return unique_names(c.object_names(), "o"); }
std::vector<std::string> morphism_names(const FinCategory& c) { return unique_names(c.morphism_names(), "m"); }

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int parse_count(const std::string& name, std::size_t prefix) {
  try {
    std::size_t used = 0;
    const int n = std::stoi(name.substr(prefix), &used);
    if (used + prefix != name.size() || n < 0 || n > 64) throw std::invalid_argument("range");
    return n;
  } catch (const std::exception&) {
    fail("fixture \"" + name + "\": expected a count between 0 and 64");
  }
}

/// Splits "b,a" at the comma that yields two known object names.
std::pair<ObjId, ObjId> cell_key(const FinCategory& y, const FinCategory& x, const std::string& key,
                                 const char* what) {
  for (std::size_t i = key.find(','); i != std::string::npos; i = key.find(',', i + 1)) {
    const auto b = y.find_object(key.substr(0, i));
    const auto a = x.find_object(key.substr(i + 1));
    if (b && a) return {*b, *a};
  }
  fail(std::string(what) + ": cannot read \"" + key + "\" as \"b,a\" with b in the target and a in the source");
}

}  // namespace

// ---------------------------------------------------------------------------

Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail("malformed JSON in " + source + " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Json read_file(const std::string& path, Provenance* provenance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  if (provenance) *provenance = Provenance{path, fnv1a(bytes)};
  return parse_text(bytes, path);
}

FinCategory fixture(const std::string& name) {
  if (name == "empty") return empty_category();
  if (name == "terminal" || name == "1") return terminal_category();
  if (name == "span" || name == "Sigma") return free_span();
  if (name == "parallel") return parallel_pair();
  if (name.rfind("ordinal:", 0) == 0) return ordinal(parse_count(name, 8));
  if (name.rfind("discrete:", 0) == 0) return discrete(parse_count(name, 9));
  fail("unknown fixture \"" + name + "\"");
}

void Workspace::load(const Json& doc, const Provenance& provenance) {
  if (!doc.is_object()) fail("document must be a JSON object");
  provenance_.push_back(provenance);
  auto register_all = [&](const char* key, std::map<std::string, Json>& table) {
    for (const auto& [name, body] : object_field(doc, key, "document").items()) {
      if (table.count(name)) fail(std::string("duplicate ") + key + " entry \"" + name + "\"");
      table.emplace(name, body);
    }
  };
  for (const auto& [name, body] : object_field(doc, "categories", "document").items()) {
    if (categories_.count(name)) fail("duplicate categories entry \"" + name + "\"");
    // Later categories may refer to fixtures only; parse eagerly so that
    // every reference to this name shares one category.
    categories_.emplace(name, category(body));
  }
  register_all("functors", functors_);
  register_all("profunctors", profunctors_);
  register_all("spans", spans_);
  register_all("internal", internal_);
  register_all("doubles", doubles_);
}

template <class T>
const Json* Workspace::lookup(const Json& j, const std::map<std::string, T>& table, const char* kind) const {
  if (!j.is_string()) return nullptr;
  const auto it = table.find(j.get<std::string>());
  if (it == table.end()) fail(std::string("unknown ") + kind + " \"" + j.get<std::string>() + "\"");
  if constexpr (std::is_same_v<T, Json>) {
    return &it->second;
  } else {
    return nullptr;
  }
}

CatRef Workspace::category(const Json& j, bool validate) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (const auto it = categories_.find(name); it != categories_.end()) return it->second;
    try {
      auto c = share(fixture(name));
      categories_.emplace(name, c);
      return c;
    } catch (const InputError&) {
      fail("unknown category \"" + name + "\"");
    }
  }
  if (!j.is_object()) fail("category: expected an object or a name");
  if (j.contains("fixture")) return category(field(j, "fixture", "category"), validate);

  std::vector<std::string> objects;
  for (const auto& o : field(j, "objects", "category")) objects.push_back(text(o, "category objects"));
  if (std::set<std::string>(objects.begin(), objects.end()).size() != objects.size()) {
    fail("category: duplicate object names");
  }
  auto obj = [&](const std::string& name) {
    for (std::size_t i = 0; i < objects.size(); ++i) {
      if (objects[i] == name) return static_cast<ObjId>(i);
    }
    fail("category: unknown object \"" + name + "\"");
  };

  std::vector<std::string> morphisms;
  std::vector<Arrow> arrows;
  std::map<std::string, MorId> mor_index;
  auto add = [&](const std::string& id, Arrow a) {
    if (!mor_index.emplace(id, static_cast<MorId>(morphisms.size())).second) {
      fail("category: duplicate morphism \"" + id + "\"");
    }
    morphisms.push_back(id);
    arrows.push_back(a);
  };
  const bool infer = !j.contains("identities");
  std::vector<MorId> identities(objects.size(), kNone);
  // Inferred identities come first, as in every library-built category.
  if (infer) {
    for (std::size_t a = 0; a < objects.size(); ++a) {
      identities[a] = static_cast<MorId>(morphisms.size());
      add("id_" + objects[a], {static_cast<ObjId>(a), static_cast<ObjId>(a)});
    }
  }
  for (const auto& m : array_field(j, "morphisms", "category")) {
    const std::string id = text(field(m, "id", "morphism"), "morphism id");
    if (infer && mor_index.count(id) && identities[arrows[mor_index[id]].src] == mor_index[id]) {
      fail("category: \"" + id + "\" is listed but \"identities\" is missing");
    }
    add(id, {obj(text(field(m, "src", "morphism"), "src")), obj(text(field(m, "dst", "morphism"), "dst"))});
  }
  if (!infer) {
    for (const auto& [o, m] : object_field(j, "identities", "category").items()) {
      const auto it = mor_index.find(text(m, "identity"));
      if (it == mor_index.end()) fail("category: identity \"" + m.get<std::string>() + "\" is not a morphism");
      const ObjId a = obj(o);
      if (arrows[it->second].src != a || arrows[it->second].dst != a) {
        fail("category: identity of \"" + o + "\" is not an endomorphism of it");
      }
      identities[a] = it->second;
    }
    for (std::size_t a = 0; a < objects.size(); ++a) {
      if (identities[a] == kNone) fail("category: no identity for \"" + objects[a] + "\"");
    }
  }
  auto mor = [&](const Json& m) {
    const auto it = mor_index.find(text(m, "composite"));
    if (it == mor_index.end()) fail("category: unknown morphism \"" + m.get<std::string>() + "\"");
    return it->second;
  };
  std::map<std::pair<MorId, MorId>, MorId> table;
  for (const auto& row : array_field(j, "compose", "category")) {
    if (!row.is_array() || row.size() != 3) fail("category: compose rows are [g, f, g∘f]");
    const MorId g = mor(row[0]);
    const MorId f = mor(row[1]);
    if (arrows[f].dst != arrows[g].src) {
      fail("category: compose lists non-composable pair (" + morphisms[g] + ", " + morphisms[f] + ")");
    }
    if (!table.emplace(std::make_pair(g, f), mor(row[2])).second) {
      fail("category: composite of (" + morphisms[g] + ", " + morphisms[f] + ") given twice");
    }
  }
  auto is_id = [&](MorId m) { return identities[arrows[m].src] == m; };
  auto c = share(assemble_category(objects, morphisms, arrows, identities, [&](MorId g, MorId f) {
    if (const auto it = table.find({g, f}); it != table.end()) return it->second;
    if (is_id(f)) return g;
    if (is_id(g)) return f;
    fail("category: missing composite of (" + morphisms[g] + ", " + morphisms[f] + ")");
  }));
  if (validate) require_valid(check_category(*c), "category");
  return c;
}

Functor Workspace::functor_between(const Json& j, const CatRef& source, const CatRef& target, bool validate) {
  if (const Json* body = lookup(j, functors_, "functor")) return functor_between(*body, source, target, validate);
  if (!j.is_object()) fail("functor: expected an object or a name");
  std::vector<ObjId> objs(source->num_objects(), kNone);
  for (const auto& [a, b] : object_field(j, "objects", "functor").items()) {
    objs[object_of(*source, a, "functor source")] = object_of(*target, text(b, "functor object"), "functor target");
  }
  for (ObjId a = 0; a < source->num_objects(); ++a) {
    if (objs[a] == kNone) fail("functor: no image for object \"" + source->object_name(a) + "\"");
  }
  std::vector<MorId> mors(source->num_morphisms(), kNone);
  for (const auto& [f, g] : object_field(j, "morphisms", "functor").items()) {
    mors[morphism_of(*source, f, "functor source")] =
        morphism_of(*target, text(g, "functor morphism"), "functor target");
  }
  for (MorId f = 0; f < source->num_morphisms(); ++f) {
    if (mors[f] != kNone) continue;
    if (!source->is_identity(f)) fail("functor: no image for morphism \"" + source->morphism_name(f) + "\"");
    mors[f] = target->id(objs[source->src(f)]);
  }
  Functor out(source, target, std::move(objs), std::move(mors));
  if (validate) require_valid(check_functor(out), "functor");
  return out;
}

Functor Workspace::functor(const Json& j, bool validate) {
  if (const Json* body = lookup(j, functors_, "functor")) return functor(*body, validate);
  return functor_between(j, category(field(j, "source", "functor")), category(field(j, "target", "functor")),
                         validate);
}

ProfRef Workspace::profunctor_between(const Json& j, const CatRef& source, const CatRef& target, bool validate) {
  if (const Json* body = lookup(j, profunctors_, "profunctor")) {
    return profunctor_between(*body, source, target, validate);
  }
  const FinCategory& x = *source;
  const FinCategory& y = *target;
  const int nx = x.num_objects();
  std::vector<std::vector<std::string>> names(static_cast<std::size_t>(nx) * y.num_objects());
  struct Where {
    int cell;
    int s;
  };
  std::map<std::string, Where> where;
  for (const auto& [key, elts] : object_field(j, "values", "profunctor").items()) {
    const auto [b, a] = cell_key(y, x, key, "profunctor values");
    const int cell = b * nx + a;
    if (!elts.is_array()) fail("profunctor: values of \"" + key + "\" must be an array");
    for (const auto& e : elts) {
      const std::string name = text(e, "element");
      if (!where.emplace(name, Where{cell, static_cast<int>(names[cell].size())}).second) {
        fail("profunctor: duplicate element \"" + name + "\"");
      }
      names[cell].push_back(name);
    }
  }
  auto element = [&](const Json& e) {
    const auto it = where.find(text(e, "element"));
    if (it == where.end()) fail("profunctor: unknown element \"" + e.get<std::string>() + "\"");
    return it->second;
  };
  std::vector<int> sizes;
  for (const auto& n : names) sizes.push_back(static_cast<int>(n.size()));
  auto size = [&](ObjId b, ObjId a) { return sizes[b * nx + a]; };

  std::vector<std::vector<int>> ya(static_cast<std::size_t>(y.num_morphisms()) * nx);
  for (MorId g = 0; g < y.num_morphisms(); ++g) {
    for (ObjId a = 0; a < nx; ++a) {
      auto& fn = ya[g * nx + a];
      fn.assign(size(y.dst(g), a), kNone);
      if (y.is_identity(g)) {
        for (int s = 0; s < static_cast<int>(fn.size()); ++s) fn[s] = s;
      }
    }
  }
  for (const auto& row : array_field(j, "lact", "profunctor")) {
    if (!row.is_array() || row.size() != 3) fail("profunctor: lact rows are [g, elt, elt']");
    const MorId g = morphism_of(y, text(row[0], "lact"), "profunctor lact");
    const Where from = element(row[1]);
    const Where to = element(row[2]);
    const ObjId a = from.cell % nx;
    if (from.cell != y.dst(g) * nx + a || to.cell != y.src(g) * nx + a) {
      fail("profunctor: lact row " + row.dump() + " does not match the ends of " + y.morphism_name(g));
    }
    ya[g * nx + a][from.s] = to.s;
  }
  const int ny = y.num_objects();
  std::vector<std::vector<int>> xa(static_cast<std::size_t>(x.num_morphisms()) * ny);
  for (MorId f = 0; f < x.num_morphisms(); ++f) {
    for (ObjId b = 0; b < ny; ++b) {
      auto& fn = xa[f * ny + b];
      fn.assign(size(b, x.src(f)), kNone);
      if (x.is_identity(f)) {
        for (int s = 0; s < static_cast<int>(fn.size()); ++s) fn[s] = s;
      }
    }
  }
  for (const auto& row : array_field(j, "ract", "profunctor")) {
    if (!row.is_array() || row.size() != 3) fail("profunctor: ract rows are [elt, f, elt']");
    const Where from = element(row[0]);
    const MorId f = morphism_of(x, text(row[1], "ract"), "profunctor ract");
    const Where to = element(row[2]);
    const ObjId b = from.cell / nx;
    if (from.cell != b * nx + x.src(f) || to.cell != b * nx + x.dst(f)) {
      fail("profunctor: ract row " + row.dump() + " does not match the ends of " + x.morphism_name(f));
    }
    xa[f * ny + b][from.s] = to.s;
  }
  for (MorId g = 0; g < y.num_morphisms(); ++g) {
    for (ObjId a = 0; a < nx; ++a) {
      const auto& fn = ya[g * nx + a];
      for (int s = 0; s < static_cast<int>(fn.size()); ++s) {
        if (fn[s] == kNone) {
          fail("profunctor: missing lact of " + y.morphism_name(g) + " on " + names[y.dst(g) * nx + a][s]);
        }
      }
    }
  }
  for (MorId f = 0; f < x.num_morphisms(); ++f) {
    for (ObjId b = 0; b < ny; ++b) {
      const auto& fn = xa[f * ny + b];
      for (int s = 0; s < static_cast<int>(fn.size()); ++s) {
        if (fn[s] == kNone) {
          fail("profunctor: missing ract of " + x.morphism_name(f) + " on " + names[b * nx + x.src(f)][s]);
        }
      }
    }
  }
  auto p = share(Profunctor(source, target, std::move(sizes), std::move(ya), std::move(xa), std::move(names)));
  if (validate) require_valid(check_profunctor(*p), "profunctor");
  return p;
}

ProfRef Workspace::profunctor(const Json& j, bool validate) {
  if (const Json* body = lookup(j, profunctors_, "profunctor")) return profunctor(*body, validate);
  return profunctor_between(j, category(field(j, "source", "profunctor")),
                            category(field(j, "target", "profunctor")), validate);
}

Span Workspace::span(const Json& j) {
  if (const Json* body = lookup(j, spans_, "span")) return span(*body);
  Functor p = functor(field(j, "p", "span"));
  Functor q = functor(field(j, "q", "span"));
  if (p.source_ref() != q.source_ref()) {
    if (!p.source().same_tables(q.source())) fail("span: p and q have different apexes");
    q = Functor(p.source_ref(), q.target_ref(), q.object_map(), q.morphism_map());
  }
  Span s{p.source_ref(), std::move(p), std::move(q)};
  require_valid(check_span(s), "span");
  return s;
}

FinSetDiagram Workspace::diagram(const Json& j) {
  const CatRef shape = category(field(j, "shape", "diagram"));
  const FinCategory& c = *shape;
  std::vector<std::vector<std::string>> names(c.num_objects());
  for (const auto& [o, elts] : object_field(j, "values", "diagram").items()) {
    const ObjId a = object_of(c, o, "diagram values");
    for (const auto& e : elts) names[a].push_back(text(e, "diagram element"));
    if (std::set<std::string>(names[a].begin(), names[a].end()).size() != names[a].size()) {
      fail("diagram: duplicate element at \"" + o + "\"");
    }
  }
  auto index = [&](ObjId a, const std::string& e) {
    for (std::size_t i = 0; i < names[a].size(); ++i) {
      if (names[a][i] == e) return static_cast<int>(i);
    }
    fail("diagram: \"" + e + "\" is not an element at \"" + c.object_name(a) + "\"");
  };
  FinSetDiagram d{shape, {}, std::vector<std::vector<int>>(c.num_morphisms())};
  for (const auto& n : names) d.sizes.push_back(static_cast<int>(n.size()));
  std::vector<bool> given(c.num_morphisms(), false);
  for (const auto& [m, fn] : object_field(j, "maps", "diagram").items()) {
    const MorId f = morphism_of(c, m, "diagram maps");
    auto& out = d.maps[f];
    out.assign(d.sizes[c.src(f)], kNone);
    for (const auto& [e, v] : fn.items()) out[index(c.src(f), e)] = index(c.dst(f), text(v, "diagram element"));
    for (int v : out) {
      if (v == kNone) fail("diagram: map of \"" + m + "\" is not total");
    }
    given[f] = true;
  }
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    if (given[f]) continue;
    if (!c.is_identity(f)) fail("diagram: no map for \"" + c.morphism_name(f) + "\"");
    for (int s = 0; s < d.sizes[c.src(f)]; ++s) d.maps[f].push_back(s);
  }
  require_valid(check_diagram(d), "diagram");
  return d;
}

LaxSquare Workspace::square(const Json& j) {
  Functor top = functor(field(j, "top", "square"));
  Functor left = functor(field(j, "left", "square"));
  Functor right = functor(field(j, "right", "square"));
  Functor bottom = functor(field(j, "bottom", "square"));
  LaxSquare s = commuting_square(top, left, right, bottom);
  if (j.contains("cell")) {
    const FinCategory& a = top.source();
    const FinCategory& d = right.target();
    std::vector<MorId> comps(a.num_objects(), kNone);
    for (const auto& [o, m] : object_field(j, "cell", "square").items()) {
      comps[object_of(a, o, "square cell")] = morphism_of(d, text(m, "square cell"), "square cell");
    }
    for (ObjId o = 0; o < a.num_objects(); ++o) {
      if (comps[o] == kNone) fail("square: no cell component at \"" + a.object_name(o) + "\"");
    }
    s.cell.components = std::move(comps);
  }
  require_valid(check_square(s), "square");
  return s;
}

DoubleCategory Workspace::double_category(const Json& j, bool validate) {
  if (const Json* body = lookup(j, doubles_, "double category")) return double_category(*body, validate);
  DoubleCategory::Data data;
  data.vertical = category(field(j, "vertical", "double category"));
  const FinCategory& v = *data.vertical;
  std::map<std::string, HorId> hor;
  for (const auto& h : array_field(j, "horizontals", "double category")) {
    const std::string id = text(field(h, "id", "horizontal"), "horizontal id");
    if (!hor.emplace(id, static_cast<HorId>(data.horizontals.size())).second) {
      fail("double category: duplicate horizontal \"" + id + "\"");
    }
    data.horizontals.push_back({object_of(v, text(field(h, "src", "horizontal"), "src"), "horizontal"),
                                object_of(v, text(field(h, "dst", "horizontal"), "dst"), "horizontal"), id});
  }
  auto h_of = [&](const Json& n) {
    const auto it = hor.find(text(n, "horizontal"));
    if (it == hor.end()) fail("double category: unknown horizontal \"" + n.get<std::string>() + "\"");
    return it->second;
  };
  std::map<std::string, CellId> cell;
  for (const auto& c : array_field(j, "cells", "double category")) {
    const std::string id = text(field(c, "id", "cell"), "cell id");
    if (!cell.emplace(id, static_cast<CellId>(data.cells.size())).second) {
      fail("double category: duplicate cell \"" + id + "\"");
    }
    data.cells.push_back({h_of(field(c, "top", "cell")), h_of(field(c, "bottom", "cell")),
                          morphism_of(v, text(field(c, "left", "cell"), "left"), "cell"),
                          morphism_of(v, text(field(c, "right", "cell"), "right"), "cell"), id});
  }
  auto c_of = [&](const Json& n) {
    const auto it = cell.find(text(n, "cell"));
    if (it == cell.end()) fail("double category: unknown cell \"" + n.get<std::string>() + "\"");
    return it->second;
  };
  data.units.assign(v.num_objects(), kNone);
  for (const auto& [o, h] : object_field(j, "units", "double category").items()) {
    data.units[object_of(v, o, "units")] = h_of(h);
  }
  data.identity_cells.assign(data.horizontals.size(), kNone);
  for (const auto& [h, c] : object_field(j, "identity_cells", "double category").items()) {
    data.identity_cells[h_of(Json(h))] = c_of(c);
  }
  data.unit_cells.assign(v.num_morphisms(), kNone);
  for (const auto& [m, c] : object_field(j, "unit_cells", "double category").items()) {
    data.unit_cells[morphism_of(v, m, "unit_cells")] = c_of(c);
  }
  for (ObjId a = 0; a < v.num_objects(); ++a) {
    if (data.units[a] == kNone) fail("double category: no unit at \"" + v.object_name(a) + "\"");
  }
  for (std::size_t h = 0; h < data.horizontals.size(); ++h) {
    if (data.identity_cells[h] == kNone) {
      fail("double category: no identity cell for \"" + data.horizontals[h].name + "\"");
    }
  }
  for (MorId f = 0; f < v.num_morphisms(); ++f) {
    if (data.unit_cells[f] == kNone) {
      if (!v.is_identity(f)) fail("double category: no unit cell for \"" + v.morphism_name(f) + "\"");
      data.unit_cells[f] = data.identity_cells[data.units[v.src(f)]];
    }
  }
  auto triples = [&](const char* key, auto&& of, auto& out) {
    for (const auto& row : array_field(j, key, "double category")) {
      if (!row.is_array() || row.size() != 3) fail(std::string("double category: ") + key + " rows have 3 entries");
      out.emplace_back(of(row[0]), of(row[1]), of(row[2]));
    }
  };
  triples("hor_compose", h_of, data.hor_compose);
  triples("cell_vcompose", c_of, data.cell_vcompose);
  triples("cell_hcompose", c_of, data.cell_hcompose);
  try {
    DoubleCategory p(std::move(data));
    if (validate) require_valid(check_double(p), "double category");
    return p;
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    fail(std::string("double category: ") + e.what());
  }
}

InternalCategory Workspace::internal_category(const Json& j, bool validate) {
  if (const Json* body = lookup(j, internal_, "internal category")) return internal_category(*body, validate);
  InternalCategory c;
  c.site = category(field(j, "site", "internal category"));
  const FinCategory& t = *c.site;
  c.fibers.assign(t.num_objects(), nullptr);
  for (const auto& [o, body] : object_field(j, "fibers", "internal category").items()) {
    c.fibers[object_of(t, o, "fibers")] = category(body);
  }
  for (ObjId o = 0; o < t.num_objects(); ++o) {
    if (!c.fibers[o]) fail("internal category: no fiber at \"" + t.object_name(o) + "\"");
  }
  c.restrictions.assign(t.num_morphisms(), Functor());
  std::vector<bool> given(t.num_morphisms(), false);
  for (const auto& [m, body] : object_field(j, "restrictions", "internal category").items()) {
    const MorId phi = morphism_of(t, m, "restrictions");
    c.restrictions[phi] = functor_between(body, c.fibers[t.dst(phi)], c.fibers[t.src(phi)], validate);
    given[phi] = true;
  }
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    if (given[phi]) continue;
    if (!t.is_identity(phi)) fail("internal category: no restriction along \"" + t.morphism_name(phi) + "\"");
    c.restrictions[phi] = identity_functor(c.fibers[t.src(phi)]);
  }
  if (validate) require_valid(check_internal_category(c), "internal category");
  return c;
}

InternalFunctor Workspace::internal_functor(const Json& j) {
  InternalCategory x = internal_category(field(j, "source", "internal functor"));
  InternalCategory y = internal_category(field(j, "target", "internal functor"));
  if (!x.site->same_tables(*y.site)) fail("internal functor: source and target live over different sites");
  y.site = x.site;
  const FinCategory& t = *x.site;
  std::vector<Functor> comps(t.num_objects());
  std::vector<bool> given(t.num_objects(), false);
  for (const auto& [o, body] : object_field(j, "components", "internal functor").items()) {
    const ObjId l = object_of(t, o, "components");
    comps[l] = functor_between(body, x.fibers[l], y.fibers[l]);
    given[l] = true;
  }
  for (ObjId l = 0; l < t.num_objects(); ++l) {
    if (!given[l]) fail("internal functor: no component at \"" + t.object_name(l) + "\"");
  }
  try {
    return strict_internal_functor(x, y, std::move(comps));
  } catch (const Error& e) {
    fail(std::string("internal functor: ") + e.what());
  }
}

InternalProfunctor Workspace::internal_profunctor(const Json& j, bool validate) {
  InternalCategory x = internal_category(field(j, "source", "internal profunctor"));
  InternalCategory y = internal_category(field(j, "target", "internal profunctor"));
  if (!x.site->same_tables(*y.site)) fail("internal profunctor: source and target live over different sites");
  y.site = x.site;
  const FinCategory& t = *x.site;
  InternalProfunctor f{x, y, std::vector<ProfRef>(t.num_objects()), std::vector<ProfCell>(t.num_morphisms())};
  for (const auto& [o, body] : object_field(j, "fibers", "internal profunctor").items()) {
    const ObjId l = object_of(t, o, "fibers");
    f.fibers[l] = profunctor_between(body, x.fibers[l], y.fibers[l]);
  }
  for (ObjId l = 0; l < t.num_objects(); ++l) {
    if (!f.fibers[l]) fail("internal profunctor: no fiber at \"" + t.object_name(l) + "\"");
  }
  std::vector<bool> given(t.num_morphisms(), false);
  for (const auto& [m, body] : object_field(j, "restrictions", "internal profunctor").items()) {
    const MorId phi = morphism_of(t, m, "restrictions");
    const Profunctor& ft = *f.fibers[t.dst(phi)];
    const Profunctor& fs = *f.fibers[t.src(phi)];
    const Functor& rx = x.restrictions[phi];
    const Functor& ry = y.restrictions[phi];
    ProfCell cell{f.fibers[t.dst(phi)], f.fibers[t.src(phi)], rx, ry, {}};
    const int nx = ft.source().num_objects();
    cell.components.resize(static_cast<std::size_t>(ft.target().num_objects()) * nx);
    for (ObjId b = 0; b < ft.target().num_objects(); ++b) {
      for (ObjId a = 0; a < nx; ++a) {
        for (int s = 0; s < ft.size(b, a); ++s) {
          const std::string name = ft.element_name(b, a, s);
          if (!body.contains(name)) fail("internal profunctor: no restriction of \"" + name + "\" along \"" + m + "\"");
          const std::string image = text(body.at(name), "restriction");
          int found = kNone;
          for (int u = 0; u < fs.size(ry(b), rx(a)); ++u) {
            if (fs.element_name(ry(b), rx(a), u) == image) found = u;
          }
          if (found == kNone) {
            fail("internal profunctor: \"" + image + "\" is not in the restricted component of \"" + name + "\"");
          }
          cell.components[b * nx + a].push_back(found);
        }
      }
    }
    f.restrictions[phi] = std::move(cell);
    given[phi] = true;
  }
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    if (given[phi]) continue;
    if (!t.is_identity(phi)) fail("internal profunctor: no restriction along \"" + t.morphism_name(phi) + "\"");
    f.restrictions[phi] = identity_cell(f.fibers[t.src(phi)]);
  }
  if (validate) require_valid(check_internal_profunctor(f), "internal profunctor");
  return f;
}

// ---------------------------------------------------------------------------
// Writers

Json to_json(const FinCategory& c) {
  const auto on = object_names(c);
  const auto mn = morphism_names(c);
  Json out;
  out["objects"] = on;
  out["morphisms"] = Json::array();
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    out["morphisms"].push_back({{"id", mn[f]}, {"src", on[c.src(f)]}, {"dst", on[c.dst(f)]}});
  }
  out["identities"] = Json::object();
  for (ObjId a = 0; a < c.num_objects(); ++a) out["identities"][on[a]] = mn[c.id(a)];
  out["compose"] = Json::array();
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    if (c.is_identity(g)) continue;
    for (MorId f = 0; f < c.num_morphisms(); ++f) {
      if (c.is_identity(f) || c.dst(f) != c.src(g)) continue;
      out["compose"].push_back({mn[g], mn[f], mn[c.compose(g, f)]});
    }
  }
  return out;
}

Json maps_json(const Functor& f) {
  const auto so = object_names(f.source());
  const auto to = object_names(f.target());
  const auto sm = morphism_names(f.source());
  const auto tm = morphism_names(f.target());
  Json out;
  out["objects"] = Json::object();
  for (ObjId a = 0; a < f.source().num_objects(); ++a) out["objects"][so[a]] = to[f(a)];
  out["morphisms"] = Json::object();
  for (MorId m = 0; m < f.source().num_morphisms(); ++m) {
    if (!f.source().is_identity(m)) out["morphisms"][sm[m]] = tm[f.map(m)];
  }
  return out;
}

Json to_json(const Functor& f) {
  Json out = maps_json(f);
  out["source"] = to_json(f.source());
  out["target"] = to_json(f.target());
  return out;
}

Json to_json(const NatTransformation& t) {
  const auto so = object_names(t.from.source());
  const auto tm = morphism_names(t.from.target());
  Json out;
  out["components"] = Json::object();
  for (ObjId a = 0; a < static_cast<ObjId>(t.components.size()); ++a) out["components"][so[a]] = tm[t.components[a]];
  return out;
}

namespace {

std::string profunctor_element(const Profunctor& p, ObjId b, ObjId a, int s) {
  if (p.has_element_names()) return p.element_name(b, a, s);
  const auto yo = object_names(p.target());
  const auto xo = object_names(p.source());
  return yo[b] + "," + xo[a] + "#" + std::to_string(s);
}

}  // namespace

Json to_json(const Profunctor& p) {
  const FinCategory& x = p.source();
  const FinCategory& y = p.target();
  const auto xo = object_names(x);
  const auto yo = object_names(y);
  const auto xm = morphism_names(x);
  const auto ym = morphism_names(y);
  Json out;
  out["values"] = Json::object();
  for (ObjId b = 0; b < y.num_objects(); ++b) {
    for (ObjId a = 0; a < x.num_objects(); ++a) {
      Json elts = Json::array();
      for (int s = 0; s < p.size(b, a); ++s) elts.push_back(profunctor_element(p, b, a, s));
      out["values"][yo[b] + "," + xo[a]] = elts;
    }
  }
  out["lact"] = Json::array();
  for (MorId g = 0; g < y.num_morphisms(); ++g) {
    if (y.is_identity(g)) continue;
    for (ObjId a = 0; a < x.num_objects(); ++a) {
      for (int s = 0; s < p.size(y.dst(g), a); ++s) {
        out["lact"].push_back({ym[g], profunctor_element(p, y.dst(g), a, s),
                               profunctor_element(p, y.src(g), a, p.act_y(g, a, s))});
      }
    }
  }
  out["ract"] = Json::array();
  for (MorId f = 0; f < x.num_morphisms(); ++f) {
    if (x.is_identity(f)) continue;
    for (ObjId b = 0; b < y.num_objects(); ++b) {
      for (int s = 0; s < p.size(b, x.src(f)); ++s) {
        out["ract"].push_back({profunctor_element(p, b, x.src(f), s), xm[f],
                               profunctor_element(p, b, x.dst(f), p.act_x(b, f, s))});
      }
    }
  }
  out["source"] = to_json(x);
  out["target"] = to_json(y);
  return out;
}

Json to_json(const ProfCell& c) {
  const Profunctor& f = *c.source;
  const Profunctor& g = *c.target;
  Json out;
  out["components"] = Json::object();
  for (ObjId b = 0; b < f.target().num_objects(); ++b) {
    for (ObjId a = 0; a < f.source().num_objects(); ++a) {
      for (int s = 0; s < f.size(b, a); ++s) {
        out["components"][profunctor_element(f, b, a, s)] =
            profunctor_element(g, c.frame_y(b), c.frame_x(a), c.apply(b, a, s));
      }
    }
  }
  return out;
}

Json to_json(const Span& s) {
  Json out;
  out["apex"] = to_json(*s.apex);
  out["p"] = to_json(s.p);
  out["q"] = to_json(s.q);
  return out;
}

Json to_json(const DoubleCategory& p) {
  const FinCategory& v = p.vertical();
  const auto on = object_names(v);
  const auto mn = morphism_names(v);
  std::vector<std::string> hraw, craw;
  for (HorId h = 0; h < p.num_horizontals(); ++h) hraw.push_back(p.horizontal(h).name);
  for (CellId c = 0; c < p.num_cells(); ++c) craw.push_back(p.cell(c).name);
  const auto hn = unique_names(hraw, "h");
  const auto cn = unique_names(craw, "c");
  Json out;
  out["vertical"] = to_json(v);
  out["horizontals"] = Json::array();
  for (HorId h = 0; h < p.num_horizontals(); ++h) {
    out["horizontals"].push_back({{"id", hn[h]}, {"src", on[p.horizontal(h).src]}, {"dst", on[p.horizontal(h).dst]}});
  }
  out["units"] = Json::object();
  for (ObjId a = 0; a < v.num_objects(); ++a) out["units"][on[a]] = hn[p.unit(a)];
  out["cells"] = Json::array();
  for (CellId c = 0; c < p.num_cells(); ++c) {
    const auto& d = p.cell(c);
    out["cells"].push_back({{"id", cn[c]}, {"top", hn[d.top]}, {"bottom", hn[d.bottom]},
                            {"left", mn[d.left]}, {"right", mn[d.right]}});
  }
  out["identity_cells"] = Json::object();
  for (HorId h = 0; h < p.num_horizontals(); ++h) out["identity_cells"][hn[h]] = cn[p.identity_cell(h)];
  out["unit_cells"] = Json::object();
  for (MorId f = 0; f < v.num_morphisms(); ++f) out["unit_cells"][mn[f]] = cn[p.unit_cell(f)];
  auto triples = [](const auto& rows, const std::vector<std::string>& n) {
    auto sorted = rows;
    std::sort(sorted.begin(), sorted.end());
    Json a = Json::array();
    for (const auto& [x, y, z] : sorted) a.push_back({n[x], n[y], n[z]});
    return a;
  };
  out["hor_compose"] = triples(p.data().hor_compose, hn);
  out["cell_vcompose"] = triples(p.data().cell_vcompose, cn);
  out["cell_hcompose"] = triples(p.data().cell_hcompose, cn);
  return out;
}

Json to_json(const InternalCategory& c) {
  const FinCategory& t = *c.site;
  const auto on = object_names(t);
  const auto mn = morphism_names(t);
  Json out;
  out["site"] = to_json(t);
  out["fibers"] = Json::object();
  for (ObjId l = 0; l < t.num_objects(); ++l) out["fibers"][on[l]] = to_json(*c.fibers[l]);
  out["restrictions"] = Json::object();
  for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
    if (!t.is_identity(phi)) out["restrictions"][mn[phi]] = maps_json(c.restrictions[phi]);
  }
  return out;
}

Json to_json(const InternalFunctor& f) {
  const FinCategory& t = *f.source.site;
  const auto on = object_names(t);
  const auto mn = morphism_names(t);
  Json out;
  out["components"] = Json::object();
  for (ObjId l = 0; l < t.num_objects(); ++l) out["components"][on[l]] = maps_json(f.components[l]);
  out["strict"] = f.is_strict();
  if (!f.is_strict()) {
    out["naturality"] = Json::object();
    for (MorId phi = 0; phi < t.num_morphisms(); ++phi) {
      if (!t.is_identity(phi)) out["naturality"][mn[phi]] = to_json(f.naturality[phi]);
    }
  }
  return out;
}

Json to_json(const FinSetColimit& c, const FinSetDiagram& d) {
  const auto on = object_names(*d.shape);
  Json out;
  out["size"] = c.size;
  out["classes"] = Json::array();
  for (int k = 0; k < c.size; ++k) {
    Json members = Json::array();
    for (ObjId j = 0; j < static_cast<ObjId>(c.injections.size()); ++j) {
      for (int x = 0; x < static_cast<int>(c.injections[j].size()); ++x) {
        if (c.injections[j][x] == k) members.push_back({on[j], x});
      }
    }
    out["classes"].push_back(members);
  }
  return out;
}

Json to_json(const ValidationReport& r) { return {{"valid", r.valid}, {"violations", r.violations}}; }

Json to_json(const Bounds& b) {
  return {{"max_objects", b.max_objects}, {"max_functors", b.max_functors}, {"max_cocones", b.max_cocones}};
}

Bounds bounds_from_json(const Json& j, Bounds base) {
  if (!j.is_object()) fail("bounds: expected an object");
  for (const auto& [key, v] : j.items()) {
    if (!v.is_number_unsigned()) fail("bounds: \"" + key + "\" must be a non-negative integer");
    const auto n = v.get<std::size_t>();
    if (key == "max_objects") {
      base.max_objects = n;
    } else if (key == "max_functors") {
      base.max_functors = n;
    } else if (key == "max_cocones") {
      base.max_cocones = n;
    } else {
      fail("bounds: unknown key \"" + key + "\"");
    }
  }
  return base;
}

}  // namespace equip::io

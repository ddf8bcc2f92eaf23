// Command-line front door: reads JSON, runs one library check or
// construction, and prints a deterministic report.
//
// Exit codes: 0 every check passed, 1 a check failed (the report carries a
// witness), 2 malformed input or an exceeded bound.

#include <algorithm>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "equip/corpus.hpp"
#include "equip/double.hpp"
#include "equip/fibration.hpp"
#include "equip/fincat.hpp"
#include "equip/internal.hpp"
#include "equip/io.hpp"
#include "equip/kan.hpp"
#include "equip/profun.hpp"
#include "equip/span.hpp"

using namespace equip;
using io::InputError;
using io::Json;

namespace {

struct Options {
  std::string input;
  std::string probe_corpus;
  std::string bounds_file;
  std::string format = "json";
  std::optional<unsigned> seed;
  std::optional<std::size_t> sample;
  std::optional<std::size_t> max_objects, max_functors, max_cocones;
  bool initial = false;
  bool factorize = false;
  int max_size = 1;
};

struct Outcome {
  int code = 0;
  Json report = Json::object();
  std::string dot;  // filled when a DOT rendering exists
};

struct Context {
  Options opt;
  io::Workspace ws;
  Json doc;
  Bounds bounds;
  std::vector<NamedCategory> probes;
  Json inputs = Json::array();
};

// ---------------------------------------------------------------------------
// Input helpers

/// The item a command works on: doc[key] when present, else the whole document.
const Json& item(const Context& cx, const char* key) {
  if (cx.doc.contains(key)) return cx.doc.at(key);
  return cx.doc;
}

const Json& require(const Context& cx, const char* key) {
  if (!cx.doc.contains(key)) throw InputError(std::string("input needs \"") + key + "\"");
  return cx.doc.at(key);
}

std::string kind_of(const Json& j) {
  if (!j.is_object()) return "";
  if (j.contains("kind") && j.at("kind").is_string()) return j.at("kind").get<std::string>();
  if (j.contains("site")) return "internal-category";
  if (j.contains("vertical") && j.contains("horizontals")) return "double";
  if (j.contains("shape")) return "diagram";
  if (j.contains("p") && j.contains("q")) return "span";
  if (j.contains("top") && j.contains("bottom")) return "square";
  if (j.contains("source") && j.contains("fibers")) return "internal-profunctor";
  if (j.contains("source") && j.contains("components")) return "internal-functor";
  if (j.contains("values")) return "profunctor";
  if (j.contains("fixture")) return "category";
  if (j.contains("objects") && j.at("objects").is_array()) return "category";
  if (j.contains("objects") && j.at("objects").is_object()) return "functor";
  return "";
}

std::vector<NamedCategory> load_probes(Context& cx) {
  const std::string& spec = cx.opt.probe_corpus;
  std::vector<NamedCategory> out;
  if (spec.empty() || spec == "named") {
    out = named_fixtures();
  } else if (spec == "default") {
    out = default_corpus();
  } else if (spec.rfind("small:", 0) == 0) {
    out = small_corpus(std::stoi(spec.substr(6)));
  } else {
    io::Provenance prov;
    const Json doc = io::read_file(spec, &prov);
    cx.inputs.push_back({{"source", prov.source}, {"hash", prov.hash}, {"role", "probe-corpus"}});
    io::Workspace ws;
    ws.load(doc, prov);
    for (const auto& [name, c] : ws.categories()) out.push_back({name, c});
    if (out.empty()) throw InputError("probe corpus " + spec + " lists no categories");
  }
  if (cx.opt.sample && *cx.opt.sample < out.size()) {
    std::mt19937 rng(cx.opt.seed.value_or(0));
    std::shuffle(out.begin(), out.end(), rng);
    out.resize(*cx.opt.sample);
  }
  return out;
}

Json probe_names(const std::vector<NamedCategory>& probes) {
  Json a = Json::array();
  for (const auto& p : probes) a.push_back(p.name);
  return a;
}

const std::string& oname(const FinCategory& c, ObjId a) { return c.object_name(a); }
const std::string& mname(const FinCategory& c, MorId f) { return c.morphism_name(f); }

Outcome verdict(bool pass, Json result, const std::string& witness = "") {
  Outcome o;
  o.code = pass ? 0 : 1;
  o.report["verdict"] = pass ? "pass" : "fail";
  o.report["result"] = std::move(result);
  if (!pass && !witness.empty()) o.report["witness"] = witness;
  return o;
}

// ---------------------------------------------------------------------------
// DOT

std::string dot_id(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

void dot_cluster(std::ostringstream& os, const FinCategory& c, const std::string& prefix, const std::string& label) {
  os << "  subgraph " << dot_id("cluster_" + prefix) << " {\n    label=" << dot_id(label) << ";\n";
  for (ObjId a = 0; a < c.num_objects(); ++a) {
    os << "    " << dot_id(prefix + ":" + oname(c, a)) << " [label=" << dot_id(oname(c, a)) << "];\n";
  }
  for (MorId f = 0; f < c.num_morphisms(); ++f) {
    if (c.is_identity(f)) continue;
    os << "    " << dot_id(prefix + ":" + oname(c, c.src(f))) << " -> " << dot_id(prefix + ":" + oname(c, c.dst(f)))
       << " [label=" << dot_id(mname(c, f)) << "];\n";
  }
  os << "  }\n";
}

void dot_functor_edges(std::ostringstream& os, const Functor& f, const std::string& from, const std::string& to,
                       const std::string& label) {
  for (ObjId a = 0; a < f.source().num_objects(); ++a) {
    os << "  " << dot_id(from + ":" + oname(f.source(), a)) << " -> " << dot_id(to + ":" + oname(f.target(), f(a)))
       << " [style=dotted, color=gray, label=" << dot_id(label) << "];\n";
  }
}

std::string dot_category(const FinCategory& c) {
  std::ostringstream os;
  os << "digraph category {\n";
  dot_cluster(os, c, "C", "C");
  os << "}\n";
  return os.str();
}

std::string dot_functor(const Functor& f) {
  std::ostringstream os;
  os << "digraph functor {\n";
  dot_cluster(os, f.source(), "A", "source");
  dot_cluster(os, f.target(), "B", "target");
  dot_functor_edges(os, f, "A", "B", "f");
  os << "}\n";
  return os.str();
}

std::string dot_span(const Span& s) {
  std::ostringstream os;
  os << "digraph span {\n";
  dot_cluster(os, *s.apex, "E", "apex");
  dot_cluster(os, s.p.target(), "X", "x");
  dot_cluster(os, s.q.target(), "Y", "y");
  dot_functor_edges(os, s.p, "E", "X", "p");
  dot_functor_edges(os, s.q, "E", "Y", "q");
  os << "}\n";
  return os.str();
}

std::string dot_profunctor(const Profunctor& p) {
  std::ostringstream os;
  os << "digraph profunctor {\n";
  dot_cluster(os, p.source(), "X", "source");
  dot_cluster(os, p.target(), "Y", "target");
  for (ObjId b = 0; b < p.target().num_objects(); ++b) {
    for (ObjId a = 0; a < p.source().num_objects(); ++a) {
      for (int s = 0; s < p.size(b, a); ++s) {
        os << "  " << dot_id("Y:" + oname(p.target(), b)) << " -> " << dot_id("X:" + oname(p.source(), a))
           << " [style=dashed, label=" << dot_id(p.element_name(b, a, s)) << "];\n";
      }
    }
  }
  os << "}\n";
  return os.str();
}

std::string dot_factorization(const Functor& f, const ComprehensiveFactorization& cf) {
  std::ostringstream os;
  os << "digraph factorization {\n";
  dot_cluster(os, f.source(), "A", "source");
  dot_cluster(os, *cf.middle, "M", "middle");
  dot_cluster(os, f.target(), "X", "target");
  dot_functor_edges(os, cf.initial, "A", "M", "initial");
  dot_functor_edges(os, cf.fibration, "M", "X", "opfibration");
  os << "}\n";
  return os.str();
}

std::string dot_double(const DoubleCategory& p) {
  std::ostringstream os;
  os << "digraph double {\n";
  dot_cluster(os, p.vertical(), "V", "objects and vertical arrows");
  for (HorId h = 0; h < p.num_horizontals(); ++h) {
    if (p.is_unit(h)) continue;
    os << "  " << dot_id("V:" + oname(p.vertical(), p.horizontal(h).src)) << " -> "
       << dot_id("V:" + oname(p.vertical(), p.horizontal(h).dst)) << " [style=dashed, label="
       << dot_id(p.horizontal(h).name) << "];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_check(Context& cx) {
  const std::string kind = kind_of(cx.doc);
  Json result;
  bool pass = true;
  auto record = [&](const std::string& label, const ValidationReport& r) {
    result[label] = io::to_json(r);
    pass = pass && r.valid;
  };
  if (kind == "category") {
    record("category", check_category(*cx.ws.category(cx.doc, false)));
  } else if (kind == "functor") {
    record("functor", check_functor(cx.ws.functor(cx.doc, false)));
  } else if (kind == "profunctor") {
    record("profunctor", check_profunctor(*cx.ws.profunctor(cx.doc, false)));
  } else if (kind == "double") {
    record("double", check_double(cx.ws.double_category(cx.doc, false)));
  } else if (kind == "span") {
    Span s{};
    const Functor p = cx.ws.functor(cx.doc.at("p"));
    const Functor q = cx.ws.functor(cx.doc.at("q"));
    ValidationReport r;
    if (!p.source().same_tables(q.source())) {
      r.valid = false;
      r.violations.push_back("p and q have different apexes");
    } else {
      r = check_span(Span{p.source_ref(), p, Functor(p.source_ref(), q.target_ref(), q.object_map(), q.morphism_map())});
    }
    record("span", r);
  } else if (kind == "diagram") {
    record("diagram", ValidationReport{});
    cx.ws.diagram(cx.doc);
  } else if (kind == "internal-category") {
    record("internal-category", check_internal_category(cx.ws.internal_category(cx.doc, false)));
  } else if (kind == "internal-profunctor") {
    record("internal-profunctor", check_internal_profunctor(cx.ws.internal_profunctor(cx.doc, false)));
  } else {
    // A document of named sections: check every entry.
    for (const auto& [name, body] : cx.doc.value("categories", Json::object()).items()) {
      record("categories/" + name, check_category(*cx.ws.category(body, false)));
    }
    for (const auto& [name, body] : cx.doc.value("functors", Json::object()).items()) {
      record("functors/" + name, check_functor(cx.ws.functor(body, false)));
    }
    for (const auto& [name, body] : cx.doc.value("profunctors", Json::object()).items()) {
      record("profunctors/" + name, check_profunctor(*cx.ws.profunctor(body, false)));
    }
    for (const auto& [name, body] : cx.doc.value("internal", Json::object()).items()) {
      record("internal/" + name, check_internal_category(cx.ws.internal_category(body, false)));
    }
    if (result.is_null()) throw InputError("check: nothing to check (unrecognized document)");
  }
  std::string witness;
  for (const auto& [label, r] : result.items()) {
    if (!r.at("valid").get<bool>() && witness.empty()) witness = label + ": " + r.at("violations")[0].get<std::string>();
  }
  return verdict(pass, result, witness);
}

Outcome cmd_equipment(Context& cx) {
  if (kind_of(cx.doc) == "double") {
    const DoubleCategory p = cx.ws.double_category(cx.doc, false);
    const auto valid = check_double(p);
    const auto cert = is_equipment(p);
    Json result{{"double", io::to_json(valid)}, {"equipment", cert.holds}};
    std::string witness;
    if (!cert) witness = "vertical " + mname(p.vertical(), cert.failing) + ": no " + cert.missing;
    return verdict(valid.valid && cert.holds, result, witness);
  }
  CatEquipmentSpec spec;
  for (const auto& [name, c] : cx.ws.categories()) spec.objects.push_back(c);
  for (const auto& [name, body] : cx.doc.value("functors", Json::object()).items()) {
    spec.generators.push_back(cx.ws.functor(Json(name)));
  }
  spec.all_functors = cx.doc.value("all_functors", false);
  if (spec.objects.empty()) throw InputError("equipment: the document lists no categories");
  const CatEquipment e = build_cat_equipment(spec, cx.bounds);
  const auto valid = check_double(e.dbl);
  const auto cert = is_equipment(e.dbl);
  Json result;
  result["double"] = io::to_json(valid);
  result["equipment"] = cert.holds;
  result["horizontals"] = e.dbl.num_horizontals();
  result["cells"] = e.dbl.num_cells();
  result["verticals"] = static_cast<int>(e.verticals.size());
  bool triangles = true;
  Json gens = Json::object();
  for (const auto& [name, body] : cx.doc.value("functors", Json::object()).items()) {
    const Functor f = cx.ws.functor(Json(name));
    const auto comp = check_companion_triangles(f, companion_of(f));
    const auto conj = check_conjoint_triangles(f, conjoint_of(f));
    gens[name] = {{"companion_triangles", static_cast<bool>(comp)}, {"conjoint_triangles", static_cast<bool>(conj)}};
    triangles = triangles && comp && conj;
  }
  result["generators"] = gens;
  std::string witness;
  if (!valid.valid) witness = valid.violations.front();
  if (!cert) witness = "vertical " + mname(e.dbl.vertical(), cert.failing) + ": no " + cert.missing;
  if (!triangles && witness.empty()) witness = "a triangle identity fails";
  Outcome o = verdict(valid.valid && cert.holds && triangles, result, witness);
  o.dot = dot_double(e.dbl);
  return o;
}

Outcome cmd_tabulate(Context& cx) {
  const ProfRef f = cx.ws.profunctor(item(cx, "profunctor"));
  const TabulatorSpan t = tabulate(f);
  const TabulatorCheck check = verify_tabulator(t, cx.probes, cx.bounds);
  const Extension c = classify(t.span);
  const bool reflective = is_invertible(reflection_counit(t, c));
  Json result;
  result["span"] = io::to_json(t.span);
  result["elements"] = Json::array();
  for (const auto& el : t.elements) {
    result["elements"].push_back(
        {oname(f->source(), el.a), oname(f->target(), el.b), f->element_name(el.b, el.a, el.s)});
  }
  result["universal"] = {{"holds", check.holds}, {"cells", check.cells}, {"functors", check.functors}};
  result["probes"] = probe_names(cx.probes);
  result["classify_tabulate_iso"] = reflective;
  std::string witness;
  if (!check.holds) witness = "probe " + check.probe + ": cells and functors do not correspond";
  if (!reflective && witness.empty()) witness = "classify(tabulate F) → F is not invertible";
  Outcome o = verdict(check.holds && reflective, result, witness);
  o.dot = dot_span(t.span);
  return o;
}

Json tsdfib_json(const TsdFibReport& r) {
  return {{"holds", r.holds},       {"regular", r.regular}, {"conservative", r.conservative},
          {"discrete_fibers", r.discrete_fibers}, {"left", r.left}, {"right", r.right},
          {"agree", r.agree},       {"witness", r.witness}};
}

Outcome cmd_classify(Context& cx) {
  const Span s = cx.ws.span(item(cx, "span"));
  const Extension c = classify(s);
  Json result;
  result["profunctor"] = io::to_json(*c.proarrow);
  result["tsdfib"] = tsdfib_json(is_tsdfib(s));
  Outcome o = verdict(true, result);
  o.dot = dot_profunctor(*c.proarrow);
  return o;
}

Outcome cmd_comma(Context& cx) {
  const Functor f = cx.ws.functor(require(cx, "f"));
  const Functor g = cx.ws.functor(require(cx, "g"));
  if (!f.target().same_tables(g.target())) throw InputError("comma: f and g have different targets");
  const Functor g2(g.source_ref(), f.target_ref(), g.object_map(), g.morphism_map());
  const CommaCategory k = comma(f, g2);
  Json result;
  result["category"] = io::to_json(*k.category);
  result["objects"] = Json::array();
  for (const auto& o : k.objects) {
    result["objects"].push_back(
        {oname(f.source(), o.a), oname(g.source(), o.b), mname(f.target(), o.theta)});
  }
  result["proj_a"] = io::maps_json(k.proj_a);
  result["proj_b"] = io::maps_json(k.proj_b);
  Outcome o = verdict(true, result);
  o.dot = dot_category(*k.category);
  return o;
}

Outcome cmd_factorize(Context& cx) {
  const Functor f = cx.ws.functor(item(cx, "functor"));
  const ComprehensiveFactorization cf = comprehensive_factorization(f);
  const FinalityVerdict initial = is_initial(cf.initial);
  const bool opfib = is_discrete_opfibration(cf.fibration);
  const bool composite = compose(cf.fibration, cf.initial) == f;
  Json result;
  result["middle"] = io::to_json(*cf.middle);
  result["initial"] = io::maps_json(cf.initial);
  result["opfibration"] = io::maps_json(cf.fibration);
  result["checks"] = {{"initial", initial.holds}, {"discrete_opfibration", opfib}, {"composite", composite}};
  std::string witness;
  if (!initial) witness = "initial part: j=" + oname(cf.initial.target(), initial.witness) + ": " + initial.reason;
  if (!opfib && witness.empty()) witness = "second part is not a discrete opfibration";
  if (!composite && witness.empty()) witness = "composite differs from f";
  Outcome o = verdict(initial.holds && opfib && composite, result, witness);
  o.dot = dot_factorization(f, cf);
  return o;
}

Outcome cmd_kan(Context& cx) {
  const Functor f = cx.ws.functor(require(cx, "f"));
  const Functor w = cx.ws.functor(require(cx, "w"));
  if (!f.source().same_tables(w.source())) throw InputError("kan: f and w have different sources");
  const Functor w2(f.source_ref(), w.target_ref(), w.object_map(), w.morphism_map());
  const KanExtension k = pointwise_lke(f, w2, cx.bounds);
  Json result;
  if (!k) {
    result["failing"] = oname(w.target(), k.failing);
    return verdict(false, result, "j=" + oname(w.target(), k.failing) + ": " + k.witness);
  }
  result["extension"] = io::maps_json(*k.extension);
  result["unit"] = io::to_json(*k.unit);
  const bool pointwise = check_pointwise_lke(f, w2, *k.extension, *k.unit, cx.bounds);
  const bool global = check_lke(f, w2, *k.extension, *k.unit, cx.bounds);
  result["certificate"] = {{"pointwise", pointwise}, {"universal", global}};
  return verdict(pointwise && global, result, "certificate failed");
}

Outcome cmd_colimit(Context& cx) {
  const Json& j = item(cx, "diagram");
  if (kind_of(j) == "diagram") {
    const FinSetDiagram d = cx.ws.diagram(j);
    const FinSetColimit c = colimit_finset(d);
    const bool certified = certify_colimit(d, c, cx.bounds);
    Json result = io::to_json(c, d);
    result["certified"] = certified;
    return verdict(certified, result, "colimit failed certification");
  }
  const Functor f = cx.ws.functor(j);
  const auto c = colimit(f, cx.bounds);
  Json result;
  if (!c) return verdict(false, result, "no colimit in " + std::string("the target category"));
  result["apex"] = oname(f.target(), c->cocone.apex);
  result["legs"] = Json::object();
  for (ObjId i = 0; i < f.source().num_objects(); ++i) {
    result["legs"][oname(f.source(), i)] = mname(f.target(), c->cocone.legs[i]);
  }
  result["certificate"] = {{"universal", c->certificate.universal}, {"cocones", c->certificate.cocones}};
  return verdict(c->certificate.universal, result, "colimit failed certification");
}

Outcome cmd_final(Context& cx) {
  const Functor f = cx.ws.functor(item(cx, "functor"));
  const FinalityVerdict v = cx.opt.initial ? is_initial(f) : is_final(f);
  Json result{{"property", cx.opt.initial ? "initial" : "final"}, {"holds", v.holds}};
  if (!v) result["failing"] = oname(f.target(), v.witness);
  return verdict(v.holds, result, v ? "" : "j=" + oname(f.target(), v.witness) + ": " + v.reason);
}

Json rectangle_json(const ProperReport& r) {
  Json out{{"holds", r.holds}, {"rectangles", r.rectangles}};
  if (r.failing) {
    out["failing"] = {{"w", io::to_json(r.failing->w)}, {"k", io::maps_json(r.failing->k)}};
    out["witness"] = r.witness;
  }
  return out;
}

Outcome cmd_exact(Context& cx) {
  if (cx.doc.contains("proper") || cx.doc.contains("smooth")) {
    const bool proper = cx.doc.contains("proper");
    const Functor f = cx.ws.functor(cx.doc.at(proper ? "proper" : "smooth"));
    const auto family = rectangle_family(f, cx.probes, cx.bounds);
    const ProperReport r = proper ? check_proper(f, family) : check_smooth(f, family);
    Json result = rectangle_json(r);
    result["property"] = proper ? "proper" : "smooth";
    result["probes"] = probe_names(cx.probes);
    return verdict(r.holds, result, r.witness);
  }
  const LaxSquare s = cx.ws.square(item(cx, "square"));
  const ExactSquareVerdict v = is_exact_square(s);
  Json result{{"exact", v.exact}, {"comparison", io::to_json(v.comparison)}};
  std::string witness;
  if (!v) {
    witness = "b=" + oname(s.right.source(), v.b) + ",c=" + oname(s.bottom.source(), v.c) + ": " + v.witness;
  }
  return verdict(v.exact, result, witness);
}

Outcome cmd_span_double(Context& cx) {
  const CatRef c = cx.ws.category(item(cx, "category"));
  try {
    const SpanDoubleCat d = build_span_double(c, cx.bounds);
    const auto valid = check_double(d.dbl);
    const auto cert = is_equipment(d.dbl);
    Json result{{"double", io::to_json(valid)}, {"equipment", cert.holds}, {"span_double", io::to_json(d.dbl)}};
    std::string witness;
    if (!valid.valid) witness = valid.violations.front();
    if (!cert) witness = "vertical " + mname(*c, cert.failing) + ": no " + cert.missing;
    Outcome o = verdict(valid.valid && cert.holds, result, witness);
    o.dot = dot_double(d.dbl);
    return o;
  } catch (const MissingPullback& e) {
    Json result{{"pullbacks", false}, {"cospan", {mname(*c, e.f), mname(*c, e.g)}}};
    return verdict(false, result, "no pullback of (" + mname(*c, e.f) + ", " + mname(*c, e.g) + ")");
  }
}

Json recognition_json(const SpanRecognition& r) {
  return {{"a", {{"equipment", r.equipment},
                 {"tabular", r.tabular},
                 {"pullbacks", r.pullbacks},
                 {"tabulators_cocartesian", r.tabulators_cocartesian},
                 {"composites_cocartesian", r.composites_cocartesian},
                 {"holds", r.fibrational},
                 {"witness", r.witness_a}}},
          {"b", {{"holds", r.spans_discrete}, {"spans_checked", r.spans_checked}, {"witness", r.witness_b}}},
          {"c", {{"strict", r.strict},
                 {"bijective_on_cells", r.bijective_on_cells},
                 {"essentially_surjective", r.essentially_surjective},
                 {"holds", r.representation},
                 {"witness", r.witness_c}}},
          {"consistent", r.consistent}};
}

Outcome recognition_outcome(const SpanRecognition& r) {
  std::string witness;
  if (!r.fibrational) witness = "(a): " + r.witness_a;
  else if (!r.spans_discrete) witness = "(b): " + r.witness_b;
  else if (!r.representation) witness = "(c): " + r.witness_c;
  return verdict(r.fibrational && r.spans_discrete && r.representation, recognition_json(r), witness);
}

Outcome cmd_recognize_span(Context& cx) {
  if (cx.doc.contains("cat_equipment")) {
    const int max_size = cx.doc.at("cat_equipment").value("max_size", cx.opt.max_size);
    Outcome o = recognition_outcome(recognize_cat_span(cx.probes, cx.probes, max_size, cx.bounds));
    o.report["result"]["probes"] = probe_names(cx.probes);
    return o;
  }
  const Json& j = item(cx, "double");
  if (kind_of(j) == "double") return recognition_outcome(recognize_span(cx.ws.double_category(j), cx.bounds));
  const CatRef c = cx.ws.category(item(cx, "category"));
  try {
    const SpanDoubleCat d = build_span_double(c, cx.bounds);
    return recognition_outcome(recognize_span(d.dbl, cx.bounds));
  } catch (const MissingPullback& e) {
    Json result{{"pullbacks", false}};
    return verdict(false, result, "(a): no pullback of (" + mname(*c, e.f) + ", " + mname(*c, e.g) + ")");
  }
}

Outcome cmd_dot(Context& cx) {
  const std::string kind = kind_of(cx.doc);
  Outcome o;
  if (kind == "category") {
    o.dot = dot_category(*cx.ws.category(cx.doc));
  } else if (kind == "functor" && cx.opt.factorize) {
    const Functor f = cx.ws.functor(cx.doc);
    o.dot = dot_factorization(f, comprehensive_factorization(f));
  } else if (kind == "functor") {
    o.dot = dot_functor(cx.ws.functor(cx.doc));
  } else if (kind == "span") {
    o.dot = dot_span(cx.ws.span(cx.doc));
  } else if (kind == "profunctor") {
    o.dot = dot_profunctor(*cx.ws.profunctor(cx.doc));
  } else if (kind == "double") {
    o.dot = dot_double(cx.ws.double_category(cx.doc));
  } else {
    throw InputError("dot: cannot render this document");
  }
  o.report["verdict"] = "pass";
  o.report["result"] = {{"kind", kind}};
  return o;
}

// --- internal ---------------------------------------------------------------

Json witness_json(const InternalWitness& w, const InternalCategory& target) {
  const FinCategory& t = *target.site;
  Json out{{"reason", w.reason}};
  if (w.t != kNone) out["t"] = oname(t, w.t);
  if (w.phi != kNone) out["phi"] = mname(t, w.phi);
  if (w.t != kNone && w.object != kNone) out["object"] = oname(*target.fibers[w.t], w.object);
  return out;
}

std::string witness_text(const InternalWitness& w, const InternalCategory& target) {
  const FinCategory& t = *target.site;
  std::string s = "t=" + oname(t, w.t);
  if (w.phi != kNone) s += ",phi=" + mname(t, w.phi);
  if (w.object != kNone) s += ",x=" + oname(*target.fibers[w.t], w.object);
  return s + ": " + w.reason;
}

Outcome cmd_internal_check(Context& cx) {
  const std::string kind = kind_of(cx.doc);
  ValidationReport r;
  if (kind == "internal-category") {
    r = check_internal_category(cx.ws.internal_category(cx.doc, false));
  } else if (kind == "internal-profunctor") {
    r = check_internal_profunctor(cx.ws.internal_profunctor(cx.doc, false));
  } else if (kind == "internal-functor") {
    r = check_internal_functor(cx.ws.internal_functor(cx.doc));
  } else {
    throw InputError("internal check: expected an internal category, functor or profunctor");
  }
  return verdict(r.valid, io::to_json(r), r.valid ? "" : r.violations.front());
}

Outcome cmd_internal_companion(Context& cx, bool conjoint) {
  const InternalProfunctor f = cx.ws.internal_profunctor(item(cx, "profunctor"), false);
  std::optional<GroupoidalCover> cover;
  if (cx.doc.contains("cover")) {
    GroupoidalCover c;
    const FinCategory& t = *f.source.site;
    for (const auto& m : cx.doc.at("cover")) {
      if (!m.is_array() || m.size() != 2) throw InputError("cover members are [t, x]");
      const auto l = t.find_object(m[0].get<std::string>());
      if (!l) throw InputError("cover: unknown site object " + m[0].dump());
      const auto x = f.source.fibers[*l]->find_object(m[1].get<std::string>());
      if (!x) throw InputError("cover: unknown fiber object " + m[1].dump());
      c.members.emplace_back(*l, *x);
    }
    if (!is_valid_cover(f.source, c)) throw InputError("cover does not reach every object");
    cover = c;
  }
  const InternalCompanionVerdict v = conjoint ? (cover ? internal_conjoint(f, *cover) : internal_conjoint(f))
                                              : (cover ? internal_companion(f, *cover) : internal_companion(f));
  Json result{{"holds", v.holds}, {"certified", v.certified}, {"role", conjoint ? "conjoint" : "companion"}};
  if (v.functor) result["functor"] = io::to_json(*v.functor);
  if (!v) {
    const InternalCategory& at = conjoint ? f.target : f.source;
    InternalWitness w{v.t, v.object, v.phi, v.witness};
    if (v.t != kNone && v.object != kNone && v.object >= at.fibers[v.t]->num_objects()) w.object = kNone;
    result["failure"] = v.t == kNone ? Json{{"reason", v.witness}} : witness_json(w, at);
    return verdict(false, result, v.t == kNone ? v.witness : witness_text(w, at));
  }
  return verdict(v.certified, result, "companion certificate failed");
}

Outcome cmd_internal_final(Context& cx) {
  const InternalFunctor f = cx.ws.internal_functor(item(cx, "functor"));
  const InternalFinality v = internal_is_final(f);
  Json failures = Json::array();
  for (const auto& w : v.failures) failures.push_back(witness_json(w, f.target));
  return verdict(v.holds, {{"holds", v.holds}, {"failures", failures}},
                 v ? "" : witness_text(v.failures.front(), f.target));
}

Outcome cmd_internal_kan(Context& cx) {
  const InternalFunctor f = cx.ws.internal_functor(require(cx, "f"));
  const InternalFunctor w = cx.ws.internal_functor(require(cx, "w"));
  const InternalKan k = internal_lke(f, w, cx.bounds);
  if (!k) return verdict(false, {{"failure", witness_json(k.failure, w.target)}}, witness_text(k.failure, w.target));
  Json units = Json::object();
  for (ObjId l = 0; l < static_cast<ObjId>(k.unit.size()); ++l) units[oname(*f.source.site, l)] = io::to_json(k.unit[l]);
  return verdict(true, {{"extension", io::to_json(*k.extension)}, {"unit", units}});
}

Outcome cmd_internal_ff(Context& cx) {
  const InternalFunctor f = cx.ws.internal_functor(item(cx, "functor"));
  const InternalFullyFaithful v = internal_fully_faithful(f);
  Json result{{"holds", v.holds}};
  std::string witness;
  if (!v) {
    const FinCategory& c = *f.source.fibers[v.t];
    result["failure"] = {{"t", oname(*f.source.site, v.t)}, {"a", oname(c, v.a)}, {"b", oname(c, v.b)},
                         {"reason", v.reason}};
    witness = "t=" + oname(*f.source.site, v.t) + ",a=" + oname(c, v.a) + ",b=" + oname(c, v.b) + ": " + v.reason;
  }
  return verdict(v.holds, result, witness);
}

// ---------------------------------------------------------------------------

std::string render_text(const Json& report) {
  std::ostringstream os;
  for (const char* key : {"command", "verdict", "witness", "error"}) {
    if (report.contains(key)) os << key << ": " << report.at(key).get<std::string>() << "\n";
  }
  if (report.contains("bounds")) {
    const auto& b = report.at("bounds");
    os << "bounds: max-objects=" << b.at("max_objects") << " max-functors=" << b.at("max_functors")
       << " max-cocones=" << b.at("max_cocones") << "\n";
  }
  if (report.contains("result")) {
    for (const auto& [key, value] : report.at("result").items()) {
      os << "  " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    }
  }
  return os.str();
}

std::string flag_of(const std::string& bound) { return "--" + bound; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite formal category theory: checks and constructions over JSON inputs"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  std::string positional;
  app.add_option("--input", opt.input, "input JSON file");
  app.add_option("--probe-corpus", opt.probe_corpus, "probe categories: file, or named | default | small:N");
  app.add_option("--bounds", opt.bounds_file, "JSON file with max_objects / max_functors / max_cocones");
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "text", "dot"}));
  app.add_option("--seed", opt.seed, "seed for --sample");
  app.add_option("--sample", opt.sample, "use a seeded random sample of this many probes");
  app.add_option("--max-objects", opt.max_objects, "bound on constructed categories");
  app.add_option("--max-functors", opt.max_functors, "bound on functor enumeration");
  app.add_option("--max-cocones", opt.max_cocones, "bound on cocone and cell enumeration");
  app.add_option("--max-size", opt.max_size, "value-set bound for profunctor enumeration")->check(CLI::Range(0, 3));

  using Handler = std::function<Outcome(Context&)>;
  std::vector<std::pair<CLI::App*, Handler>> handlers;
  auto add = [&](CLI::App* parent, const std::string& name, const std::string& help, Handler h) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->add_option("file", positional, "input JSON file");
    handlers.emplace_back(sub, std::move(h));
    return sub;
  };
  add(&app, "check", "category, functor, profunctor, span, double or internal axioms", cmd_check);
  add(&app, "equipment", "materialize the Cat equipment fragment and check companions and conjoints", cmd_equipment);
  add(&app, "tabulate", "two-sided category of elements of a profunctor", cmd_tabulate);
  add(&app, "classify", "profunctor classified by a span", cmd_classify);
  add(&app, "comma", "comma category of {\"f\", \"g\"}", cmd_comma);
  add(&app, "factorize", "comprehensive (initial, discrete opfibration) factorization", cmd_factorize);
  add(&app, "kan", "pointwise left Kan extension of {\"f\", \"w\"}", cmd_kan);
  add(&app, "colimit", "colimit of a FinSet diagram or of a functor", cmd_colimit);
  add(&app, "final", "finality by the comma criterion", cmd_final)
      ->add_flag("--initial", opt.initial, "check initiality instead");
  add(&app, "exact", "exactness of a lax square, or {\"proper\": f} / {\"smooth\": f}", cmd_exact);
  add(&app, "span-double", "span double category of a category with pullbacks", cmd_span_double);
  add(&app, "recognize-span", "span recognition on a double category, a category, or the Cat equipment",
      cmd_recognize_span);
  add(&app, "dot", "DOT rendering of a category, functor, span, profunctor or double category", cmd_dot)
      ->add_flag("--factorize", opt.factorize, "render the comprehensive factorization of a functor");

  CLI::App* internal = app.add_subcommand("internal", "categories internal to presheaves on a finite site");
  internal->require_subcommand(1);
  add(internal, "check", "internal category, functor or profunctor axioms", cmd_internal_check);
  add(internal, "companion", "is an internal profunctor a companion", [](Context& cx) {
    return cmd_internal_companion(cx, false);
  });
  add(internal, "conjoint", "is an internal profunctor a conjoint", [](Context& cx) {
    return cmd_internal_companion(cx, true);
  });
  add(internal, "final", "internal finality", cmd_internal_final);
  add(internal, "kan", "internal left Kan extension of {\"f\", \"w\"}", cmd_internal_kan);
  add(internal, "fully-faithful", "internal full faithfulness", cmd_internal_ff);

  CLI11_PARSE(app, argc, argv);

  std::string command;
  const Handler* handler = nullptr;
  for (const auto& [sub, h] : handlers) {
    if (sub->parsed()) {
      handler = &h;
      command = (sub->get_parent() == internal ? "internal " : "") + sub->get_name();
    }
  }

  Context cx;
  cx.opt = opt;
  Outcome out;
  Json report;
  report["command"] = command;
  try {
    const std::string file = !positional.empty() ? positional : opt.input;
    if (file.empty()) throw InputError("no input file (positional argument or --input)");
    if (!opt.bounds_file.empty()) cx.bounds = io::bounds_from_json(io::read_file(opt.bounds_file));
    if (opt.max_objects) cx.bounds.max_objects = *opt.max_objects;
    if (opt.max_functors) cx.bounds.max_functors = *opt.max_functors;
    if (opt.max_cocones) cx.bounds.max_cocones = *opt.max_cocones;
    io::Provenance prov;
    cx.doc = io::read_file(file, &prov);
    cx.inputs.push_back({{"source", prov.source}, {"hash", prov.hash}, {"role", "input"}});
    cx.ws.load(cx.doc, prov);
    cx.probes = load_probes(cx);
    out = (*handler)(cx);
  } catch (const BoundExceeded& e) {
    out = Outcome{2, {{"error", "bound exceeded: " + flag_of(e.bound()) + " (limit " + std::to_string(e.limit()) + ")"}}, ""};
  } catch (const InputError& e) {
    out = Outcome{2, {{"error", e.what()}}, ""};
  } catch (const nlohmann::json::exception& e) {
    out = Outcome{2, {{"error", std::string("ill-typed JSON: ") + e.what()}}, ""};
  } catch (const Error& e) {
    out = Outcome{2, {{"error", e.what()}}, ""};
  }
  for (const auto& [key, value] : out.report.items()) report[key] = value;
  report["exit"] = out.code;
  report["bounds"] = io::to_json(cx.bounds);
  report["inputs"] = cx.inputs;
  if (opt.seed) report["seed"] = *opt.seed;

  if (opt.format == "dot") {
    if (out.code == 2) {
      std::cerr << report.at("error").get<std::string>() << "\n";
    } else if (out.dot.empty()) {
      std::cerr << "no DOT rendering for " << command << "\n";
      return 2;
    } else {
      std::cout << out.dot;
    }
  } else if (opt.format == "text") {
    std::cout << render_text(report);
  } else {
    std::cout << report.dump(2) << "\n";
  }
  if (out.code == 2 && opt.format != "dot") std::cerr << report.at("error").get<std::string>() << "\n";
  return out.code;
}

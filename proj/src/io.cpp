#include "stablab/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stablab/error.hpp"

namespace stablab::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::int64_t as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where + ": expected an integer");
  return j.get<std::int64_t>();
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + ": expected a number");
  return j.get<double>();
}

ObjectExpr parse_summands(const CategoryModel& m, const json& j, const std::string& where) {
  if (j.is_string()) return m.parse_object(j.get<std::string>());
  if (!j.is_array()) bad(where + ": expected a summand list");
  std::vector<IndecomposableRef> refs;
  for (const auto& s : j) {
    if (!s.is_string()) bad(where + ": summands are strings");
    refs.push_back(m.parse_ref(s.get<std::string>()));
  }
  return ObjectExpr(std::move(refs));
}

json summands_json(const CategoryModel& m, const ObjectExpr& e) {
  json out = json::array();
  for (const auto& r : e.summands()) out.push_back(m.ref_name(r));
  return out;
}

std::string file_location(const std::string& path, const json::parse_error& e) {
  return path + " at byte " + std::to_string(e.byte) + ": " + e.what();
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad(file_location(path, e));
  }
}

CategoryModel parse_model(const json& j) {
  CategoryModel m;
  if (!j.is_object()) bad("model: expected an object");
  m.name = j.value("name", std::string("model"));
  m.lattice_rank = static_cast<int>(as_int(field(j, "lattice_rank", "model"), "lattice_rank"));

  const json& inds = field(j, "indecomposables", "model");
  if (!inds.is_array()) bad("indecomposables: expected an array");
  for (std::size_t i = 0; i < inds.size(); ++i) {
    const std::string where = "indecomposables[" + std::to_string(i) + "]";
    Indecomposable ind;
    ind.id = field(inds[i], "id", where).get<std::string>();
    ind.name = inds[i].value("name", ind.id);
    for (const auto& c : field(inds[i], "class", where)) ind.cls.push_back(as_int(c, where + ".class"));
    if (inds[i].contains("rep")) {
      const json& r = inds[i]["rep"];
      QuiverRep rep;
      for (const auto& d : field(r, "dims", where + ".rep")) rep.dims.push_back(static_cast<int>(as_int(d, where)));
      for (const auto& mat : field(r, "maps", where + ".rep")) {
        std::vector<std::uint32_t> rows;
        for (const auto& row : mat) rows.push_back(static_cast<std::uint32_t>(as_int(row, where + ".rep.maps")));
        rep.maps.push_back(std::move(rows));
      }
      ind.rep = std::move(rep);
    }
    m.indecomposables.push_back(std::move(ind));
  }

  if (j.contains("quiver")) {
    Quiver q;
    q.vertices = static_cast<int>(as_int(field(j["quiver"], "vertices", "quiver"), "quiver.vertices"));
    for (const auto& a : field(j["quiver"], "arrows", "quiver")) {
      if (!a.is_array() || a.size() != 2) bad("quiver.arrows: expected [source, target]");
      q.arrows.emplace_back(static_cast<int>(as_int(a[0], "arrow")), static_cast<int>(as_int(a[1], "arrow")));
    }
    m.quiver = q;
  }

  for (const auto& t : j.value("triangles", json::array())) {
    if (!t.is_array() || t.size() != 3) bad("triangles: expected [a, b, c]");
    m.triangles.push_back(
        Triangle{parse_summands(m, t[0], "triangle"), parse_summands(m, t[1], "triangle"), parse_summands(m, t[2], "triangle")}
            .canonical());
  }
  for (const auto& h : j.value("hom", json::array())) {
    if (!h.is_array() || h.size() != 3 || !h[0].is_string() || !h[1].is_string() || !h[2].is_boolean())
      bad("hom: expected [\"id@shift\", \"id\", flag]");
    if (!h[2].get<bool>()) continue;
    IndecomposableRef a = m.parse_ref(h[0].get<std::string>());
    IndecomposableRef b = m.parse_ref(h[1].get<std::string>());
    m.hom.insert({a.base, a.shift - b.shift, b.base});
  }
  for (const auto& s : j.value("standard_heart", json::array())) m.standard_heart.push_back(m.parse_ref(s.get<std::string>()));
  if (j.contains("max_hn_length")) m.max_hn_length = static_cast<std::size_t>(as_int(j["max_hn_length"], "max_hn_length"));
  if (j.contains("atlas_cap")) m.atlas_cap = static_cast<std::size_t>(as_int(j["atlas_cap"], "atlas_cap"));
  if (j.contains("atlas_span")) m.atlas_span = static_cast<int>(as_int(j["atlas_span"], "atlas_span"));
  if (j.contains("axiom_shift_window"))
    m.axiom_shift_window = static_cast<int>(as_int(j["axiom_shift_window"], "axiom_shift_window"));
  return m;
}

json model_to_json(const CategoryModel& m) {
  json j;
  j["name"] = m.name;
  j["lattice_rank"] = m.lattice_rank;
  j["max_hn_length"] = m.max_hn_length;
  json inds = json::array();
  for (const auto& ind : m.indecomposables) {
    json e{{"id", ind.id}, {"name", ind.name}, {"class", ind.cls}};
    if (ind.rep) e["rep"] = {{"dims", ind.rep->dims}, {"maps", ind.rep->maps}};
    inds.push_back(e);
  }
  j["indecomposables"] = inds;
  if (m.quiver) {
    json arrows = json::array();
    for (auto [s, t] : m.quiver->arrows) arrows.push_back({s, t});
    j["quiver"] = {{"vertices", m.quiver->vertices}, {"arrows", arrows}};
  }
  json tris = json::array();
  for (const auto& t : m.triangles) tris.push_back({summands_json(m, t.a), summands_json(m, t.b), summands_json(m, t.c)});
  j["triangles"] = tris;
  json hom = json::array();
  for (const auto& [u, d, v] : m.hom)
    hom.push_back({m.indecomposables[u].id + "@" + std::to_string(d), m.indecomposables[v].id, true});
  j["hom"] = hom;
  if (!m.standard_heart.empty()) {
    json sh = json::array();
    for (const auto& r : m.standard_heart) sh.push_back(m.ref_name(r));
    j["standard_heart"] = sh;
  }
  return j;
}

ModelPtr load_model(const std::string& path) { return finalize_model(parse_model(read_json_file(path))); }

ComplexValue parse_complex(const json& j) {
  if (!j.is_array()) bad("charge: expected an array");
  if (j.size() == 4) {
    for (const auto& x : j)
      if (!x.is_number_integer()) bad("charge: exact components are integers [re_num, re_den, im_num, im_den]");
    if (j[1].get<std::int64_t>() == 0 || j[3].get<std::int64_t>() == 0) bad("charge: zero denominator");
    return {Rational(j[0].get<std::int64_t>(), j[1].get<std::int64_t>()),
            Rational(j[2].get<std::int64_t>(), j[3].get<std::int64_t>())};
  }
  if (j.size() == 2) return ComplexValue(std::complex<double>(as_number(j[0], "charge"), as_number(j[1], "charge")));
  bad("charge: expected 4 integers or 2 numbers");
}

json complex_to_json(const ComplexValue& z) {
  if (z.exact())
    return json::array({z.re_exact().num(), z.re_exact().den(), z.im_exact().num(), z.im_exact().den()});
  return json::array({z.real(), z.imag()});
}

std::string heart_name(const CategoryModel& model, const Heart& heart) {
  auto id = model.atlas.resolve(heart);
  if (!id) throw Error(ErrorKind::HeartNotResolvable, "heart is not in the atlas");
  std::string s = "H" + std::to_string(id->index);
  if (id->shift != 0) s += "[" + std::to_string(id->shift) + "]";
  return s;
}

Heart parse_heart(const CategoryModel& model, const json& j) {
  if (j.is_array()) {
    std::vector<IndecomposableRef> members;
    for (const auto& s : j) {
      if (!s.is_string()) bad("heart: member list holds object names");
      members.push_back(model.parse_ref(s.get<std::string>()));
    }
    Heart h = make_heart(model, members);
    auto id = model.atlas.resolve(h);
    if (!id) throw Error(ErrorKind::HeartNotResolvable, "heart is not in the atlas");
    return model.atlas.heart(*id);
  }
  if (!j.is_string()) bad("heart: expected \"H<k>\", \"H<k>[s]\" or a member list");
  const std::string s = j.get<std::string>();
  std::size_t index = 0;
  int shift = 0;
  try {
    if (s.size() < 2 || s[0] != 'H') throw std::invalid_argument(s);
    std::size_t used = 0;
    index = std::stoul(s.substr(1), &used);
    std::string rest = s.substr(1 + used);
    if (!rest.empty()) {
      if (rest.front() != '[' || rest.back() != ']') throw std::invalid_argument(s);
      std::size_t u2 = 0;
      shift = std::stoi(rest.substr(1, rest.size() - 2), &u2);
      if (u2 != rest.size() - 2) throw std::invalid_argument(s);
    }
  } catch (const std::exception&) {
    bad("heart: cannot parse '" + s + "'");
  }
  if (index >= model.atlas.size()) throw Error(ErrorKind::HeartNotResolvable, "no atlas heart " + s);
  return model.atlas.heart({index, shift});
}

json heart_to_json(const CategoryModel& model, const Heart& heart) {
  json members = json::array(), simples = json::array();
  for (const auto& r : heart.members) members.push_back(model.ref_name(r));
  for (const auto& r : heart.simples) simples.push_back(model.ref_name(r));
  json j{{"members", members}, {"simples", simples}};
  if (auto id = model.atlas.resolve(heart)) j["id"] = heart_name(model, heart);
  return j;
}

StabilityCondition parse_stability(const ModelPtr& model, const json& j) {
  Heart heart = parse_heart(*model, field(j, "heart", "stability"));
  const json& charge = field(j, "charge", "stability");
  if (!charge.is_array()) bad("stability.charge: expected an array");
  CentralCharge z;
  for (const auto& c : charge) z.values.push_back(parse_complex(c));
  const std::string mode = j.value("mode", z.exact() ? std::string("exact") : std::string("floating"));
  if (mode == "floating") {
    z = z.to_floating();
  } else if (mode == "exact") {
    if (!z.exact()) bad("stability: exact mode needs [re_num, re_den, im_num, im_den] components");
  } else {
    bad("stability.mode: expected \"exact\" or \"floating\"");
  }
  return StabilityCondition(model, std::move(heart), std::move(z));
}

StabilityCondition load_stability(const ModelPtr& model, const std::string& path) {
  return parse_stability(model, read_json_file(path));
}

json stability_to_json(const StabilityCondition& s) {
  json charge = json::array();
  for (const auto& v : s.charge().values) charge.push_back(complex_to_json(v));
  return {{"heart", heart_name(s.category(), s.heart())}, {"charge", charge}, {"mode", s.exact() ? "exact" : "floating"}};
}

GroupElement parse_group(const json& j) {
  const json& m = field(j, "matrix", "group element");
  if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 || !m[1].is_array() || m[1].size() != 2)
    bad("group element: matrix must be 2x2");
  Matrix2 t{};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) t[r][c] = as_number(m[r][c], "matrix");
  const long lift = j.contains("lift") ? static_cast<long>(as_int(j["lift"], "lift")) : 0;
  return GroupElement(t, lift);
}

GroupElement load_group(const std::string& path) { return parse_group(read_json_file(path)); }

json group_to_json(const GroupElement& g) {
  const auto& m = g.matrix();
  return {{"matrix", {{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}}, {"lift", g.lift()}};
}

StabilitySequence load_sequence(const std::string& path, ModelPtr model) {
  const json j = read_json_file(path);
  if (!model) {
    std::filesystem::path mp = field(j, "model", "sequence").get<std::string>();
    if (mp.is_relative()) mp = std::filesystem::path(path).parent_path() / mp;
    model = load_model(mp.string());
  }
  std::vector<SequenceSample> samples;
  for (const auto& s : field(j, "samples", "sequence"))
    samples.push_back({static_cast<long>(as_int(field(s, "n", "sample"), "sample.n")),
                       parse_stability(model, field(s, "stability", "sample"))});
  CentralCharge limit;
  for (const auto& c : field(j, "limit_charge", "sequence")) limit.values.push_back(parse_complex(c));
  std::vector<EpsilonStep> eps;
  for (const auto& e : field(j, "epsilon", "sequence"))
    eps.push_back({static_cast<long>(as_int(field(e, "from_n", "epsilon"), "from_n")), as_number(field(e, "bound", "epsilon"), "bound")});
  LimitOptions opt;
  if (j.contains("tolerance")) opt.phase_tolerance = opt.log_mass_tolerance = as_number(j["tolerance"], "tolerance");
  return make_sequence(model, std::move(samples), std::move(limit), std::move(eps), opt);
}

json report_to_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e{{"name", c.name}, {"pass", c.pass}};
    if (!c.witness.empty()) e["witness"] = c.witness;
    checks.push_back(e);
  }
  return {{"ok", r.ok()}, {"checks", checks}};
}

json hn_to_json(const CategoryModel& model, const HNFiltration& hn) {
  json factors = json::array();
  for (const auto& f : hn.factors)
    factors.push_back({{"object", model.expr_name(f.object)}, {"phase", f.phase.value()}, {"mass", f.mass}});
  json chain = json::array();
  for (const auto& c : hn.chain) chain.push_back(model.expr_name(c));
  return {{"factors", factors},
          {"chain", chain},
          {"phi_plus", hn.phi_plus().value()},
          {"phi_minus", hn.phi_minus().value()},
          {"mass", hn.mass()}};
}

json torsion_pair_to_json(const CategoryModel& model, const TorsionPair& p) {
  json t = json::array(), f = json::array();
  for (const auto& r : p.torsion) t.push_back(model.ref_name(r));
  for (const auto& r : p.free) f.push_back(model.ref_name(r));
  return {{"torsion", t}, {"free", f}};
}

json atlas_to_json(const CategoryModel& model) {
  const HeartAtlas& atlas = model.atlas;
  json nodes = json::array();
  for (std::size_t i = 0; i < atlas.size(); ++i) {
    json n = heart_to_json(model, atlas.hearts()[i]);
    n["depth"] = atlas.depth()[i];
    nodes.push_back(n);
  }
  json edges = json::array();
  for (const auto& e : atlas.edges()) {
    json t = json::array();
    for (const auto& r : e.torsion) t.push_back(model.ref_name(r));
    std::string to = "H" + std::to_string(e.to.index);
    if (e.to.shift != 0) to += "[" + std::to_string(e.to.shift) + "]";
    edges.push_back({{"from", "H" + std::to_string(e.from)}, {"to", to}, {"torsion", t}, {"direction", e.left ? "left" : "right"}});
  }
  return {{"model", model.name}, {"hearts", nodes}, {"edges", edges}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace stablab::io

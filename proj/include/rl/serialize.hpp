#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rl/central.hpp"
#include "rl/construct_group.hpp"
#include "rl/construct_n0.hpp"
#include "rl/experiment.hpp"
#include "rl/semigroup.hpp"

namespace rl {

using json = nlohmann::json;

inline constexpr const char* kCertSchema = "rl-cert-1";
inline constexpr const char* kTraceSchema = "rl-trace-1";
inline constexpr const char* kSgpSchema = "rl-sgp-1";
inline constexpr const char* kPointSchema = "rl-point-1";

namespace detail {

inline json elems_json(const std::vector<Element>& es) {
  json a = json::array();
  for (const auto& e : es) a.push_back(to_string(e));
  return a;
}

inline std::vector<Element> elems_from(const Ambient& amb, const json& a) {
  std::vector<Element> out;
  for (const auto& s : a) out.push_back(amb.parse_element(s.get<std::string>()));
  return out;
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::parse, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("field '") + key + "': " + e.what());
  }
}

inline void expect_schema(const json& j, const char* schema) {
  auto s = get<std::string>(j, "schema");
  if (s != schema) fail(ErrorKind::parse, "schema '" + s + "', expected '" + schema + "'");
}

}  // namespace detail

// ---- verdicts ----------------------------------------------------------------------------

inline json to_json(const Verdict& v) {
  json j;
  j["property"] = v.property;
  j["status"] = to_string(v.status);
  j["basis"] = to_string(v.basis);
  j["horizon"] = v.horizon;
  if (!v.runs.empty()) {
    j["level"] = v.level;
    json runs = json::array();
    for (const auto& r : v.runs) runs.push_back({{"level", r.level}, {"translator", to_string(r.translator)}});
    j["runs"] = runs;
  }
  if (!v.k_set.empty()) j["k_set"] = detail::elems_json(v.k_set);
  if (v.pws_thick) j["pws_thick"] = v.pws_thick->dsl();
  if (v.pws_syndetic) j["pws_syndetic"] = v.pws_syndetic->dsl();
  if (v.thick_part) j["thick_part"] = to_json(*v.thick_part);
  if (v.syndetic_part) j["syndetic_part"] = to_json(*v.syndetic_part);
  if (!v.members.empty()) j["members"] = detail::elems_json(v.members);
  if (v.value) j["value"] = v.value->str();
  if (!v.parts.empty()) {
    json parts = json::array();
    for (const auto& p : v.parts) parts.push_back(to_json(*p));
    j["parts"] = parts;
  }
  if (v.gap) j["gap"] = {v.gap->first, v.gap->second};
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

inline json cert_json(Kind k, const std::string& set_dsl, const Verdict& v) {
  return {{"schema", kCertSchema}, {"ambient", to_string(k)}, {"set", set_dsl}, {"verdict", to_json(v)}};
}

inline json to_json(const CheckReport& r) {
  json items = json::array();
  for (const auto& c : r.items) {
    json i{{"name", c.name}, {"ok", c.ok}, {"checked", c.checked}};
    if (!c.detail.empty()) i["detail"] = c.detail;
    items.push_back(i);
  }
  return {{"ok", r.ok()}, {"items", items}};
}

// ---- points ------------------------------------------------------------------------------

inline json to_json(const Rle& r) {
  json runs = json::array();
  for (const auto& [b, n] : r.runs) runs.push_back({b ? 1 : 0, n});
  return {{"schema", kPointSchema}, {"ambient", to_string(r.kind)}, {"level", r.level}, {"default", r.def ? 1 : 0},
          {"guarantee", r.guarantee}, {"runs", runs}};
}

inline Rle rle_from_json(const json& j) {
  detail::expect_schema(j, kPointSchema);
  Rle r;
  r.kind = parse_kind(detail::get<std::string>(j, "ambient"));
  r.level = detail::get<std::int64_t>(j, "level");
  r.def = detail::get<int>(j, "default") != 0;
  r.guarantee = detail::get<std::int64_t>(j, "guarantee");
  for (const auto& run : detail::field(j, "runs")) {
    if (!run.is_array() || run.size() != 2) fail(ErrorKind::parse, "a run is a [bit, count] pair");
    r.runs.emplace_back(run[0].get<int>() != 0, run[1].get<std::uint64_t>());
  }
  return r;
}

// ---- N0 traces ---------------------------------------------------------------------------

inline json to_json(const TraceN0& t) {
  json stages = json::array();
  for (const auto& s : t.stages) {
    json iv = json::array();
    for (const auto& i : s.intervals) iv.push_back({i.lo, i.hi});
    std::string word;
    for (bool b : s.word) word += b ? '1' : '0';
    stages.push_back({{"i", s.i},
                      {"A", s.A},
                      {"a", s.a},
                      {"U", s.U},
                      {"M", s.M},
                      {"target", s.target_dsl},
                      {"H", s.h_dsl},
                      {"S", s.s_dsl},
                      {"intervals", iv},
                      {"word", word},
                      {"coverage", s.coverage}});
  }
  json pairs = json::array();
  for (const auto& [h, s] : t.pairs) pairs.push_back({h, s});
  return {{"schema", kTraceSchema},
          {"builder", "n0"},
          {"source", t.source},
          {"chain", t.chain_dsl},
          {"family", t.family},
          {"F", t.f_dsl},
          {"pairs", pairs},
          {"depth", t.depth},
          {"horizon", t.horizon},
          {"hit_every_block", t.hit_every_block},
          {"stages", stages},
          {"notes", t.notes}};
}

inline TraceN0 trace_n0_from_json(const json& j) {
  detail::expect_schema(j, kTraceSchema);
  if (detail::get<std::string>(j, "builder") != "n0") fail(ErrorKind::parse, "not an N0 trace");
  using detail::get;
  TraceN0 t;
  t.source = get<std::string>(j, "source");
  t.chain_dsl = get<std::string>(j, "chain");
  t.family = get<std::string>(j, "family");
  t.f_dsl = get<std::string>(j, "F");
  for (const auto& p : detail::field(j, "pairs")) t.pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  t.depth = get<std::int64_t>(j, "depth");
  t.horizon = get<std::int64_t>(j, "horizon");
  t.hit_every_block = get<bool>(j, "hit_every_block");
  t.notes = get<std::vector<std::string>>(j, "notes");
  for (const auto& s : detail::field(j, "stages")) {
    N0Stage st;
    st.i = get<std::int64_t>(s, "i");
    st.A = get<std::vector<std::int64_t>>(s, "A");
    st.a = get<std::int64_t>(s, "a");
    st.U = get<std::vector<std::int64_t>>(s, "U");
    st.M = get<std::int64_t>(s, "M");
    st.target_dsl = get<std::string>(s, "target");
    st.h_dsl = get<std::string>(s, "H");
    st.s_dsl = get<std::string>(s, "S");
    for (const auto& iv : detail::field(s, "intervals")) st.intervals.push_back({iv.at(0).get<std::int64_t>(), iv.at(1).get<std::int64_t>()});
    for (char c : get<std::string>(s, "word")) {
      if (c != '0' && c != '1') fail(ErrorKind::parse, "word must be a 0/1 string");
      st.word.push_back(c == '1');
    }
    st.coverage = get<std::vector<std::vector<std::int64_t>>>(s, "coverage");
    t.stages.push_back(std::move(st));
  }
  return t;
}

// ---- group traces ------------------------------------------------------------------------

inline json to_json(const TraceG& t) {
  json stages = json::array();
  for (const auto& s : t.stages) {
    json A = json::array();
    for (const auto& a : s.A) A.push_back(detail::elems_json(a));
    stages.push_back({{"i", s.i},
                      {"m", s.m},
                      {"B", detail::elems_json(s.B)},
                      {"T", s.t_dsl},
                      {"S", s.s_dsl},
                      {"separated", detail::elems_json(s.separated)},
                      {"t", s.t},
                      {"A", A},
                      {"support", detail::elems_json(s.support)}});
  }
  json fams = json::array();
  for (const auto& f : t.families) {
    json blocks = json::array();
    for (const auto& b : f.blocks) blocks.push_back({{"n", b.n}, {"g", to_string(b.g)}, {"elems", detail::elems_json(b.elems)}});
    fams.push_back({{"i", f.i}, {"blocks", blocks}});
  }
  return {{"schema", kTraceSchema},
          {"builder", "group"},
          {"ambient", to_string(t.kind)},
          {"chain", t.chain_dsl},
          {"family", t.family},
          {"provider", t.provider},
          {"depth", t.depth},
          {"ball", t.ball_level},
          {"stages", stages},
          {"families", fams},
          {"committed", detail::elems_json(t.committed)},
          {"guarantee", t.guarantee},
          {"notes", t.notes}};
}

inline TraceG trace_g_from_json(const json& j) {
  detail::expect_schema(j, kTraceSchema);
  if (detail::get<std::string>(j, "builder") != "group") fail(ErrorKind::parse, "not a group trace");
  using detail::get;
  TraceG t;
  t.kind = parse_kind(get<std::string>(j, "ambient"));
  Ambient amb(t.kind);
  t.chain_dsl = get<std::string>(j, "chain");
  t.family = get<std::string>(j, "family");
  t.provider = get<std::string>(j, "provider");
  t.depth = get<std::int64_t>(j, "depth");
  t.ball_level = get<std::int64_t>(j, "ball");
  for (const auto& s : detail::field(j, "stages")) {
    GroupStage st;
    st.i = get<std::int64_t>(s, "i");
    st.m = get<std::int64_t>(s, "m");
    st.B = detail::elems_from(amb, detail::field(s, "B"));
    st.t_dsl = get<std::string>(s, "T");
    st.s_dsl = get<std::string>(s, "S");
    st.separated = detail::elems_from(amb, detail::field(s, "separated"));
    st.t = get<std::vector<std::int64_t>>(s, "t");
    for (const auto& a : detail::field(s, "A")) st.A.push_back(detail::elems_from(amb, a));
    st.support = detail::elems_from(amb, detail::field(s, "support"));
    t.stages.push_back(std::move(st));
  }
  for (const auto& f : detail::field(j, "families")) {
    BlockFamily bf;
    bf.i = get<std::int64_t>(f, "i");
    for (const auto& b : detail::field(f, "blocks"))
      bf.blocks.push_back({get<std::int64_t>(b, "n"), amb.parse_element(get<std::string>(b, "g")), detail::elems_from(amb, detail::field(b, "elems"))});
    t.families.push_back(std::move(bf));
  }
  t.committed = detail::elems_from(amb, detail::field(j, "committed"));
  t.guarantee = get<std::int64_t>(j, "guarantee");
  t.notes = get<std::vector<std::string>>(j, "notes");
  return t;
}

// ---- semigroups --------------------------------------------------------------------------

inline json sgp_json(const FiniteSemigroup& s) {
  auto st = ideal_structure(s);
  auto rep = verify_section5(s);
  json j{{"schema", kSgpSchema},
         {"order", s.n},
         {"table", s.rows()},
         {"idempotents", st.idempotents},
         {"min_left", st.min_left},
         {"min_right", st.min_right},
         {"K", st.K},
         {"min_idempotents", st.min_idempotents},
         {"checks", to_json(rep)}};
  if (!s.labels.empty()) j["labels"] = s.labels;
  return j;
}

inline FiniteSemigroup sgp_from_json(const json& j) {
  detail::expect_schema(j, kSgpSchema);
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = detail::get<std::vector<std::string>>(j, "labels");
  return validate(detail::get<std::vector<std::vector<int>>>(j, "table"), std::move(labels));
}

// ---- central chains ----------------------------------------------------------------------

inline json to_json(const CentralResult& r) {
  json certs = json::array();
  for (const auto& c : r.certs) {
    json cj{{"n", c.n}, {"rho", c.rho}, {"rho2", c.rho2}, {"size", c.size}, {"inclusion", c.inclusion}, {"pws", to_json(c.pws)}};
    if (c.offender) cj["offender"] = to_string(*c.offender);
    certs.push_back(cj);
  }
  json members = json::array();
  for (const auto& m : r.members) members.push_back(detail::elems_json(m));
  return {{"schema", kCertSchema}, {"chain", r.chain.dsl}, {"eps", r.eps}, {"horizon", r.horizon}, {"members", members}, {"certs", certs}};
}

// ---- product experiment ------------------------------------------------------------------

inline json to_json(const ProductReport& r, std::size_t cap = 64) {
  auto head = [cap](const std::vector<Element>& es) {
    return detail::elems_json(std::vector<Element>(es.begin(), es.begin() + static_cast<std::ptrdiff_t>(std::min(cap, es.size()))));
  };
  json grid = json::array();
  for (const auto& g : r.grid) {
    json growth = json::array();
    for (const auto& [h, c] : g.growth) growth.push_back({{"ball", h}, {"count", c}});
    grid.push_back({{"level", g.level}, {"horizon", g.horizon}, {"size", g.size}, {"growth", growth}});
  }
  return {{"label", r.label},
          {"horizon", r.horizon},
          {"status", to_string(r.status)},
          {"joint_size", r.joint.size()},
          {"joint_head", head(r.joint)},
          {"N_y_size", r.ny.size()},
          {"joint_equals_N_y", r.joint == r.ny},
          {"grid", grid}};
}

// ---- files -------------------------------------------------------------------------------

// Sorted keys and fixed indentation make output byte-stable.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::precondition, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) fail(ErrorKind::precondition, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    fail(ErrorKind::precondition, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::parse, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::parse, path.string() + ": " + e.what());
  }
}

}  // namespace rl

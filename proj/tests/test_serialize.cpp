#include "doctest.h"
#include "rl.hpp"

#include <filesystem>

using namespace rl;

TEST_CASE("N0 trace round trip re-validates") {
  auto r = build_n0(parse_chain(Kind::N0, "fsb:3,2"), 3, 5000);
  auto j = to_json(r.trace);
  auto back = trace_n0_from_json(json::parse(dump(j)));
  CHECK(back == r.trace);
  CHECK(check_trace_n0(back).ok());
  CHECK(dump(to_json(back)) == dump(j));
}

TEST_CASE("group trace round trip re-validates") {
  for (auto [k, c, d, l] : {std::tuple{Kind::Z, "const:ep:0,2,{0}", 3, 1000}, std::tuple{Kind::F2, "const:evenlen", 2, 4},
                            std::tuple{Kind::Z2, "const:full", 2, 6}}) {
    auto r = build_group(parse_chain(k, c, family_pws()), d, l);
    auto back = trace_g_from_json(json::parse(dump(to_json(r.trace))));
    CHECK(back == r.trace);
    CHECK(check_trace_g(back).ok());
  }
}

TEST_CASE("point round trip") {
  auto r = build_group(parse_chain(Kind::Z, "fsb:3,2", family_pws()), 3, 1000);
  auto rle = encode_rle(r.point, r.trace.guarantee);
  auto z = decode_rle(rle_from_json(json::parse(dump(to_json(rle)))));
  Ambient amb(Kind::Z);
  for (const auto& g : amb.ball(r.trace.guarantee)) CHECK(z.at(g) == r.point.at(g));
  auto f2 = SymbolicPoint::indicator(parse_set(Kind::F2, "evenlen"));
  auto w = decode_rle(rle_from_json(to_json(encode_rle(f2, 4))));
  for (const auto& g : Ambient(Kind::F2).ball(4)) CHECK(w.at(g) == f2.at(g));
}

TEST_CASE("semigroup report") {
  auto j = sgp_json(zn_mul(6));
  CHECK(j["K"] == json::array({0}));
  CHECK(j["idempotents"] == json::array({0, 1, 3, 4}));
  CHECK(j["checks"]["ok"] == true);
  CHECK(sgp_from_json(j) == zn_mul(6));
}

TEST_CASE("certificates") {
  auto s = parse_set(Kind::Z, "ep:0,4,{0,1}");
  auto j = cert_json(Kind::Z, "ep:0,4,{0,1}", classify_syndetic(s, 1000));
  CHECK(j["schema"] == "rl-cert-1");
  CHECK(j["verdict"]["status"] == "CertifiedYes");
  CHECK(j["verdict"]["k_set"].size() == 4);
}

TEST_CASE("malformed input is a parse error") {
  try {
    trace_g_from_json(json{{"schema", "rl-trace-1"}, {"builder", "group"}});
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
  }
  CHECK_THROWS_AS(rle_from_json(json{{"schema", "rl-cert-1"}}), Error);
  auto bad = to_json(encode_rle(SymbolicPoint::constant(Kind::Z, true), 3));
  bad["runs"][0][1] = 2;
  CHECK_THROWS_AS(decode_rle(rle_from_json(bad)), Error);
}

TEST_CASE("atomic write") {
  auto p = std::filesystem::temp_directory_path() / "rl_serialize_test.json";
  write_atomic(p, "{\"a\": 1}\n");
  CHECK(read_json(p)["a"] == 1);
  CHECK_FALSE(std::filesystem::exists(p.string() + ".tmp"));
  std::filesystem::remove(p);
  CHECK_THROWS_AS(write_atomic("/nonexistent-dir/x.json", "x"), Error);
}

#include <CLI11.hpp>

#include <iostream>
#include <random>

#include "rl.hpp"

using namespace rl;

namespace {

enum Exit { kOk = 0, kRefuted = 2, kInput = 3, kHorizon = 4 };

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::horizon:
    case ErrorKind::stage: return kHorizon;
    case ErrorKind::check: return kRefuted;
    default: return kInput;
  }
}

int exit_for(Status s) { return s == Status::yes ? kOk : s == Status::no ? kRefuted : kHorizon; }

struct Run {
  std::string ambient = "Z";
  std::int64_t horizon = 1000;
  std::int64_t depth = 3;
  std::uint64_t seed = 0;
  std::string out;
  json inputs = json::object();

  json config(const std::string& cmd) const {
    return {{"subcommand", cmd}, {"ambient", ambient}, {"horizon", horizon}, {"depth", depth}, {"seed", seed}, {"inputs", inputs}};
  }
  Kind kind() const { return parse_kind(ambient); }
};

int emit(const Run& run, const std::string& cmd, json body, int code) {
  body["config"] = run.config(cmd);
  auto text = dump(body);
  std::cout << text;
  if (!run.out.empty()) write_atomic(run.out, text);
  return code;
}

// Point descriptors: ones | zeros | ind:<set> | file:<rl-point-1 json> |
// group:<chain>@<depth>,<ball> | n0:<chain>@<depth>,<horizon>
SymbolicPoint parse_point(Kind k, const std::string& d) {
  auto at_split = [&](const std::string& rest, std::int64_t& a, std::int64_t& b) {
    auto p = rest.rfind('@');
    if (p == std::string::npos) fail(ErrorKind::parse, "builder descriptor needs @depth,level: " + d);
    auto nums = rest.substr(p + 1);
    auto c = nums.find(',');
    if (c == std::string::npos) fail(ErrorKind::parse, "builder descriptor needs @depth,level: " + d);
    try {
      a = std::stoll(nums.substr(0, c));
      b = std::stoll(nums.substr(c + 1));
    } catch (const std::exception&) {
      fail(ErrorKind::parse, "bad numbers in " + d);
    }
    return rest.substr(0, p);
  };
  if (d == "ones") return SymbolicPoint::constant(k, true);
  if (d == "zeros") return SymbolicPoint::constant(k, false);
  if (d.rfind("ind:", 0) == 0) return SymbolicPoint::indicator(parse_set(k, d.substr(4)));
  if (d.rfind("file:", 0) == 0) {
    auto z = decode_rle(rle_from_json(read_json(d.substr(5))));
    if (z.kind() != k) fail(ErrorKind::precondition, "point file lives on " + std::string(to_string(z.kind())));
    return z;
  }
  if (d.rfind("group:", 0) == 0) {
    std::int64_t depth = 0, level = 0;
    auto chain = at_split(d.substr(6), depth, level);
    return build_group(parse_chain(k, chain), depth, level).stage;
  }
  if (d.rfind("n0:", 0) == 0) {
    if (k != Kind::N0) fail(ErrorKind::precondition, "n0: points need --ambient N0");
    std::int64_t depth = 0, horizon = 0;
    auto chain = at_split(d.substr(3), depth, horizon);
    return build_n0(parse_chain(k, chain), depth, horizon).stage;
  }
  fail(ErrorKind::parse, "unknown point descriptor '" + d + "'");
}

json elems_list(const std::vector<Element>& es, std::size_t cap = 64) {
  json a = json::array();
  for (std::size_t i = 0; i < es.size() && i < cap; ++i) a.push_back(to_string(es[i]));
  return a;
}

// ---- subcommands -------------------------------------------------------------------------

int cmd_classify(Run& run, const std::string& set, const std::string& prop) {
  auto k = run.kind();
  auto s = parse_set(k, set);
  Verdict v;
  if (prop == "thick") v = classify_thick(s, run.horizon);
  else if (prop == "syndetic") v = classify_syndetic(s, run.horizon);
  else if (prop == "pws" || prop == "piecewise-syndetic") v = classify_pws(s, run.horizon);
  else v = family_member(family_by_name(prop, k), s, run.horizon);
  return emit(run, "classify", cert_json(k, s.dsl(), v), exit_for(v.status));
}

int cmd_density(Run& run, const std::string& set, const std::string& folner, std::int64_t n_max, bool banach) {
  auto k = run.kind();
  auto s = parse_set(k, set);
  if (folner != "boxes") fail(ErrorKind::parse, "only --folner boxes is available from the command line");
  auto d = banach ? banach_density(s, n_max) : upper_density(s, FolnerSeq::boxes(k), n_max);
  json body{{"schema", kCertSchema},
            {"ambient", to_string(k)},
            {"set", s.dsl()},
            {"density", banach ? "upper-banach" : "upper"},
            {"value", d.value.str()},
            {"exact", d.exact},
            {"stamp", d.stamp}};
  if (!d.note.empty()) body["note"] = d.note;
  return emit(run, "density", body, d.exact ? kOk : kHorizon);
}

int cmd_semigroup(Run& run, const std::string& table) {
  auto s = parse_table_csv(read_file(table));
  auto j = sgp_json(s);
  bool ok = j["checks"]["ok"].get<bool>();
  return emit(run, "semigroup", j, ok ? kOk : kRefuted);
}

int cmd_construct_n0(Run& run, const std::string& chain, const std::string& fam, const std::string& target,
                     const std::vector<std::string>& hs, const std::vector<std::string>& ss, const std::string& trace_out,
                     const std::string& point_out) {
  N0Result r;
  if (!target.empty()) {
    if (hs.empty() || hs.size() != ss.size()) fail(ErrorKind::parse, "stream input needs matching --pair-h/--pair-s lists");
    std::vector<std::pair<SetExpr, SetExpr>> pairs;
    for (std::size_t i = 0; i < hs.size(); ++i) pairs.emplace_back(parse_set(Kind::N0, hs[i]), parse_set(Kind::N0, ss[i]));
    r = build_n0(n0_source_stream(parse_set(Kind::N0, target), pairs), run.depth, run.horizon);
  } else {
    r = build_n0(parse_chain(Kind::N0, chain, family_by_name(fam, Kind::N0)), run.depth, run.horizon);
  }
  auto rep = check_trace_n0(r.trace);
  auto tj = to_json(r.trace);
  tj["config"] = run.config("construct-n0");
  auto level = r.trace.stages.empty() ? 0 : r.trace.stages.back().a;
  auto pj = to_json(encode_rle(r.point, level));
  pj["config"] = run.config("construct-n0");
  if (!trace_out.empty()) write_atomic(trace_out, dump(tj));
  if (!point_out.empty()) write_atomic(point_out, dump(pj));

  std::vector<Element> ones;
  for (const auto& g : Ambient(Kind::N0).ball(level))
    if (r.point.at(g)) ones.push_back(g);
  json body{{"schema", kTraceSchema}, {"builder", "n0"}, {"stages", r.trace.stages.size()}, {"known_up_to", level},
            {"ones", ones.size()}, {"ones_head", elems_list(ones)}, {"check", to_json(rep)}};
  return emit(run, "construct-n0", body, rep.ok() ? kOk : kRefuted);
}

int cmd_construct_g(Run& run, const std::string& chain, const std::string& fam, std::int64_t ball, const std::string& trace_out,
                    const std::string& point_out) {
  auto k = run.kind();
  auto r = build_group(parse_chain(k, chain, family_by_name(fam, k)), run.depth, ball);
  auto rep = check_trace_g(r.trace);
  auto tj = to_json(r.trace);
  tj["config"] = run.config("construct-g");
  auto pj = to_json(encode_rle(r.point, r.trace.guarantee));
  pj["config"] = run.config("construct-g");
  if (!trace_out.empty()) write_atomic(trace_out, dump(tj));
  if (!point_out.empty()) write_atomic(point_out, dump(pj));
  const auto& support = r.trace.stages.empty() ? r.trace.committed : r.trace.stages.back().support;
  json body{{"schema", kTraceSchema}, {"builder", "group"}, {"stages", r.trace.stages.size()}, {"guarantee", r.trace.guarantee},
            {"committed", r.trace.committed.size()}, {"support", elems_list(support)}, {"check", to_json(rep)}};
  return emit(run, "construct-g", body, rep.ok() ? kOk : kRefuted);
}

int cmd_experiment_product(Run& run, const std::string& xd, const std::string& yd, std::int64_t grid) {
  auto k = run.kind();
  auto x = parse_point(k, xd), y = parse_point(k, yd);
  auto r = product_experiment(x, y, run.horizon, grid);
  auto body = to_json(r);
  body["x"] = x.describe();
  body["y"] = y.describe();
  return emit(run, "experiment-product", body, r.status == ProductStatus::witnessed ? kOk : kRefuted);
}

int cmd_central(Run& run, const std::string& xd, const std::string& yd, double eps, std::int64_t n_max) {
  auto k = run.kind();
  auto r = central_chain(parse_point(k, xd), parse_point(k, yd), eps, n_max, run.horizon);
  auto cert = chain_validate(r.chain, n_max, 4, run.horizon);
  auto body = to_json(r);
  body["chain_ok"] = cert.ok;
  json fails = json::array();
  for (const auto& f : cert.failures) fails.push_back({{"check", f.check}, {"n", f.n}, {"detail", f.detail}});
  body["chain_failures"] = fails;
  bool ok = cert.ok && std::all_of(r.certs.begin(), r.certs.end(), [](const CentralCert& c) { return c.pws.yes(); });
  return emit(run, "central", body, ok ? kOk : kRefuted);
}

int cmd_check(Run& run, const std::string& trace, const std::string& point, const std::string& sgp) {
  json body{{"schema", kCertSchema}};
  bool ok = true;
  if (!trace.empty()) {
    auto j = read_json(trace);
    auto builder = detail::get<std::string>(j, "builder");
    CheckReport rep;
    std::function<bool(const Element&)> expect;
    std::int64_t level = 0;
    if (builder == "n0") {
      auto t = trace_n0_from_json(j);
      rep = check_trace_n0(t);
      if (!t.stages.empty()) {
        auto word = t.stages.back().word;
        level = t.stages.back().a;
        expect = [word](const Element& g) { return static_cast<bool>(word[static_cast<std::size_t>(g.x)]); };
      } else {
        expect = [](const Element& g) { return g.x == 0; };
      }
    } else {
      auto t = trace_g_from_json(j);
      rep = check_trace_g(t);
      level = t.guarantee;
      std::set<Element> supp;
      if (!t.stages.empty()) supp.insert(t.stages.back().support.begin(), t.stages.back().support.end());
      else supp.insert(Ambient(t.kind).identity());
      expect = [supp](const Element& g) { return supp.count(g) > 0; };
    }
    if (!point.empty()) {
      auto z = decode_rle(rle_from_json(read_json(point)));
      std::size_t bad = 0;
      auto reach = std::min(level, z.unlimited() ? level : z.guarantee());
      for (const auto& g : Ambient(z.kind()).ball(reach))
        if (z.at(g) != expect(g)) ++bad;
      rep.expect("point matches trace", bad == 0, [&] { return std::to_string(bad) + " mismatches on ball(" + std::to_string(reach) + ")"; });
    }
    body["trace"] = to_json(rep);
    ok = ok && rep.ok();
  }
  if (!sgp.empty()) {
    auto s = sgp_from_json(read_json(sgp));
    auto fresh = sgp_json(s);
    auto stored = read_json(sgp);
    bool same = true;
    for (auto key : {"idempotents", "min_left", "min_right", "K", "min_idempotents"}) same = same && stored.value(key, json()) == fresh[key];
    body["semigroup"] = {{"checks", fresh["checks"]}, {"matches_stored", same}};
    ok = ok && same && fresh["checks"]["ok"].get<bool>();
  }
  if (trace.empty() && sgp.empty()) fail(ErrorKind::parse, "check needs --trace or --sgp");
  body["ok"] = ok;
  return emit(run, "check", body, ok ? kOk : kRefuted);
}

// Seeded sweep: indicator identity and verdict re-checks over random eventually periodic sets.
int cmd_sweep(Run& run, int count) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(run.seed));
  std::uniform_int_distribution<int> period(1, 12), offset(0, 20);
  std::bernoulli_distribution coin(0.5);
  Ambient amb(Kind::Z);
  int mismatches = 0, failed_rechecks = 0;
  json first_bad;
  for (int t = 0; t < count; ++t) {
    int p = period(rng);
    std::string res;
    for (int r = 0; r < p; ++r)
      if (coin(rng)) res += (res.empty() ? "" : ",") + std::to_string(r);
    auto dsl = "ep:" + std::to_string(offset(rng)) + "," + std::to_string(p) + ",{" + res + "}";
    auto s = parse_set(Kind::Z, dsl);
    auto got = return_set(SymbolicPoint::indicator(s), Cylinder::one(Kind::Z), run.horizon);
    std::vector<Element> want;
    for (const auto& g : amb.ball(run.horizon))
      if (s.contains(g)) want.push_back(g);
    if (got != want) {
      ++mismatches;
      if (first_bad.is_null()) first_bad = dsl;
    }
    for (auto v : {classify_thick(s, run.horizon), classify_syndetic(s, run.horizon), classify_pws(s, run.horizon)}) {
      std::string why;
      if (!recheck(v, s, &why)) {
        ++failed_rechecks;
        if (first_bad.is_null()) first_bad = dsl + ": " + why;
      }
    }
  }
  json body{{"schema", kCertSchema}, {"sets", count}, {"indicator_mismatches", mismatches}, {"failed_rechecks", failed_rechecks}};
  if (!first_bad.is_null()) body["first_failure"] = first_bad;
  return emit(run, "sweep", body, mismatches == 0 && failed_rechecks == 0 ? kOk : kRefuted);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rl: return-time sets, recurrence builders and finite semigroups"};
  app.require_subcommand(1);
  Run run;
  auto common = [&](CLI::App* sub, bool depth) {
    sub->add_option("--ambient", run.ambient, "N0, Z, Z2 or F2")->capture_default_str();
    sub->add_option("--horizon", run.horizon, "ball radius scanned")->capture_default_str()->check(CLI::PositiveNumber);
    if (depth) sub->add_option("--depth", run.depth, "builder depth")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", run.seed, "seed recorded in the output")->capture_default_str();
    sub->add_option("--out", run.out, "also write the JSON report here");
  };

  std::string set, prop = "syndetic", folner = "boxes", chain, family = "ps", target, table, trace_out, point_out, xd, yd, trace, point, sgp;
  std::vector<std::string> hs, ss;
  std::int64_t n_max = 1000, ball = 1000, grid = 2;
  bool banach = false;
  double eps = 0.5;
  int count = 200;

  auto* classify = app.add_subcommand("classify", "classify a set as thick, syndetic, pws or a named family");
  common(classify, false);
  classify->add_option("--set", set, "set DSL")->required();
  classify->add_option("--prop", prop, "thick | syndetic | pws | inf | t | s | ps | pud | pubd")->capture_default_str();

  auto* density = app.add_subcommand("density", "upper density along boxes or upper Banach density");
  common(density, false);
  density->add_option("--set", set, "set DSL")->required();
  density->add_option("--folner", folner, "Folner sequence")->capture_default_str();
  density->add_option("--n", n_max, "last Folner index (or window for --banach)")->capture_default_str()->check(CLI::PositiveNumber);
  density->add_flag("--banach", banach, "upper Banach density");

  auto* semigroup = app.add_subcommand("semigroup", "idempotents and ideal structure of a finite semigroup");
  common(semigroup, false);
  semigroup->add_option("--table", table, "CSV multiplication table")->required();

  auto* n0 = app.add_subcommand("construct-n0", "build a recurrent point over N0");
  common(n0, true);
  n0->add_option("--chain", chain, "chain DSL");
  n0->add_option("--family", family, "family of the chain")->capture_default_str();
  n0->add_option("--target", target, "stream input: the set F");
  n0->add_option("--pair-h", hs, "stream input: thick parts, first stage first");
  n0->add_option("--pair-s", ss, "stream input: syndetic parts, first stage first");
  n0->add_option("--trace-out", trace_out, "rl-trace-1 output");
  n0->add_option("--point-out", point_out, "rl-point-1 output");

  auto* g = app.add_subcommand("construct-g", "build a recurrent point over a group");
  common(g, true);
  g->add_option("--chain", chain, "chain DSL")->required();
  g->add_option("--family", family, "family of the chain")->capture_default_str();
  g->add_option("--ball", ball, "ball level the blocks are searched in")->capture_default_str()->check(CLI::PositiveNumber);
  g->add_option("--trace-out", trace_out, "rl-trace-1 output");
  g->add_option("--point-out", point_out, "rl-point-1 output");

  auto* product = app.add_subcommand("experiment-product", "joint returns of a pair of points");
  common(product, false);
  product->add_option("--x", xd, "point descriptor")->required();
  product->add_option("--y", yd, "point descriptor")->required();
  product->add_option("--grid", grid, "largest cylinder level")->capture_default_str()->check(CLI::NonNegativeNumber);

  auto* central = app.add_subcommand("central", "chain of joint return sets of a proximal pair");
  common(central, false);
  central->add_option("--x", xd, "point descriptor")->required();
  central->add_option("--y", yd, "point descriptor (almost periodic)")->required();
  central->add_option("--eps", eps, "radius")->capture_default_str();
  central->add_option("--n", n_max, "number of chain members certified")->capture_default_str()->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "re-validate emitted artifacts");
  common(check, false);
  check->add_option("--trace", trace, "rl-trace-1 file");
  check->add_option("--point", point, "rl-point-1 file to compare with the trace");
  check->add_option("--sgp", sgp, "rl-sgp-1 file");

  auto* sweep = app.add_subcommand("sweep", "seeded sweep over random eventually periodic sets");
  common(sweep, false);
  sweep->add_option("--count", count, "number of sets")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*classify) {
      run.inputs = {{"set", set}, {"prop", prop}};
      return cmd_classify(run, set, prop);
    }
    if (*density) {
      run.inputs = {{"set", set}, {"folner", folner}, {"n", n_max}, {"banach", banach}};
      return cmd_density(run, set, folner, n_max, banach);
    }
    if (*semigroup) {
      run.inputs = {{"table", table}};
      return cmd_semigroup(run, table);
    }
    if (*n0) {
      run.ambient = "N0";
      if (chain.empty() == target.empty()) fail(ErrorKind::parse, "construct-n0 needs exactly one of --chain and --target");
      run.inputs = {{"chain", chain}, {"family", family}, {"target", target}, {"pair_h", hs}, {"pair_s", ss}};
      return cmd_construct_n0(run, chain, family, target, hs, ss, trace_out, point_out);
    }
    if (*g) {
      run.horizon = ball;
      run.inputs = {{"chain", chain}, {"family", family}, {"ball", ball}};
      return cmd_construct_g(run, chain, family, ball, trace_out, point_out);
    }
    if (*product) {
      run.inputs = {{"x", xd}, {"y", yd}, {"grid", grid}};
      return cmd_experiment_product(run, xd, yd, grid);
    }
    if (*central) {
      run.inputs = {{"x", xd}, {"y", yd}, {"eps", eps}, {"n", n_max}};
      return cmd_central(run, xd, yd, eps, n_max);
    }
    if (*check) {
      run.inputs = {{"trace", trace}, {"point", point}, {"sgp", sgp}};
      return cmd_check(run, trace, point, sgp);
    }
    if (*sweep) {
      run.inputs = {{"count", count}};
      return cmd_sweep(run, count);
    }
  } catch (const Error& e) {
    std::cerr << "rl: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "rl: parse-error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}

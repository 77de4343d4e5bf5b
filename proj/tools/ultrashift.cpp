// ultrashift: command-line driver for .ug documents and built-in fixtures.
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ultrashift/checks.hpp"
#include "ultrashift/corpus.hpp"
#include "ultrashift/dsl_print.hpp"
#include "ultrashift/path.hpp"
#include "ultrashift/report.hpp"

using namespace ultrashift;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Bounds {
  std::size_t samples = 100;
  std::size_t depth = 16;
  std::size_t max_window = 6;
  std::size_t max_m = 4;
  std::size_t probes = 6;
  std::size_t point_depth = 8;
  std::size_t max_depth = 8;
  std::size_t max_index = 40;

  std::map<std::string, std::size_t*> fields() {
    return {{"samples", &samples},     {"depth", &depth},         {"max_window", &max_window}, {"max_m", &max_m},
            {"probes", &probes},       {"point_depth", &point_depth}, {"max_depth", &max_depth},
            {"max_index", &max_index}};
  }
  json to_json() {
    json j;
    for (auto& [k, v] : fields()) j[k] = *v;
    return j;
  }
  CheckBounds check_bounds() const {
    CheckBounds b;
    b.max_m = max_m;
    b.probes = probes;
    b.point_depth = point_depth;
    b.convergence.max_depth = max_depth;
    b.convergence.max_index = max_index;
    return b;
  }
};

/// ULTRASHIFT_DEFAULT_BOUNDS="samples=50,depth=12"
void apply_env(Bounds& b) {
  const char* env = std::getenv("ULTRASHIFT_DEFAULT_BOUNDS");
  if (!env) return;
  auto fields = b.fields();
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("ULTRASHIFT_DEFAULT_BOUNDS: expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq);
    auto it = fields.find(key);
    if (it == fields.end()) throw UsageError("ULTRASHIFT_DEFAULT_BOUNDS: unknown bound '" + key + "'");
    try {
      *it->second = std::stoul(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("ULTRASHIFT_DEFAULT_BOUNDS: bad value for '" + key + "'");
    }
  }
}

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Loaded {
  std::string path;
  dsl::Document doc;
};

Loaded load(const std::string& path) {
  std::string text = read_input(path);
  try {
    return {path, dsl::parse(text)};
  } catch (const dsl::ParseError& e) {
    throw UsageError((path == "-" ? "<stdin>" : path) + ":" + e.what());
  }
}

const MapPresentation& need_map(const dsl::Document& d, const std::string& name) {
  if (const auto* m = d.map(name)) return *m;
  throw UsageError("no map '" + name + "' in document");
}
const ShiftSpace& need_graph(const dsl::Document& d, const std::string& name) {
  if (const auto* g = d.graph(name)) return *g;
  throw UsageError("no graph '" + name + "' in document");
}
Point need_point(const ShiftSpace& sp, const std::string& text, const dsl::Document& d) {
  try {
    return dsl::parse_point(sp, text, &d);
  } catch (const dsl::ParseError& e) {
    throw UsageError(std::string("point: ") + e.what());
  } catch (const Error& e) {
    throw UsageError(std::string("point: ") + e.what());
  }
}

Verdict run_check(const std::string& kind, const MapPresentation& m, const Bounds& b) {
  if (kind == "commute") return corpus::commute_on_samples(m, b.samples, b.depth);
  if (kind == "csc") return check_csc(m, b.check_bounds());
  if (kind == "genchl") return check_genchl(m, b.check_bounds());
  if (kind == "length-preserving") return check_length_preserving(m, b.check_bounds());
  throw UsageError("unknown check '" + kind + "'");
}

Verdict guarded(const std::string& name, const std::function<Verdict()>& f) {
  try {
    return f();
  } catch (const Error& e) {
    Verdict v = Verdict::make(name, Status::Unknown);
    v.notes.push_back(e.what());
    return v;
  }
}

/// Runs independent jobs in order, concurrently when asked.
std::vector<Verdict> run_all(const std::vector<std::pair<std::string, std::function<Verdict()>>>& jobs, bool parallel) {
  std::vector<Verdict> out;
  if (!parallel) {
    for (const auto& [n, f] : jobs) out.push_back(guarded(n, f));
    return out;
  }
  std::vector<std::future<Verdict>> fs;
  for (const auto& [n, f] : jobs) fs.push_back(std::async(std::launch::async, [n = n, f = f] { return guarded(n, f); }));
  for (auto& f : fs) out.push_back(f.get());
  return out;
}

std::string vertex_text(const ShiftSpace& sp, const VertexSet& s) { return dsl::detail::vertex_set_text(sp.graph(), s, {}); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultragraph shift spaces and generalized sliding block codes"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  bool audit_flag = false, parallel = false;
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--audit", audit_flag, "Re-check every failing witness");
  app.add_flag("--parallel", parallel, "Run independent checks concurrently");

  Bounds b;
  try {
    apply_env(b);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  auto add_bounds = [&](CLI::App* c, std::initializer_list<const char*> keys) {
    auto fields = b.fields();
    for (const char* k : keys) {
      std::string flag = std::string("--") + k;
      std::replace(flag.begin(), flag.end(), '_', '-');
      c->add_option(flag, *fields.at(k), std::string("Bound ") + k)->capture_default_str();
    }
  };

  std::string file, graph, map_name, point, oracle, seq, target, kind, fixture;
  std::size_t n = 2, eval_depth = 12;
  long long index_bound = 2;
  bool minimal = false;

  auto* validate = app.add_subcommand("validate", "Parse a document and validate its graphs and maps");
  validate->add_option("file", file, ".ug file or -")->required();
  add_bounds(validate, {"samples"});

  auto* emitters = app.add_subcommand("emitters", "List infinite emitters of a graph");
  emitters->add_option("file", file)->required();
  emitters->add_option("--graph", graph)->required();
  emitters->add_flag("--minimal", minimal, "Only the minimal infinite emitters");

  auto* blocks = app.add_subcommand("blocks", "Enumerate blocks of length n");
  blocks->add_option("file", file)->required();
  blocks->add_option("--graph", graph)->required();
  blocks->add_option("-n", n, "Block length")->required();
  blocks->add_option("--index-bound", index_bound, "Largest |index| enumerated")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Evaluate a map at a point");
  eval->add_option("file", file)->required();
  eval->add_option("--map", map_name)->required();
  eval->add_option("--point", point, "Point literal or declared point")->required();
  eval->add_option("--depth", eval_depth, "Output coordinates")->capture_default_str();

  auto* check = app.add_subcommand("check", "Run a property checker on a map");
  check->add_option("kind", kind)->required()->check(CLI::IsMember(dsl::check_kinds()));
  check->add_option("file", file)->required();
  check->add_option("--map", map_name)->required();
  add_bounds(check, {"samples", "depth", "max_m", "probes", "point_depth", "max_depth", "max_index"});

  auto* run = app.add_subcommand("run", "Execute the check directives of a document");
  run->add_option("file", file)->required();
  add_bounds(run, {"samples", "depth", "max_m", "probes", "point_depth", "max_depth", "max_index"});

  auto* refute = app.add_subcommand("refute-fd", "Refute finite definability of a map class near a point");
  refute->add_option("file", file)->required();
  refute->add_option("--oracle", oracle, "MAP:SYMBOL or C_SYMBOL")->required();
  refute->add_option("--point", point)->required();
  add_bounds(refute, {"max_window"});

  auto* converge = app.add_subcommand("converge", "Bounded convergence check for a declared sequence");
  converge->add_option("file", file)->required();
  converge->add_option("--seq", seq)->required();
  converge->add_option("--target", target)->required();
  add_bounds(converge, {"max_depth", "max_index"});

  auto* fixture_cmd = app.add_subcommand("fixture", "Built-in fixtures");
  auto* fixture_run = fixture_cmd->add_subcommand("run", "Run a fixture's expected-verdict table");
  fixture_cmd->require_subcommand(1);
  fixture_run->add_option("name", fixture)->required()->check(CLI::IsMember({"a", "b", "c", "d"}));
  add_bounds(fixture_run, {"samples", "depth", "max_window"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  Report rep;
  int exit_code = -1;
  AuditContext ctx;
  std::optional<SetOracle> oracle_holder;
  try {
    if (*validate) {
      rep.command = "validate";
      Loaded l = load(file);
      std::vector<std::pair<std::string, std::function<Verdict()>>> jobs;
      for (const auto& g : l.doc.graphs)
        jobs.push_back({"graph", [&g] {
                          auto r = g.graph().validate();
                          Verdict v = Verdict::make("graph " + g.name(), r.valid() ? Status::Holds : Status::Fails);
                          v.exact = true;
                          v.witness = {{"sinks", g.graph().format(r.sinks)},
                                       {"empty_ranges", g.graph().format(r.empty_ranges)},
                                       {"missing_source", g.graph().format(r.missing_source)},
                                       {"issues", r.issues},
                                       {"emitters_complete", g.emitters_complete()}};
                          return v;
                        }});
      for (const auto& m : l.doc.maps)
        jobs.push_back({"map-partition", [&m, &b] {
                          SampleOptions o;
                          o.random = b.samples;
                          Verdict v = validate_map(m, o);
                          v.check = "map-partition " + m.name;
                          return v;
                        }});
      for (auto& v : run_all(jobs, parallel)) rep.add(std::move(v));
      rep.bounds = {{"samples", b.samples}};
      rep.data = {{"graphs", l.doc.graphs.size()}, {"maps", l.doc.maps.size()}, {"points", l.doc.points.size()},
                  {"sequences", l.doc.sequences.size()}, {"checks", l.doc.checks.size()}};
      if (l.doc.maps.size() == 1) ctx.map = &l.doc.maps[0];
      if (audit_flag)
        for (auto& r : rep.records) r.audit = audit(r.verdict, ctx);
      exit_code = rep.exit_code();
      std::cout << (format == "json" ? rep.to_json().dump(2) + "\n" : rep.to_text());
      return exit_code;
    }
    if (*emitters) {
      rep.command = "emitters";
      Loaded l = load(file);
      const ShiftSpace& sp = need_graph(l.doc, graph);
      json list = json::array();
      std::string text;
      for (std::size_t i = 0; i < sp.emitters().size(); ++i) {
        const auto& e = sp.emitters()[i];
        std::string nm = sp.emitter_name(static_cast<int>(i));
        list.push_back({{"name", nm}, {"set", vertex_text(sp, e.set)}, {"certificate", e.certificate}});
        text += nm + " = " + vertex_text(sp, e.set) + "\n";
      }
      rep.data = {{"graph", sp.name()}, {"minimal_infinite_emitters", list}, {"complete", sp.emitters_complete()}};
      if (!minimal) {
        VertexSet inf = sp.graph().infinite_emitter_vertices();
        rep.data["infinite_emitter_vertices"] = vertex_text(sp, inf);
        text = "infinite emitters: " + vertex_text(sp, inf) + "\nminimal infinite emitters:\n" + text;
      }
      if (!sp.emitters_complete()) text += "(closure cap reached; list may be incomplete)\n";
      std::cout << (format == "json" ? rep.to_json().dump(2) + "\n" : text);
      return 0;
    }
    if (*blocks) {
      rep.command = "blocks";
      Loaded l = load(file);
      const ShiftSpace& sp = need_graph(l.doc, graph);
      auto be = enumerate_blocks(sp, n, static_cast<Index>(index_bound));
      json list = json::array();
      std::string text;
      for (const auto& blk : be.blocks) {
        std::string s;
        for (std::size_t i = 0; i < blk.size(); ++i) s += (i ? " " : "") + sp.name(blk[i]);
        list.push_back(s);
        text += s + "\n";
      }
      rep.bounds = {{"n", n}, {"index_bound", index_bound}};
      rep.data = {{"blocks", list}, {"count", be.blocks.size()}, {"complete", be.complete}};
      text += std::to_string(be.blocks.size()) + " blocks" + (be.complete ? "" : " (indices truncated to the bound)") + "\n";
      std::cout << (format == "json" ? rep.to_json().dump(2) + "\n" : text);
      return 0;
    }
    if (*eval) {
      rep.command = "eval";
      Loaded l = load(file);
      const MapPresentation& m = need_map(l.doc, map_name);
      Point x = need_point(m.source, point, l.doc);
      MapOutput out = eval_map(m, x, eval_depth);
      json prefix = json::array();
      for (const auto& s : out.prefix) prefix.push_back(m.target.name(s));
      rep.bounds = {{"depth", eval_depth}};
      rep.data = {{"point", x.to_string(m.source)}, {"prefix", prefix}, {"exact", out.exact}};
      std::string text = "Φ(" + x.to_string(m.source) + ")";
      if (out.point) {
        rep.data["image"] = out.point->to_string(m.target);
        text += " = " + out.point->to_string(m.target);
      } else {
        text += " starts " + prefix.dump();
      }
      std::cout << (format == "json" ? rep.to_json().dump(2) + "\n" : text + (out.exact ? "" : " (up to depth)") + "\n");
      return 0;
    }
    if (*check || *run) {
      rep.command = *check ? "check " + kind : "run";
      Loaded l = load(file);
      std::vector<std::pair<std::string, std::function<Verdict()>>> jobs;
      std::vector<const MapPresentation*> maps;
      if (*check) {
        const MapPresentation& m = need_map(l.doc, map_name);
        jobs.push_back({kind, [&m, kind, &b] { return run_check(kind, m, b); }});
        maps.push_back(&m);
      } else {
        for (const auto& d : l.doc.checks) {
          const MapPresentation& m = need_map(l.doc, d.map);
          jobs.push_back({d.check, [&m, k = d.check, &b] { return run_check(k, m, b); }});
          maps.push_back(&m);
        }
      }
      auto vs = run_all(jobs, parallel);
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (*run) vs[i].notes.push_back("map " + maps[i]->name);
        rep.add(std::move(vs[i]));
        if (audit_flag) {
          ctx.map = maps[i];
          rep.records.back().audit = audit(rep.records.back().verdict, ctx);
        }
        if (rep.records.back().verdict.fails()) {
          // print the offending schema for item i failures
          const json& w = rep.records.back().verdict.witness;
          if (w.is_object() && w.contains("first_failure") && w["first_failure"]["witness"].contains("schema"))
            rep.records.back().verdict.notes.push_back("failing schema: " + w["first_failure"]["witness"]["schema"].get<std::string>());
        }
      }
      rep.bounds = b.to_json();
    } else if (*refute) {
      rep.command = "refute-fd";
      Loaded l = load(file);
      const MapPresentation* m = nullptr;
      std::string sym = oracle;
      if (auto c = oracle.find(':'); c != std::string::npos) {
        m = &need_map(l.doc, oracle.substr(0, c));
        sym = oracle.substr(c + 1);
      } else if (sym.rfind("C_", 0) == 0 && l.doc.maps.size() == 1) {
        m = &l.doc.maps[0];
        sym = sym.substr(2);
      } else {
        throw UsageError("--oracle must be MAP:SYMBOL, or C_SYMBOL when the document has one map");
      }
      Symbol s;
      try {
        s = dsl::parse_symbol(m->target, sym);
      } catch (const Error& e) {
        throw UsageError("target symbol '" + sym + "' for map " + m->name + ": " + e.what());
      }
      Point x = need_point(m->source, point, l.doc);
      oracle_holder = corpus::class_oracle(*m, s);
      Verdict v = guarded("refute-fd", [&] { return corpus::refute(*m, s, x, b.max_window); });
      rep.add(v);
      ctx.map = m;
      ctx.space = &m->source;
      ctx.oracle = &*oracle_holder;
      ctx.point = x;
      if (audit_flag) rep.records.back().audit = audit(rep.records.back().verdict, ctx);
      rep.bounds = {{"max_window", b.max_window}};
    } else if (*converge) {
      rep.command = "converge";
      Loaded l = load(file);
      const dsl::SequenceDecl* sd = l.doc.sequence(seq);
      if (!sd) throw UsageError("no sequence '" + seq + "' in document");
      const ShiftSpace& sp = need_graph(l.doc, sd->graph);
      Point t = need_point(sp, target, l.doc);
      ConvergenceBounds cb;
      cb.max_depth = b.max_depth;
      cb.max_index = b.max_index;
      if (t.is_finite()) {
        const VertexSet& a = sp.emitter(t.as_finite().tail);
        EdgeSet eps = sp.emitted(a);
        cb.excluded_sets.push_back({});
        for (const auto& e : eps.closest_to_zero(3)) cb.excluded_sets.push_back(EdgeSet::of(e));
      }
      rep.add(guarded("convergence", [&] { return check_convergence(sp, sd->sequence(), t, cb); }));
      rep.bounds = bounds_json(cb);
    } else if (*fixture_run) {
      rep.command = "fixture run " + fixture;
      corpus::FixtureBounds fb;
      fb.samples = b.samples;
      fb.depth = b.depth;
      fb.max_window = b.max_window;
      corpus::Fixture f = corpus::build_fixture(fixture, fb);
      std::vector<std::pair<std::string, std::function<Verdict()>>> jobs;
      for (const auto& c : f.checks) jobs.push_back({c.name, c.run});
      auto vs = run_all(jobs, parallel);
      corpus::FixtureReport fr{f.name, {}};
      std::string table;
      for (std::size_t i = 0; i < vs.size(); ++i) {
        vs[i].notes.push_back("expected " + to_string(f.checks[i].expected) + ": " + f.checks[i].reason);
        fr.rows.push_back({f.checks[i].name, f.checks[i].expected, vs[i]});
        table += (fr.rows.back().matched() ? "  match    " : "  MISMATCH ") + f.checks[i].name + ": expected " +
                 to_string(f.checks[i].expected) + ", got " + to_string(vs[i].status) + "\n";
        rep.add(vs[i]);
        if (audit_flag) {
          ctx.map = nullptr;
          for (const auto& m : f.maps)
            if (f.checks[i].name.find(m.name) != std::string::npos || f.maps.size() == 1) ctx.map = &m;
          if (f.name == "c") ctx.map = &f.maps[f.checks[i].name.rfind("c1", 0) == 0 ? 0 : 1];
          if (f.name == "d") ctx.map = &f.maps[f.checks[i].name.find("inverse") != std::string::npos ? 1 : 0];
          rep.records.back().audit = audit(vs[i], ctx);
        }
      }
      rep.bounds = {{"samples", fb.samples}, {"depth", fb.depth}, {"max_window", fb.max_window}};
      rep.data = {{"fixture", f.name}, {"all_matched", fr.all_matched()}};
      if (format == "json") {
        json j = rep.to_json();
        j["data"]["table"] = fr.to_json()["rows"];
        for (auto& row : j["data"]["table"]) row.erase("verdict");
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "fixture " << f.name << ":\n" << table << "\n" << rep.to_text();
        std::cout << (fr.all_matched() ? "all expected verdicts matched\n" : "some verdicts differ from the expected table\n");
      }
      return fr.all_matched() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  std::cout << (format == "json" ? rep.to_json().dump(2) + "\n" : rep.to_text());
  return rep.exit_code();
}

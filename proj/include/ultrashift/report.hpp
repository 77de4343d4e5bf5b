// Structured reports: versioned JSON, human text, exit codes and witness
// audits.
#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ultrashift/definable.hpp"
#include "ultrashift/dsl.hpp"
#include "ultrashift/map.hpp"

namespace ultrashift {

struct Record {
  Verdict verdict;
  std::optional<json> audit;

  json to_json() const {
    json j = verdict.to_json();
    if (audit) j["audit"] = *audit;
    return j;
  }
};

struct Report {
  std::string command;
  json bounds = json::object();
  std::vector<Record> records;
  /// Non-verdict output such as emitter lists.
  json data = nullptr;

  void add(Verdict v) { records.push_back({std::move(v), std::nullopt}); }

  Status overall() const {
    Status s = Status::NotApplicable;
    for (const auto& r : records) s = worst(s, r.verdict.status);
    return s;
  }
  int exit_code() const {
    bool unknown = false;
    for (const auto& r : records) {
      if (r.verdict.fails()) return 1;
      if (r.verdict.status == Status::Unknown) unknown = true;
    }
    return unknown ? 2 : 0;
  }

  json to_json() const {
    json rs = json::array();
    for (const auto& r : records) rs.push_back(r.to_json());
    json j{{"schema", 1}, {"command", command}, {"bounds", bounds}, {"records", rs}};
    if (!data.is_null()) j["data"] = data;
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    if (!data.is_null()) {
      if (data.is_string()) os << data.get<std::string>() << "\n";
      else os << data.dump(2) << "\n";
    }
    for (const auto& r : records) {
      const Verdict& v = r.verdict;
      os << v.check << ": " << to_string(v.status) << " (" << (v.exact ? "exact" : "up to bounds") << ")\n";
      if (!v.bounds.empty()) os << "  bounds: " << v.bounds.dump() << "\n";
      if (!v.witness.is_null()) {
        std::string w = v.witness.dump(2);
        std::string indented;
        for (char c : w) {
          indented += c;
          if (c == '\n') indented += "  ";
        }
        os << "  witness: " << indented << "\n";
      }
      for (const auto& n : v.notes) os << "  note: " << n << "\n";
      if (r.audit) os << "  audit: " << (*r.audit)["result"].get<std::string>() << " - " << (*r.audit)["detail"].get<std::string>() << "\n";
    }
    if (!records.empty()) os << "overall: " << to_string(overall()) << "\n";
    return os.str();
  }
};

// ---- audit ------------------------------------------------------------

/// What a failing witness is re-checked against.
struct AuditContext {
  const MapPresentation* map = nullptr;
  const SetOracle* oracle = nullptr;
  const ShiftSpace* space = nullptr;
  std::optional<Point> point;
};

namespace detail {

inline json audit_result(const std::string& result, const std::string& detail) {
  return {{"result", result}, {"detail", detail}};
}

inline Point witness_point(const ShiftSpace& sp, const json& s) {
  return dsl::parse_point(sp, s.get<std::string>());
}

inline json audit_commute(const MapPresentation& m, const json& w) {
  Point x = witness_point(m.source, w["point"]);
  auto i = w["coordinate"].get<std::size_t>();
  Symbol a = apply_map(m, x.shifted()).coordinate(i), b = apply_map(m, x).shifted().coordinate(i);
  if (a != b) return audit_result("reproduced", "Φ(σx) and σΦ(x) differ at coordinate " + std::to_string(i));
  return audit_result("not-reproduced", "coordinates agree on re-evaluation");
}

inline json audit_probe(const MapPresentation& m, const json& w) {
  Point x = witness_point(m.source, w["point"]);
  Point fx = apply_map(m, x);
  if (fx.to_string(m.target) != w["image"].get<std::string>()) return audit_result("not-reproduced", "Φ(x) changed");
  const auto& seq = w["sequence"];
  const auto& imgs = w["images"];
  for (std::size_t i = 0; i < seq.size(); ++i) {
    Point y = witness_point(m.source, seq[i]);
    Point fy = apply_map(m, y);
    if (fy.to_string(m.target) != imgs[i].get<std::string>()) return audit_result("not-reproduced", "Φ(x^n) changed");
    if (agree(fy, fx, 8)) return audit_result("not-reproduced", "Φ(x^n) agrees with Φ(x) on 8 coordinates");
  }
  return audit_result("reproduced", std::to_string(seq.size()) + " images re-evaluated, each differs from Φ(x) within 8 coordinates");
}

inline json audit_refute(const ShiftSpace& sp, const SetOracle& c, const Point& x, const json& w) {
  std::size_t n = 0;
  for (const auto& row : w["rows"]) {
    Point y = witness_point(sp, row["y"]);
    auto k = row["k"].get<std::size_t>(), l = row["l"].get<std::size_t>();
    for (std::size_t i = k; i <= l; ++i)
      if (y.coordinate(i) != x.coordinate(i))
        return audit_result("not-reproduced", "witness leaves x inside window " + std::to_string(k) + ".." + std::to_string(l));
    if (c.contains(y)) return audit_result("not-reproduced", "witness lies in the set");
    ++n;
  }
  return audit_result("reproduced", std::to_string(n) + " window witnesses agree with x and lie outside the set");
}

inline json audit_class(const MapPresentation& m, const json& w) {
  Point x = witness_point(m.source, w["point"]);
  Symbol s = symbol_at(m, x);
  if (symbol_text(m.target, s) == w["class"].get<std::string>())
    return audit_result("reproduced", "point lies in class " + w["class"].get<std::string>());
  return audit_result("not-reproduced", "point lies in class " + symbol_text(m.target, s));
}

/// Points named in extension witnesses are valid and Φ evaluates on them.
inline json audit_extensions(const MapPresentation& m, const json& w) {
  std::size_t n = 0;
  auto visit = [&](const json& pts) {
    for (const auto& p : pts) {
      Point y = witness_point(m.source, p["point"]);
      if (!point_issues(m.source, y).empty()) return false;
      apply_map(m, y);
      ++n;
    }
    return true;
  };
  if (w.contains("point")) {
    Point x = witness_point(m.source, w["point"]);
    if (w.contains("image") && apply_map(m, x).to_string(m.target) != w["image"].get<std::string>())
      return audit_result("not-reproduced", "Φ(x) changed");
  }
  if (w.contains("escaping") && !visit(w["escaping"]["witnesses"])) return audit_result("not-reproduced", "invalid witness point");
  return audit_result("re-evaluated", std::to_string(n) + " extension witnesses are valid points and Φ evaluates on them");
}

}  // namespace detail

inline json audit(const Verdict& v, const AuditContext& ctx) {
  if (!v.fails()) return detail::audit_result("not-applicable", "only failing records are audited");
  try {
    const json& w = v.witness;
    if (w.is_object() && w.contains("first_failure")) {
      Verdict sub = Verdict::make(w["first_failure"]["check"].get<std::string>(), Status::Fails, w["first_failure"]["witness"]);
      json r = audit(sub, ctx);
      r["part"] = sub.check;
      return r;
    }
    if (v.check == "refute-fd" && ctx.oracle && ctx.space && ctx.point)
      return detail::audit_refute(*ctx.space, *ctx.oracle, *ctx.point, w);
    if (!ctx.map) return detail::audit_result("not-auditable", "no map in context");
    const MapPresentation& m = *ctx.map;
    if (v.check == "commute") return detail::audit_commute(m, w);
    if (v.check == "continuity-probe" || v.check == "continuity-on-infinite-preimage") return detail::audit_probe(m, w);
    if (v.check == "length-preserving-ii" || (v.check == "map-partition" && w.contains("class"))) return detail::audit_class(m, w);
    if (v.check == "map-partition") {
      try {
        symbol_at(m, detail::witness_point(m.source, w["point"]));
      } catch (const Error& e) {
        return detail::audit_result("reproduced", e.what());
      }
      return detail::audit_result("not-reproduced", "point lies in exactly one class");
    }
    if (v.check == "eval" || v.check == "period") {
      Point x = detail::witness_point(m.source, w["point"]);
      bool same = apply_map(m, x).to_string(m.target) == w["image"].get<std::string>();
      return detail::audit_result(same ? "reproduced" : "not-reproduced", same ? "image re-evaluated" : "image changed");
    }
    return detail::audit_extensions(m, w);
  } catch (const std::exception& e) {
    return detail::audit_result("not-auditable", e.what());
  }
}

}  // namespace ultrashift

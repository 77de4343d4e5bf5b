// Outcome of a bounded check.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ultrashift {

using json = nlohmann::json;

enum class Status { Holds, Fails, Unknown, NotApplicable };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Holds: return "holds";
    case Status::Fails: return "fails";
    case Status::Unknown: return "unknown";
    case Status::NotApplicable: return "not-applicable";
  }
  return "?";
}

/// Fails dominates unknown, which dominates holds and not-applicable.
inline Status worst(Status a, Status b) {
  auto rank = [](Status s) {
    switch (s) {
      case Status::Fails: return 3;
      case Status::Unknown: return 2;
      case Status::Holds: return 1;
      case Status::NotApplicable: return 0;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

struct Verdict {
  std::string check;
  Status status = Status::Unknown;
  json bounds = json::object();
  json witness = nullptr;
  std::vector<std::string> notes;
  /// Holds verdicts are only valid up to the echoed bounds unless exact.
  bool exact = false;

  bool holds() const { return status == Status::Holds; }
  bool fails() const { return status == Status::Fails; }

  json to_json() const {
    json j{{"check", check}, {"status", to_string(status)}, {"bounds", bounds}, {"witness", witness}};
    if (!notes.empty()) j["notes"] = notes;
    j["qualifier"] = exact ? "exact" : "up-to-bounds";
    return j;
  }

  static Verdict make(std::string check, Status s, json witness = nullptr) {
    Verdict v;
    v.check = std::move(check);
    v.status = s;
    v.witness = std::move(witness);
    return v;
  }
};

}  // namespace ultrashift

#pragma once

#include <string>
#include <vector>

namespace stablab {

struct Check {
  std::string name;
  bool pass = true;
  std::string witness;  // required when pass is false
};

struct Report {
  std::vector<Check> checks;

  void add(std::string name, bool pass, std::string witness = {}) {
    checks.push_back({std::move(name), pass, std::move(witness)});
  }
  void append(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }

  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const Check* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
};

}  // namespace stablab

#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace theta {

// One named sub-check of a verification scenario.
struct Check {
  std::string name;
  bool pass = false;
  std::string note;  // residual or context when failing
};

struct Report {
  std::string scenario;
  std::vector<Check> checks;

  void add(std::string name, bool pass, std::string note = "") {
    checks.push_back({std::move(name), pass, std::move(note)});
  }
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

}  // namespace theta

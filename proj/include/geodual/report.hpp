#ifndef GEODUAL_REPORT_HPP
#define GEODUAL_REPORT_HPP

#include <algorithm>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

namespace geodual {

/// Outcome of one verified property: how many instances were examined and a
/// description of every counterexample.
struct Check {
  std::string name;
  std::size_t evaluated = 0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
  void expect(bool ok, const std::string& what) {
    ++evaluated;
    if (!ok) failures.push_back(what);
  }
};

struct Report {
  std::deque<Check> checks;  ///< deque: references returned by add stay valid

  Check& add(const std::string& name) {
    checks.push_back(Check{name, 0, {}});
    return checks.back();
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
  }
};

/// "PASS name (k evaluated)" per check, followed by indented failures.
std::string to_string(const Report& r);

}  // namespace geodual

#endif  // GEODUAL_REPORT_HPP

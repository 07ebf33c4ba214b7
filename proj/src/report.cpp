#include "geodual/report.hpp"

#include <sstream>

namespace geodual {

std::string to_string(const Report& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << (c.passed() ? "PASS " : "FAIL ") << c.name << " (" << c.evaluated << " evaluated)\n";
    for (const auto& f : c.failures) os << "  " << f << "\n";
  }
  return os.str();
}

}  // namespace geodual

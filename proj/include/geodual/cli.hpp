#ifndef GEODUAL_CLI_HPP
#define GEODUAL_CLI_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "geodual/polyhedral_function.hpp"
#include "geodual/vectopt.hpp"

namespace geodual::cli {

/// Process exit status. Every check failure maps to a nonzero code.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kParseError = 2,       ///< malformed file, schema violation or bad usage
  kImproper = 3,         ///< improper function or empty feasible set
  kNotRelativeInterior = 4,
};

/// Malformed instance document. The message carries "line L, column C" for
/// syntax errors and the field path (e.g. "pieces[0].a[1]") otherwise.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadraticInstance {
  Eigen::MatrixXd A;
  Eigen::VectorXd x;
};

/// One instance per file, selected by the top-level "kind" field.
struct Instance {
  std::string kind;  ///< "pcf" | "vop" | "quadratic"
  std::optional<PolyhedralConvexFunction> pcf;
  std::optional<VopInstance> vop;
  std::optional<Matrix> basis_E;
  std::optional<QuadraticInstance> quadratic;
};

/// Parses a JSON instance document. Scalars of exact kinds are integers or
/// "p/q" strings; quadratic matrices may also use JSON floating-point numbers.
/// Throws ParseError, and ImproperFunction for a pcf with empty domain.
Instance parse_instance(std::string_view text);

/// Runs `geodual <command> [file] [options]`; args excludes the program name.
/// Reports go to `out`, diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Header line of every report; bumped when the layout changes.
inline constexpr std::string_view kReportHeader = "geodual-report v1";

}  // namespace geodual::cli

#endif  // GEODUAL_CLI_HPP

#include "geodual/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "geodual/duality_map.hpp"
#include "geodual/second_order.hpp"

namespace geodual::cli {

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- parsing

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ParseError((path.empty() ? "" : path + ".") + key + ": missing field");
  return obj.at(key);
}

std::string join_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void allow_only(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  if (!obj.is_object()) throw ParseError((path.empty() ? "document" : path) + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ParseError(join_path(path, k) + ": unknown field");
  }
}

Rational parse_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational::parse(j.dump());
  if (j.is_number_float()) throw ParseError(path + ": floating-point value not allowed, use an integer or \"p/q\"");
  if (!j.is_string()) throw ParseError(path + ": expected an integer or a \"p/q\" string");
  const std::string s = j.get<std::string>();
  try {
    return Rational::parse(s);
  } catch (const std::invalid_argument&) {
    throw ParseError(path + ": malformed rational \"" + s + "\"");
  }
}

double parse_real(const json& j, const std::string& path) {
  if (j.is_number_float()) return j.get<double>();
  return parse_rational(j, path).to_double();
}

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  return j;
}

Vector parse_vector(const json& j, const std::string& path, Index expected = -1) {
  const json& a = array_at(j, path);
  if (a.empty()) throw ParseError(path + ": empty vector");
  if (expected >= 0 && static_cast<Index>(a.size()) != expected)
    throw ParseError(path + ": expected " + std::to_string(expected) + " entries, found " + std::to_string(a.size()));
  Vector v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Index>(i)) = parse_rational(a[i], index_path(path, i));
  return v;
}

Matrix parse_matrix(const json& j, const std::string& path, Index expected_rows = -1) {
  const json& a = array_at(j, path);
  if (a.empty()) throw ParseError(path + ": empty matrix");
  if (expected_rows >= 0 && static_cast<Index>(a.size()) != expected_rows)
    throw ParseError(path + ": expected " + std::to_string(expected_rows) + " rows, found " + std::to_string(a.size()));
  const Vector first = parse_vector(a[0], index_path(path, 0));
  Matrix m(static_cast<Index>(a.size()), first.size());
  m.row(0) = first.transpose();
  for (std::size_t i = 1; i < a.size(); ++i)
    m.row(static_cast<Index>(i)) = parse_vector(a[i], index_path(path, i), first.size()).transpose();
  return m;
}

Eigen::MatrixXd parse_real_matrix(const json& j, const std::string& path) {
  const json& a = array_at(j, path);
  if (a.empty()) throw ParseError(path + ": empty matrix");
  const std::size_t cols = array_at(a[0], index_path(path, 0)).size();
  Eigen::MatrixXd m(static_cast<Index>(a.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const json& row = array_at(a[i], index_path(path, i));
    if (row.size() != cols)
      throw ParseError(index_path(path, i) + ": expected " + std::to_string(cols) + " entries, found " +
                       std::to_string(row.size()));
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(i), static_cast<Index>(c)) = parse_real(row[c], index_path(index_path(path, i), c));
  }
  return m;
}

std::vector<AffinePiece> parse_affine_list(const json& j, const std::string& path, Index n) {
  std::vector<AffinePiece> out;
  const json& a = array_at(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string p = index_path(path, i);
    allow_only(a[i], {"a", "b"}, p);
    out.push_back({parse_vector(field(a[i], "a", p), join_path(p, "a"), n), parse_rational(field(a[i], "b", p), join_path(p, "b"))});
  }
  return out;
}

PolyhedralConvexFunction parse_pcf(const json& doc) {
  allow_only(doc, {"kind", "dim", "pieces", "constraints"}, "");
  const json& pieces = array_at(field(doc, "pieces", ""), "pieces");
  if (pieces.empty()) throw ParseError("pieces: at least one affine piece is required");
  Index n = -1;
  if (doc.contains("dim")) {
    const Rational d = parse_rational(doc.at("dim"), "dim");
    if (!d.is_integer() || d < Rational(1)) throw ParseError("dim: expected a positive integer");
    n = static_cast<Index>(d.numerator().get_si());
  } else {
    n = static_cast<Index>(array_at(field(pieces[0], "a", "pieces[0]"), "pieces[0].a").size());
  }
  const auto ps = parse_affine_list(pieces, "pieces", n);
  std::vector<Constraint> cs;
  if (doc.contains("constraints"))
    for (const auto& c : parse_affine_list(doc.at("constraints"), "constraints", n)) cs.push_back({c.a, c.b});
  return PolyhedralConvexFunction::make(n, ps, cs);
}

VopInstance parse_vop(const json& doc, std::optional<Matrix>& basis) {
  allow_only(doc, {"kind", "gamma", "A", "b", "cone_rays", "cone_lines", "k", "E"}, "");
  VopInstance vop;
  vop.gamma = parse_matrix(field(doc, "gamma", ""), "gamma");
  const Index q = vop.gamma.rows();
  const Index m = vop.gamma.cols();
  const json& a = array_at(field(doc, "A", ""), "A");
  vop.A.resize(static_cast<Index>(a.size()), m);
  for (std::size_t i = 0; i < a.size(); ++i) vop.A.row(static_cast<Index>(i)) = parse_vector(a[i], index_path("A", i), m).transpose();
  const json& b = array_at(field(doc, "b", ""), "b");
  if (b.size() != a.size())
    throw ParseError("b: expected " + std::to_string(a.size()) + " entries, found " + std::to_string(b.size()));
  vop.b.resize(static_cast<Index>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) vop.b(static_cast<Index>(i)) = parse_rational(b[i], index_path("b", i));
  std::vector<Vector> rays, lines;
  const json& r = array_at(field(doc, "cone_rays", ""), "cone_rays");
  for (std::size_t i = 0; i < r.size(); ++i) rays.push_back(parse_vector(r[i], index_path("cone_rays", i), q));
  if (doc.contains("cone_lines")) {
    const json& l = array_at(doc.at("cone_lines"), "cone_lines");
    for (std::size_t i = 0; i < l.size(); ++i) lines.push_back(parse_vector(l[i], index_path("cone_lines", i), q));
  }
  vop.cone_C = Polyhedron::cone(rays, lines, q);
  vop.k = parse_vector(field(doc, "k", ""), "k", q);
  if (doc.contains("E")) {
    basis = parse_matrix(doc.at("E"), "E", q);
    if (basis->cols() != q - 1) throw ParseError("E: expected " + std::to_string(q - 1) + " columns");
  }
  return vop;
}

QuadraticInstance parse_quadratic(const json& doc) {
  allow_only(doc, {"kind", "A", "x"}, "");
  QuadraticInstance out;
  out.A = parse_real_matrix(field(doc, "A", ""), "A");
  if (out.A.rows() != out.A.cols()) throw ParseError("A: expected a square matrix");
  out.x = Eigen::VectorXd::Zero(out.A.rows());
  if (doc.contains("x")) {
    const Eigen::MatrixXd x = parse_real_matrix(json::array({doc.at("x")}), "x");
    if (x.cols() != out.A.rows()) throw ParseError("x: expected " + std::to_string(out.A.rows()) + " entries");
    out.x = x.row(0).transpose();
  }
  return out;
}

// ---------------------------------------------------------------- documents

std::string real_text(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (v == 0) v = 0;  // drop the sign of -0
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

json rational_json(const Rational& r) { return r.to_string(); }

json vector_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i).to_string());
  return a;
}

json real_vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(real_text(v(i)));
  return a;
}

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(Vector(m.row(i).transpose())));
  return a;
}

json real_matrix_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(real_vector_json(m.row(i).transpose()));
  return a;
}

json constraints_json(const std::vector<Constraint>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(json{{"a", vector_json(c.normal)}, {"b", rational_json(c.offset)}});
  return a;
}

json vectors_json(const std::vector<Vector>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vector_json(v));
  return a;
}

json polyhedron_json(const Polyhedron& p) {
  return json{{"inequalities", constraints_json(p.h().inequalities)},
              {"equalities", constraints_json(p.h().equalities)},
              {"vertices", vectors_json(p.v().vertices)},
              {"rays", vectors_json(p.v().rays)},
              {"lines", vectors_json(p.v().lines)}};
}

json pcf_json(const PolyhedralConvexFunction& f) {
  json pieces = json::array();
  for (const auto& p : f.pieces()) pieces.push_back(json{{"a", vector_json(p.a)}, {"b", rational_json(p.b)}});
  return json{{"dim", f.ambient_dim()}, {"pieces", pieces}, {"constraints", constraints_json(f.constraints())}};
}

json face_json(std::size_t id, Index dim, const VRep& v) {
  return json{{"id", id}, {"dim", dim}, {"vertices", vectors_json(v.vertices)}, {"rays", vectors_json(v.rays)},
              {"lines", vectors_json(v.lines)}};
}

json histogram_json(const std::vector<std::pair<Index, Index>>& dims) {
  std::map<std::pair<Index, Index>, int> counts;
  for (const auto& d : dims) ++counts[d];
  json a = json::array();
  // descending dual dimension, then ascending primal
  for (auto it = counts.rbegin(); it != counts.rend(); ++it)
    a.push_back(json{{"dims", std::to_string(it->first.first) + "+" + std::to_string(it->first.second)},
                     {"count", it->second}});
  return a;
}

// ---------------------------------------------------------------- checks

const std::vector<std::string> kKnownChecks{
    "biconjugate",  "bijection",   "inclusion-reversal", "dimensions", "indicatrix",
    "witness-independence", "hyperplane-form", "weak-duality", "dual-image", "rmin",
    "second-subderivative", "inverse-hessian", "polarity", "curvature", "classification"};

std::vector<std::string> parse_check_list(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (std::find(kKnownChecks.begin(), kKnownChecks.end(), item) == kKnownChecks.end())
      throw ParseError("--checks: unknown check \"" + item + "\"");
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  return out;
}

// Selected checks of a report as a document; `failed` is set when any
// selected check fails. For numeric quadratic reports "indicatrix" selects
// the indicatrix checks of the second-order oracle.
json checks_json(const Report& report, const std::vector<std::string>& selected, const std::string& kind, bool& failed) {
  std::vector<std::string> names;
  if (selected.empty()) {
    for (const auto& c : report.checks) names.push_back(c.name);
  } else {
    for (const auto& s : selected) {
      if (kind == "quadratic" && s == "indicatrix") {
        names.push_back("polarity");
        names.push_back("curvature");
      } else {
        names.push_back(s);
      }
    }
  }
  json a = json::array();
  for (const auto& name : names) {
    const Check* c = report.find(name);
    if (!c) {
      a.push_back(json{{"name", name}, {"status", "SKIP"}, {"evaluated", 0}, {"failures", json::array()}});
      continue;
    }
    failed = failed || !c->passed();
    json failures = json::array();
    for (const auto& f : c->failures) failures.push_back(f);
    a.push_back(json{{"name", name}, {"status", c->passed() ? "PASS" : "FAIL"}, {"evaluated", c->evaluated},
                     {"failures", failures}});
  }
  return a;
}

// ---------------------------------------------------------------- text rendering

bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }
bool is_vector(const json& j) {
  return j.is_array() && !j.empty() && std::all_of(j.begin(), j.end(), [](const json& e) { return is_scalar(e); });
}
bool is_flat(const json& j) {
  if (!j.is_object()) return false;
  for (const auto& [k, v] : j.items())
    if (!is_scalar(v) && !is_vector(v)) return false;
  return true;
}

std::string scalar_text(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string vector_text(const json& j) {
  std::string s = "(";
  for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + scalar_text(j[i]);
  return s + ")";
}

std::string value_text(const json& j) { return is_vector(j) ? vector_text(j) : scalar_text(j); }

void render_object(const json& obj, std::size_t indent, bool list_item, std::ostream& os);

void render_value(const std::string& key, const json& v, std::size_t indent, const std::string& lead, std::ostream& os) {
  const std::string pad(indent, ' ');
  if (key == "checks") {
    os << lead << "checks:\n";
    for (const auto& c : v) {
      os << pad << "  " << scalar_text(c["status"]) << " " << scalar_text(c["name"]) << " (" << c["evaluated"].dump()
         << " evaluated)\n";
      for (const auto& f : c["failures"]) os << pad << "    " << scalar_text(f) << "\n";
    }
    return;
  }
  if (is_scalar(v) || is_vector(v)) {
    os << lead << key << ": " << value_text(v) << "\n";
  } else if (v.is_array()) {
    if (v.empty()) {
      os << lead << key << ": (none)\n";
      return;
    }
    os << lead << key << ":\n";
    for (const auto& item : v) {
      if (is_vector(item) || is_scalar(item)) {
        os << pad << "  " << value_text(item) << "\n";
      } else if (is_flat(item)) {
        os << pad << "  - ";
        bool first = true;
        for (const auto& [k, e] : item.items()) {
          os << (first ? "" : ", ") << k << ": " << value_text(e);
          first = false;
        }
        os << "\n";
      } else if (item.is_object()) {
        render_object(item, indent + 4, true, os);
      } else {
        os << pad << "  " << item.dump() << "\n";
      }
    }
  } else {
    os << lead << key << ":\n";
    render_object(v, indent + 2, false, os);
  }
}

void render_object(const json& obj, std::size_t indent, bool list_item, std::ostream& os) {
  bool first = true;
  for (const auto& [k, v] : obj.items()) {
    const std::string lead = (first && list_item) ? std::string(indent - 2, ' ') + "- " : std::string(indent, ' ');
    render_value(k, v, indent, lead, os);
    first = false;
  }
}

void emit(const json& doc, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << doc.dump(2) << "\n";
    return;
  }
  out << kReportHeader << "\n";
  json body = doc;
  body.erase("report");
  render_object(body, 0, false, out);
}

// ---------------------------------------------------------------- commands

struct Options {
  std::string command;
  std::string file;
  std::string format = "text";
  std::string checks;
  std::optional<std::uint64_t> seed;
  double tolerance = 1e-6;
  int samples = 50;
  int dim = 2;
};

json header(const Options& o) { return json{{"report", std::string(kReportHeader)}, {"command", o.command}}; }

Instance load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

const PolyhedralConvexFunction& need_pcf(const Instance& inst, const std::string& command) {
  if (!inst.pcf) throw ParseError("kind: " + command + " expects a \"pcf\" instance, found \"" + inst.kind + "\"");
  return *inst.pcf;
}

const VopInstance& need_vop(const Instance& inst, const std::string& command) {
  if (!inst.vop) throw ParseError("kind: " + command + " expects a \"vop\" instance, found \"" + inst.kind + "\"");
  return *inst.vop;
}

// Seeded random function: up to four pieces with entries in [-3,3] and up to
// three constraints through a common interior point.
PolyhedralConvexFunction generated_function(std::uint64_t seed, Index n) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  auto vector = [&](long lo, long hi) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Rational(uniform(lo, hi));
    return v;
  };
  std::vector<AffinePiece> pieces;
  const long m = uniform(1, 4);
  for (long i = 0; i < m; ++i) pieces.push_back({vector(-3, 3), Rational(uniform(-3, 3))});
  const Vector center = vector(-2, 2);
  std::vector<Constraint> cs;
  const long extra = uniform(0, 3);
  for (long j = 0; j < extra; ++j) {
    Vector a = vector(-3, 3);
    if (is_zero(a)) a(j % n) = Rational(1);
    cs.push_back({a, inner(a, center) + Rational(uniform(0, 3))});
  }
  return PolyhedralConvexFunction::make(n, pieces, cs);
}

int cmd_conjugate(const Options& o, std::ostream& out) {
  const Instance inst = load(o.file);
  const PolyhedralConvexFunction& f = need_pcf(inst, o.command);
  json doc = header(o);
  doc["function"] = pcf_json(f);
  doc["conjugate"] = pcf_json(conjugate(f));
  emit(doc, o.format, out);
  return kOk;
}

int cmd_faces(const Options& o, std::ostream& out) {
  const Instance inst = load(o.file);
  json doc = header(o);
  if (inst.pcf) {
    const PolyhedralConvexFunction& f = *inst.pcf;
    json primal = json::array(), dual = json::array();
    const auto pf = k_minimal_faces(f);
    for (std::size_t i = 0; i < pf.size(); ++i) primal.push_back(face_json(i, pf[i].dim(), pf[i].graph_points));
    const auto df = k_minimal_faces(conjugate(f));
    for (std::size_t i = 0; i < df.size(); ++i) dual.push_back(face_json(i, df[i].dim(), df[i].graph_points));
    doc["epigraph_faces"] = primal;
    doc["conjugate_epigraph_faces"] = dual;
  } else {
    const ImagePair pair = build_images(need_vop(inst, o.command), inst.basis_E);
    json primal = json::array(), dual = json::array();
    const auto pf = relatively_minimal_faces(pair);
    for (std::size_t i = 0; i < pf.size(); ++i) primal.push_back(face_json(i, pf[i].dim, pf[i].as_polyhedron().v()));
    const auto df = k_maximal_faces(pair);
    for (std::size_t i = 0; i < df.size(); ++i) dual.push_back(face_json(i, df[i].dim, df[i].as_polyhedron().v()));
    doc["relatively_minimal_faces"] = primal;
    doc["k_maximal_faces"] = dual;
  }
  emit(doc, o.format, out);
  return kOk;
}

json vop_summary(const VopReport& r, Index q) {
  std::vector<std::pair<Index, Index>> dims;
  for (const auto& row : r.rows) dims.emplace_back(row.dim_dual, row.dim_primal);
  return json{{"q", q},
              {"relatively_minimal_faces", r.primal_faces.size()},
              {"k_maximal_faces", r.dual_faces.size()},
              {"face_pairs", r.rows.size()},
              {"dimension_histogram", histogram_json(dims)}};
}

int cmd_dualize(const Options& o, std::ostream& out) {
  const Instance inst = load(o.file);
  const ImagePair pair = build_images(need_vop(inst, o.command), inst.basis_E);
  const VopReport r = verify_vop_duality(pair);
  json doc = header(o);
  doc["T"] = matrix_json(pair.T);
  doc["upper_image"] = polyhedron_json(pair.P);
  doc["dual_image"] = polyhedron_json(pair.D);
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back(json{{"dual_id", row.dual_id}, {"primal_id", row.primal_id}, {"dim_dual", row.dim_dual},
                        {"dim_primal", row.dim_primal}, {"witness_v", vector_json(row.witness_v)},
                        {"witness_y", vector_json(row.witness_y)}});
  doc["face_pairs"] = rows;
  bool failed = false;
  doc["checks"] = checks_json(r.report, parse_check_list(o.checks), inst.kind, failed);
  emit(doc, o.format, out);
  return failed ? kCheckFailed : kOk;
}

json quadratic_json(const InverseHessianCheck& c, double tolerance) {
  return json{{"tolerance", real_text(tolerance)},
              {"semi_axes_f", real_vector_json(c.semi_axes_f)},
              {"semi_axes_f_star", real_vector_json(c.semi_axes_f_star)},
              {"hessian_deviation", real_text(c.hessian_deviation)},
              {"polarity_deviation", real_text(c.polarity_deviation)}};
}

InverseHessianCheck run_quadratic(const QuadraticInstance& q, const Options& o) {
  SecondOrderConfig config;
  config.tolerance = o.tolerance;
  return check_inverse_hessian(SmoothQuadratic<double>(q.A), q.x, o.tolerance, {}, config);
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto selected = parse_check_list(o.checks);
  json doc = header(o);
  bool failed = false;
  if (o.file.empty()) {
    if (!o.seed) throw ParseError("verify: a file or --seed is required");
    if (o.dim < 1 || o.dim > 3) throw ParseError("--dim: expected 1, 2 or 3");
    const PolyhedralConvexFunction f = generated_function(*o.seed, o.dim);
    doc["generated"] = json{{"seed", *o.seed}, {"dim", o.dim}};
    doc["function"] = pcf_json(f);
    const DualityReport r = verify_duality(f);
    std::vector<std::pair<Index, Index>> dims;
    for (const auto& e : r.entries) dims.emplace_back(e.dim_dual, e.dim_primal);
    doc["summary"] = json{{"primal_faces", r.primal_faces.size()}, {"dual_faces", r.dual_faces.size()},
                          {"face_pairs", r.entries.size()}, {"dimension_histogram", histogram_json(dims)}};
    doc["checks"] = checks_json(r.report, selected, "pcf", failed);
  } else {
    const Instance inst = load(o.file);
    doc["kind"] = inst.kind;
    if (inst.pcf) {
      const DualityReport r = verify_duality(*inst.pcf);
      std::vector<std::pair<Index, Index>> dims;
      for (const auto& e : r.entries) dims.emplace_back(e.dim_dual, e.dim_primal);
      doc["summary"] = json{{"primal_faces", r.primal_faces.size()}, {"dual_faces", r.dual_faces.size()},
                            {"face_pairs", r.entries.size()}, {"dimension_histogram", histogram_json(dims)}};
      doc["checks"] = checks_json(r.report, selected, inst.kind, failed);
    } else if (inst.vop) {
      const ImagePair pair = build_images(*inst.vop, inst.basis_E);
      const VopReport r = verify_vop_duality(pair);
      doc["summary"] = vop_summary(r, pair.q());
      doc["checks"] = checks_json(r.report, selected, inst.kind, failed);
    } else {
      const InverseHessianCheck c = run_quadratic(*inst.quadratic, o);
      doc["summary"] = quadratic_json(c, o.tolerance);
      doc["checks"] = checks_json(c.report, selected, inst.kind, failed);
    }
  }
  emit(doc, o.format, out);
  return failed ? kCheckFailed : kOk;
}

int cmd_second_order(const Options& o, std::ostream& out) {
  const Instance inst = load(o.file);
  const auto selected = parse_check_list(o.checks);
  json doc = header(o);
  bool failed = false;
  if (inst.quadratic) {
    const InverseHessianCheck c = run_quadratic(*inst.quadratic, o);
    doc["A"] = real_matrix_json(inst.quadratic->A);
    doc["x"] = real_vector_json(inst.quadratic->x);
    doc["summary"] = quadratic_json(c, o.tolerance);
    doc["hessian_f"] = real_matrix_json(c.hessian_f);
    doc["hessian_f_star"] = real_matrix_json(c.hessian_f_star);
    doc["checks"] = checks_json(c.report, selected, inst.kind, failed);
  } else if (inst.pcf) {
    SecondOrderConfig config;
    config.tolerance = o.tolerance;
    const std::uint64_t seed = o.seed.value_or(0);
    const CrossValidation cv = cross_validate_polyhedral(*inst.pcf, o.samples, seed, config);
    doc["summary"] = json{{"tolerance", real_text(o.tolerance)}, {"seed", seed}, {"samples_per_pair", o.samples},
                          {"agreements", cv.agreements}, {"total", cv.total}};
    doc["checks"] = checks_json(cv.report, selected, inst.kind, failed);
  } else {
    throw ParseError("kind: second-order expects a \"quadratic\" or \"pcf\" instance, found \"" + inst.kind + "\"");
  }
  emit(doc, o.format, out);
  return failed ? kCheckFailed : kOk;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    // drop the library's own "[json.exception.parse_error.101] parse error at line L, column C: " prefix
    if (const auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError("syntax error at " + location(text, e.byte) + ": " + what);
  }
  if (!doc.is_object()) throw ParseError("document: expected an object");
  const json& kind = field(doc, "kind", "");
  if (!kind.is_string()) throw ParseError("kind: expected a string");
  Instance inst;
  inst.kind = kind.get<std::string>();
  if (inst.kind == "pcf") {
    inst.pcf = parse_pcf(doc);
  } else if (inst.kind == "vop") {
    inst.vop = parse_vop(doc, inst.basis_E);
  } else if (inst.kind == "quadratic") {
    inst.quadratic = parse_quadratic(doc);
  } else {
    throw ParseError("kind: unknown kind \"" + inst.kind + "\" (expected pcf, vop or quadratic)");
  }
  return inst;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact conjugate duality of polyhedral functions and linear vector optimization", "geodual"};
  app.require_subcommand(1);
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", o.seed, "Seed for generated instances and sampled directions");
  app.add_option("--checks", o.checks, "Comma-separated subset of checks to report");
  app.add_option("--tolerance", o.tolerance, "Numeric tolerance of the second-order oracle")->check(CLI::PositiveNumber);
  app.add_option("--samples", o.samples, "Directions per (x,u) pair for second-order on pcf")->check(CLI::PositiveNumber);
  app.add_option("--dim", o.dim, "Dimension of a generated function (verify without a file)");
  app.fallthrough();
  struct Sub {
    const char* name;
    const char* help;
    bool file_required;
  };
  for (const Sub& s : {Sub{"conjugate", "Print the conjugate of a pcf instance", true},
                       Sub{"faces", "List the K-minimal / relatively minimal faces", true},
                       Sub{"dualize", "Upper and dual images of a vop instance with the face-pair table", true},
                       Sub{"verify", "Run the verification suites on a file or a generated function", false},
                       Sub{"second-order", "Numeric second-order checks on a quadratic or pcf instance", true}}) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    auto* opt = sub->add_option("file", o.file, "Instance file");
    if (s.file_required) opt->required();
    sub->callback([&o, name = std::string(s.name)] { o.command = name; });
  }

  std::vector<const char*> argv{"geodual"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }

  try {
    if (o.command == "conjugate") return cmd_conjugate(o, out);
    if (o.command == "faces") return cmd_faces(o, out);
    if (o.command == "dualize") return cmd_dualize(o, out);
    if (o.command == "verify") return cmd_verify(o, out);
    return cmd_second_order(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const ImproperFunction& e) {
    err << "improper: " << e.what() << "\n";
    return kImproper;
  } catch (const InfeasibleProblem& e) {
    err << "infeasible: " << e.what() << "\n";
    return kImproper;
  } catch (const NotRelativeInterior& e) {
    err << "not in relative interior: " << e.what() << "\n";
    return kNotRelativeInterior;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid instance: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kCheckFailed;
  }
}

}  // namespace geodual::cli

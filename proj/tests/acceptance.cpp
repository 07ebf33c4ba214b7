// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geodual/cli.hpp"
#include "geodual/duality_map.hpp"
#include "geodual/second_order.hpp"
#include "oracles.hpp"

using namespace geodual;
using namespace oracle;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool condition, const std::string& what) {
    if (!condition && ok) detail = what;  // first failure is reported
    ok = ok && condition;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Polyhedron segment(const Vector& a, const Vector& b) { return Polyhedron::from_vrep(vrep(a.size(), {a, b})); }

const FaceDescriptor* find_face(const std::vector<FaceDescriptor>& faces, const Polyhedron& p) {
  for (const auto& f : faces)
    if (f.as_polyhedron() == p) return &f;
  return nullptr;
}

// Simplex instance against the hand-derived images and pairs.
Outcome criterion1(std::string& summary) {
  Outcome o;
  VopInstance vop;
  vop.gamma = identity_matrix(2);
  vop.A = make_matrix({{1, 1}, {1, 0}, {0, 1}});
  vop.b = vec({1, 0, 0});
  vop.cone_C = Polyhedron::cone({vec({1, 0}), vec({0, 1})}, {}, 2);
  vop.k = vec({1, 1});
  const ImagePair pair = build_images(vop);
  // P = {y₁+y₂ ≥ 1, y ≥ 0}; D = {0 ≤ w ≤ 1, s ≤ w, s ≤ 1-w}
  o.require(pair.P == Polyhedron::from_hrep(hrep(2, {leq({-1, -1}, -1), leq({-1, 0}, 0), leq({0, -1}, 0)})), "P differs");
  o.require(pair.D == Polyhedron::from_hrep(hrep(2, {leq({-1, 0}, 0), leq({1, 0}, 1), leq({-1, 1}, 0), leq({1, 1}, 1)})),
            "D differs");
  const auto dual = k_maximal_faces(pair);
  const Rational half(1, 2);
  const std::vector<std::pair<Polyhedron, Polyhedron>> listed{
      {Polyhedron::point(vec({half, half})), segment(vec({1, 0}), vec({0, 1}))},
      {segment(vec({0, 0}), vec({half, half})), Polyhedron::point(vec({1, 0}))},
      {segment(vec({half, half}), vec({1, 0})), Polyhedron::point(vec({0, 1}))}};
  for (const auto& [d, p] : listed) {
    const FaceDescriptor* face = find_face(dual, d);
    o.require(face != nullptr, "listed dual face missing");
    if (face) o.require(psi_hat(pair, *face).as_polyhedron() == p, "listed pair maps elsewhere");
  }
  const VopReport r = verify_vop_duality(pair);
  o.require(r.report.passed(), to_string(r.report));
  for (const auto& row : r.rows) o.require(row.dim_dual + row.dim_primal == 1, "dimension sum differs from 1");
  summary = "3 listed pairs present, " + std::to_string(r.rows.size()) + " pairs in total, all dim sums 1";
  return o;
}

// 200 random polyhedral functions through the full duality-map suite.
Outcome criterion2(std::string& summary) {
  Outcome o;
  std::size_t pairs = 0;
  for (int seed = 0; seed < 200; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 100000);
    const Index n = rng.uniform(1, 3);
    const PolyhedralConvexFunction f =
        random_function(rng, n, static_cast<int>(rng.uniform(1, 5)), static_cast<int>(rng.uniform(0, 4))).build();
    o.require(conjugate(conjugate(f)) == f, "seed " + std::to_string(seed) + ": f** differs from f");
    const DualityReport r = verify_duality(f);
    o.require(r.report.passed(), "seed " + std::to_string(seed) + ":\n" + to_string(r.report));
    for (const auto& e : r.entries)
      o.require(e.dim_dual + e.dim_primal == n, "seed " + std::to_string(seed) + ": dimension sum differs from n");
    pairs += r.entries.size();
  }
  summary = "200 seeds, " + std::to_string(pairs) + " face pairs";
  return o;
}

ImagePair random_images(std::uint64_t seed, Index q) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed * 1000 + attempt);
    const Index m = rng.uniform(1, 4);
    const Index p = rng.uniform(1, 6);
    try {
      return build_images(random_vop(rng, q, m, p));
    } catch (const ImproperFunction&) {
      // P = R^q; redraw
    }
  }
}

Outcome check_vop(const ImagePair& pair, const std::string& label, std::size_t& pairs) {
  Outcome o;
  const VopReport r = verify_vop_duality(pair);
  o.require(r.report.passed(), label + ":\n" + to_string(r.report));
  o.require(pair.D == linear_image(Matrix(-identity_matrix(pair.q())), pair.f_star.epigraph()),
            label + ": D differs from -epi f*");
  if (pair.standard_basis)
    o.require(pair.D == dual_image_by_lp_duality(pair.vop), label + ": D differs from the LP-duality image");
  for (const auto& row : r.rows)
    o.require(row.dim_dual + row.dim_primal == pair.q() - 1, label + ": dimension sum differs from q-1");
  pairs += r.rows.size();
  return o;
}

// 100 random vector optimization instances plus a cone with empty interior.
Outcome criterion3(std::string& summary) {
  Outcome o;
  std::size_t pairs = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const Outcome c = check_vop(random_images(static_cast<std::uint64_t>(seed) + 200000, seed % 2 == 0 ? 2 : 3),
                                "seed " + std::to_string(seed), pairs);
    o.require(c.ok, c.detail);
  }
  VopInstance flat;
  flat.gamma = identity_matrix(3);
  flat.A = make_matrix({{1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  flat.b = vec({1, 0, 0, 0});
  flat.cone_C = Polyhedron::cone({vec({1, 0, 1}), vec({-1, 0, 1})}, {}, 3);
  flat.k = vec({0, 0, 1});
  const Outcome c = check_vop(build_images(flat), "empty-interior cone", pairs);
  o.require(c.ok, c.detail);
  summary = "100 seeds + empty-interior cone, " + std::to_string(pairs) + " face pairs";
  return o;
}

// Young-Fenchel with the four equivalent characterizations of equality.
Outcome criterion4(std::string& summary) {
  Outcome o;
  std::size_t count = 0, equalities = 0;
  for (int seed = 0; count < 1000; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 300000);
    const Index n = rng.uniform(1, 3);
    const PolyhedralConvexFunction f =
        random_function(rng, n, static_cast<int>(rng.uniform(1, 5)), static_cast<int>(rng.uniform(0, 3))).build();
    const PolyhedralConvexFunction fs = conjugate(f);
    std::vector<Vector> xs, us;
    for (const auto& face : enumerate_faces(f.epigraph()))
      xs.push_back(relative_interior_point(face.as_polyhedron()).head(n));
    for (const auto& face : enumerate_faces(fs.epigraph()))
      us.push_back(relative_interior_point(face.as_polyhedron()).head(n));
    for (int k = 0; k < 3; ++k) us.push_back(rng.vector(n, -3, 3));
    for (const auto& x : xs) {
      const Rational fx = evaluate(f, x).value();
      Vector lifted(n + 1);
      lifted << x, fx;
      const Polyhedron ncone = normal_cone(f.epigraph(), lifted);
      for (const auto& u : us) {
        const std::string where = "seed " + std::to_string(seed) + ", x = " + to_string(x) + ", u = " + to_string(u);
        ++count;
        Vector normal(n + 1);
        normal << u, Rational(-1);
        const bool in_sub = in_subdifferential(f, x, u);
        const bool in_sub_star = in_subdifferential(fs, u, x);
        const bool in_normal = ncone.contains(normal);
        const ExtendedRational fsu = evaluate(fs, u);
        if (fsu.is_infinite()) {
          o.require(!in_sub && !in_sub_star && !in_normal, where + ": u outside dom f* is a subgradient");
          continue;
        }
        o.require(inner(x, u) <= fx + fsu.value(), where + ": Young-Fenchel violated");
        const bool equality = inner(x, u) == fx + fsu.value();
        equalities += equality;
        o.require(in_sub == equality && in_sub_star == equality && in_normal == equality,
                  where + ": characterizations disagree");
      }
    }
  }
  summary = std::to_string(count) + " pairs, " + std::to_string(equalities) + " with equality";
  return o;
}

// Inverse-Hessian, polarity and the diag(4,1) semi-axes at 1e-6.
Outcome criterion5(std::string& summary) {
  Outcome o;
  constexpr double tol = 1e-6;
  double worst_hessian = 0, worst_polarity = 0;
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 400000);
    const Index n = rng.uniform(1, 4);
    const Matrix b = random_matrix(rng, n, n, -3, 3);
    const Matrix a = Matrix(b.transpose() * b) + identity_matrix(n);
    const Matrix a_inv = *inverse(a);  // exact reference
    const VectorXd x = to_double(rng.vector(n, -2, 2)) / 2.0;
    const InverseHessianCheck c = check_inverse_hessian(SmoothQuadratic<double>(to_double(a)), x, tol, to_double(a_inv));
    o.require(c.report.passed(), "seed " + std::to_string(seed) + ":\n" + to_string(c.report));
    worst_hessian = std::max(worst_hessian, c.hessian_deviation);
    worst_polarity = std::max(worst_polarity, c.polarity_deviation);
  }
  const MatrixXd d = (MatrixXd(2, 2) << 4, 0, 0, 1).finished();
  const InverseHessianCheck c = check_inverse_hessian(SmoothQuadratic<double>(d), (VectorXd(2) << 1, -1).finished(), tol);
  o.require(c.report.passed(), "diag(4,1):\n" + to_string(c.report));
  // ascending order: (1/2, 1) for f and (1, 2) for f*
  o.require((c.semi_axes_f - VectorXd::Map(std::vector<double>{0.5, 1}.data(), 2)).cwiseAbs().maxCoeff() <= tol,
            "semi-axes of ind f differ from (1/2, 1)");
  o.require((c.semi_axes_f_star - VectorXd::Map(std::vector<double>{1, 2}.data(), 2)).cwiseAbs().maxCoeff() <= tol,
            "semi-axes of ind f* differ from (2, 1)");
  std::ostringstream os;
  os.precision(2);
  os << "max Hessian deviation " << worst_hessian << ", max polarity deviation " << worst_polarity;
  summary = os.str();
  return o;
}

// Numeric 0 / +inf classification against exact membership in K(x,u).
Outcome criterion6(std::string& summary) {
  Outcome o;
  const std::vector<std::pair<std::string, PolyhedralConvexFunction>> functions{
      {"|x|", PolyhedralConvexFunction::make(1, {{vec({1}), 0}, {vec({-1}), 0}})},
      {"max(x1,x2)", PolyhedralConvexFunction::make(2, {{vec({1, 0}), 0}, {vec({0, 1}), 0}})},
      {"x + indicator(x <= 0)", PolyhedralConvexFunction::make(1, {{vec({1}), 0}}, {{vec({1}), 0}})}};
  std::size_t agreements = 0, total = 0;
  for (const auto& [name, f] : functions) {
    const CrossValidation cv = cross_validate_polyhedral(f, 50, 6);
    o.require(cv.report.passed() && cv.agreements == cv.total, name + ":\n" + to_string(cv.report));
    o.require(cv.total >= 50, name + ": fewer than 50 directions");
    agreements += cv.agreements;
    total += cv.total;
  }
  summary = std::to_string(agreements) + "/" + std::to_string(total) + " directions agree";
  return o;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every fixture twice in-process: identical bytes, expected exit, golden output.
Outcome criterion7(std::string& summary) {
  Outcome o;
  const std::filesystem::path dir{GEODUAL_FIXTURES_DIR};
  const auto saved = std::filesystem::current_path();
  std::filesystem::current_path(dir);
  const auto manifest = nlohmann::json::parse(read_file("manifest.json"));
  std::set<int> codes;
  for (const auto& entry : manifest) {
    const std::string name = entry["name"];
    const auto args = entry["args"].get<std::vector<std::string>>();
    std::ostringstream out1, err1, out2, err2;
    const int code1 = cli::run(args, out1, err1);
    const int code2 = cli::run(args, out2, err2);
    o.require(code1 == code2 && out1.str() == out2.str() && err1.str() == err2.str(), name + ": nondeterministic");
    o.require(code1 == entry["exit"].get<int>(), name + ": unexpected exit code " + std::to_string(code1));
    o.require(out1.str() == read_file("golden/" + name + ".out") && err1.str() == read_file("golden/" + name + ".err"),
              name + ": output differs from golden");
    codes.insert(code1);
  }
  std::filesystem::current_path(saved);
  o.require(codes == std::set<int>{0, 1, 2, 3, 4}, "not every exit code is exercised");
  summary = std::to_string(manifest.size()) + " fixtures, exit codes 0-4 exercised";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    double budget;  // seconds; 0 = none stated
    std::function<Outcome(std::string&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "worked simplex instance", 1, criterion1},
      {2, "random polyhedral functions", 60, criterion2},
      {3, "random vector optimization instances", 120, criterion3},
      {4, "Young-Fenchel characterizations", 0, criterion4},
      {5, "quadratic second-order oracle", 30, criterion5},
      {6, "exact/numeric cross-validation", 0, criterion6},
      {7, "CLI determinism and exit codes", 0, criterion7},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string summary;
    Outcome o;
    try {
      o = c.run(summary);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    if (c.budget > 0 && elapsed >= c.budget) o.require(false, "runtime over budget");
    all = all && o.ok;
    std::printf("%s criterion %d: %s (%s; %.2f s%s)\n", o.ok ? "PASS" : "FAIL", c.number, c.title,
                o.ok ? summary.c_str() : "see below", elapsed,
                c.budget > 0 ? (" of " + std::to_string(static_cast<int>(c.budget)) + " s").c_str() : "");
    if (!o.ok) std::printf("  %s\n", o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}

#include "geodual/second_order.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "geodual/duality_map.hpp"

namespace geodual {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string format(const VectorXd& v) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ")";
  return os.str();
}

std::string format(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Δ²ₜ without the base-point check; the caller has established g(x) < inf.
double quotient(const NumericFunction& g, const VectorXd& x, const VectorXd& u, const VectorXd& xi, double t) {
  const double diff = g.difference(x, t, xi);
  if (std::isinf(diff)) return kInfinity;
  return (2.0 / t) * (diff / t - u.dot(xi));
}

void require_finite_base(const NumericFunction& g, const VectorXd& x, const char* who) {
  if (x.size() != g.ambient_dim) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  if (!std::isfinite(g(x))) throw std::invalid_argument(std::string(who) + ": g(x) is not finite");
}

// Limit of a sequence with error linear in t, from its last two rungs.
double extrapolate(const std::vector<double>& values, const std::vector<double>& ladder) {
  const std::size_t n = values.size();
  if (n < 2 || std::isinf(values[n - 2])) return values.back();
  const double ratio = ladder[n - 2] / ladder[n - 1];
  return (ratio * values[n - 1] - values[n - 2]) / (ratio - 1.0);
}

// Δ²ₜ(x|u)(ξ) polarized to a matrix: H_ii = d²(eᵢ), H_ij from d²(eᵢ+eⱼ).
MatrixXd polarized_hessian(const NumericFunction& g, const VectorXd& x, const VectorXd& u,
                           const SecondOrderConfig& config) {
  const Index n = g.ambient_dim;
  MatrixXd h(n, n);
  for (Index i = 0; i < n; ++i)
    h(i, i) = second_subderivative(g, x, u, VectorXd::Unit(n, i), config).value;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double both = second_subderivative(g, x, u, VectorXd(VectorXd::Unit(n, i) + VectorXd::Unit(n, j)), config).value;
      h(i, j) = h(j, i) = (both - h(i, i) - h(j, j)) / 2.0;
    }
  return h;
}

double max_relative_deviation(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

VectorXd semi_axes(const MatrixXd& q) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(q);
  VectorXd axes = es.eigenvalues().cwiseSqrt().cwiseInverse();
  std::sort(axes.begin(), axes.end());
  return axes;
}

// max over samples η of |√(ηᵀQ⁻¹η) - 1|: Q⁻¹ gives the support function of
// the ellipsoid {ξᵀQξ ≤ 1}.
double support_deviation(const MatrixXd& q, const std::vector<IndicatrixSample>& dual) {
  const MatrixXd q_inv = q.inverse();
  double worst = 0;
  for (const auto& s : dual) {
    if (s.ray || s.radius == 0) continue;
    const VectorXd eta = s.boundary();
    worst = std::max(worst, std::abs(std::sqrt(eta.dot(q_inv * eta)) - 1.0));
  }
  return worst;
}

}  // namespace

double NumericFunction::difference(const VectorXd& x, double t, const VectorXd& xi) const {
  if (increment) return increment(x, t, xi);
  const double a = evaluator(x + t * xi);
  if (std::isinf(a)) return kInfinity;
  return a - evaluator(x);
}

NumericFunction numeric_function(const SmoothQuadratic<double>& q) {
  NumericFunction g;
  g.ambient_dim = q.dim();
  g.evaluator = [q](const VectorXd& x) { return q.value(x); };
  g.increment = [q](const VectorXd& x, double t, const VectorXd& xi) { return q.increment(x, t, xi); };
  return g;
}

NumericFunction local_model(const PolyhedralConvexFunction& f, const Vector& x_bar) {
  const ExtendedRational base = evaluate(f, x_bar);
  if (base.is_infinite()) throw std::invalid_argument("local_model: base point outside the domain");
  NumericFunction g;
  g.ambient_dim = f.ambient_dim();
  g.evaluator = [f, x_bar, base](const VectorXd& h) {
    const ExtendedRational v = evaluate(f, Vector(x_bar + from_double(h)));
    return v.is_infinite() ? kInfinity : (v.value() - base.value()).to_double();
  };
  g.increment = [f, x_bar](const VectorXd& x, double t, const VectorXd& xi) {
    const Vector from = x_bar + from_double(x);
    const ExtendedRational a = evaluate(f, Vector(from + Rational::from_double(t) * from_double(xi)));
    if (a.is_infinite()) return kInfinity;
    return (a.value() - evaluate(f, from).value()).to_double();
  };
  return g;
}

double second_difference_quotient(const NumericFunction& g, const VectorXd& x, const VectorXd& u,
                                  const VectorXd& xi, double t) {
  if (!(t > 0)) throw std::invalid_argument("second_difference_quotient: t must be positive");
  require_finite_base(g, x, "second_difference_quotient");
  return quotient(g, x, u, xi, t);
}

SubderivativeEstimate second_subderivative(const NumericFunction& g, const VectorXd& x, const VectorXd& u,
                                           const VectorXd& xi, const SecondOrderConfig& config) {
  require_finite_base(g, x, "second_subderivative");
  const Index n = g.ambient_dim;
  SubderivativeEstimate out;
  for (const double t : config.ladder) {
    double best = quotient(g, x, u, xi, t);
    for (Index i = 0; i < n; ++i)
      for (const double s : {t, -t}) {
        VectorXd p = xi;
        p(i) += s;
        best = std::min(best, quotient(g, x, u, p, t));
      }
    out.rungs.push_back(best);
  }
  const std::size_t k = out.rungs.size();
  const double last = out.rungs.back();
  bool divergent = std::isinf(last);
  if (!divergent && k >= 3) {
    const double a = out.rungs[k - 3], b = out.rungs[k - 2];
    const bool increasing = a < b && b < last;
    const bool above = last > config.divergence_threshold;
    const bool growth = a > 0 && b / a >= config.growth_ratio && last / b >= config.growth_ratio &&
                        last > config.tolerance;
    divergent = increasing && (above || growth);
  }
  out.infinite = divergent;
  out.value = divergent ? kInfinity : extrapolate(out.rungs, config.ladder);
  return out;
}

std::vector<VectorXd> direction_net(Index n, int per_circle) {
  std::vector<VectorXd> out;
  if (n == 1) return {VectorXd::Constant(1, 1.0), VectorXd::Constant(1, -1.0)};
  auto clean = [](double v) {
    if (std::abs(v) < 1e-15) return 0.0;
    if (std::abs(std::abs(v) - 1.0) < 1e-15) return std::copysign(1.0, v);
    return v;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (int k = 0; k < per_circle; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / per_circle;
        VectorXd v = VectorXd::Zero(n);
        v(i) = clean(std::cos(theta));
        v(j) = clean(std::sin(theta));
        if (std::none_of(out.begin(), out.end(), [&](const VectorXd& w) { return w == v; })) out.push_back(v);
      }
  return out;
}

std::vector<IndicatrixSample> numeric_indicatrix(const NumericFunction& g, const VectorXd& x, const VectorXd& u,
                                                 int net_size, const SecondOrderConfig& config) {
  std::vector<IndicatrixSample> out;
  for (const auto& zeta : direction_net(g.ambient_dim, net_size)) {
    const SubderivativeEstimate e = second_subderivative(g, x, u, zeta, config);
    IndicatrixSample s;
    s.direction = zeta;
    s.d2 = e.value;
    if (e.infinite) {
      s.radius = 0;
    } else if (e.value <= config.tolerance) {
      s.ray = true;
      s.radius = config.search_bound;
    } else {
      s.radius = 1.0 / std::sqrt(e.value);
    }
    out.push_back(std::move(s));
  }
  return out;
}

CurvatureRadius curvature_radius(const NumericFunction& g, const VectorXd& x0, const VectorXd& zeta, double m,
                                 double t) {
  if (!(t > 0)) throw std::invalid_argument("curvature_radius: t must be positive");
  require_finite_base(g, x0, "curvature_radius");
  const double diff = g.difference(x0, t, zeta);
  if (std::isinf(diff)) return {0.0, false};
  const double slope = diff / t;
  const double gap = slope - m;
  const double scale = 4.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(slope), std::abs(m)});
  if (std::abs(gap) <= scale) return {kInfinity, true};
  if (gap < 0) throw std::invalid_argument("curvature_radius: slope below m");
  return {std::sqrt(1.0 + m * m) * (1.0 + slope * slope) * (t / 2.0) / gap, false};
}

double upper_curvature_radius(const NumericFunction& g, const VectorXd& x0, const VectorXd& u, const VectorXd& zeta,
                              const SecondOrderConfig& config) {
  const double m = u.dot(zeta);
  std::vector<double> rho;
  for (const double t : config.ladder) {
    const CurvatureRadius r = curvature_radius(g, x0, zeta, m, t);
    rho.push_back(r.rho);
  }
  if (std::isinf(rho.back())) return kInfinity;
  return extrapolate(rho, config.ladder);
}

MatrixXd fit_quadratic_form(const std::vector<IndicatrixSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("fit_quadratic_form: no samples");
  const Index n = samples.front().direction.size();
  std::vector<VectorXd> pts;
  for (const auto& s : samples)
    if (!s.ray && s.radius > 0) pts.push_back(s.boundary());
  const Index unknowns = n * (n + 1) / 2;
  if (static_cast<Index>(pts.size()) < unknowns) throw std::invalid_argument("fit_quadratic_form: too few samples");
  MatrixXd design(static_cast<Index>(pts.size()), unknowns);
  for (std::size_t r = 0; r < pts.size(); ++r) {
    Index c = 0;
    for (Index i = 0; i < n; ++i)
      for (Index j = i; j < n; ++j) design(static_cast<Index>(r), c++) = (i == j ? 1.0 : 2.0) * pts[r](i) * pts[r](j);
  }
  const VectorXd coef = design.colPivHouseholderQr().solve(VectorXd::Ones(static_cast<Index>(pts.size())));
  MatrixXd q(n, n);
  Index c = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) q(i, j) = q(j, i) = coef(c++);
  return q;
}

InverseHessianCheck check_inverse_hessian(const SmoothQuadratic<double>& q, const VectorXd& x, double tolerance,
                                          const MatrixXd& a_inverse, const SecondOrderConfig& config) {
  InverseHessianCheck out;
  const SmoothQuadratic<double> q_star = q.conjugate();
  const MatrixXd& a = q.matrix();
  const MatrixXd a_inv = a_inverse.size() ? a_inverse : q_star.matrix();
  const NumericFunction f = numeric_function(q);
  const NumericFunction fs = numeric_function(q_star);
  const VectorXd u = q.gradient(x);

  out.hessian_f = polarized_hessian(f, x, u, config);
  Check& hf = out.report.add("second-subderivative");
  const double dev_f = max_relative_deviation(out.hessian_f, a);
  hf.expect(dev_f <= tolerance, "d2f deviates from A by " + format(dev_f));

  out.hessian_f_star = polarized_hessian(fs, u, x, config);
  Check& hs = out.report.add("inverse-hessian");
  out.hessian_deviation = max_relative_deviation(out.hessian_f_star, a_inv);
  hs.expect(out.hessian_deviation <= tolerance, "d2f* deviates from the inverse by " + format(out.hessian_deviation));

  const auto ind = numeric_indicatrix(f, x, u, config.net_size, config);
  const auto ind_star = numeric_indicatrix(fs, u, x, config.net_size, config);
  Check& pol = out.report.add("polarity");
  double worst_pair = 0;
  for (const auto& s : ind)
    for (const auto& t : ind_star) worst_pair = std::max(worst_pair, s.boundary().dot(t.boundary()));
  pol.expect(worst_pair <= 1.0 + tolerance, "sampled pair with <xi,eta> = " + format(worst_pair));
  const MatrixXd form = fit_quadratic_form(ind);
  const MatrixXd form_star = fit_quadratic_form(ind_star);
  out.polarity_deviation = std::max(support_deviation(form, ind_star), support_deviation(form_star, ind));
  pol.expect(out.polarity_deviation <= tolerance,
             "support function deviates from 1 by " + format(out.polarity_deviation));
  out.semi_axes_f = semi_axes(form);
  out.semi_axes_f_star = semi_axes(form_star);

  Check& curv = out.report.add("curvature");
  for (const auto& s : ind) {
    const double r_bar = upper_curvature_radius(f, x, u, s.direction, config);
    const double m = u.dot(s.direction);
    const double predicted = std::sqrt(r_bar) / std::pow(1.0 + m * m, 0.75);
    curv.expect(std::abs(predicted - s.radius) <= tolerance * std::max(1.0, s.radius),
                "direction " + format(s.direction) + ": curvature radius " + format(predicted) +
                    " vs indicatrix radius " + format(s.radius));
  }
  return out;
}

SecondOrderClass classify(const SubderivativeEstimate& e, double tolerance) {
  if (e.infinite) return SecondOrderClass::infinite;
  if (std::abs(e.value) <= tolerance) return SecondOrderClass::zero;
  return SecondOrderClass::indeterminate;
}

void cross_validate_at(const PolyhedralConvexFunction& f, const Vector& x, const Vector& u,
                       const std::vector<Vector>& directions, CrossValidation& out, const SecondOrderConfig& config) {
  const Polyhedron k = indicatrix(f, x, u).carrier;
  const NumericFunction g = local_model(f, x);
  const VectorXd origin = VectorXd::Zero(f.ambient_dim());
  const VectorXd ud = to_double(u);
  Check* check = nullptr;
  for (auto& c : out.report.checks)
    if (c.name == "classification") check = &c;
  if (!check) check = &out.report.add("classification");
  for (const auto& w : directions) {
    const bool member = k.contains(w);
    const SubderivativeEstimate e = second_subderivative(g, origin, ud, to_double(w), config);
    const SecondOrderClass cls = classify(e, config.tolerance);
    const bool agree = member ? cls == SecondOrderClass::zero : cls == SecondOrderClass::infinite;
    ++out.total;
    if (agree) ++out.agreements;
    std::ostringstream os;
    os << "x = " << to_string(x) << ", u = " << to_string(u) << ", w = " << to_string(w) << ": exact "
       << (member ? "in K" : "not in K") << ", numeric " << e.value;
    check->expect(agree, os.str());
  }
}

std::vector<Vector> sample_directions(const PolyhedralConvexFunction& f, const Vector& x, const Vector& u, int samples,
                                      std::uint64_t seed) {
  const Polyhedron k = indicatrix(f, x, u).carrier;
  const Index n = f.ambient_dim();
  std::mt19937_64 rng(seed);
  auto uniform = [&](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  const bool k_trivial = k.v().rays.empty() && k.v().lines.empty();
  std::vector<Vector> out;
  while (static_cast<int>(out.size()) < samples) {
    Vector w = zero_vector(n);
    if (out.size() % 2 == 0 && !k_trivial) {
      for (const auto& r : k.v().rays) w += Rational(uniform(0, 3)) * r;
      for (const auto& l : k.v().lines) w += Rational(uniform(-3, 3)) * l;
      // scale to integers so the double image is exact
      mpz_class lcm = 1;
      for (Index i = 0; i < n; ++i) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), w(i).denominator().get_mpz_t());
      w *= Rational(mpq_class(lcm));
    } else {
      for (Index i = 0; i < n; ++i) w(i) = Rational(uniform(-1024, 1024), 1024);
    }
    if (!is_zero(w)) out.push_back(w);
  }
  return out;
}

CrossValidation cross_validate_polyhedral(const PolyhedralConvexFunction& f, int samples, std::uint64_t seed,
                                          const SecondOrderConfig& config) {
  CrossValidation out;
  const Index n = f.ambient_dim();
  std::uint64_t pair = 0;
  for (const auto& face : k_minimal_faces(f)) {
    const Vector x = face.ri_point.head(n);
    std::vector<Vector> us{face.witness_u};
    const Polyhedron sub = subdifferential(f, x);
    for (const auto& v : sub.v().vertices)
      if (!equal_vectors(v, face.witness_u)) us.push_back(v);
    for (const auto& u : us) cross_validate_at(f, x, u, sample_directions(f, x, u, samples, seed + pair++), out, config);
  }
  return out;
}

}  // namespace geodual

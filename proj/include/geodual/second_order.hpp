#ifndef GEODUAL_SECOND_ORDER_HPP
#define GEODUAL_SECOND_ORDER_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "geodual/polyhedral_function.hpp"
#include "geodual/report.hpp"

namespace geodual {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// f(x) = ½⟨x,Ax⟩ with A symmetric positive definite. Symmetry is exact
/// (checked entrywise); definiteness is certified by an LLT factorization
/// whose pivots are all positive.
template <typename Scalar = double>
class SmoothQuadratic {
 public:
  using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit SmoothQuadratic(MatrixType a) : a_(std::move(a)), llt_(a_) {
    if (a_.rows() != a_.cols() || a_.rows() == 0) throw std::invalid_argument("SmoothQuadratic: A must be square");
    if (a_ != a_.transpose()) throw std::invalid_argument("SmoothQuadratic: A is not symmetric");
    if (llt_.info() != Eigen::Success || (llt_.matrixL().toDenseMatrix().diagonal().array() <= Scalar(0)).any())
      throw std::invalid_argument("SmoothQuadratic: A is not positive definite");
  }

  Eigen::Index dim() const { return a_.rows(); }
  const MatrixType& matrix() const { return a_; }
  Scalar value(const VectorType& x) const { return Scalar(0.5) * x.dot(a_ * x); }
  VectorType gradient(const VectorType& x) const { return a_ * x; }
  /// f(x+tξ) - f(x) = t⟨Ax + ½tAξ, ξ⟩, free of the cancellation in the
  /// difference of two values.
  Scalar increment(const VectorType& x, Scalar t, const VectorType& xi) const {
    return t * (a_ * x + (Scalar(0.5) * t) * (a_ * xi)).dot(xi);
  }
  /// f*(u) = ½⟨u,A⁻¹u⟩, with A⁻¹ from the factorization, symmetrized.
  SmoothQuadratic conjugate() const {
    const MatrixType inv = llt_.solve(MatrixType::Identity(dim(), dim()));
    return SmoothQuadratic(MatrixType((inv + inv.transpose()) / Scalar(2)));
  }

 private:
  MatrixType a_;
  Eigen::LLT<MatrixType> llt_;
};

/// A deterministic real function with values in R ∪ {+inf}. `increment`, when
/// present, returns g(x+tξ) - g(x) more accurately than two evaluations; it
/// receives t and ξ separately so that x+tξ can be formed without rounding.
struct NumericFunction {
  Eigen::Index ambient_dim = 0;
  std::function<double(const Eigen::VectorXd&)> evaluator;
  std::function<double(const Eigen::VectorXd&, double, const Eigen::VectorXd&)> increment;

  double operator()(const Eigen::VectorXd& x) const { return evaluator(x); }
  double difference(const Eigen::VectorXd& x, double t, const Eigen::VectorXd& xi) const;
};

NumericFunction numeric_function(const SmoothQuadratic<double>& q);
/// The local model h ↦ f(x̄+h) - f(x̄) of a polyhedral function around an
/// exact base point, evaluated exactly and rounded once. Probe it at 0.
/// Increments form x̄ + x + tξ in rational arithmetic, so a direction lying
/// in a tight constraint never leaves the domain through rounding.
NumericFunction local_model(const PolyhedralConvexFunction& f, const Vector& x_bar);

/// Ladder, net and classification parameters of the numeric limits.
struct SecondOrderConfig {
  std::vector<double> ladder{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double divergence_threshold = 1e6;
  double growth_ratio = 5.0;  ///< successive-rung ratio read as 1/t growth
  double tolerance = 1e-6;
  int net_size = 64;          ///< directions per 2-sphere cross-section
  double search_bound = 1e6;  ///< radius reported for unbounded directions
};

/// (2/t)[(g(x+tξ) - g(x))/t - ⟨u,ξ⟩]; +inf when g(x+tξ) = +inf.
/// Throws std::invalid_argument for t ≤ 0 or a non-finite g(x).
double second_difference_quotient(const NumericFunction& g, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& xi, double t);

struct SubderivativeEstimate {
  double value = 0;           ///< +inf when classified as divergent
  bool infinite = false;
  std::vector<double> rungs;  ///< min over the perturbation net, per rung
};

/// liminf over the ladder with a net {ξ, ξ ± t eᵢ} per rung. Finite values
/// are extrapolated from the last two rungs, m + (m - m_prev)/9 for ratio 10.
/// Divergent means: every net value is +inf on the last rung, or the last
/// rung exceeds the threshold while the last three increase, or the last
/// three increase with successive ratios ≥ growth_ratio.
SubderivativeEstimate second_subderivative(const NumericFunction& g, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& u, const Eigen::VectorXd& xi,
                                           const SecondOrderConfig& config = {});

/// Unit directions: ±1 for n = 1, otherwise `per_circle` equally spaced
/// points on each coordinate-plane circle, duplicates removed.
std::vector<Eigen::VectorXd> direction_net(Eigen::Index n, int per_circle);

struct IndicatrixSample {
  Eigen::VectorXd direction;  ///< unit ζ
  double d2 = 0;              ///< d²(ζ), possibly +inf
  double radius = 0;          ///< sup{r : d²(rζ) ≤ 1} = d²(ζ)^(-1/2)
  bool ray = false;           ///< d²(ζ) = 0, radius capped at search_bound
  Eigen::VectorXd boundary() const { return radius * direction; }
};

/// Boundary samples of {ξ : d²g(x|u)(ξ) ≤ 1} along the direction net. The
/// radius uses degree-2 homogeneity of d² instead of a line search.
std::vector<IndicatrixSample> numeric_indicatrix(const NumericFunction& g, const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& u, int net_size,
                                                 const SecondOrderConfig& config = {});

struct CurvatureRadius {
  double rho = 0;     ///< +inf when flat
  bool flat = false;  ///< slope equals m
};

/// Radius of the circle through (x₀,g(x₀)) and (x₀+tζ,g(x₀+tζ)) with slope m
/// at the first point; 0 outside the domain. Throws std::invalid_argument
/// for t ≤ 0 or a slope below m.
CurvatureRadius curvature_radius(const NumericFunction& g, const Eigen::VectorXd& x0, const Eigen::VectorXd& zeta,
                                 double m, double t);
/// limsup of ρ_t(x₀,ζ,⟨u,ζ⟩) on the ladder, extrapolated as in
/// second_subderivative; +inf if the last rung is flat.
double upper_curvature_radius(const NumericFunction& g, const Eigen::VectorXd& x0, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& zeta, const SecondOrderConfig& config = {});

/// Symmetric Q with ξᵀQξ = 1 on the samples, by least squares over the
/// n(n+1)/2 entries. Rays and zero radii are skipped.
Eigen::MatrixXd fit_quadratic_form(const std::vector<IndicatrixSample>& samples);

struct InverseHessianCheck {
  Report report;
  Eigen::MatrixXd hessian_f;       ///< numeric d²f(x|u) polarized to a matrix
  Eigen::MatrixXd hessian_f_star;  ///< numeric d²f*(u|x) polarized to a matrix
  Eigen::VectorXd semi_axes_f;     ///< ascending, from the fitted form
  Eigen::VectorXd semi_axes_f_star;
  double hessian_deviation = 0;    ///< max relative entry error of hessian_f_star vs A⁻¹
  double polarity_deviation = 0;   ///< max |h_ind f(η) - 1| over ind f* boundary samples
};

/// Checks, for f = ½⟨x,Ax⟩ and u = Ax: d²f matches A, the numeric Hessian
/// of f* at u matches A⁻¹, the two indicatrices are polar (sampled pairs
/// never exceed 1, fitted support function equals 1 on the dual boundary),
/// and the curvature formula reproduces the indicatrix radii.
/// `a_inverse` is the reference for A⁻¹; the conjugate's own inverse is used
/// when it is empty.
InverseHessianCheck check_inverse_hessian(const SmoothQuadratic<double>& q, const Eigen::VectorXd& x,
                                          double tolerance, const Eigen::MatrixXd& a_inverse = {},
                                          const SecondOrderConfig& config = {});

enum class SecondOrderClass { zero, infinite, indeterminate };
SecondOrderClass classify(const SubderivativeEstimate& e, double tolerance);

struct CrossValidation {
  Report report;
  std::size_t agreements = 0;
  std::size_t total = 0;
};

/// Numeric 0 / +inf classification of d²f(x|u)(w) against exact membership
/// w ∈ K(x,u), for the given exact pair and directions (dyadic doubles).
void cross_validate_at(const PolyhedralConvexFunction& f, const Vector& x, const Vector& u,
                       const std::vector<Vector>& directions, CrossValidation& out,
                       const SecondOrderConfig& config = {});

/// Pairs (x̄,u) at the relative-interior points of the K-minimal faces of
/// epi f with u the face witness and every subgradient vertex; per pair
/// `samples` seeded directions, half drawn from K(x̄,u).
CrossValidation cross_validate_polyhedral(const PolyhedralConvexFunction& f, int samples, std::uint64_t seed,
                                          const SecondOrderConfig& config = {});

/// `samples` seeded directions for (x,u): even indices are integer
/// combinations of the generators of K(x,u), odd ones uniform on a 1/1024
/// grid in [-1,1]ⁿ; zero vectors are redrawn.
std::vector<Vector> sample_directions(const PolyhedralConvexFunction& f, const Vector& x, const Vector& u,
                                      int samples, std::uint64_t seed);

}  // namespace geodual

#endif  // GEODUAL_SECOND_ORDER_HPP

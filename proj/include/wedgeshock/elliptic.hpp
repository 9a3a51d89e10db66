// Oblique-derivative problems in a truncated sector, solved on the log-polar strip
// t = ln r, omega in [omega-, omega+].
//
// Strip form of  Lap u - mu u = f,  lower: (1/r)u_w + a- u_r + k- u = g-,
// upper: -(1/r)u_w + a+ u_r + k+ u = g+  is
//   u_tt + u_ww - mu e^{2t} u = e^{2t} f,  +-u_w + a u_t + k e^t u = e^t g.
#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "wedgeshock/spectrum.hpp"

namespace wedgeshock {

struct ResonanceError : std::domain_error {
  using std::domain_error::domain_error;
};
struct SingularSystem : std::domain_error {
  using std::domain_error::domain_error;
};

struct StripGrid {
  double t_min = -4.0;
  double t_max = 2.0;
  int n_t = 64;
  int n_omega = 32;
  double omega_minus = 0.0;
  double omega_plus = 0.5 * M_PI;

  void validate() const;
  double h_t() const { return (t_max - t_min) / (n_t - 1); }
  double h_omega() const { return (omega_plus - omega_minus) / (n_omega - 1); }
  double t(int i) const { return t_min + i * h_t(); }
  double omega(int j) const { return omega_minus + j * h_omega(); }
  double r(int i) const { return std::exp(t(i)); }
  int size() const { return n_t * n_omega; }
  // halves both spacings
  StripGrid refined() const;
};

template <class S>
struct GridFieldT {
  StripGrid grid;
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> values;  // (n_t, n_omega)
  std::string label;

  GridFieldT() = default;
  explicit GridFieldT(const StripGrid& g, std::string l = {})
      : grid(g), values(Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(g.n_t, g.n_omega)),
        label(std::move(l)) {}
  S& operator()(int i, int j) { return values(i, j); }
  const S& operator()(int i, int j) const { return values(i, j); }
  bool finite() const { return values.allFinite(); }
  Eigen::Vector2d point(int i, int j) const {
    double r = grid.r(i), w = grid.omega(j);
    return {r * std::cos(w), r * std::sin(w)};
  }
};
using GridField = GridFieldT<double>;
using ComplexGridField = GridFieldT<std::complex<double>>;

// a u + b u_t at an end of the strip
struct EndCondition {
  double a = 1.0;
  double b = 0.0;
  static EndCondition dirichlet() { return {1.0, 0.0}; }
  // u_t = lambda u
  static EndCondition exponent(double lambda) { return {-lambda, 1.0}; }
};

template <class S>
struct SectorSystem {
  StripGrid grid;
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  S kappa_plus = S(0);
  S kappa_minus = S(0);
  double mu = 0.0;
  EndCondition corner;  // t = t_min
  EndCondition far;     // t = t_max
};

// Assembled and factored strip operator; node (i, j) has index i * n_omega + j.
template <class S>
class SectorSolver {
 public:
  using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

  explicit SectorSolver(const SectorSystem<S>& sys);

  const SectorSystem<S>& system() const { return sys_; }
  const Eigen::SparseMatrix<S>& matrix() const { return A_; }
  int index(int i, int j) const { return i * sys_.grid.n_omega + j; }

  // right-hand side from physical data; g at the n_t nodes of each side,
  // end values at the n_omega nodes of each end
  Vec rhs(const Mat& f, const Vec& g_plus, const Vec& g_minus, const Vec& corner_value,
          const Vec& far_value) const;
  Vec solve_rows(const Vec& b) const;
  Mat solve(const Mat& f, const Vec& g_plus, const Vec& g_minus, const Vec& corner_value,
            const Vec& far_value) const;
  Vec apply(const Vec& u) const { return A_ * u; }

  // relative residual |A u - b| / (|A| |u| + |b|) of the last solve
  double last_residual() const { return last_residual_; }
  // infinity-norm condition estimate from a few random solves
  double condition_estimate(int probes = 4) const;

 private:
  SectorSystem<S> sys_;
  Eigen::SparseMatrix<S> A_;
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<S>, Eigen::COLAMDOrdering<int>>> lu_;
  double anorm_ = 0.0;
  mutable double last_residual_ = 0.0;
};

extern template class SectorSolver<double>;
extern template class SectorSolver<std::complex<double>>;

struct FarFieldPolicy {
  enum class Kind { dirichlet, asymptotic };
  Kind kind = Kind::dirichlet;
  // dirichlet: traces at t_min and t_max (empty means zero)
  Eigen::VectorXd corner_trace;
  Eigen::VectorXd far_trace;
  // asymptotic: requested exponents of u at the corner and at infinity; the ends use
  // u_t = lambda_hi u and u_t = lambda_lo u of the eigenvalue gaps containing them
  double sigma_corner = 0.0;
  double sigma_far = 0.0;
  // removes the corner component of this eigenvalue through the conserved
  // contour functional (needed when a local end condition cannot separate it)
  std::optional<double> exclude_lambda;

  static FarFieldPolicy dirichlet(Eigen::VectorXd corner = {}, Eigen::VectorXd far = {});
  static FarFieldPolicy asymptotic(double sigma_corner, double sigma_far);
};

// end conditions chosen by an asymptotic policy; throws ResonanceError
std::pair<EndCondition, EndCondition> asymptotic_ends(const ObliqueAngularProblem& p,
                                                      double sigma_corner, double sigma_far);

GridField solve_sector(const ObliqueAngularProblem& problem, const GridField& f,
                       const Eigen::VectorXd& g_plus, const Eigen::VectorXd& g_minus,
                       const StripGrid& grid, const FarFieldPolicy& policy);

// I(t_i) = int (psi u_t - u psi_t) dw + a+ psi u|+ + a- psi u|-,
// psi = e^{-lambda t} v_lambda(w); independent of t for homogeneous solutions
double contour_functional(const ObliqueAngularProblem& p, const GridField& u, double lambda,
                          int row);

struct ManufacturedChoice {
  enum class Kind { eigenfunction, smooth };
  Kind kind = Kind::smooth;
  double lambda = 0.0;
};

template <class S>
struct ManufacturedT {
  GridFieldT<S> f;
  Eigen::Matrix<S, Eigen::Dynamic, 1> g_plus;
  Eigen::Matrix<S, Eigen::Dynamic, 1> g_minus;
  GridFieldT<S> exact;
  Eigen::Matrix<S, Eigen::Dynamic, 1> corner_trace() const { return exact.values.row(0).transpose(); }
  Eigen::Matrix<S, Eigen::Dynamic, 1> far_trace() const {
    return exact.values.row(exact.grid.n_t - 1).transpose();
  }
};
using Manufactured = ManufacturedT<double>;
using ComplexManufactured = ManufacturedT<std::complex<double>>;

Manufactured manufactured_problem(const ObliqueAngularProblem& problem,
                                  const ManufacturedChoice& choice, const StripGrid& grid);
// u = r^2 e^{-r} (cos w + i sin 2w) for the system's operator
ComplexManufactured manufactured_complex(const SectorSystem<std::complex<double>>& sys);

// max |u_h - u| over the grid
template <class S>
double max_error(const GridFieldT<S>& a, const GridFieldT<S>& b) {
  return (a.values - b.values).cwiseAbs().maxCoeff();
}

// strip derivatives at a node with the solver's stencils: centered inside,
// second-order one-sided on the edges
struct StripJet {
  double u = 0.0, ut = 0.0, uw = 0.0, utt = 0.0, uww = 0.0, utw = 0.0;
  double t = 0.0, omega = 0.0;
  Eigen::Vector2d gradient() const;  // Cartesian
  Eigen::Matrix2d hessian() const;
};
StripJet strip_jet(const GridField& u, int i, int j);

struct ExponentFit {
  double lambda_hat = 0.0;
  double r_squared = 0.0;
};
ExponentFit corner_exponent_fit(const GridField& u, double t_lo, double t_hi);

// beta = 1 + alpha - sigma for a field whose gradient scales like r^sigma
struct WeightSpec {
  int ell = 2;
  double alpha = 0.5;
  double beta0 = 0.0;
  double beta_inf = 0.0;

  static WeightSpec from_sigma(int ell, double alpha, double sigma0, double sigma_inf);
  double sigma0() const { return 1.0 + alpha - beta0; }
  double sigma_inf() const { return 1.0 + alpha - beta_inf; }
  void validate() const;
};

// single-weight norm with the sampled Holder term
double weighted_holder_norm(const GridField& u, int ell, double alpha, double beta);
// double-weight norm: sum of the beta0 and beta_inf norms
double weighted_holder_norm(const GridField& u, const WeightSpec& spec);

// Norm of a function of one variable x > 0 given by its derivatives d(x, k), k <= ell,
// sampled on a geometric grid over [x_min, x_max].
double weighted_holder_norm_1d(const std::function<double(double, int)>& d, const WeightSpec& spec,
                               double x_min = 1e-4, double x_max = 60.0, int samples = 2000);

struct ConvergenceRow {
  double h = 0.0;
  double max_error = 0.0;
  double order_estimate = 0.0;  // NaN on the first row
};
// smooth manufactured solution with exact Dirichlet traces on successively refined grids
std::vector<ConvergenceRow> convergence_study(const ObliqueAngularProblem& problem,
                                              const StripGrid& base, int levels = 3);

// condition estimate with both ends set to u_t = lambda u
double condition_diagnostic(const ObliqueAngularProblem& problem, const StripGrid& grid,
                            double lambda);

}  // namespace wedgeshock

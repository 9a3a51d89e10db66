// Picard iteration for the planar fixed-domain problem in the hodograph plane, and the
// transverse-mode solve of the multidimensional linear problem.
//
// The quarter plane y1, y2 > 0 is mapped by Y = P y onto the sector 0 < w < omega_s,
// where the background operator is the Laplacian; the wedge y2 = 0 goes to w = 0 and the
// shock y1 = 0 to w = omega_s.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wedgeshock/background.hpp"
#include "wedgeshock/elliptic.hpp"
#include "wedgeshock/hodograph.hpp"

namespace wedgeshock {

struct PicardRejected : std::domain_error {
  using std::domain_error::domain_error;
};

struct IterationConfig {
  BackgroundShock bg;
  WedgePerturbation pert;
  WeightSpec spec;  // gradient exponents sigma0, sigma_inf through beta = 1 + alpha - sigma
  int max_iter = 50;
  double tol = 1e-9;
  // log-radius range and resolution in the Y-sector; the angular range is set from bg
  double t_min = -4.0;
  double t_max = 3.0;
  int n_t = 113;
  int n_omega = 25;
  // corner exclusion of lambda_0; defaults to on for the strong branch
  std::optional<bool> exclude_mode;

  StripGrid grid() const;
  void validate() const;
};

// Configuration with weights sigma0 = frac0 * (window edge), sigma_inf from the window,
// and the perturbation scaled to weighted size delta.
IterationConfig make_iteration_config(const BackgroundShock& bg, double delta, double alpha = 0.5);

// phi_w with amplitude chosen so that its (beta0, beta_inf) norm equals delta
WedgePerturbation perturbation_for_delta(double delta, const WeightSpec& spec, int n = 2);
double template_norm(const WeightSpec& spec);

// Background data shared by all steps: transforms, boundary rows, factored operator.
class PicardScheme {
 public:
  explicit PicardScheme(const IterationConfig& config);

  const IterationConfig& config() const { return config_; }
  const StripGrid& grid() const { return grid_; }
  const ObliqueAngularProblem& problem() const { return problem_; }
  const Eigen::Matrix2d& P() const { return P_; }

  // y-derivatives of the full solution v = u0 + v_dot at node (i, j)
  struct Local {
    Eigen::Vector2d y;
    double v = 0.0;
    Eigen::VectorXd dv;
    Eigen::MatrixXd d2v;
  };
  Local local(const GridField& v_dot, int i, int j) const;

  GridField step(const GridField& v_dot) const;
  // step(v) - v, formed without cancellation
  GridField correction(const GridField& v_dot) const;

  // nonlinear residuals of v = u0 + v_dot: interior transformed equation scaled by
  // u0_1^3, boundary G_j scaled like the sector data
  struct Residuals {
    double interior = 0.0;
    double wedge = 0.0;
    double shock = 0.0;
    double max() const { return std::max(interior, std::max(wedge, shock)); }
  };
  Residuals residuals(const GridField& v_dot) const;

  double norm(const GridField& u) const { return weighted_holder_norm(u, config_.spec); }
  // max |D_y u| on the innermost ring
  double corner_defect(const GridField& u_dot) const;

  // y-side boundary coefficients converted to Y-sector form; checked against problem()
  double alpha_minus_from_rows() const { return alpha_minus_rows_; }
  double alpha_plus_from_rows() const { return alpha_plus_rows_; }

 private:
  IterationConfig config_;
  StripGrid grid_;
  ObliqueAngularProblem problem_;
  Eigen::Matrix2d P_, Pinv_;
  double a_omega_wedge_ = 0.0, a_omega_shock_ = 0.0;
  double alpha_minus_rows_ = 0.0, alpha_plus_rows_ = 0.0;
  std::shared_ptr<SectorSolver<double>> solver_;
  std::optional<double> exclude_;
  GridField mode_;
  double mode_functional_ = 0.0;
};

GridField picard_step(const GridField& v_dot, const IterationConfig& config);

struct FrontSample {
  double y2 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
};

struct IterationReport {
  std::vector<double> norms;   // |u_k|, k = 1..
  std::vector<double> diffs;   // |u_k - u_{k-1}|
  std::vector<double> ratios;  // diffs[k] / diffs[k-1], from k = 2
  bool converged = false;
  bool diverged = false;
  std::string message;
  int iterations = 0;
  double delta = 0.0;
  double K_hat = 0.0;  // NaN when delta = 0
  ExponentFit corner_fit;
  bool corner_fit_valid = false;
  double corner_defect = 0.0;
  PicardScheme::Residuals residuals;
  double manufactured_error = 0.0;  // same-grid smooth manufactured max error
  std::vector<FrontSample> front;
  GridField u_dot;

  double max_ratio() const;
};

IterationReport run_iteration(const IterationConfig& config);

// x1 = u(0, y2), x2 = y2 + phi_w(x1) along the shock side of the sector
std::vector<FrontSample> reconstruct_shock_front(const GridField& u_dot, const IterationConfig& config);

struct StudyRow {
  double delta = 0.0;
  double norm_udot = 0.0;
  double K_hat = 0.0;
  double final_ratio = 0.0;  // largest contraction ratio of the run
  bool converged = false;
  bool flagged = false;      // K_hat undefined
};
std::vector<StudyRow> scaling_study(const IterationConfig& config, const std::vector<double>& deltas);

// delta at which the largest contraction ratio reaches target (bisection in log delta)
double find_delta0(const IterationConfig& config, double target = 0.5, double rel_tol = 2e-3);

IterationReport strong_branch_2d_run(const IterationConfig& config, int dim = 2);

// Transverse mode of frequency eta: Lap U - eta^2 U = F in the skew sector with
// upper condition -(1/r)U_w + a+ U_r + i eta c+ U = G+ and Neumann wedge side.
SectorSystem<std::complex<double>> md_mode_system(const BackgroundShock& bg, double eta,
                                                  const StripGrid& grid);
ComplexGridField md_mode_solve(const BackgroundShock& bg, double eta, const ComplexManufactured& data);
// manufactured max error on the base grid and two refinements
std::vector<ConvergenceRow> md_mode_convergence(const BackgroundShock& bg, double eta,
                                                const StripGrid& base, int levels = 3);

}  // namespace wedgeshock

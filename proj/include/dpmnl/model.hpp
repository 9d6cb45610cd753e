#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpmnl/rng.hpp"

namespace dpmnl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Rooted class hierarchy. Leaves are the J classes; every tree edge (branch)
// carries its own parameter vector of length p+1 (intercept slot + p
// coefficient slots). Branches are indexed in first-appearance order of the
// leaf file, so a given file always yields the same parameter layout.
struct ClassHierarchy {
  int n_classes = 0;
  int n_branches = 0;
  // leaf (0-based) -> branch indices along the root-to-leaf path, root first
  std::vector<std::vector<int>> leaf_paths;
  // leaf (0-based) -> top-level group id (the child of the root on its path);
  // used for parent-accuracy reporting
  std::vector<int> leaf_group;
  std::vector<std::string> group_names;
  std::vector<std::string> branch_names;

  void validate() const;
};

// Build a flat hierarchy: every leaf directly under the root (one branch per
// class). With this tree the branch composition reduces to a plain MNL.
ClassHierarchy flat_hierarchy(int n_classes);

struct Dataset {
  MatrixXd x;          // n x p covariates
  std::vector<int> y;  // labels in 1..J
  int n_classes = 0;   // J
  // Disjoint column blocks covering 0..p-1 (half-open), one per data source.
  // Empty means a single source spanning all columns.
  std::vector<std::pair<int, int>> sources;
  std::optional<ClassHierarchy> hierarchy;

  int n() const { return static_cast<int>(x.rows()); }
  int p() const { return static_cast<int>(x.cols()); }
  void validate() const;
  // Column -> source block index (all zeros when sources is empty).
  std::vector<int> column_sources() const;
};

// One mixture component: covariate model (mu, sigma) plus the class expert.
// In flat mode the expert is (alpha, beta); in hierarchy mode it is the branch
// matrix phi (n_branches x (p+1)) and alpha/beta hold the composed
// coefficients, refreshed after every phi change.
struct ComponentParams {
  VectorXd mu;     // p
  VectorXd sigma;  // p, > 0
  VectorXd alpha;  // J intercepts
  MatrixXd beta;   // p x J coefficients (redundant parameterization, nothing pinned)
  MatrixXd phi;    // n_branches x (p+1); empty unless the expert is hierarchical
  double nu_c = 1.0;   // local coefficient scale, > 0
  double tau_c = 1.0;  // local intercept scale, > 0

  void validate() const;
};

// Every G0 constant and hyperprior setting. The *_log_* pairs are the normal
// priors on log-variance parameters, e.g. log(eta^2) ~ N(eta_log_mean,
// eta_log_sd^2). Defaults follow the hierarchical scheme used for real data;
// simulation configs override them.
struct PriorSpec {
  // Covariate-mean level: when per_covariate_g0_enabled, mu0_l ~ N(mu0_mean,
  // mu0_sd^2) and log(sigma0_l^2) ~ N(sigma0_log_mean, sigma0_log_sd^2) are
  // sampled per covariate; otherwise mu0 = mu0_mean and sigma0 = sigma0_fixed
  // are constants.
  double mu0_mean = 0.0;
  double mu0_sd = 5.0;
  double sigma0_log_mean = 0.0;
  double sigma0_log_sd = 2.0;
  double sigma0_fixed = 1.0;

  // Covariate-sd level: log(sigma_lc^2) ~ N(Msigma, Vsigma^2); when
  // per-covariate G0 is on, Msigma_l ~ N(Msigma_mean, Msigma_sd^2) and
  // log(Vsigma_l^2) ~ N(Vsigma_log_mean, Vsigma_log_sd^2).
  double Msigma_mean = 0.0;
  double Msigma_sd = 1.0;
  double Vsigma_log_mean = 0.0;
  double Vsigma_log_sd = 2.0;
  double Vsigma_fixed = 2.0;

  // Global intercept scale eta and per-source coefficient scales xi_s.
  double eta_log_mean = 0.0;
  double eta_log_sd = 2.0;
  double xi_log_mean = 0.0;
  double xi_log_sd = 1.0;

  // ARD relevance scales sigma_l (only when ard_enabled).
  double ard_log_mean = -3.0;
  double ard_log_sd = 4.0;

  // Concentration: log(gamma) ~ N(gamma_log_mean, gamma_log_sd^2).
  double gamma_log_mean = -3.0;
  double gamma_log_sd = 2.0;

  int aux_m = 3;  // algorithm-8 auxiliary component count

  bool ard_enabled = false;
  bool per_covariate_g0_enabled = false;

  void validate() const;
};

// Current values of all sampled hyperparameters. Vectors are length p; when
// the corresponding flag is off they hold the fixed constants and are not
// updated. xi has one entry per source. gamma is the DP concentration.
struct HyperState {
  VectorXd mu0;
  VectorXd sigma0;
  VectorXd Msigma;
  VectorXd Vsigma;
  double eta = 1.0;
  VectorXd xi;
  VectorXd ard_sigma;  // all ones when ARD is off
  double gamma = 1.0;

  void validate() const;
};

// Static shape information threaded through the model functions: dimensions,
// the column -> source map, and the expert form.
struct ModelLayout {
  int p = 0;
  int n_classes = 0;
  std::vector<int> col_source;  // length p
  int n_sources = 1;
  bool hierarchical_expert = false;
  std::optional<ClassHierarchy> hierarchy;

  static ModelLayout from_dataset(const Dataset& data, bool hierarchical_expert);
  // Intercept-slot count of the expert (J flat, n_branches hierarchical).
  int n_intercepts() const;
  // Coefficient rows of the expert (J flat, n_branches hierarchical); each row
  // has p entries tied to covariates 0..p-1.
  int n_coef_rows() const;
};

// ---------------------------------------------------------------------------
// Closed-form model operations
// ---------------------------------------------------------------------------

// log softmax(alpha_j + x . beta_j), max-stabilized; exp of the result sums
// to one.
VectorXd mnl_class_log_probs(const VectorXd& x_row, const VectorXd& alpha,
                             const MatrixXd& beta);

// Sum over covariates of independent N(mu_l, sigma_l^2) log densities.
double gaussian_covariate_log_density(const VectorXd& x_row, const VectorXd& mu,
                                      const VectorXd& sigma);

// log P(x) + log P(y|x) for one component; y_label is 1-based.
double joint_log_density(const VectorXd& x_row, int y_label,
                         const ComponentParams& theta);

// Path sums: for each leaf j, (alpha_j, beta_.j) = sum of phi_b over the
// root-to-leaf branches. phi is n_branches x (p+1).
std::pair<VectorXd, MatrixXd> compose_hierarchy_coefficients(
    const ClassHierarchy& h, const MatrixXd& phi);

// Log density of theta under G0 given the current hyperparameters, in the
// sampled parameterization: normal terms for mu_l, log sigma_l^2, the expert
// entries (sd eta*tau_c for intercept slots, xi_s*sigma_l*nu_c for coefficient
// slots), and N(0,1) terms for log nu_c and log tau_c.
double g0_log_prior(const ComponentParams& theta, const HyperState& hyper,
                    const PriorSpec& prior, const ModelLayout& layout);

// Draw a fresh component from G0 given the current hyperparameters.
ComponentParams sample_component_from_g0(const HyperState& hyper,
                                         const PriorSpec& prior,
                                         const ModelLayout& layout,
                                         RngStream& rng);

// CRP conditional over (existing components..., new); counts are the
// occupancies with observation i removed and n_minus their sum.
std::vector<double> crp_assignment_probs(const std::vector<int>& counts_minus_i,
                                         double gamma, int n_minus);

// Finite-C mixture conditional (n_c + gamma/C) / (n_minus + gamma); counts may
// omit trailing empty components, C is the total component count.
std::vector<double> crp_finite_assignment_probs(
    const std::vector<int>& counts_minus_i, double gamma, int n_components,
    int n_minus);

// Exchangeable partition probability: gamma^K * prod_k (|B_k|-1)! /
// prod_{i=0}^{n-1} (i+gamma), in log space. Takes the block sizes.
double crp_partition_log_prob(const std::vector<int>& block_sizes, double gamma);

// Standalone normal log density helper shared across modules.
inline double normal_log_pdf(double x, double mean, double sd) {
  static const double kLog2Pi = 1.8378770664093454836;
  double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * kLog2Pi;
}

double log_sum_exp(const std::vector<double>& v);

}  // namespace dpmnl

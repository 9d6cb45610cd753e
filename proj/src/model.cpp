#include "dpmnl/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dpmnl {

void ClassHierarchy::validate() const {
  if (n_classes < 1) throw std::invalid_argument("hierarchy: no classes");
  if (static_cast<int>(leaf_paths.size()) != n_classes)
    throw std::invalid_argument("hierarchy: leaf count != J");
  for (const auto& path : leaf_paths) {
    if (path.empty()) throw std::invalid_argument("hierarchy: leaf with empty path");
    for (int b : path)
      if (b < 0 || b >= n_branches)
        throw std::invalid_argument("hierarchy: branch index out of range");
  }
  if (static_cast<int>(leaf_group.size()) != n_classes)
    throw std::invalid_argument("hierarchy: leaf_group size mismatch");
}

ClassHierarchy flat_hierarchy(int n_classes) {
  ClassHierarchy h;
  h.n_classes = n_classes;
  h.n_branches = n_classes;
  h.leaf_paths.resize(n_classes);
  h.leaf_group.resize(n_classes);
  for (int j = 0; j < n_classes; ++j) {
    h.leaf_paths[j] = {j};
    h.leaf_group[j] = j;
    h.group_names.push_back("class" + std::to_string(j + 1));
    h.branch_names.push_back("root->" + std::to_string(j + 1));
  }
  return h;
}

void Dataset::validate() const {
  if (n_classes < 1) throw std::invalid_argument("dataset: n_classes < 1");
  if (static_cast<int>(y.size()) != n())
    throw std::invalid_argument("dataset: label count != row count");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 1 || y[i] > n_classes) {
      std::ostringstream os;
      os << "dataset: label " << y[i] << " at case " << i + 1 << " outside 1.."
         << n_classes;
      throw std::invalid_argument(os.str());
    }
  }
  if (!x.allFinite()) throw std::invalid_argument("dataset: non-finite covariate");
  if (!sources.empty()) {
    std::vector<bool> covered(p(), false);
    for (auto [b, e] : sources) {
      if (b < 0 || e > p() || b >= e)
        throw std::invalid_argument("dataset: bad source range");
      for (int l = b; l < e; ++l) {
        if (covered[l]) throw std::invalid_argument("dataset: overlapping sources");
        covered[l] = true;
      }
    }
    if (!std::all_of(covered.begin(), covered.end(), [](bool c) { return c; }))
      throw std::invalid_argument("dataset: sources do not cover all columns");
  }
  if (hierarchy) {
    hierarchy->validate();
    if (hierarchy->n_classes != n_classes)
      throw std::invalid_argument("dataset: hierarchy leaf count != J");
  }
}

std::vector<int> Dataset::column_sources() const {
  std::vector<int> cs(p(), 0);
  for (std::size_t s = 0; s < sources.size(); ++s)
    for (int l = sources[s].first; l < sources[s].second; ++l)
      cs[l] = static_cast<int>(s);
  return cs;
}

void ComponentParams::validate() const {
  if ((sigma.array() <= 0.0).any())
    throw std::invalid_argument("component: sigma must be positive");
  if (nu_c <= 0.0 || tau_c <= 0.0)
    throw std::invalid_argument("component: nu_c/tau_c must be positive");
  if (beta.rows() != mu.size() || beta.cols() != alpha.size())
    throw std::invalid_argument("component: beta shape mismatch");
}

void PriorSpec::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string("prior: ") + name + " must be > 0");
  };
  pos(mu0_sd, "mu0_sd");
  pos(sigma0_log_sd, "sigma0_log_sd");
  pos(sigma0_fixed, "sigma0_fixed");
  pos(Msigma_sd, "Msigma_sd");
  pos(Vsigma_log_sd, "Vsigma_log_sd");
  pos(Vsigma_fixed, "Vsigma_fixed");
  pos(eta_log_sd, "eta_log_sd");
  pos(xi_log_sd, "xi_log_sd");
  pos(ard_log_sd, "ard_log_sd");
  pos(gamma_log_sd, "gamma_log_sd");
  if (aux_m < 1) throw std::invalid_argument("prior: aux_m must be >= 1");
}

void HyperState::validate() const {
  auto all_pos = [](const VectorXd& v, const char* name) {
    if ((v.array() <= 0.0).any())
      throw std::invalid_argument(std::string("hyper: ") + name + " must be positive");
  };
  all_pos(sigma0, "sigma0");
  all_pos(Vsigma, "Vsigma");
  all_pos(xi, "xi");
  all_pos(ard_sigma, "ard_sigma");
  if (eta <= 0.0 || gamma <= 0.0)
    throw std::invalid_argument("hyper: eta/gamma must be positive");
}

ModelLayout ModelLayout::from_dataset(const Dataset& data, bool hierarchical_expert) {
  ModelLayout layout;
  layout.p = data.p();
  layout.n_classes = data.n_classes;
  layout.col_source = data.column_sources();
  layout.n_sources = data.sources.empty() ? 1 : static_cast<int>(data.sources.size());
  layout.hierarchical_expert = hierarchical_expert;
  if (hierarchical_expert) {
    if (!data.hierarchy)
      throw std::invalid_argument("hierarchical expert requested but dataset has no hierarchy");
    layout.hierarchy = data.hierarchy;
  }
  return layout;
}

int ModelLayout::n_intercepts() const {
  return hierarchical_expert ? hierarchy->n_branches : n_classes;
}

int ModelLayout::n_coef_rows() const {
  return hierarchical_expert ? hierarchy->n_branches : n_classes;
}

// ---------------------------------------------------------------------------

VectorXd mnl_class_log_probs(const VectorXd& x_row, const VectorXd& alpha,
                             const MatrixXd& beta) {
  if (!x_row.allFinite() || !alpha.allFinite() || !beta.allFinite())
    throw std::invalid_argument("mnl_class_log_probs: non-finite input");
  if (beta.rows() != x_row.size() || beta.cols() != alpha.size())
    throw std::invalid_argument("mnl_class_log_probs: shape mismatch");
  VectorXd logits = alpha + beta.transpose() * x_row;
  double mx = logits.maxCoeff();
  double lse = std::log((logits.array() - mx).exp().sum()) + mx;
  return logits.array() - lse;
}

double gaussian_covariate_log_density(const VectorXd& x_row, const VectorXd& mu,
                                      const VectorXd& sigma) {
  if ((sigma.array() <= 0.0).any())
    throw std::invalid_argument("gaussian_covariate_log_density: sigma <= 0");
  if (x_row.size() != mu.size() || mu.size() != sigma.size())
    throw std::invalid_argument("gaussian_covariate_log_density: shape mismatch");
  double total = 0.0;
  for (int l = 0; l < x_row.size(); ++l)
    total += normal_log_pdf(x_row[l], mu[l], sigma[l]);
  return total;
}

double joint_log_density(const VectorXd& x_row, int y_label,
                         const ComponentParams& theta) {
  if (y_label < 1 || y_label > theta.alpha.size())
    throw std::invalid_argument("joint_log_density: label out of range");
  double lx = gaussian_covariate_log_density(x_row, theta.mu, theta.sigma);
  VectorXd ly = mnl_class_log_probs(x_row, theta.alpha, theta.beta);
  return lx + ly[y_label - 1];
}

std::pair<VectorXd, MatrixXd> compose_hierarchy_coefficients(
    const ClassHierarchy& h, const MatrixXd& phi) {
  h.validate();
  if (phi.rows() != h.n_branches || phi.cols() < 1)
    throw std::invalid_argument("compose_hierarchy_coefficients: phi shape mismatch");
  int p = static_cast<int>(phi.cols()) - 1;
  VectorXd alpha = VectorXd::Zero(h.n_classes);
  MatrixXd beta = MatrixXd::Zero(p, h.n_classes);
  for (int j = 0; j < h.n_classes; ++j) {
    for (int b : h.leaf_paths[j]) {
      alpha[j] += phi(b, 0);
      beta.col(j) += phi.row(b).tail(p).transpose();
    }
  }
  return {alpha, beta};
}

namespace {

// Shared walk over the expert entries of one component: fn_int(value) for
// every intercept-slot entry, fn_coef(l, value) for every coefficient entry
// tied to covariate l. Covers both flat (alpha/beta) and hierarchical (phi)
// experts.
template <typename FInt, typename FCoef>
void for_each_expert_entry(const ComponentParams& theta, const ModelLayout& layout,
                           FInt&& fn_int, FCoef&& fn_coef) {
  if (layout.hierarchical_expert) {
    for (int b = 0; b < theta.phi.rows(); ++b) {
      fn_int(theta.phi(b, 0));
      for (int l = 0; l < layout.p; ++l) fn_coef(l, theta.phi(b, l + 1));
    }
  } else {
    for (int j = 0; j < theta.alpha.size(); ++j) fn_int(theta.alpha[j]);
    for (int j = 0; j < theta.beta.cols(); ++j)
      for (int l = 0; l < layout.p; ++l) fn_coef(l, theta.beta(l, j));
  }
}

}  // namespace

double g0_log_prior(const ComponentParams& theta, const HyperState& hyper,
                    const PriorSpec& prior, const ModelLayout& layout) {
  hyper.validate();
  double lp = 0.0;
  for (int l = 0; l < layout.p; ++l) {
    lp += normal_log_pdf(theta.mu[l], hyper.mu0[l], hyper.sigma0[l]);
    lp += normal_log_pdf(2.0 * std::log(theta.sigma[l]), hyper.Msigma[l], hyper.Vsigma[l]);
  }
  double sd_int = hyper.eta * theta.tau_c;
  for_each_expert_entry(
      theta, layout,
      [&](double a) { lp += normal_log_pdf(a, 0.0, sd_int); },
      [&](int l, double b) {
        double sd = hyper.xi[layout.col_source[l]] * hyper.ard_sigma[l] * theta.nu_c;
        lp += normal_log_pdf(b, 0.0, sd);
      });
  lp += normal_log_pdf(std::log(theta.nu_c), 0.0, 1.0);
  lp += normal_log_pdf(std::log(theta.tau_c), 0.0, 1.0);
  (void)prior;
  return lp;
}

ComponentParams sample_component_from_g0(const HyperState& hyper,
                                         const PriorSpec& prior,
                                         const ModelLayout& layout,
                                         RngStream& rng) {
  (void)prior;
  ComponentParams theta;
  int p = layout.p;
  int J = layout.n_classes;
  theta.mu.resize(p);
  theta.sigma.resize(p);
  for (int l = 0; l < p; ++l) {
    theta.mu[l] = rng.normal(hyper.mu0[l], hyper.sigma0[l]);
    theta.sigma[l] = std::exp(0.5 * rng.normal(hyper.Msigma[l], hyper.Vsigma[l]));
  }
  theta.nu_c = std::exp(rng.normal());
  theta.tau_c = std::exp(rng.normal());
  double sd_int = hyper.eta * theta.tau_c;
  if (layout.hierarchical_expert) {
    int nb = layout.hierarchy->n_branches;
    theta.phi.resize(nb, p + 1);
    for (int b = 0; b < nb; ++b) {
      theta.phi(b, 0) = rng.normal(0.0, sd_int);
      for (int l = 0; l < p; ++l) {
        double sd = hyper.xi[layout.col_source[l]] * hyper.ard_sigma[l] * theta.nu_c;
        theta.phi(b, l + 1) = rng.normal(0.0, sd);
      }
    }
    std::tie(theta.alpha, theta.beta) =
        compose_hierarchy_coefficients(*layout.hierarchy, theta.phi);
  } else {
    theta.alpha.resize(J);
    for (int j = 0; j < J; ++j) theta.alpha[j] = rng.normal(0.0, sd_int);
    theta.beta.resize(p, J);
    for (int j = 0; j < J; ++j)
      for (int l = 0; l < p; ++l) {
        double sd = hyper.xi[layout.col_source[l]] * hyper.ard_sigma[l] * theta.nu_c;
        theta.beta(l, j) = rng.normal(0.0, sd);
      }
  }
  return theta;
}

std::vector<double> crp_assignment_probs(const std::vector<int>& counts_minus_i,
                                         double gamma, int n_minus) {
  if (gamma <= 0.0) throw std::invalid_argument("crp_assignment_probs: gamma <= 0");
  int total = 0;
  for (int c : counts_minus_i) {
    if (c < 0) throw std::invalid_argument("crp_assignment_probs: negative count");
    total += c;
  }
  if (total != n_minus)
    throw std::invalid_argument("crp_assignment_probs: n_minus != sum(counts)");
  std::vector<double> probs(counts_minus_i.size() + 1);
  double denom = n_minus + gamma;
  for (std::size_t c = 0; c < counts_minus_i.size(); ++c)
    probs[c] = counts_minus_i[c] / denom;
  probs.back() = gamma / denom;
  return probs;
}

std::vector<double> crp_finite_assignment_probs(
    const std::vector<int>& counts_minus_i, double gamma, int n_components,
    int n_minus) {
  if (gamma <= 0.0) throw std::invalid_argument("crp_finite_assignment_probs: gamma <= 0");
  if (n_components < static_cast<int>(counts_minus_i.size()))
    throw std::invalid_argument("crp_finite_assignment_probs: C < occupied count");
  int total = 0;
  for (int c : counts_minus_i) {
    if (c < 0) throw std::invalid_argument("crp_finite_assignment_probs: negative count");
    total += c;
  }
  if (total != n_minus)
    throw std::invalid_argument("crp_finite_assignment_probs: n_minus != sum(counts)");
  std::vector<double> probs(n_components);
  double denom = n_minus + gamma;
  for (int c = 0; c < n_components; ++c) {
    int nc = c < static_cast<int>(counts_minus_i.size()) ? counts_minus_i[c] : 0;
    probs[c] = (nc + gamma / n_components) / denom;
  }
  return probs;
}

double crp_partition_log_prob(const std::vector<int>& block_sizes, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("crp_partition_log_prob: gamma <= 0");
  int n = 0;
  double lp = 0.0;
  for (int b : block_sizes) {
    if (b < 1) throw std::invalid_argument("crp_partition_log_prob: empty block");
    lp += std::log(gamma) + std::lgamma(static_cast<double>(b));
    n += b;
  }
  for (int i = 0; i < n; ++i) lp -= std::log(i + gamma);
  return lp;
}

double log_sum_exp(const std::vector<double>& v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  double mx = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double w : v) s += std::exp(w - mx);
  return mx + std::log(s);
}

}  // namespace dpmnl

#include "dpmnl/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace dpmnl {

void MixtureState::validate(int n_obs) const {
  if (static_cast<int>(assign.size()) != n_obs)
    throw std::invalid_argument("state: assign length != n");
  if (comps.size() != counts.size())
    throw std::invalid_argument("state: comps/counts length mismatch");
  std::vector<int> tally(comps.size(), 0);
  for (int a : assign) {
    if (a < 0 || a >= n_components())
      throw std::invalid_argument("state: assignment to missing component");
    ++tally[a];
  }
  for (std::size_t c = 0; c < tally.size(); ++c) {
    if (counts[c] != tally[c])
      throw std::invalid_argument("state: counts out of sync with assignments");
    if (counts[c] == 0)
      throw std::invalid_argument("state: retained empty component");
  }
}

void ChainConfig::validate() const {
  if (n_iterations < 1) throw std::invalid_argument("chain: n_iterations < 1");
  if (burn_in < 0 || burn_in >= n_iterations)
    throw std::invalid_argument("chain: burn_in must be in [0, n_iterations)");
  if (thin < 1) throw std::invalid_argument("chain: thin < 1");
  if (n_chains < 1) throw std::invalid_argument("chain: n_chains < 1");
  if (aux_m < 1) throw std::invalid_argument("chain: aux_m < 1");
  if (fix_gamma && gamma_init < 0.0)
    throw std::invalid_argument("chain: gamma_init < 0");
}

DpmEngine::DpmEngine(const Dataset& data, const PriorSpec& prior,
                     const ChainConfig& cfg)
    : data_(data), prior_(prior), cfg_(cfg) {
  data_.validate();
  prior_.validate();
  cfg_.validate();
  layout_ = ModelLayout::from_dataset(data_, cfg_.hierarchical_expert);
  if (layout_.hierarchical_expert) {
    const auto& h = *layout_.hierarchy;
    branch_leaves_.resize(h.n_branches);
    for (int j = 0; j < h.n_classes; ++j)
      for (int b : h.leaf_paths[j]) branch_leaves_[b].push_back(j);
  }
}

HyperState DpmEngine::init_hyper(RngStream& rng) const {
  HyperState hyper;
  int p = layout_.p;
  hyper.mu0.resize(p);
  hyper.sigma0.resize(p);
  hyper.Msigma.resize(p);
  hyper.Vsigma.resize(p);
  for (int l = 0; l < p; ++l) {
    if (prior_.per_covariate_g0_enabled) {
      hyper.mu0[l] = rng.normal(prior_.mu0_mean, prior_.mu0_sd);
      hyper.sigma0[l] =
          std::exp(0.5 * rng.normal(prior_.sigma0_log_mean, prior_.sigma0_log_sd));
      hyper.Msigma[l] = rng.normal(prior_.Msigma_mean, prior_.Msigma_sd);
      hyper.Vsigma[l] =
          std::exp(0.5 * rng.normal(prior_.Vsigma_log_mean, prior_.Vsigma_log_sd));
    } else {
      hyper.mu0[l] = prior_.mu0_mean;
      hyper.sigma0[l] = prior_.sigma0_fixed;
      hyper.Msigma[l] = prior_.Msigma_mean;
      hyper.Vsigma[l] = prior_.Vsigma_fixed;
    }
  }
  hyper.eta = std::exp(0.5 * rng.normal(prior_.eta_log_mean, prior_.eta_log_sd));
  hyper.xi.resize(layout_.n_sources);
  for (int s = 0; s < layout_.n_sources; ++s)
    hyper.xi[s] = std::exp(0.5 * rng.normal(prior_.xi_log_mean, prior_.xi_log_sd));
  hyper.ard_sigma = VectorXd::Ones(p);
  if (prior_.ard_enabled)
    for (int l = 0; l < p; ++l)
      hyper.ard_sigma[l] =
          std::exp(0.5 * rng.normal(prior_.ard_log_mean, prior_.ard_log_sd));
  hyper.gamma = cfg_.fix_gamma
                    ? cfg_.gamma_init
                    : std::exp(rng.normal(prior_.gamma_log_mean, prior_.gamma_log_sd));
  return hyper;
}

MixtureState DpmEngine::init_state(const HyperState& hyper, RngStream& rng) const {
  MixtureState state;
  int n = data_.n();
  state.assign.assign(n, 0);
  if (n > 0) {
    state.comps.push_back(sample_component_from_g0(hyper, prior_, layout_, rng));
    state.counts.push_back(n);
  }
  return state;
}

namespace {

void remove_component(MixtureState& state, int slot) {
  state.comps.erase(state.comps.begin() + slot);
  state.counts.erase(state.counts.begin() + slot);
  for (int& a : state.assign)
    if (a > slot) --a;
}

}  // namespace

void DpmEngine::update_assignment(int i, MixtureState& state,
                                  const HyperState& hyper, RngStream& rng) const {
  const int m = cfg_.aux_m;
  int old_slot = state.assign[i];
  --state.counts[old_slot];
  bool was_singleton = state.counts[old_slot] == 0;

  std::vector<ComponentParams> aux(m);
  if (was_singleton) {
    aux[0] = std::move(state.comps[old_slot]);
    remove_component(state, old_slot);
    for (int k = 1; k < m; ++k)
      aux[k] = sample_component_from_g0(hyper, prior_, layout_, rng);
  } else {
    for (int k = 0; k < m; ++k)
      aux[k] = sample_component_from_g0(hyper, prior_, layout_, rng);
  }

  const VectorXd x_row = data_.x.row(i);
  const int y = data_.y[i];
  const int n_occ = state.n_components();
  std::vector<double> log_w(n_occ + m);
  for (int c = 0; c < n_occ; ++c)
    log_w[c] = std::log(static_cast<double>(state.counts[c])) +
               joint_log_density(x_row, y, state.comps[c]);
  const double log_gm = std::log(hyper.gamma / m);
  for (int k = 0; k < m; ++k)
    log_w[n_occ + k] = log_gm + joint_log_density(x_row, y, aux[k]);

  int pick = rng.categorical_log(log_w);
  if (pick < n_occ) {
    state.assign[i] = pick;
    ++state.counts[pick];
  } else {
    state.comps.push_back(std::move(aux[pick - n_occ]));
    state.counts.push_back(1);
    state.assign[i] = state.n_components() - 1;
  }
}

// ---------------------------------------------------------------------------
// Expert (MNL / branch-structured MNL) conditional
// ---------------------------------------------------------------------------

int DpmEngine::expert_dim() const {
  if (layout_.hierarchical_expert)
    return layout_.hierarchy->n_branches * (layout_.p + 1);
  return layout_.n_classes * (1 + layout_.p);
}

VectorXd DpmEngine::pack_expert(const ComponentParams& theta) const {
  VectorXd z(expert_dim());
  if (layout_.hierarchical_expert) {
    int p = layout_.p;
    for (int b = 0; b < theta.phi.rows(); ++b)
      for (int k = 0; k <= p; ++k) z[b * (p + 1) + k] = theta.phi(b, k);
  } else {
    int J = layout_.n_classes;
    z.head(J) = theta.alpha;
    for (int j = 0; j < J; ++j) z.segment(J + j * layout_.p, layout_.p) = theta.beta.col(j);
  }
  return z;
}

void DpmEngine::unpack_expert(const VectorXd& z, ComponentParams& theta) const {
  if (layout_.hierarchical_expert) {
    int p = layout_.p;
    for (int b = 0; b < theta.phi.rows(); ++b)
      for (int k = 0; k <= p; ++k) theta.phi(b, k) = z[b * (p + 1) + k];
    std::tie(theta.alpha, theta.beta) =
        compose_hierarchy_coefficients(*layout_.hierarchy, theta.phi);
  } else {
    int J = layout_.n_classes;
    theta.alpha = z.head(J);
    for (int j = 0; j < J; ++j) theta.beta.col(j) = z.segment(J + j * layout_.p, layout_.p);
  }
}

LogPdfGrad DpmEngine::expert_conditional(const std::vector<int>& members,
                                         const ComponentParams& theta,
                                         const HyperState& hyper) const {
  const int p = layout_.p;
  const int J = layout_.n_classes;
  MatrixXd xc(members.size(), p);
  std::vector<int> yc(members.size());
  for (std::size_t r = 0; r < members.size(); ++r) {
    xc.row(r) = data_.x.row(members[r]);
    yc[r] = data_.y[members[r]] - 1;
  }
  const double sd_int = hyper.eta * theta.tau_c;
  VectorXd sd_coef(p);
  for (int l = 0; l < p; ++l)
    sd_coef[l] = hyper.xi[layout_.col_source[l]] * hyper.ard_sigma[l] * theta.nu_c;
  const bool hier = layout_.hierarchical_expert;
  const int n_branches = hier ? layout_.hierarchy->n_branches : 0;
  const auto* hierarchy = hier ? &*layout_.hierarchy : nullptr;
  const auto* branch_leaves = hier ? &branch_leaves_ : nullptr;

  return [=, this](const VectorXd& z, VectorXd& grad) -> double {
    VectorXd alpha(J);
    MatrixXd beta(p, J);
    if (hier) {
      MatrixXd phi(n_branches, p + 1);
      for (int b = 0; b < n_branches; ++b)
        for (int k = 0; k <= p; ++k) phi(b, k) = z[b * (p + 1) + k];
      std::tie(alpha, beta) = compose_hierarchy_coefficients(*hierarchy, phi);

      double val = 0.0;
      VectorXd g_alpha = VectorXd::Zero(J);
      MatrixXd g_beta = MatrixXd::Zero(p, J);
      val += mnl_log_lik_grad(xc, yc, alpha, beta, g_alpha, g_beta);
      grad.resize(z.size());
      for (int b = 0; b < n_branches; ++b) {
        double ga = 0.0;
        VectorXd gb = VectorXd::Zero(p);
        for (int j : (*branch_leaves)[b]) {
          ga += g_alpha[j];
          gb += g_beta.col(j);
        }
        grad[b * (p + 1)] = ga - phi(b, 0) / (sd_int * sd_int);
        val += normal_log_pdf(phi(b, 0), 0.0, sd_int);
        for (int l = 0; l < p; ++l) {
          grad[b * (p + 1) + 1 + l] =
              gb[l] - phi(b, 1 + l) / (sd_coef[l] * sd_coef[l]);
          val += normal_log_pdf(phi(b, 1 + l), 0.0, sd_coef[l]);
        }
      }
      return val;
    }

    alpha = z.head(J);
    for (int j = 0; j < J; ++j) beta.col(j) = z.segment(J + j * p, p);
    double val = 0.0;
    VectorXd g_alpha = VectorXd::Zero(J);
    MatrixXd g_beta = MatrixXd::Zero(p, J);
    val += mnl_log_lik_grad(xc, yc, alpha, beta, g_alpha, g_beta);
    grad.resize(z.size());
    for (int j = 0; j < J; ++j) {
      grad[j] = g_alpha[j] - alpha[j] / (sd_int * sd_int);
      val += normal_log_pdf(alpha[j], 0.0, sd_int);
      for (int l = 0; l < p; ++l) {
        grad[J + j * p + l] = g_beta(l, j) - beta(l, j) / (sd_coef[l] * sd_coef[l]);
        val += normal_log_pdf(beta(l, j), 0.0, sd_coef[l]);
      }
    }
    return val;
  };
}

// MNL log likelihood over gathered rows; accumulates gradients wrt alpha and
// beta. Free function so both expert forms share it.
double mnl_log_lik_grad(const MatrixXd& xc, const std::vector<int>& yc,
                        const VectorXd& alpha, const MatrixXd& beta,
                        VectorXd& g_alpha, MatrixXd& g_beta) {
  const int nc = static_cast<int>(xc.rows());
  const int J = static_cast<int>(alpha.size());
  MatrixXd logits = (xc * beta).rowwise() + alpha.transpose();  // nc x J
  double ll = 0.0;
  MatrixXd resid(nc, J);
  for (int r = 0; r < nc; ++r) {
    double mx = logits.row(r).maxCoeff();
    double lse = std::log((logits.row(r).array() - mx).exp().sum()) + mx;
    ll += logits(r, yc[r]) - lse;
    for (int j = 0; j < J; ++j)
      resid(r, j) = (j == yc[r] ? 1.0 : 0.0) - std::exp(logits(r, j) - lse);
  }
  g_alpha += resid.colwise().sum().transpose();
  g_beta += xc.transpose() * resid;
  return ll;
}

void DpmEngine::update_expert(const std::vector<int>& members,
                              ComponentParams& theta, const HyperState& hyper,
                              RngStream& rng) const {
  auto target = expert_conditional(members, theta, hyper);
  VectorXd z = pack_expert(theta);
  for (int k = 0; k < cfg_.hmc_updates; ++k) {
    HmcResult res = hmc_update(target, z, cfg_.hmc, rng);
    z = res.x;
  }
  unpack_expert(z, theta);
}

void DpmEngine::update_covariate_params(const std::vector<int>& members,
                                        ComponentParams& theta,
                                        const HyperState& hyper,
                                        RngStream& rng) const {
  const double nc = static_cast<double>(members.size());
  for (int l = 0; l < layout_.p; ++l) {
    double sx = 0.0, sxx = 0.0;
    for (int i : members) {
      double v = data_.x(i, l);
      sx += v;
      sxx += v * v;
    }
    const double mu0 = hyper.mu0[l], sigma0 = hyper.sigma0[l];
    const double ms = hyper.Msigma[l], vs = hyper.Vsigma[l];

    double var = theta.sigma[l] * theta.sigma[l];
    auto mu_target = [&](double m) {
      return -(sxx - 2.0 * m * sx + nc * m * m) / (2.0 * var) +
             normal_log_pdf(m, mu0, sigma0);
    };
    theta.mu[l] = slice_sample_step(mu_target, theta.mu[l], cfg_.slice, rng);

    const double mu = theta.mu[l];
    const double sse = sxx - 2.0 * mu * sx + nc * mu * mu;
    auto logvar_target = [&](double s) {
      return -0.5 * nc * s - sse / (2.0 * std::exp(s)) + normal_log_pdf(s, ms, vs);
    };
    double s = slice_sample_step(logvar_target, 2.0 * std::log(theta.sigma[l]),
                                 cfg_.slice, rng);
    theta.sigma[l] = std::exp(0.5 * s);
  }
}

void DpmEngine::update_local_scales(ComponentParams& theta,
                                    const HyperState& hyper,
                                    RngStream& rng) const {
  // Sufficient statistics don't depend on the scale being updated, so the
  // slice targets are O(1) per evaluation.
  double q_coef = 0.0;
  int k_coef = 0;
  double q_int = 0.0;
  int k_int = 0;
  auto acc_int = [&](double a) {
    double r = a / hyper.eta;
    q_int += r * r;
    ++k_int;
  };
  auto acc_coef = [&](int l, double b) {
    double r = b / (hyper.xi[layout_.col_source[l]] * hyper.ard_sigma[l]);
    q_coef += r * r;
    ++k_coef;
  };
  if (layout_.hierarchical_expert) {
    for (int b = 0; b < theta.phi.rows(); ++b) {
      acc_int(theta.phi(b, 0));
      for (int l = 0; l < layout_.p; ++l) acc_coef(l, theta.phi(b, l + 1));
    }
  } else {
    for (int j = 0; j < theta.alpha.size(); ++j) acc_int(theta.alpha[j]);
    for (int j = 0; j < theta.beta.cols(); ++j)
      for (int l = 0; l < layout_.p; ++l) acc_coef(l, theta.beta(l, j));
  }

  if (k_coef > 0) {
    auto nu_target = [&](double v) {
      return -k_coef * v - q_coef * std::exp(-2.0 * v) / 2.0 +
             normal_log_pdf(v, 0.0, 1.0);
    };
    theta.nu_c =
        std::exp(slice_sample_step(nu_target, std::log(theta.nu_c), cfg_.slice, rng));
  }
  auto tau_target = [&](double t) {
    return -k_int * t - q_int * std::exp(-2.0 * t) / 2.0 +
           normal_log_pdf(t, 0.0, 1.0);
  };
  theta.tau_c =
      std::exp(slice_sample_step(tau_target, std::log(theta.tau_c), cfg_.slice, rng));
}

void DpmEngine::update_component_params(int slot, MixtureState& state,
                                        const HyperState& hyper,
                                        RngStream& rng) const {
  std::vector<int> members;
  for (int i = 0; i < data_.n(); ++i)
    if (state.assign[i] == slot) members.push_back(i);
  if (members.empty())
    throw std::invalid_argument("update_component_params: empty component");
  ComponentParams& theta = state.comps[slot];
  update_expert(members, theta, hyper, rng);
  update_covariate_params(members, theta, hyper, rng);
  update_local_scales(theta, hyper, rng);
}

void DpmEngine::update_hyperparams(const MixtureState& state, HyperState& hyper,
                                   RngStream& rng) const {
  const int p = layout_.p;
  const int C = state.n_components();

  if (prior_.per_covariate_g0_enabled) {
    for (int l = 0; l < p; ++l) {
      double smu = 0.0, smu2 = 0.0, slog = 0.0, slog2 = 0.0;
      for (const auto& comp : state.comps) {
        double m = comp.mu[l];
        smu += m;
        smu2 += m * m;
        double s = 2.0 * std::log(comp.sigma[l]);
        slog += s;
        slog2 += s * s;
      }
      {
        const double sigma0 = hyper.sigma0[l];
        auto target = [&](double m0) {
          return -(smu2 - 2.0 * m0 * smu + C * m0 * m0) / (2.0 * sigma0 * sigma0) +
                 normal_log_pdf(m0, prior_.mu0_mean, prior_.mu0_sd);
        };
        hyper.mu0[l] = slice_sample_step(target, hyper.mu0[l], cfg_.slice, rng);
      }
      {
        const double m0 = hyper.mu0[l];
        const double sse = smu2 - 2.0 * m0 * smu + C * m0 * m0;
        auto target = [&](double s) {
          return -0.5 * C * s - sse / (2.0 * std::exp(s)) +
                 normal_log_pdf(s, prior_.sigma0_log_mean, prior_.sigma0_log_sd);
        };
        double s = slice_sample_step(target, 2.0 * std::log(hyper.sigma0[l]),
                                     cfg_.slice, rng);
        hyper.sigma0[l] = std::exp(0.5 * s);
      }
      {
        const double vs = hyper.Vsigma[l];
        auto target = [&](double m) {
          return -(slog2 - 2.0 * m * slog + C * m * m) / (2.0 * vs * vs) +
                 normal_log_pdf(m, prior_.Msigma_mean, prior_.Msigma_sd);
        };
        hyper.Msigma[l] = slice_sample_step(target, hyper.Msigma[l], cfg_.slice, rng);
      }
      {
        const double m = hyper.Msigma[l];
        const double sse = slog2 - 2.0 * m * slog + C * m * m;
        auto target = [&](double s) {
          return -0.5 * C * s - sse / (2.0 * std::exp(s)) +
                 normal_log_pdf(s, prior_.Vsigma_log_mean, prior_.Vsigma_log_sd);
        };
        double s = slice_sample_step(target, 2.0 * std::log(hyper.Vsigma[l]),
                                     cfg_.slice, rng);
        hyper.Vsigma[l] = std::exp(0.5 * s);
      }
    }
  }

  // Global intercept scale eta: log(eta^2) given all intercept-slot entries.
  {
    double a2 = 0.0;
    int k = 0;
    for (const auto& comp : state.comps) {
      if (layout_.hierarchical_expert) {
        for (int b = 0; b < comp.phi.rows(); ++b) {
          double r = comp.phi(b, 0) / comp.tau_c;
          a2 += r * r;
          ++k;
        }
      } else {
        for (int j = 0; j < comp.alpha.size(); ++j) {
          double r = comp.alpha[j] / comp.tau_c;
          a2 += r * r;
          ++k;
        }
      }
    }
    auto target = [&](double h) {
      return -0.5 * k * h - a2 * std::exp(-h) / 2.0 +
             normal_log_pdf(h, prior_.eta_log_mean, prior_.eta_log_sd);
    };
    double h = slice_sample_step(target, 2.0 * std::log(hyper.eta), cfg_.slice, rng);
    hyper.eta = std::exp(0.5 * h);
  }

  // Per-source coefficient scales xi_s.
  for (int s = 0; s < layout_.n_sources; ++s) {
    double b2 = 0.0;
    int k = 0;
    for (const auto& comp : state.comps) {
      for (int l = 0; l < p; ++l) {
        if (layout_.col_source[l] != s) continue;
        double denom = hyper.ard_sigma[l] * comp.nu_c;
        if (layout_.hierarchical_expert) {
          for (int b = 0; b < comp.phi.rows(); ++b) {
            double r = comp.phi(b, l + 1) / denom;
            b2 += r * r;
            ++k;
          }
        } else {
          for (int j = 0; j < comp.beta.cols(); ++j) {
            double r = comp.beta(l, j) / denom;
            b2 += r * r;
            ++k;
          }
        }
      }
    }
    auto target = [&](double h) {
      return -0.5 * k * h - b2 * std::exp(-h) / 2.0 +
             normal_log_pdf(h, prior_.xi_log_mean, prior_.xi_log_sd);
    };
    double h = slice_sample_step(target, 2.0 * std::log(hyper.xi[s]), cfg_.slice, rng);
    hyper.xi[s] = std::exp(0.5 * h);
  }

  // ARD relevance scales.
  if (prior_.ard_enabled) {
    for (int l = 0; l < p; ++l) {
      double b2 = 0.0;
      int k = 0;
      double xi = hyper.xi[layout_.col_source[l]];
      for (const auto& comp : state.comps) {
        double denom = xi * comp.nu_c;
        if (layout_.hierarchical_expert) {
          for (int b = 0; b < comp.phi.rows(); ++b) {
            double r = comp.phi(b, l + 1) / denom;
            b2 += r * r;
            ++k;
          }
        } else {
          for (int j = 0; j < comp.beta.cols(); ++j) {
            double r = comp.beta(l, j) / denom;
            b2 += r * r;
            ++k;
          }
        }
      }
      auto target = [&](double h) {
        return -0.5 * k * h - b2 * std::exp(-h) / 2.0 +
               normal_log_pdf(h, prior_.ard_log_mean, prior_.ard_log_sd);
      };
      double h = slice_sample_step(target, 2.0 * std::log(hyper.ard_sigma[l]),
                                   cfg_.slice, rng);
      hyper.ard_sigma[l] = std::exp(0.5 * h);
    }
  }
}

void DpmEngine::update_concentration(const MixtureState& state, HyperState& hyper,
                                     RngStream& rng) const {
  const int C = state.n_components();
  const double n = static_cast<double>(data_.n());
  auto target = [&](double g) {
    double gamma = std::exp(g);
    return C * g + std::lgamma(gamma) - std::lgamma(gamma + n) +
           normal_log_pdf(g, prior_.gamma_log_mean, prior_.gamma_log_sd);
  };
  hyper.gamma = std::exp(
      slice_sample_step(target, std::log(hyper.gamma), cfg_.slice, rng));
}

void DpmEngine::sweep(MixtureState& state, HyperState& hyper, RngStream& rng) const {
  if (!cfg_.single_component)
    for (int i = 0; i < data_.n(); ++i) update_assignment(i, state, hyper, rng);
  for (int slot = 0; slot < state.n_components(); ++slot)
    update_component_params(slot, state, hyper, rng);
  update_hyperparams(state, hyper, rng);
  if (!cfg_.single_component && !cfg_.fix_gamma)
    update_concentration(state, hyper, rng);
}

std::vector<PosteriorSample> DpmEngine::run_chain(int chain_id) const {
  RngStream rng = RngStream(cfg_.seed).fork(static_cast<std::uint64_t>(chain_id));
  HyperState hyper = init_hyper(rng);
  MixtureState state = init_state(hyper, rng);
  std::vector<PosteriorSample> samples;
  samples.reserve((cfg_.n_iterations - cfg_.burn_in) / cfg_.thin + 1);
  for (int iter = 1; iter <= cfg_.n_iterations; ++iter) {
    try {
      sweep(state, hyper, rng);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "chain " << chain_id << " iteration " << iter << ": " << e.what();
      throw std::runtime_error(os.str());
    }
    if (iter > cfg_.burn_in && (iter - cfg_.burn_in) % cfg_.thin == 0)
      samples.push_back(PosteriorSample{state, hyper, iter, chain_id});
  }
  return samples;
}

std::vector<PosteriorSample> DpmEngine::run_chains() const {
  std::vector<PosteriorSample> all;
  for (int c = 0; c < cfg_.n_chains; ++c) {
    auto part = run_chain(c);
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return all;
}

std::uint64_t dataset_checksum(const Dataset& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(data.n()));
  mix(static_cast<std::uint64_t>(data.p()));
  mix(static_cast<std::uint64_t>(data.n_classes));
  for (int label : data.y) mix(static_cast<std::uint64_t>(label));
  for (int i = 0; i < data.n(); ++i)
    for (int l = 0; l < data.p(); ++l) {
      double v = data.x(i, l);
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      mix(bits);
    }
  return h;
}

}  // namespace dpmnl

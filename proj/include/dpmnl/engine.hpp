#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpmnl/model.hpp"
#include "dpmnl/samplers.hpp"

namespace dpmnl {

// CRP state: per-observation component slots plus the occupied components in
// a stable order. Slots are positional; they are renumbered when a component
// empties and carry no meaning across retained samples.
struct MixtureState {
  std::vector<int> assign;             // n entries, slot index into comps
  std::vector<ComponentParams> comps;  // occupied components only
  std::vector<int> counts;             // occupancy per slot, all > 0

  int n_components() const { return static_cast<int>(comps.size()); }
  void validate(int n_obs) const;
};

struct ChainConfig {
  int n_iterations = 2000;
  int burn_in = 200;
  int thin = 5;
  int n_chains = 1;
  std::uint64_t seed = 1;
  int aux_m = 3;  // algorithm-8 auxiliary components
  SliceConfig slice;
  HmcConfig hmc;
  int hmc_updates = 1;  // HMC transitions per component per sweep

  bool hierarchical_expert = false;  // branch-structured expert in components
  bool single_component = false;     // one forced component, no CRP moves
  bool fix_gamma = false;
  double gamma_init = 1.0;  // value when fix_gamma; ignored otherwise

  void validate() const;
};

struct PosteriorSample {
  MixtureState state;
  HyperState hyper;
  int iteration = 0;
  int chain = 0;
};

// Full posterior sampler for the Dirichlet process mixture of MNL experts.
// Assignment updates follow Neal (2000) algorithm 8; expert coefficients move
// by Hamiltonian Monte Carlo and every scale-type parameter by single-variable
// slice sampling on its log.
class DpmEngine {
 public:
  DpmEngine(const Dataset& data, const PriorSpec& prior, const ChainConfig& cfg);

  const ModelLayout& layout() const { return layout_; }
  const ChainConfig& config() const { return cfg_; }
  const PriorSpec& prior() const { return prior_; }
  const Dataset& data() const { return data_; }

  HyperState init_hyper(RngStream& rng) const;
  MixtureState init_state(const HyperState& hyper, RngStream& rng) const;

  // Remove observation i, instantiate aux_m auxiliary components (reusing a
  // singleton's parameters as the first), reassign, and drop unused
  // auxiliaries.
  void update_assignment(int i, MixtureState& state, const HyperState& hyper,
                         RngStream& rng) const;

  // One pass of expert HMC plus slice updates of mu_l, log sigma_l^2,
  // log nu_c, log tau_c for the component in the given slot.
  void update_component_params(int slot, MixtureState& state,
                               const HyperState& hyper, RngStream& rng) const;

  void update_hyperparams(const MixtureState& state, HyperState& hyper,
                          RngStream& rng) const;

  // Slice-sample log gamma; the likelihood depends on the state only through
  // the occupied component count.
  void update_concentration(const MixtureState& state, HyperState& hyper,
                            RngStream& rng) const;

  void sweep(MixtureState& state, HyperState& hyper, RngStream& rng) const;

  std::vector<PosteriorSample> run_chain(int chain_id) const;
  // All configured chains, concatenated in chain order.
  std::vector<PosteriorSample> run_chains() const;

  // Conditional log posterior of the packed expert parameters for a component
  // with the given member rows; exposed for gradient verification.
  LogPdfGrad expert_conditional(const std::vector<int>& members,
                                const ComponentParams& theta,
                                const HyperState& hyper) const;
  VectorXd pack_expert(const ComponentParams& theta) const;
  void unpack_expert(const VectorXd& z, ComponentParams& theta) const;
  int expert_dim() const;

 private:
  void update_expert(const std::vector<int>& members, ComponentParams& theta,
                     const HyperState& hyper, RngStream& rng) const;
  void update_covariate_params(const std::vector<int>& members,
                               ComponentParams& theta, const HyperState& hyper,
                               RngStream& rng) const;
  void update_local_scales(ComponentParams& theta, const HyperState& hyper,
                           RngStream& rng) const;

  const Dataset& data_;
  PriorSpec prior_;
  ChainConfig cfg_;
  ModelLayout layout_;
  // leaf lists per branch for gradient accumulation in hierarchical mode
  std::vector<std::vector<int>> branch_leaves_;
};

std::uint64_t dataset_checksum(const Dataset& data);

}  // namespace dpmnl

#pragma once

#include <Eigen/Core>
#include <functional>

#include "dpmnl/rng.hpp"

namespace dpmnl {

using Eigen::VectorXd;

struct SliceConfig {
  double w = 1.0;      // initial interval width
  int max_steps = 20;  // cap on total stepping-out expansions
};

struct HmcConfig {
  double step_size = 0.05;
  int leapfrog_steps = 20;
  double mass = 1.0;  // identity mass matrix, scaled
};

// Scalar log density; must be finite at the current point, -inf allowed
// elsewhere to encode bounded support.
using LogPdf = std::function<double(double)>;

// Returns the log density and writes the gradient into grad.
using LogPdfGrad = std::function<double(const VectorXd& x, VectorXd& grad)>;

// One transition of Neal (2003) single-variable slice sampling: stepping out
// with at most cfg.max_steps width expansions split randomly between the two
// ends, then shrinkage. If level_out is given, the sampled slice level is
// written there.
double slice_sample_step(const LogPdf& log_pdf, double x0, const SliceConfig& cfg,
                         RngStream& rng, double* level_out = nullptr);

struct HmcResult {
  VectorXd x;
  bool accepted = false;
  double delta_h = 0.0;  // proposal H minus initial H
};

// One Hamiltonian Monte Carlo transition: momentum refreshed from N(0, mass),
// leapfrog integration, Metropolis accept/reject. A non-finite Hamiltonian
// rejects the proposal.
HmcResult hmc_update(const LogPdfGrad& log_pdf_and_grad, const VectorXd& x0,
                     const HmcConfig& cfg, RngStream& rng);

// Leapfrog integration of the Hamiltonian flow, exposed for reversibility
// checks. Updates x and r in place; returns the final log density.
double leapfrog(const LogPdfGrad& log_pdf_and_grad, VectorXd& x, VectorXd& r,
                double step_size, int n_steps, double mass);

// Max over coordinates of |analytic - central difference| / max(1, |analytic|).
double check_gradient(const LogPdfGrad& log_pdf_and_grad, const VectorXd& x,
                      double h);

}  // namespace dpmnl

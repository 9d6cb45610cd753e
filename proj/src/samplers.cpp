#include "dpmnl/samplers.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dpmnl {

namespace {

double checked_eval(const LogPdf& log_pdf, double x) {
  double v = log_pdf(x);
  if (std::isnan(v)) {
    std::ostringstream os;
    os << "slice_sample_step: log_pdf returned NaN at x=" << x;
    throw std::runtime_error(os.str());
  }
  return v;
}

}  // namespace

double slice_sample_step(const LogPdf& log_pdf, double x0, const SliceConfig& cfg,
                         RngStream& rng, double* level_out) {
  if (cfg.w <= 0.0 || cfg.max_steps < 1)
    throw std::invalid_argument("slice_sample_step: bad config");
  double f0 = checked_eval(log_pdf, x0);
  if (!std::isfinite(f0))
    throw std::invalid_argument("slice_sample_step: log_pdf(x0) not finite");

  // Slice level: log u + f(x0), u ~ U(0,1).
  double level = f0 - rng.exponential();
  if (level_out) *level_out = level;

  // Stepping out (Neal 2003, Fig. 3), with the max_steps expansions split
  // randomly between the two sides.
  double u = rng.uniform();
  double left = x0 - cfg.w * u;
  double right = left + cfg.w;
  int j = static_cast<int>(std::floor(cfg.max_steps * rng.uniform()));
  int k = cfg.max_steps - 1 - j;
  while (j > 0 && checked_eval(log_pdf, left) > level) {
    left -= cfg.w;
    --j;
  }
  while (k > 0 && checked_eval(log_pdf, right) > level) {
    right += cfg.w;
    --k;
  }

  // Shrinkage.
  for (;;) {
    double x1 = rng.uniform(left, right);
    double f1 = checked_eval(log_pdf, x1);
    if (f1 > level) return x1;
    if (x1 < x0)
      left = x1;
    else if (x1 > x0)
      right = x1;
    else
      return x0;  // interval shrank to the current point
  }
}

double leapfrog(const LogPdfGrad& log_pdf_and_grad, VectorXd& x, VectorXd& r,
                double step_size, int n_steps, double mass) {
  VectorXd grad(x.size());
  double logp = log_pdf_and_grad(x, grad);
  r += 0.5 * step_size * grad;
  for (int s = 0; s < n_steps; ++s) {
    x += (step_size / mass) * r;
    logp = log_pdf_and_grad(x, grad);
    r += (s + 1 < n_steps ? step_size : 0.5 * step_size) * grad;
  }
  return logp;
}

HmcResult hmc_update(const LogPdfGrad& log_pdf_and_grad, const VectorXd& x0,
                     const HmcConfig& cfg, RngStream& rng) {
  if (cfg.step_size <= 0.0 || cfg.leapfrog_steps < 1 || cfg.mass <= 0.0)
    throw std::invalid_argument("hmc_update: bad config");
  const int d = static_cast<int>(x0.size());
  VectorXd grad(d);
  double logp0 = log_pdf_and_grad(x0, grad);
  if (!std::isfinite(logp0))
    throw std::invalid_argument("hmc_update: log_pdf(x0) not finite");

  VectorXd r0(d);
  double sd = std::sqrt(cfg.mass);
  for (int i = 0; i < d; ++i) r0[i] = sd * rng.normal();

  double h0 = -logp0 + 0.5 * r0.squaredNorm() / cfg.mass;
  VectorXd x = x0;
  VectorXd r = r0;
  double logp1 = leapfrog(log_pdf_and_grad, x, r, cfg.step_size,
                          cfg.leapfrog_steps, cfg.mass);
  double h1 = -logp1 + 0.5 * r.squaredNorm() / cfg.mass;

  HmcResult res;
  res.delta_h = h1 - h0;
  double accept_draw = rng.uniform();
  if (std::isfinite(h1) && std::log(accept_draw) < h0 - h1) {
    res.x = x;
    res.accepted = true;
  } else {
    res.x = x0;
    res.accepted = false;
  }
  return res;
}

double check_gradient(const LogPdfGrad& log_pdf_and_grad, const VectorXd& x,
                      double h) {
  if (h <= 0.0) throw std::invalid_argument("check_gradient: h <= 0");
  const int d = static_cast<int>(x.size());
  VectorXd grad(d);
  log_pdf_and_grad(x, grad);
  VectorXd dummy(d);
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    double fp = log_pdf_and_grad(xp, dummy);
    double fm = log_pdf_and_grad(xm, dummy);
    double fd = (fp - fm) / (2.0 * h);
    double rel = std::abs(fd - grad[i]) / std::max(1.0, std::abs(grad[i]));
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace dpmnl

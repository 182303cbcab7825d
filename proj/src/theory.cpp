#include "plab/theory.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <vector>

namespace plab::theory {
namespace {

struct KernelParams {
  double u1;
  double u2;
  double lambda1;
  int wrong_lags;
};

// Peak density written with the exponentially scaled Bessel so the
// exponent collapses to -(sqrt(x/u1) - sqrt(lambda1))^2 / 2 and never
// overflows even for large non-centrality.
double pdf_peak_impl(double x, double u1, double lambda1) {
  if (x <= 0.0) return 0.0;
  const double r = std::sqrt(x / u1);
  const double arg = std::sqrt(lambda1) * r;
  const double expo = -0.5 * (r - std::sqrt(lambda1)) * (r - std::sqrt(lambda1));
  return 0.5 / u1 * std::exp(expo) * gsl_sf_bessel_I0_scaled(arg);
}

// P(max of `wrong` exponentials > x) = 1 - (1 - e^{-x/2u2})^wrong.
double exceed_prob(double x, double u2, int wrong) {
  const double e = std::exp(-x / (2.0 * u2));
  if (e >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(wrong) * std::log1p(-e));
}

double integrand(double x, void* params) {
  const auto* kp = static_cast<const KernelParams*>(params);
  const double f = pdf_peak_impl(x, kp->u1, kp->lambda1);
  if (f == 0.0) return 0.0;
  return f * exceed_prob(x, kp->u2, kp->wrong_lags);
}

void ensure_gsl_handler_off() {
  static std::once_flag flag;
  std::call_once(flag, [] { gsl_set_error_handler_off(); });
}

double p_exceed(const StatParams& p, int wrong_lags) {
  ensure_gsl_handler_off();
  KernelParams kp{p.u1, p.u2, p.lambda1, wrong_lags};

  // Upper limit with peak-density tail mass far below 1e-12.
  const double s_hi = std::pow(std::sqrt(p.lambda1) + 12.0, 2) + 80.0;
  const double hi = p.u1 * s_hi;

  // Guide the subdivision: the bracket transitions near 2*u2*ln(wrong) and
  // the density concentrates near u1*lambda1.
  std::vector<double> pts{0.0, hi};
  const double knee = 2.0 * p.u2 * std::log(static_cast<double>(std::max(wrong_lags, 2)));
  const double mode = p.u1 * std::max(p.lambda1, 1.0);
  for (double v : {knee, mode}) {
    if (v > 0.0 && v < hi) pts.push_back(v);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  gsl_function f;
  f.function = &integrand;
  f.params = &kp;

  struct WsDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
  };
  std::unique_ptr<gsl_integration_workspace, WsDeleter> ws(
      gsl_integration_workspace_alloc(4000));

  double result = 0.0, abserr = 0.0;
  int status = gsl_integration_qagp(&f, pts.data(), pts.size(), 1e-300, 1e-6, 4000,
                                    ws.get(), &result, &abserr);
  if (status == GSL_EROUND && std::abs(result) < 1e-14) {
    // Vanishing probability; round-off noise around zero is acceptable.
    status = GSL_SUCCESS;
  }
  if (status != GSL_SUCCESS) {
    throw QuadratureFailure("p_false quadrature failed, gsl status " + std::to_string(status));
  }
  return std::clamp(result, 0.0, 1.0);
}

}  // namespace

StatParams stat_params(double snr_db, int m, int n) {
  if (m <= 0 || n <= 0) throw Error("stat_params: M and N must be positive");
  StatParams p;
  p.m = m;
  p.n = n;
  p.sigma_w2 = 1.0;
  p.sigma_s2 = std::pow(10.0, snr_db / 10.0);
  const double md = static_cast<double>(m);
  const double s2 = p.sigma_s2;
  const double w2 = p.sigma_w2;

  const double var_nm_peak = (2.0 * md * s2 * w2 + md * w2 * w2) / 2.0;
  const double var_nm_out = md * (w2 * w2 + 2.0 * s2 * w2) / 2.0;
  const double mean_nm_peak = md * s2;
  const double mean_dm = md * (w2 + s2);

  p.u1 = var_nm_peak / (mean_dm * mean_dm);
  p.u2 = var_nm_out / (mean_dm * mean_dm);
  p.lambda1 = mean_nm_peak * mean_nm_peak / var_nm_peak;
  return p;
}

double pdf_peak(double x, const StatParams& p) { return pdf_peak_impl(x, p.u1, p.lambda1); }

double pdf_max_out(double z, const StatParams& p, int n) {
  if (z <= 0.0) return 0.0;
  const double e = std::exp(-z / (2.0 * p.u2));
  const double body = std::exp(static_cast<double>(n - 2) * std::log1p(-e));
  return static_cast<double>(n - 1) / (2.0 * p.u2) * body * e;
}

double p_false_ifo(const StatParams& p, int n) { return p_exceed(p, n - 1); }

double p_err_sig(const StatParams& p, int m) { return p_exceed(p, m - 1); }

double p_false_sig(double p_ifo, double p_sig) {
  return 1.0 - (1.0 - p_ifo) * (1.0 - p_sig);
}

double crlb(int l_h, int n, double rho_db) {
  if (l_h <= 0 || n <= 0 || l_h > n) throw Error("crlb: need 0 < L_h <= N");
  const double rho = std::pow(10.0, rho_db / 10.0);
  return static_cast<double>(l_h) / (static_cast<double>(n) * rho);
}

}  // namespace plab::theory

#pragma once

#include "plab/types.hpp"

namespace plab::theory {

struct QuadratureFailure : Error {
  using Error::Error;
};

// Moments of the correlation statistic under the AWGN model, with the
// noise power fixed at 1 and the signal power set by the SNR. u1/u2 are
// the variance-over-squared-mean ratios that parameterize the peak and
// out-of-peak densities; lambda1 is the non-centrality of the peak.
struct StatParams {
  double sigma_s2 = 1.0;
  double sigma_w2 = 1.0;
  int m = 511;
  int n = 1024;
  double u1 = 0.0;
  double u2 = 0.0;
  double lambda1 = 0.0;
};

StatParams stat_params(double snr_db, int m = 511, int n = 1024);

// Density of the squared normalized correlation at the true lag:
// scaled non-central chi-square with 2 degrees of freedom.
double pdf_peak(double x, const StatParams& p);

// Density of the maximum over n-1 wrong lags (each squared magnitude is
// exponential with mean 2*u2).
double pdf_max_out(double z, const StatParams& p, int n);

// P(max over the N-1 wrong lags > true-lag statistic), by adaptive
// quadrature. Relative tolerance 1e-6; throws QuadratureFailure when the
// integrator cannot converge.
double p_false_ifo(const StatParams& p, int n);

// Same integral with the signaling search size (m candidate shifts, m-1 of
// them wrong).
double p_err_sig(const StatParams& p, int m);

// Combined false-signaling probability: 1 - (1 - p_ifo)(1 - p_sig).
double p_false_sig(double p_ifo, double p_sig);

// Channel-estimation lower bound L_h / (N * rho).
double crlb(int l_h, int n, double rho_db);

}  // namespace plab::theory

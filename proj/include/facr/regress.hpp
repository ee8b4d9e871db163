#pragma once

#include <vector>

#include "facr/acov.hpp"
#include "facr/vrtest_fwd.hpp"

// Two-step slope estimation on the autocovariance eigenspaces, plug-in
// variance objects, and pointwise/local-average confidence intervals.
namespace facr {

struct FitConfig {
    int kappa = 1;
    int d_N = 1;
    double threshold_a1 = 0.4;
    double threshold_a2_exp = 0.2;
    bool centered = true;
};

struct FitResult {
    LinOp f_N;
    LinOp f_S;
    LinOp f_total;       // f_N + f_S
    Fn intercept;        // zero when uncentered
    FpcaSplit split;
    FnSeries residuals;  // u_t = y_t - mu - f(x_t)
    LinOp C_u_hat;       // (1/T) sum u_t (x) u_t
    LinOp C0_S;          // (1/T) sum (P_S x_t) (x) (P_S x_t), centered in centered mode
    LinOp dinv_S;        // restricted inverse on eigenvalues d_N+1..K
    Fn x_mean;
    Fn y_mean;
    FitConfig config;
    int T = 0;
};

struct InferenceReport {
    double interval_lo = 0.0;   // [b_j, b_{j+1}] for local bands, domain ends otherwise
    double interval_hi = 0.0;
    double point = 0.0;
    double theta_hat = 0.0;
    double variance = 0.0;      // theta_hat * <C_u phi, phi> / T
    double ci_low = 0.0;
    double ci_high = 0.0;
    double level = 0.95;
};

struct ShockResponse {
    double q = 0.0;
    Fn density;
    double mean = 0.0;
    double variance = 0.0;
};

// Standard normal quantile, rational approximation (Wichura AS 241).
double normal_quantile(double p);

FitResult fit(const FnSeries& x, const FnSeries& y, const FitConfig& cfg);

// Plug-in variance scaling: <zeta, Dinv_S Cs* C0s Cs Dinv_S zeta>, always >= 0.
double theta_hat(const FitResult& fit, const Fn& zeta);

Fn partial_effect(const FitResult& fit, const Fn& zeta);

InferenceReport ci_scalar(const FitResult& fit, const Fn& zeta, const Fn& phi,
                          double level = 0.95);

// Confidence intervals for local averages of f(zeta) over consecutive
// breakpoint intervals; each functional is the normalized indicator.
std::vector<InferenceReport> local_band(const FitResult& fit, const Fn& zeta,
                                        const std::vector<double>& breakpoints,
                                        double level = 0.95);

// One-grid-cell bands covering the whole domain (breakpoints at the nodes).
std::vector<InferenceReport> pointwise_band(const FitResult& fit, const Fn& zeta,
                                            double level = 0.95);

// Densities obtained by inverting y_ref + q * f(zeta) in CLR space, with
// their means and variances under grid quadrature.
std::vector<ShockResponse> shock_response(const FitResult& fit, const Fn& y_ref,
                                          const Fn& zeta,
                                          const std::vector<double>& q_list);

// Variance-ratio check that y_t - f_N(x_t) carries no remaining stochastic
// trend; passes when the estimated dimension is zero.
VRReport diagnostic_trend_check(const FitResult& fit, const FnSeries& x,
                                const FnSeries& y, const VRConfig& cfg);

}  // namespace facr

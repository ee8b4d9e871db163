#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "facr/grid.hpp"

// Variance-ratio test for the nonstationarity dimension d_N: the statistic
// from the partial-sum/covariance eigenproblem, simulated null quantiles,
// and the sequential estimation procedure.
namespace facr {

struct VRConfig {
    int ell = 5;       // retained covariance eigenspace, >= d_max
    int d_max = 5;
    double level = 0.05;
    bool centered = true;
    int null_draws = 100000;
    int bm_steps = 1000;
    std::uint64_t null_seed = 20240901;
    std::optional<std::string> cache_dir;  // cache simulated null draws here
};

// Simulated null distribution for one d0: sorted draws plus summary quantiles.
struct VRNullTable {
    int d0 = 0;
    bool centered = false;
    int draws = 0;
    int steps = 0;
    std::uint64_t seed = 0;
    int redraws = 0;  // near-singular draws that were redrawn
    std::vector<double> sorted_values;

    double quantile(double p) const;
    double p_value(double stat) const;
};

struct VRTestResult {
    int d0 = 0;
    double stat = 0.0;
    double p_value = 0.0;
};

struct VRReport {
    std::vector<VRTestResult> tests;  // ordered d0 = d_max..1
    int d_hat = 0;
    double level = 0.05;
    bool rank_warning = false;  // numerical rank of C0 below ell
};

// Partial-sum process covariance: (1/T) sum_t S_t (x) S_t with S_t the
// cumulative sum of the (optionally demeaned) series.
LinOp k0_hat(const FnSeries& series, bool centered);

// T^2 * sum of the d0 smallest eigenvalues of the pencil
// gamma * (P_l K0 P_l) phi = (P_l C0 P_l) phi in the leading C0 eigenspace.
double vr_stat(const FnSeries& series, int d0, const VRConfig& cfg,
               bool* rank_warning = nullptr);

// Monte-Carlo null law of tr((int VV')^{-1} (int WW')) with W a d0-dim
// standard (or demeaned, when centered) Brownian motion and V its integral.
// Results are cached on disk when cfg.cache_dir is set.
VRNullTable null_table(int d0, const VRConfig& cfg);

VRNullTable simulate_null(int d0, bool centered, int draws, int steps,
                          std::uint64_t seed);

void save_null_table(const std::string& path, const VRNullTable& table);
std::optional<VRNullTable> load_null_table(const std::string& path);

// Sequential testing d0 = d_max..1; d_hat is the first non-rejected d0, or 0.
VRReport sequential_dn(const FnSeries& series, const VRConfig& cfg);

}  // namespace facr

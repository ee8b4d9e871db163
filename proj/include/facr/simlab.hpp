#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "facr/grid.hpp"

// Synthetic cointegrated functional data generator and the Monte Carlo
// harness that tabulates estimator accuracy and interval coverage.
namespace facr {

enum class Design { exponential, sparse };

std::string design_name(Design d);
Design parse_design(const std::string& name);

struct DgpConfig {
    int d_N = 2;
    int m = 7;
    int M = 20;
    Design design = Design::exponential;
    int T = 200;
    double error_scale_pct = 0.0;
    int J_trunc = 40;       // basis truncation for synthesis
    int grid_n = 201;
    int burn_in = 50;       // stationary coefficient processes
    int calib_reps = 800;
    double noise_scale = 1.0;  // multiplies sigma_eps and sigma_u (diagnostics)
    std::uint64_t seed = 1;
};

struct DgpDraw {
    FnSeries x_tilde;
    FnSeries y_tilde;
    FnSeries x_latent;      // error-free x_t
    LinOp f_true;
    LinOp P_N_true;
    Fn mu;                  // model intercept mu_y - f(mu_x)
    Eigen::MatrixXd basis;  // n x J synthesis basis (columns orthonormal)
    Eigen::VectorXd gamma;  // slope coefficients on the basis
};

// Innovation scale sequence for coefficient index j (1-based).
double sigma_eps(const DgpConfig& cfg, int j);

// AR coefficients for one draw: Rademacher * U[-0.5,0.5] for the trend
// coordinates, U[0.5,0.9] up to index M, U[-0.9,0.9] beyond.
Eigen::VectorXd draw_ar_betas(const DgpConfig& cfg, std::mt19937_64& rng);

// Nuclear norm target for the measurement-error calibration: the average
// sample trace of Cov((Delta P_N x_t, P_S x_t)) over calib_reps series.
double calibration_target(const DgpConfig& cfg);

// (sigma_e, sigma_ey) so the error covariances' nuclear norms match
// pct% and (100-pct)% of the calibration target.
std::pair<double, double> calibrate_error_scale(const DgpConfig& cfg);

DgpDraw draw_dgp(const DgpConfig& cfg, std::mt19937_64& rng, double sigma_e,
                 double sigma_ey);

// zeta with coefficients 1 for j <= 9 and (j-8)^{-2} after, on the draw basis.
Fn simulation_zeta(const DgpDraw& draw);

// Hilbert-Schmidt distance between the fitted slope and the truth, summed
// over the synthesis basis.
double hs_error(const LinOp& f_fitted, const DgpDraw& draw);

enum class Metric { hs_error, coverage };

std::string metric_name(Metric m);
Metric parse_metric(const std::string& name);

struct TableConfig {
    int d_N = 2;
    std::vector<Design> designs = {Design::exponential, Design::sparse};
    std::vector<double> scales = {0.0, 50.0, 100.0};
    std::vector<int> Ts = {100, 200, 400, 800};
    std::vector<int> kappas = {0, 1};
    std::vector<Metric> metrics = {Metric::hs_error, Metric::coverage};
    int reps = 500;
    int m = 7;
    int M = 20;
    int J_trunc = 40;
    int grid_n = 201;
    int burn_in = 50;
    int calib_reps = 800;
    double threshold_a1 = 0.4;
    double threshold_a2_exp = 0.2;
    double level = 0.95;
    std::uint64_t master_seed = 1;
};

struct TableCell {
    std::string design;
    double scale_pct = 0.0;
    int T = 0;
    int kappa = 0;
    std::string metric;
    double value = 0.0;
    double mc_se = 0.0;
    int reps = 0;
    int failures = 0;
};

std::vector<TableCell> run_table(const TableConfig& cfg);

std::string table_to_csv(const std::vector<TableCell>& cells);

}  // namespace facr

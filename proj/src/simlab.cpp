#include "facr/simlab.hpp"

#include <cmath>
#include <sstream>

#include "facr/csv.hpp"
#include "facr/regress.hpp"
#include "facr/rng.hpp"

namespace facr {

std::string design_name(Design d) {
    return d == Design::exponential ? "exponential" : "sparse";
}

Design parse_design(const std::string& name) {
    if (name == "exponential") return Design::exponential;
    if (name == "sparse") return Design::sparse;
    throw std::invalid_argument("unknown design: " + name);
}

std::string metric_name(Metric m) {
    return m == Metric::hs_error ? "hs_error" : "coverage";
}

Metric parse_metric(const std::string& name) {
    if (name == "hs_error") return Metric::hs_error;
    if (name == "coverage") return Metric::coverage;
    throw std::invalid_argument("unknown metric: " + name);
}

double sigma_eps(const DgpConfig& cfg, int j) {
    const double rate = (cfg.design == Design::exponential) ? 0.8 : 0.1;
    if (j <= cfg.d_N + cfg.m) return 1.0;
    if (j <= cfg.d_N + cfg.M) return std::pow(rate, j - cfg.d_N - cfg.m);
    const double tail_base = std::pow(rate, cfg.M - cfg.m);
    const double k = j - cfg.d_N - cfg.M;
    return tail_base / (k * k);
}

Eigen::VectorXd draw_ar_betas(const DgpConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd beta(cfg.J_trunc);
    for (int j = 1; j <= cfg.J_trunc; ++j) {
        if (j <= cfg.d_N) {
            const double u = unif(rng) - 0.5;                  // U[-0.5, 0.5]
            const double s = (unif(rng) < 0.5) ? -1.0 : 1.0;   // Rademacher
            beta(j - 1) = s * u;
        } else if (j <= cfg.M) {
            beta(j - 1) = 0.5 + 0.4 * unif(rng);               // U[0.5, 0.9]
        } else {
            beta(j - 1) = -0.9 + 1.8 * unif(rng);              // U[-0.9, 0.9]
        }
    }
    return beta;
}

namespace {

double slope_decay(const DgpConfig& cfg, int j) {
    if (j <= cfg.d_N + cfg.m) return 1.0;
    return std::pow(0.8, j - cfg.d_N - cfg.m);
}

// Latent coefficient paths <x_t^0, v_j>, T x J. Trend coordinates are random
// walks with AR(1) differences started at zero; stationary coordinates are
// AR(1) with a burn-in.
Eigen::MatrixXd draw_x_coefs(const DgpConfig& cfg, const Eigen::VectorXd& betas,
                             std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd c(cfg.T, cfg.J_trunc);
    for (int j = 1; j <= cfg.J_trunc; ++j) {
        const double sig = cfg.noise_scale * sigma_eps(cfg, j);
        const double beta = betas(j - 1);
        if (j <= cfg.d_N) {
            double diff = 0.0, level = 0.0;
            for (int t = 0; t < cfg.T; ++t) {
                diff = beta * diff + sig * normal(rng);
                level += diff;
                c(t, j - 1) = level;
            }
        } else {
            double level = 0.0;
            for (int t = -cfg.burn_in; t < cfg.T; ++t) {
                level = beta * level + sig * normal(rng);
                if (t >= 0) c(t, j - 1) = level;
            }
        }
    }
    return c;
}

}  // namespace

double calibration_target(const DgpConfig& cfg) {
    if (cfg.calib_reps < 50)
        throw std::invalid_argument("calibration_target: calib_reps must be >= 50");
    double acc = 0.0;
    for (int r = 0; r < cfg.calib_reps; ++r) {
        auto rng = substream(cfg.seed ^ 0xCA11B7A6E7ULL, static_cast<std::uint64_t>(r));
        Eigen::VectorXd betas = draw_ar_betas(cfg, rng);
        Eigen::MatrixXd c = draw_x_coefs(cfg, betas, rng);
        // (Delta P_N x_t, P_S x_t): trend coordinates differenced (x_0 = 0).
        Eigen::MatrixXd e = c;
        for (int j = 0; j < cfg.d_N; ++j)
            for (int t = cfg.T - 1; t >= 1; --t) e(t, j) -= e(t - 1, j);
        Eigen::RowVectorXd mean = e.colwise().mean();
        double trace = 0.0;
        for (int j = 0; j < cfg.J_trunc; ++j)
            trace += (e.col(j).array() - mean(j)).square().sum() / cfg.T;
        acc += trace;
    }
    return acc / cfg.calib_reps;
}

std::pair<double, double> calibrate_error_scale(const DgpConfig& cfg) {
    if (cfg.error_scale_pct < 0.0)
        throw std::invalid_argument("calibrate_error_scale: negative error scale");
    const double target = calibration_target(cfg);
    const double denom = cfg.d_N + 1;
    const double frac = cfg.error_scale_pct / 100.0;
    const double sigma_e = std::sqrt(frac * target / denom);
    const double rem = std::max(0.0, 1.0 - frac);
    const double sigma_ey = std::sqrt(rem * target / denom);
    return {sigma_e, sigma_ey};
}

DgpDraw draw_dgp(const DgpConfig& cfg, std::mt19937_64& rng, double sigma_e,
                 double sigma_ey) {
    if (cfg.J_trunc < cfg.M + 5)
        throw std::invalid_argument("draw_dgp: J_trunc must be at least M + 5");
    const int J = cfg.J_trunc;
    const int T = cfg.T;
    Grid grid = Grid::uniform(0.0, 1.0, cfg.grid_n);
    std::vector<Fn> fb = fourier_basis(grid, J, false);
    Eigen::MatrixXd B(cfg.grid_n, J);
    for (int j = 0; j < J; ++j) B.col(j) = fb[j].values;

    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Eigen::VectorXd betas = draw_ar_betas(cfg, rng);
    Eigen::MatrixXd cx = draw_x_coefs(cfg, betas, rng);

    Eigen::VectorXd gamma(J);
    for (int j = 1; j <= J; ++j)
        gamma(j - 1) = slope_decay(cfg, j) * (2.0 * unif(rng) - 1.0);

    // y^0 coefficients: gamma_j <x^0, v_j> + <u_t, w_j>.
    Eigen::MatrixXd cy(T, J);
    for (int j = 0; j < J; ++j) {
        const double su = cfg.noise_scale * sigma_eps(cfg, j + 1);
        for (int t = 0; t < T; ++t)
            cy(t, j) = gamma(j) * cx(t, j) + su * normal(rng);
    }

    Eigen::VectorXd mu_x = Eigen::VectorXd::Zero(J);
    Eigen::VectorXd mu_y = Eigen::VectorXd::Zero(J);
    for (int j = 0; j < 10; ++j) mu_x(j) = normal(rng);
    for (int j = 0; j < 10; ++j) mu_y(j) = normal(rng);

    Eigen::MatrixXd x_obs = cx;
    Eigen::MatrixXd y_obs = cy;
    x_obs.rowwise() += mu_x.transpose();
    y_obs.rowwise() += mu_y.transpose();

    Eigen::MatrixXd x_latent_coef = x_obs;
    const int err_dims = cfg.d_N + 1;
    if (sigma_e > 0.0)
        for (int t = 0; t < T; ++t)
            for (int j = 0; j < err_dims; ++j) x_obs(t, j) += sigma_e * normal(rng);
    if (sigma_ey > 0.0)
        for (int t = 0; t < T; ++t)
            for (int j = 0; j < err_dims; ++j) y_obs(t, j) += sigma_ey * normal(rng);

    DgpDraw draw;
    draw.basis = B;
    draw.gamma = gamma;
    draw.x_tilde = FnSeries(grid, x_obs * B.transpose());
    draw.y_tilde = FnSeries(grid, y_obs * B.transpose());
    draw.x_latent = FnSeries(grid, x_latent_coef * B.transpose());
    draw.f_true = LinOp(grid, grid, B * gamma.asDiagonal() * B.transpose());
    Eigen::MatrixXd bn = B.leftCols(cfg.d_N);
    draw.P_N_true = LinOp(grid, grid, bn * bn.transpose());
    Eigen::VectorXd mu_coef = mu_y - gamma.cwiseProduct(mu_x);
    draw.mu = Fn(grid, B * mu_coef);
    return draw;
}

Fn simulation_zeta(const DgpDraw& draw) {
    const int J = static_cast<int>(draw.gamma.size());
    Eigen::VectorXd c(J);
    for (int j = 1; j <= J; ++j)
        c(j - 1) = (j <= 9) ? 1.0 : 1.0 / ((j - 8.0) * (j - 8.0));
    return Fn(draw.x_tilde.grid, draw.basis * c);
}

double hs_error(const LinOp& f_fitted, const DgpDraw& draw) {
    const Grid& g = draw.x_tilde.grid;
    // Columns of A are f_fitted applied to the basis functions.
    Eigen::MatrixXd A = f_fitted.kernel * g.weights.asDiagonal() * draw.basis;
    Eigen::MatrixXd diff = A - draw.basis * draw.gamma.asDiagonal();
    double total = 0.0;
    for (int j = 0; j < diff.cols(); ++j)
        total += (g.weights.array() * diff.col(j).array().square()).sum();
    return std::sqrt(total);
}

std::vector<TableCell> run_table(const TableConfig& cfg) {
    if (cfg.reps < 50) throw std::invalid_argument("run_table: reps must be >= 50");
    std::vector<TableCell> out;
    std::uint64_t cell_index = 0;
    for (Design design : cfg.designs) {
        for (double scale : cfg.scales) {
            for (int T : cfg.Ts) {
                DgpConfig dgp;
                dgp.d_N = cfg.d_N;
                dgp.m = cfg.m;
                dgp.M = cfg.M;
                dgp.design = design;
                dgp.T = T;
                dgp.error_scale_pct = scale;
                dgp.J_trunc = cfg.J_trunc;
                dgp.grid_n = cfg.grid_n;
                dgp.burn_in = cfg.burn_in;
                dgp.calib_reps = cfg.calib_reps;
                dgp.seed = cfg.master_seed;
                auto [sigma_e, sigma_ey] = calibrate_error_scale(dgp);

                for (int kappa : cfg.kappas) {
                    ++cell_index;
                    std::vector<std::vector<double>> samples(cfg.metrics.size());
                    int failures = 0;
                    for (int r = 0; r < cfg.reps; ++r) {
                        auto rng = substream(cfg.master_seed, cell_index,
                                             static_cast<std::uint64_t>(r));
                        try {
                            DgpDraw draw = draw_dgp(dgp, rng, sigma_e, sigma_ey);
                            FitConfig fc;
                            fc.kappa = kappa;
                            fc.d_N = cfg.d_N;
                            fc.threshold_a1 = cfg.threshold_a1;
                            fc.threshold_a2_exp = cfg.threshold_a2_exp;
                            fc.centered = true;
                            FitResult res = fit(draw.x_tilde, draw.y_tilde, fc);
                            for (size_t mi = 0; mi < cfg.metrics.size(); ++mi) {
                                if (cfg.metrics[mi] == Metric::hs_error) {
                                    samples[mi].push_back(hs_error(res.f_total, draw));
                                } else {
                                    Fn zeta = simulation_zeta(draw);
                                    Fn phi(draw.x_tilde.grid, draw.basis.col(0));
                                    const double truth =
                                        inner(op_apply(draw.f_true, zeta), phi);
                                    InferenceReport rep =
                                        ci_scalar(res, zeta, phi, cfg.level);
                                    samples[mi].push_back(
                                        (truth >= rep.ci_low && truth <= rep.ci_high)
                                            ? 1.0
                                            : 0.0);
                                }
                            }
                        } catch (const std::exception&) {
                            ++failures;
                        }
                    }
                    for (size_t mi = 0; mi < cfg.metrics.size(); ++mi) {
                        TableCell cell;
                        cell.design = design_name(design);
                        cell.scale_pct = scale;
                        cell.T = T;
                        cell.kappa = kappa;
                        cell.metric = metric_name(cfg.metrics[mi]);
                        cell.reps = static_cast<int>(samples[mi].size());
                        cell.failures = failures;
                        const auto& s = samples[mi];
                        if (!s.empty()) {
                            double mean = 0.0;
                            for (double v : s) mean += v;
                            mean /= s.size();
                            double var = 0.0;
                            for (double v : s) var += (v - mean) * (v - mean);
                            var = s.size() > 1 ? var / (s.size() - 1) : 0.0;
                            cell.value = mean;
                            cell.mc_se = std::sqrt(var / s.size());
                        }
                        out.push_back(std::move(cell));
                    }
                }
            }
        }
    }
    return out;
}

std::string table_to_csv(const std::vector<TableCell>& cells) {
    std::ostringstream out;
    out << "design,scale_pct,T,kappa,metric,value,mc_se,reps,failures\n";
    for (const auto& c : cells) {
        out << c.design << ',' << format_double(c.scale_pct) << ',' << c.T << ','
            << c.kappa << ',' << c.metric << ',' << format_double(c.value) << ','
            << format_double(c.mc_se) << ',' << c.reps << ',' << c.failures << '\n';
    }
    return out.str();
}

}  // namespace facr

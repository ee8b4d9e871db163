#include "facr/densities.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace facr {

namespace {

double sample_sd(const std::vector<double>& x) {
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / (x.size() - 1));
}

Fn renormalize(Fn f) {
    const double mass = (f.grid.weights.array() * f.values.array()).sum();
    if (!(mass > 0.0)) throw NumericError("density has nonpositive mass");
    f.values /= mass;
    return f;
}

}  // namespace

double empirical_quantile(std::vector<double> pool, double p) {
    std::sort(pool.begin(), pool.end());
    const int m = static_cast<int>(pool.size());
    if (m == 1) return pool[0];
    const double pos = p * (m - 1);
    const int lo = static_cast<int>(std::floor(pos));
    const int hi = std::min(lo + 1, m - 1);
    const double frac = pos - lo;
    return pool[lo] + frac * (pool[hi] - pool[lo]);
}

double silverman_bandwidth(const std::vector<double>& sample) {
    const int m = static_cast<int>(sample.size());
    if (m < 2) throw std::invalid_argument("silverman_bandwidth: need at least two points");
    const double sd = sample_sd(sample);
    std::vector<double> sorted(sample);
    std::sort(sorted.begin(), sorted.end());
    const double iqr = empirical_quantile(sorted, 0.75) - empirical_quantile(sorted, 0.25);
    double spread = sd;
    if (iqr > 0.0) spread = std::min(sd, iqr / 1.349);
    if (!(spread > 0.0))
        throw std::invalid_argument("silverman_bandwidth: degenerate sample");
    return 0.9 * spread * std::pow(static_cast<double>(m), -0.2);
}

Fn kde(const std::vector<double>& sample, const Grid& grid, double bandwidth) {
    if (!(bandwidth > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");
    const int m = static_cast<int>(sample.size());
    if (m < 1) throw std::invalid_argument("kde: empty sample");
    const double inv_h = 1.0 / bandwidth;
    const double scale = 1.0 / (m * bandwidth * std::sqrt(2.0 * M_PI));
    Eigen::VectorXd vals = Eigen::VectorXd::Zero(grid.n());
    for (int i = 0; i < grid.n(); ++i) {
        double acc = 0.0;
        for (double x : sample) {
            const double z = (grid.nodes(i) - x) * inv_h;
            acc += std::exp(-0.5 * z * z);
        }
        vals(i) = scale * acc;
    }
    return renormalize(Fn(grid, std::move(vals)));
}

std::pair<double, double> common_support(const SamplePanel& panel, double mass) {
    if (!(mass > 0.0 && mass < 1.0))
        throw std::invalid_argument("common_support: mass must be in (0,1)");
    std::vector<double> pool;
    for (const auto& s : panel.samples) pool.insert(pool.end(), s.begin(), s.end());
    if (pool.size() < 10)
        throw std::invalid_argument("common_support: pooled sample too small");
    std::sort(pool.begin(), pool.end());
    const double lo = empirical_quantile(pool, 0.5 * (1.0 - mass));
    const double hi = empirical_quantile(pool, 0.5 * (1.0 + mass));
    return {lo, hi};
}

Fn clr(const Fn& density, double floor_eps) {
    const double peak = density.values.maxCoeff();
    if (!(peak > 0.0)) throw NumericError("clr: density has no positive values");
    Fn g = density;
    if (floor_eps > 0.0) {
        const double floor = floor_eps * peak;
        g.values = g.values.cwiseMax(floor);
        g = renormalize(std::move(g));
    }
    Eigen::VectorXd logg = g.values.array().log();
    const double mean_log =
        (g.grid.weights.array() * logg.array()).sum() / g.grid.length();
    return Fn(g.grid, logg.array() - mean_log);
}

Fn inv_clr(const Fn& h) {
    const double peak = h.values.maxCoeff();
    Eigen::VectorXd e = (h.values.array() - peak).exp();
    return renormalize(Fn(h.grid, std::move(e)));
}

DensitySeries estimate_density_series(const SamplePanel& panel, int grid_n, double mass) {
    if (panel.periods() < 1)
        throw std::invalid_argument("estimate_density_series: empty panel");
    auto [a1, a2] = common_support(panel, mass);
    Grid grid = Grid::uniform(a1, a2, grid_n);
    DensitySeries out;
    out.grid = grid;
    out.values.resize(panel.periods(), grid_n);
    out.bandwidths.reserve(panel.periods());
    for (int t = 0; t < panel.periods(); ++t) {
        const double h = silverman_bandwidth(panel.samples[t]);
        out.bandwidths.push_back(h);
        out.values.row(t) = kde(panel.samples[t], grid, h).values.transpose();
    }
    return out;
}

FnSeries clr_series(const DensitySeries& densities, double floor_eps) {
    Eigen::MatrixXd vals(densities.values.rows(), densities.grid.n());
    for (Eigen::Index t = 0; t < densities.values.rows(); ++t) {
        Fn d(densities.grid, densities.values.row(t).transpose());
        vals.row(t) = clr(d, floor_eps).values.transpose();
    }
    return FnSeries(densities.grid, std::move(vals));
}

}  // namespace facr

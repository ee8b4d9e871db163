#pragma once

#include <utility>
#include <vector>

#include "facr/grid.hpp"

// Density front-end: kernel density estimates of per-period samples on a
// common support, and the centered log-ratio transform pair that maps
// densities into (and back from) the linear subspace orthogonal to constants.
namespace facr {

// Per-period raw scalar observations, variable length.
struct SamplePanel {
    std::vector<std::vector<double>> samples;

    int periods() const { return static_cast<int>(samples.size()); }
};

struct DensitySeries {
    Grid grid;
    Eigen::MatrixXd values;  // T x n, each row a unit-mass density
    std::vector<double> bandwidths;
};

// h = 0.9 * min(sd, IQR/1.349) * m^{-1/5}. Errors on degenerate samples.
double silverman_bandwidth(const std::vector<double>& sample);

// Gaussian KDE on the grid nodes, renormalized to unit mass under quadrature.
Fn kde(const std::vector<double>& sample, const Grid& grid, double bandwidth);

// Central `mass` empirical quantile interval of the pooled sample, with
// linear interpolation between order statistics.
std::pair<double, double> common_support(const SamplePanel& panel, double mass);

double empirical_quantile(std::vector<double> sorted_pool, double p);

// CLR transform: log g minus its average log. The density is floored at
// floor_eps * max(g) and renormalized first so zeros are harmless.
Fn clr(const Fn& density, double floor_eps = 1e-10);

// exp(h)/integral(exp(h)); shifts of h by a constant cancel.
Fn inv_clr(const Fn& h);

// Full front-end: common support, per-period Silverman KDE, unit mass rows.
DensitySeries estimate_density_series(const SamplePanel& panel, int grid_n,
                                      double mass = 0.99);

FnSeries clr_series(const DensitySeries& densities, double floor_eps = 1e-10);

}  // namespace facr

#include "facr/regress.hpp"

#include <cmath>

#include "facr/densities.hpp"
#include "facr/vrtest.hpp"

namespace facr {

double normal_quantile(double p) {
    // Wichura's algorithm AS 241 (PPND16), good to ~1e-15.
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

namespace {

// (1/T) sum_{t=kappa+1..T} a_{t-kappa} (x) b_t, mapping a-space to b-space.
LinOp lagged_cross(const FnSeries& a, const FnSeries& b, int kappa) {
    const int T = a.T();
    const int rows = T - kappa;
    Eigen::MatrixXd cur = b.values.bottomRows(rows);
    Eigen::MatrixXd lag = a.values.topRows(rows);
    return LinOp(a.grid, b.grid, (cur.transpose() * lag) / T);
}

LinOp self_cov(const FnSeries& z) {
    return LinOp(z.grid, z.grid, (z.values.transpose() * z.values) / z.T());
}

}  // namespace

FitResult fit(const FnSeries& x, const FnSeries& y, const FitConfig& cfg) {
    if (x.T() != y.T())
        throw std::invalid_argument("fit: x and y have different lengths");
    const int T = x.T();
    if (T <= cfg.kappa + cfg.d_N + 2)
        throw std::invalid_argument("fit: series too short for kappa and d_N");

    FnSeries zx = cfg.centered ? x.demeaned() : x;
    FnSeries zy = cfg.centered ? y.demeaned() : y;

    AcovSet acov = autocov(x, cfg.kappa, cfg.centered);
    FpcaSplit sp = split(acov, cfg.d_N);
    bool ks_zero = false;
    sp.K = select_K(acov, cfg.d_N, cfg.threshold_a1, cfg.threshold_a2_exp, T, &ks_zero);
    if (ks_zero)
        throw NumericError(
            "fit: K_S = 0, the stationary-part estimator is undefined; "
            "lower threshold_a1 or a2_exp to retain stationary eigenvalues");
    if (sp.K > numerical_rank(acov.eig_D))
        sp.K = numerical_rank(acov.eig_D);
    if (sp.K <= cfg.d_N)
        throw NumericError("fit: degenerate spectrum, no stationary eigenvalues above floor");

    FitResult out;
    out.config = cfg;
    out.T = T;
    out.split = sp;
    out.x_mean = x.mean();
    out.y_mean = y.mean();

    LinOp G = lagged_cross(zx, zy, cfg.kappa);
    LinOp dinv_N = restricted_inverse(acov, 1, cfg.d_N);
    out.f_N = op_compose(G, op_compose(acov.C, dinv_N));

    FnSeries fitted_N = op_apply(out.f_N, zx);
    FnSeries resid_N(zy.grid, zy.values - fitted_N.values);
    LinOp G2 = lagged_cross(zx, resid_N, cfg.kappa);
    out.dinv_S = restricted_inverse(acov, cfg.d_N + 1, sp.K);
    out.f_S = op_compose(G2, op_compose(acov.C, out.dinv_S));
    out.f_total = op_add(out.f_N, out.f_S);

    if (cfg.centered) {
        Fn f_at_mean = op_apply(out.f_total, out.x_mean);
        out.intercept = Fn(y.grid, out.y_mean.values - f_at_mean.values);
    } else {
        out.intercept = Fn::zero(y.grid);
    }

    FnSeries fitted = op_apply(out.f_total, x);
    Eigen::MatrixXd resid = y.values - fitted.values;
    resid.rowwise() -= out.intercept.values.transpose();
    out.residuals = FnSeries(y.grid, std::move(resid));
    out.C_u_hat = self_cov(out.residuals);

    FnSeries xs = op_apply(sp.P_S, zx);
    out.C0_S = self_cov(xs);
    return out;
}

double theta_hat(const FitResult& fit, const Fn& zeta) {
    if (fit.split.K_S() < 1) throw NumericError("theta_hat: K_S = 0");
    LinOp Cs = op_compose(fit.split.acov.C, fit.split.P_S);
    Fn a = op_apply(fit.dinv_S, zeta);
    Fn b = op_apply(Cs, a);
    Fn c = op_apply(fit.C0_S, b);
    return std::max(0.0, inner(b, c));
}

Fn partial_effect(const FitResult& fit, const Fn& zeta) {
    return op_apply(fit.f_total, zeta);
}

namespace {

InferenceReport interval_report(const FitResult& fit, const Fn& effect, double theta,
                                const Fn& phi, double level, double lo_u, double hi_u) {
    InferenceReport rep;
    rep.interval_lo = lo_u;
    rep.interval_hi = hi_u;
    rep.level = level;
    rep.theta_hat = theta;
    rep.point = inner(effect, phi);
    const double cphi = std::max(0.0, inner(op_apply(fit.C_u_hat, phi), phi));
    rep.variance = theta * cphi / fit.T;
    const double half = normal_quantile(0.5 * (1.0 + level)) * std::sqrt(rep.variance);
    rep.ci_low = rep.point - half;
    rep.ci_high = rep.point + half;
    return rep;
}

}  // namespace

InferenceReport ci_scalar(const FitResult& fit, const Fn& zeta, const Fn& phi,
                          double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("ci_scalar: level must be in (0,1)");
    Fn effect = partial_effect(fit, zeta);
    const double theta = theta_hat(fit, zeta);
    const Grid& g = fit.f_total.codomain;
    return interval_report(fit, effect, theta, phi, level, g.a1, g.a2);
}

std::vector<InferenceReport> local_band(const FitResult& fit, const Fn& zeta,
                                        const std::vector<double>& breakpoints,
                                        double level) {
    if (breakpoints.size() < 2)
        throw std::invalid_argument("local_band: need at least two breakpoints");
    const Grid& g = fit.f_total.codomain;
    for (size_t j = 1; j < breakpoints.size(); ++j)
        if (!(breakpoints[j] > breakpoints[j - 1]))
            throw std::invalid_argument("local_band: breakpoints must be increasing");
    if (breakpoints.front() < g.a1 - 1e-12 || breakpoints.back() > g.a2 + 1e-12)
        throw std::invalid_argument("local_band: breakpoints outside the grid");

    Fn effect = partial_effect(fit, zeta);
    const double theta = theta_hat(fit, zeta);
    std::vector<InferenceReport> out;
    out.reserve(breakpoints.size() - 1);
    for (size_t j = 0; j + 1 < breakpoints.size(); ++j) {
        const double lo = breakpoints[j];
        const double hi = breakpoints[j + 1];
        Eigen::VectorXd ind = Eigen::VectorXd::Zero(g.n());
        for (int i = 0; i < g.n(); ++i)
            if (g.nodes(i) >= lo - 1e-12 && g.nodes(i) <= hi + 1e-12)
                ind(i) = 1.0 / (hi - lo);
        out.push_back(interval_report(fit, effect, theta, Fn(g, ind), level, lo, hi));
    }
    return out;
}

std::vector<InferenceReport> pointwise_band(const FitResult& fit, const Fn& zeta,
                                            double level) {
    const Grid& g = fit.f_total.codomain;
    std::vector<double> breaks(g.nodes.data(), g.nodes.data() + g.n());
    return local_band(fit, zeta, breaks, level);
}

std::vector<ShockResponse> shock_response(const FitResult& fit, const Fn& y_ref,
                                          const Fn& zeta,
                                          const std::vector<double>& q_list) {
    Fn effect = partial_effect(fit, zeta);
    if (!y_ref.grid.same_as(effect.grid))
        throw GridMismatchError("shock_response: y_ref grid mismatch");
    std::vector<ShockResponse> out;
    out.reserve(q_list.size());
    for (double q : q_list) {
        ShockResponse r;
        r.q = q;
        Fn h(y_ref.grid, y_ref.values + q * effect.values);
        r.density = inv_clr(h);
        const Grid& g = r.density.grid;
        Eigen::ArrayXd wd = g.weights.array() * r.density.values.array();
        r.mean = (wd * g.nodes.array()).sum();
        r.variance = (wd * g.nodes.array().square()).sum() - r.mean * r.mean;
        out.push_back(std::move(r));
    }
    return out;
}

VRReport diagnostic_trend_check(const FitResult& fit, const FnSeries& x,
                                const FnSeries& y, const VRConfig& cfg) {
    FnSeries zx = fit.config.centered ? x.demeaned() : x;
    FnSeries zy = fit.config.centered ? y.demeaned() : y;
    FnSeries fitted_N = op_apply(fit.f_N, zx);
    FnSeries u_N(zy.grid, zy.values - fitted_N.values);
    VRConfig vcfg = cfg;
    vcfg.centered = fit.config.centered;
    return sequential_dn(u_N, vcfg);
}

}  // namespace facr

#include "facr/acov.hpp"

#include <cmath>
#include <sstream>

namespace facr {

AcovSet autocov(const FnSeries& series, int kappa, bool centered) {
    if (kappa < 0) throw std::invalid_argument("autocov: kappa must be nonnegative");
    const int T = series.T();
    if (T <= kappa) throw std::invalid_argument("autocov: T must exceed kappa");

    Eigen::MatrixXd z = series.values;
    if (centered) z.rowwise() -= series.values.colwise().mean();

    // kernel(i,j) = (1/T) sum_{t=kappa+1..T} z_t(i) z_{t-kappa}(j)
    const int rows = T - kappa;
    Eigen::MatrixXd cur = z.bottomRows(rows);
    Eigen::MatrixXd lag = z.topRows(rows);
    AcovSet out;
    out.kappa = kappa;
    out.centered = centered;
    out.T = T;
    out.C = LinOp(series.grid, series.grid, (cur.transpose() * lag) / T);
    out.D = op_compose(op_adjoint(out.C), out.C);
    out.E = op_compose(out.C, op_adjoint(out.C));
    out.eig_D = eig_self_adjoint(out.D);
    out.eig_E = eig_self_adjoint(out.E);
    return out;
}

namespace {

LinOp projection_from(const EigenSystem& es, const Grid& grid, int count) {
    Eigen::MatrixXd v = es.eigenfns.leftCols(count);
    return LinOp(grid, grid, v * v.transpose());
}

}  // namespace

FpcaSplit split(const AcovSet& acov, int d_N) {
    if (d_N < 1) throw std::invalid_argument("split: d_N must be positive");
    if (d_N > numerical_rank(acov.eig_D))
        throw std::invalid_argument("split: d_N exceeds the numerical rank of D");
    FpcaSplit out;
    out.d_N = d_N;
    out.acov = acov;
    const Grid& g = acov.C.domain;
    out.P_N = projection_from(acov.eig_D, g, d_N);
    out.P_S = op_sub(LinOp::identity(g), out.P_N);
    out.Q_N = projection_from(acov.eig_E, g, d_N);
    out.Q_S = op_sub(LinOp::identity(g), out.Q_N);
    return out;
}

Eigen::VectorXd stationary_eigenvalue_shares(const AcovSet& acov, int d_N) {
    const Eigen::VectorXd& lam = acov.eig_D.eigenvalues;
    const int n = static_cast<int>(lam.size());
    if (d_N >= n) throw std::invalid_argument("stationary_eigenvalue_shares: d_N too large");
    Eigen::VectorXd tail = lam.tail(n - d_N).cwiseMax(0.0);
    const double total = tail.sum();
    if (!(total > 0.0)) return Eigen::VectorXd::Zero(n - d_N);
    return tail / total;
}

int select_K(const AcovSet& acov, int d_N, double a1, double a2_exp, int T,
             bool* warned_K_S_zero) {
    if (!(a1 > 0.0) || !(a2_exp > 0.0 && a2_exp < 0.5))
        throw std::invalid_argument("select_K: need a1 > 0 and a2_exp in (0, 1/2)");
    const double threshold = a1 * std::pow(static_cast<double>(T), -a2_exp);
    Eigen::VectorXd shares = stationary_eigenvalue_shares(acov, d_N);
    int K_S = 0;
    for (Eigen::Index j = 0; j < shares.size(); ++j)
        if (shares(j) > threshold) ++K_S;
    if (warned_K_S_zero) *warned_K_S_zero = (K_S == 0);
    return d_N + K_S;
}

LinOp restricted_inverse(const AcovSet& acov, int lo, int hi) {
    const Eigen::VectorXd& lam = acov.eig_D.eigenvalues;
    const int n = static_cast<int>(lam.size());
    if (lo < 1 || hi < lo || hi > n)
        throw std::invalid_argument("restricted_inverse: bad index range");
    const double floor = kEigenvalueFloor * std::abs(lam(0));
    const Grid& g = acov.C.domain;
    Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(g.n(), g.n());
    for (int j = lo; j <= hi; ++j) {
        if (!(lam(j - 1) > floor)) {
            std::ostringstream msg;
            msg << "restricted_inverse: eigenvalue " << j
                << " is at or below the numerical floor";
            throw NumericError(msg.str());
        }
        const Eigen::VectorXd v = acov.eig_D.eigenfns.col(j - 1);
        kernel.noalias() += (v * v.transpose()) / lam(j - 1);
    }
    return LinOp(g, g, std::move(kernel));
}

}  // namespace facr

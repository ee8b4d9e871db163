#pragma once

#include "facr/grid.hpp"

// Lag-kappa autocovariance operators, their eigensystems, the
// nonstationary/stationary projection split, and the K selection rule.
namespace facr {

// C = lag-kappa sample autocovariance, D = C*C, E = CC*, with both
// eigensystems. The sum is truncated to the available terms t = kappa+1..T
// while keeping divisor T.
struct AcovSet {
    int kappa = 0;
    bool centered = false;
    int T = 0;
    LinOp C;
    LinOp D;
    LinOp E;
    EigenSystem eig_D;
    EigenSystem eig_E;
};

// Estimated split of the sample space: P_N/P_S from the D eigensystem,
// Q_N/Q_S from the E eigensystem. K is set later by select_K.
struct FpcaSplit {
    int d_N = 0;
    int K = -1;  // unset until select_K
    LinOp P_N;
    LinOp P_S;
    LinOp Q_N;
    LinOp Q_S;
    AcovSet acov;

    int K_S() const { return K - d_N; }
};

AcovSet autocov(const FnSeries& series, int kappa, bool centered);

FpcaSplit split(const AcovSet& acov, int d_N);

// K = d_N + #{j : scale-adjusted stationary eigenvalue > a1 * T^{-a2_exp}}.
// The adjusted eigenvalues are lambda_{j+d_N}(D) / sum_{i>d_N} lambda_i(D).
// warned_K_S_zero, when given, is set when no eigenvalue clears the threshold.
int select_K(const AcovSet& acov, int d_N, double a1, double a2_exp, int T,
             bool* warned_K_S_zero = nullptr);

// sum_{j=lo..hi} lambda_j^{-1} Pi_j(D), with 1-based eigenvalue indices.
// Errors when lambda_hi sits at or below the eigenvalue floor.
LinOp restricted_inverse(const AcovSet& acov, int lo, int hi);

// Scale-adjusted stationary eigenvalues (for diagnostics dumps).
Eigen::VectorXd stationary_eigenvalue_shares(const AcovSet& acov, int d_N);

}  // namespace facr

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

// Function-space numerics on a discretized interval: grids with quadrature
// weights, functions as node vectors, linear operators as quadrature-weighted
// kernel matrices, and a self-adjoint eigensolver that is exact in the
// weighted inner product.
namespace facr {

// Thrown when an operation mixes functions/operators living on different grids.
class GridMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown on numerical failures (rank deficiency, non-self-adjoint input, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Uniform grid on [a1,a2] with trapezoid quadrature weights.
struct Grid {
    double a1 = 0.0;
    double a2 = 1.0;
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    static Grid uniform(double a1, double a2, int n);

    int n() const { return static_cast<int>(nodes.size()); }
    double length() const { return a2 - a1; }
    bool same_as(const Grid& other) const;
};

// A function sampled on a grid.
struct Fn {
    Grid grid;
    Eigen::VectorXd values;

    Fn() = default;
    Fn(Grid g, Eigen::VectorXd v);
    static Fn zero(const Grid& g);
    static Fn constant(const Grid& g, double c);
};

// A time-indexed collection of grid functions; row t is observation t.
struct FnSeries {
    Grid grid;
    Eigen::MatrixXd values;  // T x n

    FnSeries() = default;
    FnSeries(Grid g, Eigen::MatrixXd v);
    int T() const { return static_cast<int>(values.rows()); }
    Fn row(int t) const { return Fn(grid, values.row(t).transpose()); }
    Fn mean() const;
    FnSeries demeaned() const;
};

// Bounded linear operator between grid spaces, acting through quadrature:
// (Af)(s_i) = sum_j kernel(i,j) * w_in(j) * f(s_j).
struct LinOp {
    Grid domain;
    Grid codomain;
    Eigen::MatrixXd kernel;  // n_out x n_in

    LinOp() = default;
    LinOp(Grid dom, Grid codom, Eigen::MatrixXd k);
    static LinOp zero(const Grid& dom, const Grid& codom);
    static LinOp identity(const Grid& g);
    bool square() const { return domain.same_as(codomain); }
};

// Eigensystem of a self-adjoint operator: eigenvalues descending, eigenfns
// orthonormal under the grid inner product (columns of eigenfns).
struct EigenSystem {
    Grid grid;
    Eigen::VectorXd eigenvalues;   // descending
    Eigen::MatrixXd eigenfns;      // n x n, column j is eigenfunction j
    Fn eigenfn(int j) const { return Fn(grid, eigenfns.col(j)); }
};

// Relative floor below which eigenvalues count as zero for rank decisions.
inline constexpr double kEigenvalueFloor = 1e-12;

double inner(const Fn& f, const Fn& g);
double norm(const Fn& f);

// (f (x) g)(h) = <f,h> g. Domain is f's grid, codomain is g's grid.
LinOp tensor(const Fn& f, const Fn& g);

Fn op_apply(const LinOp& A, const Fn& f);
FnSeries op_apply(const LinOp& A, const FnSeries& xs);
// (A o B)(f) = A(B(f)).
LinOp op_compose(const LinOp& A, const LinOp& B);
LinOp op_adjoint(const LinOp& A);
LinOp op_add(const LinOp& A, const LinOp& B);
LinOp op_sub(const LinOp& A, const LinOp& B);
LinOp op_scale(double c, const LinOp& A);

// Spectral decomposition of a self-adjoint operator via symmetrization
// S = W^{1/2} K W^{1/2}; eigenvectors mapped back with W^{-1/2} stay
// orthonormal in the weighted inner product. Sign convention: the coordinate
// of largest absolute value is positive.
EigenSystem eig_self_adjoint(const LinOp& A, double sym_tol = 1e-8);

double hs_norm(const LinOp& A);
double op_norm(const LinOp& A);

// Number of eigenvalues above the relative floor.
int numerical_rank(const EigenSystem& es);

// First J orthonormal Fourier functions on [a1,a2]. Without the constant the
// order is sin(2*pi*k*u), cos(2*pi*k*u) pairs for k = 1,2,..., rescaled to
// [a1,a2] and unit norm; with the constant, 1/sqrt(a2-a1) comes first.
std::vector<Fn> fourier_basis(const Grid& grid, int J, bool include_constant = false);

}  // namespace facr

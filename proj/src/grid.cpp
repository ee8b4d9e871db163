#include "facr/grid.hpp"

#include <cmath>

namespace facr {

Grid Grid::uniform(double a1, double a2, int n) {
    if (!(a2 > a1)) throw std::invalid_argument("Grid: a2 must exceed a1");
    if (n < 2) throw std::invalid_argument("Grid: need at least two nodes");
    Grid g;
    g.a1 = a1;
    g.a2 = a2;
    g.nodes = Eigen::VectorXd::LinSpaced(n, a1, a2);
    const double h = (a2 - a1) / (n - 1);
    g.weights = Eigen::VectorXd::Constant(n, h);
    g.weights(0) = 0.5 * h;
    g.weights(n - 1) = 0.5 * h;
    return g;
}

bool Grid::same_as(const Grid& other) const {
    return n() == other.n() && a1 == other.a1 && a2 == other.a2;
}

Fn::Fn(Grid g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.n())
        throw std::invalid_argument("Fn: value length does not match grid");
}

Fn Fn::zero(const Grid& g) { return Fn(g, Eigen::VectorXd::Zero(g.n())); }

Fn Fn::constant(const Grid& g, double c) {
    return Fn(g, Eigen::VectorXd::Constant(g.n(), c));
}

FnSeries::FnSeries(Grid g, Eigen::MatrixXd v)
    : grid(std::move(g)), values(std::move(v)) {
    if (values.cols() != grid.n())
        throw std::invalid_argument("FnSeries: column count does not match grid");
    if (values.rows() < 1) throw std::invalid_argument("FnSeries: empty series");
}

Fn FnSeries::mean() const {
    return Fn(grid, values.colwise().mean().transpose());
}

FnSeries FnSeries::demeaned() const {
    Eigen::RowVectorXd m = values.colwise().mean();
    return FnSeries(grid, values.rowwise() - m);
}

LinOp::LinOp(Grid dom, Grid codom, Eigen::MatrixXd k)
    : domain(std::move(dom)), codomain(std::move(codom)), kernel(std::move(k)) {
    if (kernel.rows() != codomain.n() || kernel.cols() != domain.n())
        throw std::invalid_argument("LinOp: kernel dimensions inconsistent with grids");
}

LinOp LinOp::zero(const Grid& dom, const Grid& codom) {
    return LinOp(dom, codom, Eigen::MatrixXd::Zero(codom.n(), dom.n()));
}

LinOp LinOp::identity(const Grid& g) {
    // (If)(s_i) = sum_j kernel(i,j) w_j f_j = f_i requires kernel = W^{-1}.
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(g.n(), g.n());
    for (int i = 0; i < g.n(); ++i) k(i, i) = 1.0 / g.weights(i);
    return LinOp(g, g, std::move(k));
}

double inner(const Fn& f, const Fn& g) {
    if (!f.grid.same_as(g.grid)) throw GridMismatchError("inner: grid mismatch");
    return (f.grid.weights.array() * f.values.array() * g.values.array()).sum();
}

double norm(const Fn& f) { return std::sqrt(std::max(0.0, inner(f, f))); }

LinOp tensor(const Fn& f, const Fn& g) {
    return LinOp(f.grid, g.grid, g.values * f.values.transpose());
}

Fn op_apply(const LinOp& A, const Fn& f) {
    if (!A.domain.same_as(f.grid)) throw GridMismatchError("op_apply: grid mismatch");
    return Fn(A.codomain, A.kernel * (A.domain.weights.array() * f.values.array()).matrix());
}

FnSeries op_apply(const LinOp& A, const FnSeries& xs) {
    if (!A.domain.same_as(xs.grid)) throw GridMismatchError("op_apply: grid mismatch");
    Eigen::MatrixXd weighted = xs.values.array().rowwise() *
                               A.domain.weights.transpose().array();
    return FnSeries(A.codomain, weighted * A.kernel.transpose());
}

LinOp op_compose(const LinOp& A, const LinOp& B) {
    if (!B.codomain.same_as(A.domain))
        throw GridMismatchError("op_compose: incompatible grids");
    return LinOp(B.domain, A.codomain,
                 A.kernel * A.domain.weights.asDiagonal() * B.kernel);
}

LinOp op_adjoint(const LinOp& A) {
    // <Af,g>_out = f' W_in K' W_out g, so the adjoint kernel is K'.
    return LinOp(A.codomain, A.domain, A.kernel.transpose());
}

LinOp op_add(const LinOp& A, const LinOp& B) {
    if (!A.domain.same_as(B.domain) || !A.codomain.same_as(B.codomain))
        throw GridMismatchError("op_add: grid mismatch");
    return LinOp(A.domain, A.codomain, A.kernel + B.kernel);
}

LinOp op_sub(const LinOp& A, const LinOp& B) {
    if (!A.domain.same_as(B.domain) || !A.codomain.same_as(B.codomain))
        throw GridMismatchError("op_sub: grid mismatch");
    return LinOp(A.domain, A.codomain, A.kernel - B.kernel);
}

LinOp op_scale(double c, const LinOp& A) {
    return LinOp(A.domain, A.codomain, c * A.kernel);
}

namespace {

Eigen::MatrixXd symmetrized(const LinOp& A) {
    Eigen::VectorXd ws_out = A.codomain.weights.array().sqrt();
    Eigen::VectorXd ws_in = A.domain.weights.array().sqrt();
    return ws_out.asDiagonal() * A.kernel * ws_in.asDiagonal();
}

}  // namespace

EigenSystem eig_self_adjoint(const LinOp& A, double sym_tol) {
    if (!A.square()) throw std::invalid_argument("eig_self_adjoint: operator not square");
    Eigen::MatrixXd s = symmetrized(A);
    const double asym = (s - s.transpose()).norm();
    const double scale = std::max(1.0, s.norm());
    if (asym > sym_tol * scale)
        throw NumericError("eig_self_adjoint: operator not self-adjoint within tolerance");
    s = 0.5 * (s + s.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
    if (solver.info() != Eigen::Success)
        throw NumericError("eig_self_adjoint: eigendecomposition failed");

    const int n = A.domain.n();
    Eigen::VectorXd inv_ws = A.domain.weights.array().sqrt().inverse();
    EigenSystem es;
    es.grid = A.domain;
    es.eigenvalues.resize(n);
    es.eigenfns.resize(n, n);
    // Eigen returns ascending order; flip to descending.
    for (int j = 0; j < n; ++j) {
        const int src = n - 1 - j;
        es.eigenvalues(j) = solver.eigenvalues()(src);
        Eigen::VectorXd v = inv_ws.array() * solver.eigenvectors().col(src).array();
        int imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0.0) v = -v;
        es.eigenfns.col(j) = v;
    }
    return es;
}

double hs_norm(const LinOp& A) { return symmetrized(A).norm(); }

double op_norm(const LinOp& A) {
    return symmetrized(A).jacobiSvd().singularValues()(0);
}

int numerical_rank(const EigenSystem& es) {
    const double lead = std::abs(es.eigenvalues(0));
    if (lead == 0.0) return 0;
    int r = 0;
    for (int j = 0; j < es.eigenvalues.size(); ++j)
        if (std::abs(es.eigenvalues(j)) >= kEigenvalueFloor * lead) ++r;
    return r;
}

std::vector<Fn> fourier_basis(const Grid& grid, int J, bool include_constant) {
    if (J < 1) throw std::invalid_argument("fourier_basis: J must be positive");
    if (J > grid.n() / 4)
        throw std::invalid_argument("fourier_basis: J too large for grid resolution");
    const double len = grid.length();
    Eigen::ArrayXd u = (grid.nodes.array() - grid.a1) / len;  // rescaled to [0,1]
    std::vector<Fn> basis;
    basis.reserve(J);
    if (include_constant)
        basis.push_back(Fn::constant(grid, 1.0 / std::sqrt(len)));
    const double amp = std::sqrt(2.0 / len);
    for (int k = 1; static_cast<int>(basis.size()) < J; ++k) {
        Eigen::ArrayXd phase = 2.0 * M_PI * k * u;
        basis.push_back(Fn(grid, (amp * phase.sin()).matrix()));
        if (static_cast<int>(basis.size()) < J)
            basis.push_back(Fn(grid, (amp * phase.cos()).matrix()));
    }
    return basis;
}

}  // namespace facr

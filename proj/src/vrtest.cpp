#include "facr/vrtest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "facr/csv.hpp"
#include "facr/rng.hpp"

namespace facr {

double VRNullTable::quantile(double p) const {
    const int m = static_cast<int>(sorted_values.size());
    if (m == 0) throw NumericError("VRNullTable: empty table");
    const double pos = p * (m - 1);
    const int lo = static_cast<int>(std::floor(pos));
    const int hi = std::min(lo + 1, m - 1);
    const double frac = pos - lo;
    return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

double VRNullTable::p_value(double stat) const {
    auto it = std::lower_bound(sorted_values.begin(), sorted_values.end(), stat);
    const auto above = sorted_values.end() - it;
    return static_cast<double>(above) / sorted_values.size();
}

LinOp k0_hat(const FnSeries& series, bool centered) {
    if (series.T() < 1) throw std::invalid_argument("k0_hat: empty series");
    Eigen::MatrixXd z = series.values;
    if (centered) z.rowwise() -= series.values.colwise().mean();
    // Running partial sums S_t, accumulated in place.
    for (Eigen::Index t = 1; t < z.rows(); ++t) z.row(t) += z.row(t - 1);
    return LinOp(series.grid, series.grid, (z.transpose() * z) / series.T());
}

namespace {

LinOp cov0(const FnSeries& series, bool centered) {
    Eigen::MatrixXd z = series.values;
    if (centered) z.rowwise() -= series.values.colwise().mean();
    return LinOp(series.grid, series.grid, (z.transpose() * z) / series.T());
}

// Eigenvalues of the pencil gamma * (P_l K0 P_l) phi = (P_l C0 P_l) phi,
// ascending, in the ell-dimensional leading eigenspace of C0.
Eigen::VectorXd pencil_gammas(const FnSeries& series, int ell, bool centered,
                              bool* rank_warning) {
    LinOp C0 = cov0(series, centered);
    EigenSystem es = eig_self_adjoint(C0);
    if (rank_warning) *rank_warning = (numerical_rank(es) < ell);
    if (ell > es.eigenvalues.size())
        throw std::invalid_argument("vr_stat: ell exceeds grid dimension");
    LinOp K0 = k0_hat(series, centered);

    const Grid& g = series.grid;
    Eigen::MatrixXd V = es.eigenfns.leftCols(ell);
    Eigen::MatrixXd WV = g.weights.asDiagonal() * V;
    Eigen::MatrixXd A = WV.transpose() * K0.kernel * WV;  // <v_i, K0 v_j>
    Eigen::MatrixXd B = WV.transpose() * C0.kernel * WV;  // <v_i, C0 v_j>
    A = 0.5 * (A + A.transpose());
    B = 0.5 * (B + B.transpose());

    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw NumericError("vr_stat: projected partial-sum covariance is singular");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(B, A);
    if (solver.info() != Eigen::Success)
        throw NumericError("vr_stat: generalized eigenproblem failed");
    return solver.eigenvalues();  // ascending
}

}  // namespace

double vr_stat(const FnSeries& series, int d0, const VRConfig& cfg, bool* rank_warning) {
    if (d0 < 1 || d0 > cfg.ell)
        throw std::invalid_argument("vr_stat: need 1 <= d0 <= ell");
    Eigen::VectorXd gammas = pencil_gammas(series, cfg.ell, cfg.centered, rank_warning);
    const double T = series.T();
    return T * T * gammas.head(d0).sum();
}

VRNullTable simulate_null(int d0, bool centered, int draws, int steps,
                          std::uint64_t seed) {
    if (draws < 1000) throw std::invalid_argument("simulate_null: draws must be >= 1000");
    if (steps < 100) throw std::invalid_argument("simulate_null: steps must be >= 100");
    VRNullTable table;
    table.d0 = d0;
    table.centered = centered;
    table.draws = draws;
    table.steps = steps;
    table.seed = seed;
    table.sorted_values.reserve(draws);

    const double dt = 1.0 / steps;
    const double sdt = std::sqrt(dt);
    Eigen::MatrixXd W(d0, steps), V(d0, steps);
    for (int i = 0; i < draws; ++i) {
        for (std::uint64_t lane = 0;; ++lane) {
            auto rng = substream(seed, static_cast<std::uint64_t>(i),
                                 (static_cast<std::uint64_t>(d0) << 32) |
                                     (centered ? 1u : 0u) | (lane << 1));
            std::normal_distribution<double> normal(0.0, 1.0);
            Eigen::VectorXd w = Eigen::VectorXd::Zero(d0);
            for (int t = 0; t < steps; ++t) {
                for (int k = 0; k < d0; ++k) w(k) += sdt * normal(rng);
                W.col(t) = w;
            }
            if (centered) {
                Eigen::VectorXd mean = W.rowwise().mean();
                W.colwise() -= mean;
            }
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(d0);
            for (int t = 0; t < steps; ++t) {
                acc += dt * W.col(t);
                V.col(t) = acc;
            }
            Eigen::MatrixXd ivv = (V * V.transpose()) * dt;
            Eigen::MatrixXd iww = (W * W.transpose()) * dt;
            Eigen::LLT<Eigen::MatrixXd> llt(ivv);
            if (llt.info() != Eigen::Success) {
                ++table.redraws;
                continue;
            }
            table.sorted_values.push_back(llt.solve(iww).trace());
            break;
        }
    }
    std::sort(table.sorted_values.begin(), table.sorted_values.end());
    return table;
}

void save_null_table(const std::string& path, const VRNullTable& table) {
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << "# facr-vrnull v1,d0=" << table.d0 << ",centered=" << (table.centered ? 1 : 0)
        << ",draws=" << table.draws << ",steps=" << table.steps << ",seed=" << table.seed
        << ",redraws=" << table.redraws << '\n';
    for (double v : table.sorted_values) out << format_double(v) << '\n';
}

std::optional<VRNullTable> load_null_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string header;
    if (!std::getline(in, header) || header.rfind("# facr-vrnull v1,", 0) != 0)
        return std::nullopt;
    VRNullTable table;
    {
        std::stringstream ss(header.substr(std::string("# facr-vrnull v1,").size()));
        std::string kv;
        while (std::getline(ss, kv, ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) return std::nullopt;
            const std::string key = kv.substr(0, eq);
            const long long val = std::stoll(kv.substr(eq + 1));
            if (key == "d0") table.d0 = static_cast<int>(val);
            else if (key == "centered") table.centered = val != 0;
            else if (key == "draws") table.draws = static_cast<int>(val);
            else if (key == "steps") table.steps = static_cast<int>(val);
            else if (key == "seed") table.seed = static_cast<std::uint64_t>(val);
            else if (key == "redraws") table.redraws = static_cast<int>(val);
        }
    }
    table.sorted_values.reserve(table.draws);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        table.sorted_values.push_back(std::stod(line));
    }
    if (static_cast<int>(table.sorted_values.size()) != table.draws) return std::nullopt;
    return table;
}

VRNullTable null_table(int d0, const VRConfig& cfg) {
    std::string path;
    if (cfg.cache_dir) {
        std::filesystem::create_directories(*cfg.cache_dir);
        std::ostringstream name;
        name << "vrnull_v1_d" << d0 << (cfg.centered ? "_c_" : "_u_") << cfg.null_draws
             << "_" << cfg.bm_steps << "_" << cfg.null_seed << ".csv";
        path = (std::filesystem::path(*cfg.cache_dir) / name.str()).string();
        if (auto cached = load_null_table(path)) return *cached;
    }
    VRNullTable table =
        simulate_null(d0, cfg.centered, cfg.null_draws, cfg.bm_steps, cfg.null_seed);
    if (!path.empty()) save_null_table(path, table);
    return table;
}

VRReport sequential_dn(const FnSeries& series, const VRConfig& cfg) {
    if (cfg.d_max < 1 || cfg.ell < cfg.d_max)
        throw std::invalid_argument("sequential_dn: need 1 <= d_max <= ell");
    if (!(cfg.level > 0.0 && cfg.level < 1.0))
        throw std::invalid_argument("sequential_dn: level must be in (0,1)");
    VRReport report;
    report.level = cfg.level;
    Eigen::VectorXd gammas =
        pencil_gammas(series, cfg.ell, cfg.centered, &report.rank_warning);
    const double T = series.T();
    report.d_hat = 0;
    for (int d0 = cfg.d_max; d0 >= 1; --d0) {
        VRTestResult res;
        res.d0 = d0;
        res.stat = T * T * gammas.head(d0).sum();
        res.p_value = null_table(d0, cfg).p_value(res.stat);
        report.tests.push_back(res);
        if (report.d_hat == 0 && res.p_value > cfg.level) report.d_hat = d0;
    }
    return report;
}

}  // namespace facr

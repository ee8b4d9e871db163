#include "facr/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace facr {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string format_csv_row(const Eigen::VectorXd& row) {
    std::string out;
    for (Eigen::Index i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_double(row(i));
    }
    return out;
}

namespace {

double parse_cell(const std::string& cell, const std::string& path, int row, int col) {
    const char* b = cell.data();
    const char* e = b + cell.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
    double v = 0.0;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) {
        std::ostringstream msg;
        msg << path << ": malformed number at row " << row + 1 << ", column "
            << col + 1 << " ('" << cell << "')";
        throw DataError(msg.str());
    }
    return v;
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open file");
    std::vector<std::vector<double>> rows;
    std::string line;
    int r = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            ++r;
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        int c = 0;
        while (std::getline(ss, cell, ',')) {
            row.push_back(parse_cell(cell, path, r, c));
            ++c;
        }
        rows.push_back(std::move(row));
        ++r;
    }
    if (rows.empty()) throw DataError(path + ": no data rows");
    return rows;
}

Grid grid_from_nodes(const std::vector<double>& nodes, const std::string& path) {
    const int n = static_cast<int>(nodes.size());
    if (n < 2) throw DataError(path + ": grid row needs at least two nodes");
    for (int i = 1; i < n; ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw DataError(path + ": grid nodes not strictly increasing");
    Grid g = Grid::uniform(nodes.front(), nodes.back(), n);
    for (int i = 0; i < n; ++i)
        if (std::abs(nodes[i] - g.nodes(i)) > 1e-9 * g.length())
            throw DataError(path + ": grid nodes are not uniformly spaced");
    return g;
}

}  // namespace

void write_fn_series_csv(const std::string& path, const FnSeries& series) {
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << format_csv_row(series.grid.nodes) << '\n';
    for (int t = 0; t < series.T(); ++t)
        out << format_csv_row(series.values.row(t).transpose()) << '\n';
}

FnSeries read_fn_series_csv(const std::string& path) {
    auto rows = read_rows(path);
    if (rows.size() < 2) throw DataError(path + ": need a grid row plus observations");
    Grid g = grid_from_nodes(rows[0], path);
    const int n = g.n();
    const int T = static_cast<int>(rows.size()) - 1;
    Eigen::MatrixXd vals(T, n);
    for (int t = 0; t < T; ++t) {
        if (static_cast<int>(rows[t + 1].size()) != n) {
            std::ostringstream msg;
            msg << path << ": row " << t + 2 << " has " << rows[t + 1].size()
                << " values, expected " << n;
            throw DataError(msg.str());
        }
        for (int i = 0; i < n; ++i) vals(t, i) = rows[t + 1][i];
    }
    return FnSeries(g, std::move(vals));
}

void write_fn_csv(const std::string& path, const Fn& f) {
    write_fn_series_csv(path, FnSeries(f.grid, f.values.transpose()));
}

Fn read_fn_csv(const std::string& path) {
    FnSeries s = read_fn_series_csv(path);
    if (s.T() != 1) throw DataError(path + ": expected a single observation row");
    return s.row(0);
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        out << format_csv_row(m.row(i).transpose()) << '\n';
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
    auto rows = read_rows(path);
    const int n = static_cast<int>(rows[0].size());
    Eigen::MatrixXd m(rows.size(), n);
    for (size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw DataError(path + ": ragged matrix rows");
        for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<double>> read_sample_panel_csv(const std::string& path) {
    auto rows = read_rows(path);
    std::vector<std::vector<double>> panel;
    panel.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        std::vector<double> clean;
        for (double v : rows[i])
            if (!std::isnan(v)) clean.push_back(v);
        if (clean.empty()) {
            std::ostringstream msg;
            msg << path << ": period row " << i + 1 << " has no usable observations";
            throw DataError(msg.str());
        }
        panel.push_back(std::move(clean));
    }
    return panel;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace facr

#pragma once

#include <string>
#include <vector>

#include "facr/grid.hpp"

// CSV ingestion and emission. All numbers are written in shortest
// round-trip decimal form so outputs reload bit-exactly.
namespace facr {

// Thrown on malformed input files; messages carry row/column diagnostics.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

std::string format_csv_row(const Eigen::VectorXd& row);

// FnSeries CSV: first row = grid nodes, subsequent rows = observations.
void write_fn_series_csv(const std::string& path, const FnSeries& series);
FnSeries read_fn_series_csv(const std::string& path);

// Single function in the FnSeries format (one observation row).
void write_fn_csv(const std::string& path, const Fn& f);
Fn read_fn_csv(const std::string& path);

// Plain numeric matrix, one row per line.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

// Raw sample panel: one row per period, variable length, NaN cells ignored.
std::vector<std::vector<double>> read_sample_panel_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace facr

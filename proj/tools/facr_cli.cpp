#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "facr/csv.hpp"
#include "facr/densities.hpp"
#include "facr/regress.hpp"
#include "facr/simlab.hpp"
#include "facr/vrtest.hpp"

namespace fs = std::filesystem;
using namespace facr;

namespace {

// Flat key=value run configuration. Precedence: CLI flag > config file >
// default. Every value actually consulted is recorded so the echo written
// next to the outputs is fully resolved and reruns are byte-identical.
class RunCfg {
public:
    void load_file(const std::string& path) {
        std::istringstream in(read_text_file(path));
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                if (b == std::string::npos) return std::string();
                const auto e = s.find_last_not_of(" \t\r");
                return s.substr(b, e - b + 1);
            };
            if (trim(line).empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                            ": expected key=value");
            file_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }

    void set_override(const std::string& key, const std::string& value) {
        overrides_[key] = value;
    }

    std::string get(const std::string& key, const std::string& def) {
        std::string v = def;
        if (auto it = file_.find(key); it != file_.end()) v = it->second;
        if (auto it = overrides_.find(key); it != overrides_.end()) v = it->second;
        resolved_[key] = v;
        return v;
    }

    double get_double(const std::string& key, double def) {
        return std::stod(get(key, format_double(def)));
    }

    int get_int(const std::string& key, int def) {
        return std::stoi(get(key, std::to_string(def)));
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t def) {
        return std::stoull(get(key, std::to_string(def)));
    }

    bool get_bool(const std::string& key, bool def) {
        const std::string v = get(key, def ? "1" : "0");
        if (v == "1" || v == "true") return true;
        if (v == "0" || v == "false") return false;
        throw std::invalid_argument(key + ": expected a boolean (0/1/true/false)");
    }

    std::string echo(const std::string& command) const {
        std::ostringstream out;
        out << "command=" << command << '\n';
        for (const auto& [k, v] : resolved_) out << k << '=' << v << '\n';
        return out.str();
    }

private:
    std::map<std::string, std::string> file_;
    std::map<std::string, std::string> overrides_;
    std::map<std::string, std::string> resolved_;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::invalid_argument(key + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(key + ": empty list");
    return out;
}

std::vector<int> parse_ints(const std::string& key, const std::string& s) {
    std::vector<int> out;
    for (double v : parse_doubles(key, s)) out.push_back(static_cast<int>(v));
    return out;
}

std::string out_dir(RunCfg& cfg) {
    const std::string dir = cfg.get("out", "");
    if (dir.empty()) throw std::invalid_argument("out: output directory is required");
    fs::create_directories(dir);
    return dir;
}

std::string require_path(RunCfg& cfg, const std::string& key) {
    const std::string p = cfg.get(key, "");
    if (p.empty()) throw std::invalid_argument(key + ": input path is required");
    if (!fs::exists(p)) throw std::invalid_argument(key + ": no such file: " + p);
    return p;
}

void write_echo(const std::string& dir, const std::string& command, const RunCfg& cfg) {
    write_text_file((fs::path(dir) / "run_config.txt").string(), cfg.echo(command));
}

FitConfig fit_config(RunCfg& cfg) {
    FitConfig fc;
    fc.kappa = cfg.get_int("kappa", 1);
    fc.d_N = cfg.get_int("d_n", 2);
    fc.threshold_a1 = cfg.get_double("threshold_a1", 0.4);
    fc.threshold_a2_exp = cfg.get_double("threshold_a2_exp", 0.2);
    fc.centered = cfg.get_bool("centered", true);
    return fc;
}

VRConfig vr_config(RunCfg& cfg) {
    VRConfig vc;
    vc.ell = cfg.get_int("ell", 5);
    vc.d_max = cfg.get_int("d_max", 5);
    vc.level = cfg.get_double("level", 0.05);
    vc.centered = cfg.get_bool("centered", true);
    vc.null_draws = cfg.get_int("null_draws", 100000);
    vc.bm_steps = cfg.get_int("bm_steps", 1000);
    vc.null_seed = cfg.get_u64("null_seed", 20240901ULL);
    const char* env = std::getenv("FACR_CACHE_DIR");
    const std::string cache = cfg.get("cache_dir", env ? env : "");
    if (!cache.empty()) vc.cache_dir = cache;
    return vc;
}

int cmd_ingest_density(RunCfg& cfg) {
    const std::string input = require_path(cfg, "input");
    const std::string dir = out_dir(cfg);
    const int grid_n = cfg.get_int("grid_n", 201);
    const double mass = cfg.get_double("mass", 0.99);
    const double floor_eps = cfg.get_double("floor_eps", 1e-10);

    SamplePanel panel{read_sample_panel_csv(input)};
    DensitySeries dens = estimate_density_series(panel, grid_n, mass);
    FnSeries clrs = clr_series(dens, floor_eps);

    write_fn_series_csv((fs::path(dir) / "densities.csv").string(),
                        FnSeries(dens.grid, dens.values));
    write_fn_series_csv((fs::path(dir) / "clr.csv").string(), clrs);

    std::ostringstream meta;
    meta << "support_lo," << format_double(dens.grid.a1) << '\n';
    meta << "support_hi," << format_double(dens.grid.a2) << '\n';
    for (size_t t = 0; t < dens.bandwidths.size(); ++t)
        meta << "bandwidth_" << (t + 1) << ',' << format_double(dens.bandwidths[t]) << '\n';
    write_text_file((fs::path(dir) / "ingest_meta.csv").string(), meta.str());

    write_echo(dir, "ingest-density", cfg);
    std::cout << "periods=" << panel.periods() << " grid_n=" << grid_n << " support=["
              << format_double(dens.grid.a1) << "," << format_double(dens.grid.a2)
              << "]\n";
    return 0;
}

int cmd_estimate(RunCfg& cfg) {
    const std::string x_path = require_path(cfg, "x");
    const std::string y_path = require_path(cfg, "y");
    const std::string dir = out_dir(cfg);
    FitConfig fc = fit_config(cfg);
    const double level = cfg.get_double("level", 0.95);
    const std::string zeta_path = cfg.get("zeta", "");
    const std::string phi_path = cfg.get("phi", "");
    const std::string band_breaks = cfg.get("band_breaks", "");

    FnSeries x = read_fn_series_csv(x_path);
    FnSeries y = read_fn_series_csv(y_path);
    FitResult res = fit(x, y, fc);

    write_matrix_csv((fs::path(dir) / "f_total_kernel.csv").string(), res.f_total.kernel);
    write_matrix_csv((fs::path(dir) / "f_n_kernel.csv").string(), res.f_N.kernel);
    write_matrix_csv((fs::path(dir) / "f_s_kernel.csv").string(), res.f_S.kernel);
    write_fn_csv((fs::path(dir) / "intercept.csv").string(), res.intercept);
    write_fn_series_csv((fs::path(dir) / "residuals.csv").string(), res.residuals);
    write_matrix_csv((fs::path(dir) / "eig_d.csv").string(),
                     res.split.acov.eig_D.eigenvalues);

    std::ostringstream summary;
    summary << "T," << res.T << '\n'
            << "kappa," << fc.kappa << '\n'
            << "d_N," << fc.d_N << '\n'
            << "K," << res.split.K << '\n'
            << "K_S," << res.split.K_S() << '\n'
            << "centered," << (fc.centered ? 1 : 0) << '\n';
    write_text_file((fs::path(dir) / "fit_summary.csv").string(), summary.str());

    if (!zeta_path.empty()) {
        Fn zeta = read_fn_csv(zeta_path);
        std::ostringstream rep;
        rep << "interval_lo,interval_hi,point,theta_hat,variance,ci_low,ci_high,level\n";
        const auto row = [&rep](const InferenceReport& r) {
            rep << format_double(r.interval_lo) << ',' << format_double(r.interval_hi)
                << ',' << format_double(r.point) << ',' << format_double(r.theta_hat)
                << ',' << format_double(r.variance) << ',' << format_double(r.ci_low)
                << ',' << format_double(r.ci_high) << ',' << format_double(r.level)
                << '\n';
        };
        if (!phi_path.empty()) row(ci_scalar(res, zeta, read_fn_csv(phi_path), level));
        if (!band_breaks.empty())
            for (const auto& r :
                 local_band(res, zeta, parse_doubles("band_breaks", band_breaks), level))
                row(r);
        if (phi_path.empty() && band_breaks.empty())
            for (const auto& r : pointwise_band(res, zeta, level)) row(r);
        write_text_file((fs::path(dir) / "inference.csv").string(), rep.str());
    }

    write_echo(dir, "estimate", cfg);
    std::cout << "T=" << res.T << " kappa=" << fc.kappa << " d_N=" << fc.d_N
              << " K=" << res.split.K << " K_S=" << res.split.K_S() << "\n";
    return 0;
}

int cmd_vr_test(RunCfg& cfg) {
    const std::string x_path = require_path(cfg, "x");
    const std::string dir = out_dir(cfg);
    VRConfig vc = vr_config(cfg);

    FnSeries x = read_fn_series_csv(x_path);
    VRReport report = sequential_dn(x, vc);

    std::ostringstream out;
    out << "d0,stat,p_value\n";
    for (const auto& t : report.tests)
        out << t.d0 << ',' << format_double(t.stat) << ',' << format_double(t.p_value)
            << '\n';
    out << "d_hat," << report.d_hat << ",\n";
    write_text_file((fs::path(dir) / "vr_report.csv").string(), out.str());

    write_echo(dir, "vr-test", cfg);
    if (report.rank_warning)
        std::cerr << "warning: covariance rank below ell; leading eigenspace is "
                     "numerically degenerate\n";
    std::cout << "d_hat=" << report.d_hat << " level=" << format_double(report.level)
              << "\n";
    return 0;
}

int cmd_simulate(RunCfg& cfg) {
    const std::string dir = out_dir(cfg);
    TableConfig tc;
    tc.d_N = cfg.get_int("d_n", 2);
    tc.designs.clear();
    for (const auto& name : split_list(cfg.get("designs", "exponential,sparse")))
        tc.designs.push_back(parse_design(name));
    tc.scales = parse_doubles("scales", cfg.get("scales", "0,50,100"));
    tc.Ts = parse_ints("Ts", cfg.get("Ts", "100,200,400,800"));
    tc.kappas = parse_ints("kappas", cfg.get("kappas", "0,1"));
    tc.metrics.clear();
    for (const auto& name : split_list(cfg.get("metrics", "hs_error,coverage")))
        tc.metrics.push_back(parse_metric(name));
    tc.reps = cfg.get_int("reps", 500);
    tc.m = cfg.get_int("m", 7);
    tc.M = cfg.get_int("big_m", 20);
    tc.J_trunc = cfg.get_int("j_trunc", 40);
    tc.grid_n = cfg.get_int("grid_n", 201);
    tc.burn_in = cfg.get_int("burn_in", 50);
    tc.calib_reps = cfg.get_int("calib_reps", 800);
    tc.threshold_a1 = cfg.get_double("threshold_a1", 0.4);
    tc.threshold_a2_exp = cfg.get_double("threshold_a2_exp", 0.2);
    tc.level = cfg.get_double("level", 0.95);
    tc.master_seed = cfg.get_u64("master_seed", 1);

    std::vector<TableCell> cells = run_table(tc);
    write_text_file((fs::path(dir) / "table.csv").string(), table_to_csv(cells));

    write_echo(dir, "simulate", cfg);
    std::cout << "cells=" << cells.size() << " reps=" << tc.reps << "\n";
    return 0;
}

int cmd_shock(RunCfg& cfg) {
    const std::string x_path = require_path(cfg, "x");
    const std::string y_path = require_path(cfg, "y");
    const std::string yref_path = require_path(cfg, "yref");
    const std::string zeta_path = require_path(cfg, "zeta");
    const std::string dir = out_dir(cfg);
    FitConfig fc = fit_config(cfg);
    std::vector<double> qs = parse_doubles("q", cfg.get("q", "0,0.75,1.5"));

    FnSeries x = read_fn_series_csv(x_path);
    FnSeries y = read_fn_series_csv(y_path);
    Fn y_ref = read_fn_csv(yref_path);
    Fn zeta = read_fn_csv(zeta_path);
    FitResult res = fit(x, y, fc);
    std::vector<ShockResponse> shocks = shock_response(res, y_ref, zeta, qs);

    Eigen::MatrixXd dens(shocks.size(), y_ref.grid.n());
    std::ostringstream moments;
    moments << "q,mean,variance\n";
    for (size_t i = 0; i < shocks.size(); ++i) {
        dens.row(i) = shocks[i].density.values.transpose();
        moments << format_double(shocks[i].q) << ',' << format_double(shocks[i].mean)
                << ',' << format_double(shocks[i].variance) << '\n';
    }
    write_fn_series_csv((fs::path(dir) / "shock_densities.csv").string(),
                        FnSeries(y_ref.grid, dens));
    write_text_file((fs::path(dir) / "shock_moments.csv").string(), moments.str());

    write_echo(dir, "shock", cfg);
    std::cout << "q_count=" << shocks.size() << " K=" << res.split.K << "\n";
    return 0;
}

void add_common(CLI::App* cmd, RunCfg& cfg, const std::vector<std::string>& keys) {
    cmd->add_option_function<std::string>(
        "--config", [&cfg](const std::string& path) { cfg.load_file(path); },
        "flat key=value config file; flags override its entries");
    for (const auto& key : keys) {
        cmd->add_option_function<std::string>(
            "--" + key, [&cfg, key](const std::string& v) { cfg.set_override(key, v); },
            "config key '" + key + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"autocovariance-based functional regression toolkit"};
    app.require_subcommand(1);

    RunCfg cfg;
    int rc = 0;
    const auto wire = [&](CLI::App* cmd, const std::vector<std::string>& keys,
                          int (*fn)(RunCfg&)) {
        add_common(cmd, cfg, keys);
        cmd->callback([&cfg, &rc, fn]() { rc = fn(cfg); });
    };

    wire(app.add_subcommand("ingest-density",
                            "estimate per-period densities and their CLR transforms"),
         {"input", "out", "grid_n", "mass", "floor_eps"}, cmd_ingest_density);
    wire(app.add_subcommand("estimate", "fit the two-step slope estimator"),
         {"x", "y", "out", "kappa", "d_n", "threshold_a1", "threshold_a2_exp",
          "centered", "level", "zeta", "phi", "band_breaks"},
         cmd_estimate);
    wire(app.add_subcommand("vr-test",
                            "variance-ratio test for the nonstationarity dimension"),
         {"x", "out", "ell", "d_max", "level", "centered", "null_draws", "bm_steps",
          "null_seed", "cache_dir"},
         cmd_vr_test);
    wire(app.add_subcommand("simulate", "Monte Carlo performance tables"),
         {"out", "d_n", "designs", "scales", "Ts", "kappas", "metrics", "reps", "m",
          "big_m", "j_trunc", "grid_n", "burn_in", "calib_reps", "threshold_a1",
          "threshold_a2_exp", "level", "master_seed"},
         cmd_simulate);
    wire(app.add_subcommand("shock", "density responses to scaled shocks"),
         {"x", "y", "yref", "zeta", "q", "out", "kappa", "d_n", "threshold_a1",
          "threshold_a2_exp", "centered"},
         cmd_shock);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

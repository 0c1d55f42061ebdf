// Command-line front end for the creditdiv shared library. Talks to the
// C API only. Exit codes: 0 success, 2 usage/config/domain errors,
// 3 numerical or generation failures. stdout carries machine-readable
// results, stderr diagnostics.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "creditdiv.h"

namespace {

int exit_code_for(cd_status s) {
    switch (s) {
        case CD_OK: return 0;
        case CD_ERR_INVALID_ARGUMENT:
        case CD_ERR_DOMAIN:
        case CD_ERR_CONFIG: return 2;
        default: return 3;
    }
}

int report(cd_status s, const char* what) {
    if (s == CD_OK) return 0;
    std::fprintf(stderr, "error: %s: %s (%s)\n", what, cd_last_error(), cd_status_name(s));
    return exit_code_for(s);
}

struct ConfigOverride {
    std::string key;
    std::string value;
};

int cmd_run(const std::string& config_path, const std::string& profile,
            const std::vector<ConfigOverride>& overrides, const std::string& out_dir, int workers) {
    cd_config* cfg = cd_config_create();
    struct Guard {
        cd_config* c;
        ~Guard() { cd_config_destroy(c); }
    } guard{cfg};

    if (!config_path.empty())
        if (int rc = report(cd_config_load_file(cfg, config_path.c_str()), "loading config")) return rc;
    if (!profile.empty())
        if (int rc = report(cd_config_apply_profile(cfg, profile.c_str()), "applying profile")) return rc;
    for (const auto& ov : overrides)
        if (int rc = report(cd_config_set(cfg, ov.key.c_str(), ov.value.c_str()), "setting override"))
            return rc;

    if (int rc = report(cd_run_grid(cfg, out_dir.c_str(), workers), "running grid")) return rc;
    std::fprintf(stderr, "wrote table1.csv, table2.csv, figure1.csv, manifest.txt to %s\n",
                 out_dir.c_str());
    return 0;
}

int cmd_gen_matrix(int dim, const std::string& regime, std::uint64_t seed, const std::string& out_path,
                   std::optional<double> rho_min, std::optional<double> rho_max) {
    double lo = 0.0, hi = 0.0;
    if (int rc = report(cd_default_band(regime.c_str(), &lo, &hi), "resolving band")) return rc;
    if (rho_min) lo = *rho_min;
    if (rho_max) hi = *rho_max;

    cd_matrix* m = nullptr;
    if (int rc = report(cd_matrix_generate(dim, lo, hi, seed, &m), "generating matrix")) return rc;
    struct Guard {
        cd_matrix* m;
        ~Guard() { cd_matrix_destroy(m); }
    } guard{m};

    if (int rc = report(cd_matrix_write_csv(m, out_path.c_str()), "writing matrix")) return rc;
    double lambda = 0.0;
    if (int rc = report(cd_matrix_min_eigenvalue(m, &lambda), "computing min eigenvalue")) return rc;
    std::printf("min_eigenvalue = %.17g\n", lambda);
    std::printf("band = [%.17g,%.17g]\n", lo, hi);
    return 0;
}

int cmd_divergence(double p, double q) {
    double j = 0.0, fwd = 0.0, bwd = 0.0;
    if (int rc = report(cd_jeffreys_bernoulli(p, q, &j, &fwd, &bwd), "computing divergence")) return rc;
    std::printf("j = %.17g\n", j);
    std::printf("kl_forward = %.17g\n", fwd);
    std::printf("kl_backward = %.17g\n", bwd);
    return 0;
}

// ------------------------------------------------------------------
// plot: figure1.csv -> static SVG, one polyline per (n, regime).

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points; // (leverage, mean_J)
};

bool parse_figure_csv(std::istream& in, std::vector<Series>& series, std::string& err) {
    std::string line;
    if (!std::getline(in, line)) {
        err = "empty file";
        return false;
    }
    if (line.find("n,regime,leverage,mean_J") != 0) {
        err = "missing figure1 header row";
        return false;
    }
    std::map<std::string, std::size_t> index;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string n, regime, lev, mean;
        if (!std::getline(is, n, ',') || !std::getline(is, regime, ',') || !std::getline(is, lev, ',') ||
            !std::getline(is, mean)) {
            err = "malformed row: " + line;
            return false;
        }
        double x, y;
        try {
            x = std::stod(lev);
            y = std::stod(mean);
        } catch (const std::exception&) {
            err = "malformed number in row: " + line;
            return false;
        }
        const std::string key = "N=" + n + " " + regime;
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, series.size());
            series.push_back(Series{key, {}});
            it = index.find(key);
        }
        series[it->second].points.emplace_back(x, y);
    }
    if (series.empty()) {
        err = "no data rows";
        return false;
    }
    return true;
}

int cmd_plot(const std::string& csv_path, const std::string& svg_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "error: cannot open %s\n", csv_path.c_str());
        return 2;
    }
    std::vector<Series> series;
    std::string err;
    if (!parse_figure_csv(in, series, err)) {
        std::fprintf(stderr, "error: %s: %s\n", csv_path.c_str(), err.c_str());
        return 2;
    }

    double xmin = 1e300, xmax = -1e300, ymax = 0.0;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymax = std::max(ymax, y);
        }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (ymax <= 0.0) ymax = 1.0;

    const double width = 800, height = 560;
    const double ml = 70, mr = 190, mt = 30, mb = 55;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto sy = [&](double y) { return height - mb - y / ymax * (height - mt - mb); };

    static const char* kPalette[] = {"#1b6ca8", "#d94f04", "#2a9d5c", "#8e44ad",
                                     "#c0392b", "#16a085", "#7f8c8d", "#e67e22",
                                     "#2c3e50", "#27ae60", "#9b59b6", "#d35400"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double x = xmin + (xmax - xmin) * i / 5.0;
        const double y = ymax * i / 5.0;
        char xl[32], yl[32];
        std::snprintf(xl, sizeof xl, "%.3g", x);
        std::snprintf(yl, sizeof yl, "%.3g", y);
        svg << "<text x=\"" << sx(x) << "\" y=\"" << height - mb + 18
            << "\" font-size=\"11\" text-anchor=\"middle\">" << xl << "</text>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << sy(y) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << yl << "</text>\n";
        svg << "<line x1=\"" << sx(x) << "\" y1=\"" << height - mb << "\" x2=\"" << sx(x) << "\" y2=\""
            << height - mb + 4 << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << sy(y) << "\" x2=\"" << ml << "\" y2=\"" << sy(y)
            << "\" stroke=\"black\"/>\n";
    }
    svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">leverage ln(D/V0)</text>\n";
    svg << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (mt + height - mb) / 2 << ")\">mean Jeffreys divergence</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : series[i].points) svg << sx(x) << "," << sy(y) << " ";
        svg << "\"/>\n";
        const double ly = mt + 16 + 18 * static_cast<double>(i);
        svg << "<line x1=\"" << width - mr + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - mr + 38
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << width - mr + 44 << "\" y=\"" << ly << "\" font-size=\"12\">"
            << series[i].label << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::fprintf(stderr, "error: cannot open %s for writing\n", svg_path.c_str());
        return 3;
    }
    out << svg.str();
    return out ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo divergence experiments between single- and multi-factor default models"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run the experiment grid and write CSV outputs");
    std::string config_path, profile, out_dir = ".", loading_mode, divergence_level, regimes;
    std::string market_sizes, leverages;
    int workers = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> reps;
    std::optional<double> mu, sigma_high, sigma_low, horizon;
    run->add_option("--config", config_path, "config file (flat key = value)");
    run->add_option("--profile", profile, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
    run->add_option("--seed", seed, "master seed (overrides config)");
    run->add_option("--out-dir", out_dir, "output directory");
    run->add_option("--workers", workers, "worker threads (output invariant to this)")
        ->check(CLI::PositiveNumber);
    run->add_option("--loading-mode", loading_mode, "direct or cholesky")
        ->check(CLI::IsMember({"direct", "cholesky"}));
    run->add_option("--divergence-level", divergence_level, "bernoulli or density")
        ->check(CLI::IsMember({"bernoulli", "density"}));
    run->add_option("--regimes", regimes, "high, low or both")
        ->check(CLI::IsMember({"high", "low", "both"}));
    run->add_option("--market-sizes", market_sizes, "comma-separated market sizes");
    run->add_option("--leverages", leverages, "comma-separated leverages ln(D/V0)");
    run->add_option("--reps", reps, "Monte Carlo replications per cell");
    run->add_option("--mu", mu, "drift per unit time");
    run->add_option("--sigma-base-high", sigma_high, "stand-alone volatility, high regime");
    run->add_option("--sigma-base-low", sigma_low, "stand-alone volatility, low regime");
    run->add_option("--horizon", horizon, "time horizon T");

    // gen-matrix
    auto* gen = app.add_subcommand("gen-matrix", "generate one banded random correlation matrix");
    int dim = 0;
    std::string regime = "high", out_path = "matrix.csv";
    std::uint64_t gen_seed = 1;
    std::optional<double> rho_min, rho_max;
    gen->add_option("--dim", dim, "matrix dimension")->required();
    gen->add_option("--regime", regime, "high or low")->check(CLI::IsMember({"high", "low"}));
    gen->add_option("--seed", gen_seed, "seed");
    gen->add_option("--out", out_path, "output CSV path");
    gen->add_option("--rho-min", rho_min, "band lower bound override");
    gen->add_option("--rho-max", rho_max, "band upper bound override");

    // divergence
    auto* div = app.add_subcommand("divergence", "Jeffreys divergence between two default probabilities");
    double p = 0.0, q = 0.0;
    div->add_option("p", p, "first probability")->required();
    div->add_option("q", q, "second probability")->required();

    // plot
    auto* plot = app.add_subcommand("plot", "render figure1.csv as an SVG line plot");
    std::string csv_path, svg_path;
    plot->add_option("figure1_csv", csv_path, "figure1.csv produced by run")->required();
    plot->add_option("out_svg", svg_path, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (run->parsed()) {
        std::vector<ConfigOverride> overrides;
        if (seed) overrides.push_back({"master_seed", std::to_string(*seed)});
        if (!loading_mode.empty()) overrides.push_back({"loading_mode", loading_mode});
        if (!divergence_level.empty()) overrides.push_back({"divergence_level", divergence_level});
        if (!regimes.empty()) overrides.push_back({"regimes", regimes});
        if (!market_sizes.empty()) overrides.push_back({"market_sizes", market_sizes});
        if (!leverages.empty()) overrides.push_back({"leverages", leverages});
        if (reps) overrides.push_back({"reps", std::to_string(*reps)});
        char buf[64];
        auto push_double = [&](const char* key, double v) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            overrides.push_back({key, buf});
        };
        if (mu) push_double("mu", *mu);
        if (sigma_high) push_double("sigma_base_high", *sigma_high);
        if (sigma_low) push_double("sigma_base_low", *sigma_low);
        if (horizon) push_double("horizon", *horizon);
        return cmd_run(config_path, profile, overrides, out_dir, workers);
    }
    if (gen->parsed()) return cmd_gen_matrix(dim, regime, gen_seed, out_path, rho_min, rho_max);
    if (div->parsed()) return cmd_divergence(p, q);
    if (plot->parsed()) return cmd_plot(csv_path, svg_path);
    return 2;
}

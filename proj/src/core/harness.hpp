#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrmat.hpp"
#include "divergence.hpp"
#include "dynamics.hpp"
#include "stats.hpp"

namespace creditdiv::harness {

enum class DivergenceLevel { Bernoulli, Density };
enum class FirmAggregation { Mean, FirstFirm };

struct ExperimentConfig {
    std::vector<std::size_t> market_sizes = {10, 50, 90, 100, 500, 1000};
    std::vector<double> leverages = default_leverage_grid();
    std::size_t reps = 2000;
    std::vector<corrmat::Regime> regimes = {corrmat::Regime::Low, corrmat::Regime::High};
    dynamics::LoadingMode loading_mode = dynamics::LoadingMode::Direct;
    DivergenceLevel divergence_level = DivergenceLevel::Bernoulli;
    FirmAggregation firm_aggregation = FirmAggregation::Mean;
    double mu = 2.2;
    double sigma_base_high = 1.7;
    double sigma_base_low = 1.5;
    double horizon = 1.0;
    double band_low_min = 0.1;
    double band_low_max = 0.4;
    double band_high_min = 0.8;
    double band_high_max = 0.99;
    std::size_t noise_dim = 3;
    std::uint64_t master_seed = 42;

    static std::vector<double> default_leverage_grid(); // 0.1 .. 2.0 step 0.1

    void validate() const;
    void apply_profile(const std::string& name); // "desk" or "paper"
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;
    std::string serialize() const; // flat key=value block, fixed key order

    double sigma_base(corrmat::Regime r) const;
    corrmat::NoiseBand band(corrmat::Regime r) const;
};

// Parses flat "key = value" text with '#' comments. Keys with reserved
// prefixes (run., digest., calibration.) are ignored so a manifest can be
// fed back in as a config; any other unknown key is a config error naming
// the key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

struct DivergenceCell {
    std::size_t n;
    double leverage;
    corrmat::Regime regime;
    stats::SampleSummary summary;
    std::vector<double> raw;
};

struct RegimeComparison {
    std::size_t n;
    double leverage;
    stats::WelchResult welch; // low sample first: t < 0 when high dominates
};

struct GridResult {
    std::vector<DivergenceCell> cells;
    std::vector<RegimeComparison> comparisons;
    std::uint64_t clamp_events = 0;
};

// Stable substream seed for one replication.
std::uint64_t substream_seed(std::uint64_t master, std::size_t n, std::size_t leverage_index,
                             corrmat::Regime regime, std::size_t replication);

// One market: random correlation matrix -> loadings -> analytic default
// probability pair per firm -> Jeffreys divergence, aggregated across firms.
double run_replication(std::size_t n, double leverage, corrmat::Regime regime,
                       const ExperimentConfig& config, std::uint64_t seed,
                       divergence::ClampStats* clamps = nullptr);

// Same pipeline with the matrix supplied by the caller (test hook).
double replicate_with_matrix(const corrmat::CorrelationMatrix& matrix, double leverage,
                             corrmat::Regime regime, const ExperimentConfig& config,
                             divergence::ClampStats* clamps = nullptr);

DivergenceCell run_cell(std::size_t n, double leverage, std::size_t leverage_index,
                        corrmat::Regime regime, const ExperimentConfig& config, int workers = 1,
                        divergence::ClampStats* clamps = nullptr);

GridResult run_grid(const ExperimentConfig& config, int workers = 1);

std::string table1_csv(const GridResult& grid, const ExperimentConfig& config);
std::string table2_csv(const GridResult& grid);
std::string figure1_csv(const GridResult& grid);

// FNV-1a 64-bit, hex string; the manifest's file digest.
std::string fnv1a64_hex(const std::string& bytes);

// Runs the grid and writes table1.csv, table2.csv, figure1.csv and
// manifest.txt into out_dir.
void run_grid_to_dir(const ExperimentConfig& config, const std::string& out_dir, int workers);

} // namespace creditdiv::harness

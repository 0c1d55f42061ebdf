#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "errors.hpp"

namespace creditdiv::harness {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(errc::config_error, "config key '" + key + "': cannot parse '" + s + "' as a number");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(errc::config_error, "config key '" + key + "': cannot parse '" + s + "' as an unsigned integer");
    }
}

} // namespace

std::vector<double> ExperimentConfig::default_leverage_grid() {
    std::vector<double> v;
    for (int i = 1; i <= 20; ++i) v.push_back(static_cast<double>(i) / 10.0);
    return v;
}

double ExperimentConfig::sigma_base(corrmat::Regime r) const {
    return r == corrmat::Regime::High ? sigma_base_high : sigma_base_low;
}

corrmat::NoiseBand ExperimentConfig::band(corrmat::Regime r) const {
    return r == corrmat::Regime::High
               ? corrmat::NoiseBand(band_high_min, band_high_max, corrmat::Regime::High)
               : corrmat::NoiseBand(band_low_min, band_low_max, corrmat::Regime::Low);
}

void ExperimentConfig::validate() const {
    if (reps < 2) fail(errc::config_error, "config key 'reps': must be at least 2");
    if (market_sizes.empty()) fail(errc::config_error, "config key 'market_sizes': must not be empty");
    for (std::size_t i = 0; i < market_sizes.size(); ++i) {
        if (market_sizes[i] < 2) fail(errc::config_error, "config key 'market_sizes': sizes must be >= 2");
        if (i > 0 && market_sizes[i] <= market_sizes[i - 1])
            fail(errc::config_error, "config key 'market_sizes': must be strictly increasing");
    }
    if (leverages.empty()) fail(errc::config_error, "config key 'leverages': must not be empty");
    for (std::size_t i = 1; i < leverages.size(); ++i)
        if (leverages[i] <= leverages[i - 1])
            fail(errc::config_error, "config key 'leverages': must be strictly increasing");
    if (regimes.empty()) fail(errc::config_error, "config key 'regimes': must not be empty");
    if (!(mu == mu)) fail(errc::config_error, "config key 'mu': not a number");
    if (!(sigma_base_high > 0.0)) fail(errc::config_error, "config key 'sigma_base_high': must be positive");
    if (!(sigma_base_low > 0.0)) fail(errc::config_error, "config key 'sigma_base_low': must be positive");
    if (!(horizon > 0.0)) fail(errc::config_error, "config key 'horizon': must be positive");
    if (noise_dim == 0) fail(errc::config_error, "config key 'noise_dim': must be positive");
    band(corrmat::Regime::Low);
    band(corrmat::Regime::High);
}

void ExperimentConfig::apply_profile(const std::string& name) {
    if (name == "desk") {
        market_sizes = {10, 50, 100};
        leverages = {0.1, 0.5, 1.0, 1.5, 2.0};
        reps = 200;
    } else if (name == "paper") {
        market_sizes = {10, 50, 90, 100, 500, 1000};
        leverages = default_leverage_grid();
        reps = 2000;
    } else {
        fail(errc::config_error, "unknown profile '" + name + "' (expected desk or paper)");
    }
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "market_sizes") {
        std::vector<std::size_t> v;
        for (const auto& tok : split_commas(value)) v.push_back(parse_u64(key, tok));
        market_sizes = std::move(v);
    } else if (key == "leverages") {
        std::vector<double> v;
        for (const auto& tok : split_commas(value)) v.push_back(parse_double(key, tok));
        leverages = std::move(v);
    } else if (key == "reps") {
        reps = parse_u64(key, value);
    } else if (key == "regimes") {
        if (value == "both")
            regimes = {corrmat::Regime::Low, corrmat::Regime::High};
        else if (auto r = corrmat::parse_regime(value))
            regimes = {*r};
        else
            fail(errc::config_error, "config key 'regimes': expected high, low or both, got '" + value + "'");
    } else if (key == "loading_mode") {
        if (value == "direct")
            loading_mode = dynamics::LoadingMode::Direct;
        else if (value == "cholesky")
            loading_mode = dynamics::LoadingMode::Cholesky;
        else
            fail(errc::config_error, "config key 'loading_mode': expected direct or cholesky, got '" + value + "'");
    } else if (key == "divergence_level") {
        if (value == "bernoulli")
            divergence_level = DivergenceLevel::Bernoulli;
        else if (value == "density")
            divergence_level = DivergenceLevel::Density;
        else
            fail(errc::config_error,
                 "config key 'divergence_level': expected bernoulli or density, got '" + value + "'");
    } else if (key == "firm_aggregation") {
        if (value == "mean")
            firm_aggregation = FirmAggregation::Mean;
        else if (value == "first")
            firm_aggregation = FirmAggregation::FirstFirm;
        else
            fail(errc::config_error, "config key 'firm_aggregation': expected mean or first, got '" + value + "'");
    } else if (key == "mu") {
        mu = parse_double(key, value);
    } else if (key == "sigma_base_high") {
        sigma_base_high = parse_double(key, value);
    } else if (key == "sigma_base_low") {
        sigma_base_low = parse_double(key, value);
    } else if (key == "horizon") {
        horizon = parse_double(key, value);
    } else if (key == "band_low_min") {
        band_low_min = parse_double(key, value);
    } else if (key == "band_low_max") {
        band_low_max = parse_double(key, value);
    } else if (key == "band_high_min") {
        band_high_min = parse_double(key, value);
    } else if (key == "band_high_max") {
        band_high_max = parse_double(key, value);
    } else if (key == "noise_dim") {
        noise_dim = parse_u64(key, value);
    } else if (key == "master_seed") {
        master_seed = parse_u64(key, value);
    } else {
        fail(errc::config_error, "unknown config key '" + key + "'");
    }
}

std::string ExperimentConfig::get(const std::string& key) const {
    std::ostringstream os;
    if (key == "market_sizes") {
        for (std::size_t i = 0; i < market_sizes.size(); ++i) os << (i ? "," : "") << market_sizes[i];
    } else if (key == "leverages") {
        for (std::size_t i = 0; i < leverages.size(); ++i) os << (i ? "," : "") << fmt17(leverages[i]);
    } else if (key == "reps") {
        os << reps;
    } else if (key == "regimes") {
        if (regimes.size() == 2)
            os << "both";
        else
            os << corrmat::regime_name(regimes.front());
    } else if (key == "loading_mode") {
        os << (loading_mode == dynamics::LoadingMode::Direct ? "direct" : "cholesky");
    } else if (key == "divergence_level") {
        os << (divergence_level == DivergenceLevel::Bernoulli ? "bernoulli" : "density");
    } else if (key == "firm_aggregation") {
        os << (firm_aggregation == FirmAggregation::Mean ? "mean" : "first");
    } else if (key == "mu") {
        os << fmt17(mu);
    } else if (key == "sigma_base_high") {
        os << fmt17(sigma_base_high);
    } else if (key == "sigma_base_low") {
        os << fmt17(sigma_base_low);
    } else if (key == "horizon") {
        os << fmt17(horizon);
    } else if (key == "band_low_min") {
        os << fmt17(band_low_min);
    } else if (key == "band_low_max") {
        os << fmt17(band_low_max);
    } else if (key == "band_high_min") {
        os << fmt17(band_high_min);
    } else if (key == "band_high_max") {
        os << fmt17(band_high_max);
    } else if (key == "noise_dim") {
        os << noise_dim;
    } else if (key == "master_seed") {
        os << master_seed;
    } else {
        fail(errc::config_error, "unknown config key '" + key + "'");
    }
    return os.str();
}

namespace {

const char* const kConfigKeys[] = {
    "market_sizes",  "leverages",      "reps",          "regimes",       "loading_mode",
    "divergence_level", "firm_aggregation", "mu",       "sigma_base_high", "sigma_base_low",
    "horizon",       "band_low_min",   "band_low_max",  "band_high_min", "band_high_max",
    "noise_dim",     "master_seed",
};

bool reserved_prefix(const std::string& key) {
    return key.rfind("run.", 0) == 0 || key.rfind("digest.", 0) == 0 || key.rfind("calibration.", 0) == 0;
}

} // namespace

std::string ExperimentConfig::serialize() const {
    std::string out;
    for (const char* key : kConfigKeys) {
        out += key;
        out += " = ";
        out += get(key);
        out += '\n';
    }
    return out;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(errc::config_error, "config line '" + line + "' is not of the form key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (reserved_prefix(key)) continue;
        cfg.set(key, value);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

std::uint64_t substream_seed(std::uint64_t master, std::size_t n, std::size_t leverage_index,
                             corrmat::Regime regime, std::size_t replication) {
    std::uint64_t h = splitmix64_mix(master);
    h = splitmix64_mix(h ^ static_cast<std::uint64_t>(n));
    h = splitmix64_mix(h ^ static_cast<std::uint64_t>(leverage_index));
    h = splitmix64_mix(h ^ (regime == corrmat::Regime::High ? 2u : 1u));
    h = splitmix64_mix(h ^ static_cast<std::uint64_t>(replication));
    return h;
}

double replicate_with_matrix(const corrmat::CorrelationMatrix& matrix, double leverage,
                             corrmat::Regime regime, const ExperimentConfig& config,
                             divergence::ClampStats* clamps) {
    const std::size_t n = matrix.dim();
    const double sigma = config.sigma_base(regime);
    dynamics::FirmParams firm{config.mu, sigma, 1.0, std::exp(leverage), config.horizon};

    const double rate_single = sigma * sigma;
    const std::size_t count = config.firm_aggregation == FirmAggregation::Mean ? n : 1;

    // Direct mode avoids materializing the loading matrix: row rates are the
    // loadings' row sums of squares computed in the same order.
    dynamics::LoadingMatrix loadings;
    if (config.loading_mode == dynamics::LoadingMode::Cholesky)
        loadings = dynamics::build_loadings(matrix, sigma, dynamics::LoadingMode::Cholesky);

    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double rate_multi;
        if (config.loading_mode == dynamics::LoadingMode::Direct) {
            rate_multi = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double l = sigma * matrix.entry(i, j);
                rate_multi += l * l;
            }
        } else {
            rate_multi = dynamics::effective_variance(loadings, i);
        }
        double j_value;
        if (config.divergence_level == DivergenceLevel::Bernoulli) {
            const double p_single = dynamics::default_probability(firm, rate_single);
            const double p_multi = dynamics::default_probability(firm, rate_multi);
            j_value = divergence::jeffreys_bernoulli(divergence::clamp_probability(p_single, clamps),
                                                     divergence::clamp_probability(p_multi, clamps), clamps)
                          .j;
        } else {
            const auto m_single = dynamics::terminal_moments(firm, rate_single);
            const auto m_multi = dynamics::terminal_moments(firm, rate_multi);
            j_value = divergence::jeffreys_normal(m_single.log_mean, m_single.log_variance,
                                                  m_multi.log_mean, m_multi.log_variance)
                          .j;
        }
        acc += j_value;
    }
    return acc / static_cast<double>(count);
}

double run_replication(std::size_t n, double leverage, corrmat::Regime regime,
                       const ExperimentConfig& config, std::uint64_t seed,
                       divergence::ClampStats* clamps) {
    Rng rng(seed);
    const corrmat::NoiseBand band = config.band(regime);
    for (int attempt = 0;; ++attempt) {
        try {
            const corrmat::CorrelationMatrix matrix =
                corrmat::generate_correlation_matrix(n, band, rng, config.noise_dim);
            return replicate_with_matrix(matrix, leverage, regime, config, clamps);
        } catch (const error& e) {
            if (attempt >= 9)
                fail(e.code(), "run_replication: matrix generation failed after 10 attempts: " +
                                   std::string(e.what()));
        }
    }
}

DivergenceCell run_cell(std::size_t n, double leverage, std::size_t leverage_index,
                        corrmat::Regime regime, const ExperimentConfig& config, int workers,
                        divergence::ClampStats* clamps) {
    config.validate();
    const std::size_t reps = config.reps;
    std::vector<double> results(reps);
    std::vector<std::uint64_t> clamp_counts(std::max(workers, 1), 0);

    if (workers <= 1) {
        divergence::ClampStats local;
        for (std::size_t rep = 0; rep < reps; ++rep)
            results[rep] =
                run_replication(n, leverage, regime, config,
                                substream_seed(config.master_seed, n, leverage_index, regime, rep), &local);
        clamp_counts[0] = local.events;
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                divergence::ClampStats local;
                try {
                    for (std::size_t rep = static_cast<std::size_t>(w); rep < reps;
                         rep += static_cast<std::size_t>(workers))
                        results[rep] = run_replication(
                            n, leverage, regime, config,
                            substream_seed(config.master_seed, n, leverage_index, regime, rep), &local);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
                clamp_counts[static_cast<std::size_t>(w)] = local.events;
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    if (clamps)
        for (std::uint64_t c : clamp_counts) clamps->events += c;

    DivergenceCell cell{n, leverage, regime, stats::summarize(results), std::move(results)};
    return cell;
}

GridResult run_grid(const ExperimentConfig& config, int workers) {
    config.validate();
    GridResult grid;
    divergence::ClampStats clamps;
    for (std::size_t n : config.market_sizes) {
        for (std::size_t li = 0; li < config.leverages.size(); ++li) {
            const double lev = config.leverages[li];
            for (corrmat::Regime regime : config.regimes) {
                try {
                    grid.cells.push_back(run_cell(n, lev, li, regime, config, workers, &clamps));
                } catch (const error& e) {
                    fail(e.code(), "cell (n=" + std::to_string(n) + ", leverage=" + fmt17(lev) +
                                       ", regime=" + corrmat::regime_name(regime) + "): " + e.what());
                }
            }
            if (config.regimes.size() == 2) {
                const auto& cells = grid.cells;
                const DivergenceCell& first = cells[cells.size() - 2];
                const DivergenceCell& second = cells[cells.size() - 1];
                const DivergenceCell& lo = first.regime == corrmat::Regime::Low ? first : second;
                const DivergenceCell& hi = first.regime == corrmat::Regime::Low ? second : first;
                grid.comparisons.push_back(RegimeComparison{n, lev, stats::welch_test(lo.raw, hi.raw)});
            }
        }
    }
    grid.clamp_events = clamps.events;
    return grid;
}

std::string table1_csv(const GridResult& grid, const ExperimentConfig&) {
    std::string out = "n,leverage,regime,mean_J,se_J,reps\n";
    for (const auto& c : grid.cells) {
        out += std::to_string(c.n);
        out += ',';
        out += fmt17(c.leverage);
        out += ',';
        out += corrmat::regime_name(c.regime);
        out += ',';
        out += fmt17(c.summary.mean);
        out += ',';
        out += fmt17(c.summary.se);
        out += ',';
        out += std::to_string(c.summary.n);
        out += '\n';
    }
    return out;
}

std::string table2_csv(const GridResult& grid) {
    std::string out = "n,leverage,t,dof,p_value\n";
    for (const auto& c : grid.comparisons) {
        out += std::to_string(c.n);
        out += ',';
        out += fmt17(c.leverage);
        out += ',';
        out += fmt17(c.welch.t_stat);
        out += ',';
        out += fmt17(c.welch.dof);
        out += ',';
        out += fmt17(std::max(c.welch.p_value, 2.2e-16)); // display floor
        out += '\n';
    }
    return out;
}

std::string figure1_csv(const GridResult& grid) {
    std::string out = "n,regime,leverage,mean_J\n";
    for (const auto& c : grid.cells) {
        out += std::to_string(c.n);
        out += ',';
        out += corrmat::regime_name(c.regime);
        out += ',';
        out += fmt17(c.leverage);
        out += ',';
        out += fmt17(c.summary.mean);
        out += '\n';
    }
    return out;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x00000100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

struct ReferenceCell {
    std::size_t n;
    const char* leverage_key;
    double leverage;
    corrmat::Regime regime;
    double mean_j;
};

// Published reference averages for this experimental design, used only for
// the informational calibration block in the manifest.
const ReferenceCell kReference[] = {
    {10, "0.1", 0.1, corrmat::Regime::Low, 0.3400},  {50, "0.1", 0.1, corrmat::Regime::Low, 0.5834},
    {100, "0.1", 0.1, corrmat::Regime::Low, 0.6683}, {1000, "0.1", 0.1, corrmat::Regime::Low, 0.7926},
    {10, "0.5", 0.5, corrmat::Regime::Low, 0.1504},  {50, "0.5", 0.5, corrmat::Regime::Low, 0.2636},
    {100, "0.5", 0.5, corrmat::Regime::Low, 0.3046}, {1000, "0.5", 0.5, corrmat::Regime::Low, 0.3610},
    {10, "1", 1.0, corrmat::Regime::Low, 0.0980},    {50, "1", 1.0, corrmat::Regime::Low, 0.1684},
    {100, "1", 1.0, corrmat::Regime::Low, 0.1954},   {1000, "1", 1.0, corrmat::Regime::Low, 0.2328},
    {10, "1.5", 1.5, corrmat::Regime::Low, 0.0710},  {50, "1.5", 1.5, corrmat::Regime::Low, 0.1266},
    {100, "1.5", 1.5, corrmat::Regime::Low, 0.1475}, {1000, "1.5", 1.5, corrmat::Regime::Low, 0.1772},
    {10, "2", 2.0, corrmat::Regime::Low, 0.0575},    {50, "2", 2.0, corrmat::Regime::Low, 0.1018},
    {100, "2", 2.0, corrmat::Regime::Low, 0.1185},   {1000, "2", 2.0, corrmat::Regime::Low, 0.1425},
    {10, "0.1", 0.1, corrmat::Regime::High, 0.5669}, {50, "0.1", 0.1, corrmat::Regime::High, 0.7722},
    {100, "0.1", 0.1, corrmat::Regime::High, 0.7952}, {1000, "0.1", 0.1, corrmat::Regime::High, 0.8201},
    {10, "0.5", 0.5, corrmat::Regime::High, 0.2618}, {50, "0.5", 0.5, corrmat::Regime::High, 0.3498},
    {100, "0.5", 0.5, corrmat::Regime::High, 0.3607}, {1000, "0.5", 0.5, corrmat::Regime::High, 0.3751},
    {10, "1", 1.0, corrmat::Regime::High, 0.1651},   {50, "1", 1.0, corrmat::Regime::High, 0.2243},
    {100, "1", 1.0, corrmat::Regime::High, 0.2330},  {1000, "1", 1.0, corrmat::Regime::High, 0.2425},
    {10, "1.5", 1.5, corrmat::Regime::High, 0.1240}, {50, "1.5", 1.5, corrmat::Regime::High, 0.1700},
    {100, "1.5", 1.5, corrmat::Regime::High, 0.1764}, {1000, "1.5", 1.5, corrmat::Regime::High, 0.1833},
    {10, "2", 2.0, corrmat::Regime::High, 0.0992},   {50, "2", 2.0, corrmat::Regime::High, 0.1377},
    {100, "2", 2.0, corrmat::Regime::High, 0.1415},  {1000, "2", 2.0, corrmat::Regime::High, 0.1547},
};

std::string iso8601_utc(std::chrono::system_clock::time_point tp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(errc::io_error, "short write to '" + path + "'");
}

std::string calibration_block(const GridResult& grid) {
    std::string out;
    for (const auto& ref : kReference) {
        for (const auto& cell : grid.cells) {
            if (cell.n != ref.n || cell.regime != ref.regime ||
                std::fabs(cell.leverage - ref.leverage) > 1e-12)
                continue;
            const std::string prefix = "calibration.n" + std::to_string(ref.n) + ".lev" +
                                       ref.leverage_key + "." + corrmat::regime_name(ref.regime);
            out += prefix + ".achieved = " + fmt17(cell.summary.mean) + "\n";
            out += prefix + ".reference = " + fmt17(ref.mean_j) + "\n";
            out += prefix + ".rel_gap = " + fmt17((cell.summary.mean - ref.mean_j) / ref.mean_j) + "\n";
        }
    }
    return out;
}

} // namespace

void run_grid_to_dir(const ExperimentConfig& config, const std::string& out_dir, int workers) {
    config.validate();
    if (workers < 1) fail(errc::invalid_argument, "run_grid_to_dir: workers must be at least 1");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(errc::io_error, "cannot create output directory '" + out_dir + "'");

    const auto start = std::chrono::system_clock::now();
    const GridResult grid = run_grid(config, workers);
    const auto end = std::chrono::system_clock::now();

    const std::string t1 = table1_csv(grid, config);
    const std::string t2 = table2_csv(grid);
    const std::string f1 = figure1_csv(grid);
    const std::filesystem::path dir(out_dir);
    write_file((dir / "table1.csv").string(), t1);
    write_file((dir / "table2.csv").string(), t2);
    write_file((dir / "figure1.csv").string(), f1);

    std::string manifest = config.serialize();
    manifest += "run.version = 0.1.0\n";
    manifest += "run.start_time = " + iso8601_utc(start) + "\n";
    manifest += "run.end_time = " + iso8601_utc(end) + "\n";
    manifest += "run.workers = " + std::to_string(workers) + "\n";
    manifest += "run.clamp_events = " + std::to_string(grid.clamp_events) + "\n";
    manifest += "digest.table1_csv = " + fnv1a64_hex(t1) + "\n";
    manifest += "digest.table2_csv = " + fnv1a64_hex(t2) + "\n";
    manifest += "digest.figure1_csv = " + fnv1a64_hex(f1) + "\n";
    manifest += calibration_block(grid);
    write_file((dir / "manifest.txt").string(), manifest);
}

} // namespace creditdiv::harness

#ifndef CKLMS_EXPERIMENT_HPP
#define CKLMS_EXPERIMENT_HPP

#include "cklms/channel.hpp"
#include "cklms/filters.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cklms {

struct AlgorithmSpec {
    std::string id;
    FilterConfig filter;
};

/// One Monte-Carlo learning-curve experiment. The seeds inside `signal` and
/// `channel` are ignored: every run derives its own from master_seed.
struct ExperimentConfig {
    std::string name = "experiment";
    SignalConfig signal;
    ChannelConfig channel;
    /// When set, the noise stddev of each run is chosen to hit this SNR
    /// against that run's noise-free channel power; channel.noise_stddev is
    /// then ignored.
    std::optional<double> snr_db;
    EmbeddingConfig embedding;
    std::vector<AlgorithmSpec> algorithms;
    std::size_t mc_runs = 100;
    std::uint64_t master_seed = 0;
    /// Trailing moving-average window applied to emitted curves; 1 disables.
    std::size_t smoothing_window = 1;

    void validate() const;
};

/// Parses one experiment object. Errors name the offending field, e.g.
/// "config field 'algorithms[1].mu': expected a number".
ExperimentConfig parse_experiment(const nlohmann::json& j, const std::string& path = "");

/// Accepts either a single experiment object or {"experiments": [...]}.
std::vector<ExperimentConfig> parse_config(const nlohmann::json& j);
std::vector<ExperimentConfig> load_config_file(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for stream `stream` of Monte-Carlo run `run`:
/// splitmix64(splitmix64(master ^ splitmix64(run + 1)) + stream). Depends
/// only on its arguments, so runs can execute in any order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run, std::uint64_t stream) noexcept;

inline constexpr double kDbFloor = -120.0;

/// 10 log10(mse), clamped below at kDbFloor; non-finite input passes through.
double mse_to_db(double mse) noexcept;

struct LearningCurve {
    std::string algorithm;
    Algorithm kind = Algorithm::cklms;
    /// Pointwise mean of |e(n)|^2 over runs.
    std::vector<double> mse;
    /// CKLMS only: mean dictionary size after each iteration.
    std::vector<double> mean_dict_size;
    /// CKLMS only: final dictionary size of each run, in run order.
    std::vector<std::size_t> final_dict_sizes;
    /// CKLMS only: dictionary size never decreased and grew by <= 1 per step in every run.
    bool dict_monotone = true;
    /// Runs whose squared-error trace contains a non-finite value.
    std::size_t non_finite_runs = 0;

    std::vector<double> mse_db() const;
    /// Trailing moving average of mse over `window` points (window >= 1).
    std::vector<double> smoothed_mse(std::size_t window) const;
    /// 10 log10 of the mean MSE over the last `count` iterations.
    double steady_state_db(std::size_t count) const;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<LearningCurve> curves;
    std::vector<double> run_snr_db;
    std::vector<double> run_noise_stddev;
    std::size_t dataset_size = 0;
    /// Final CKLMS state of run 0 for the first cklms entry, if any.
    std::optional<nlohmann::json> cklms_snapshot;

    const LearningCurve& curve(const std::string& id) const;
};

/// Dataset of Monte-Carlo run `run`: input signal seeded with
/// derive_seed(master_seed, run, 0), channel noise with derive_seed(master_seed, run, 1).
struct RunData {
    Dataset dataset;
    double noise_stddev = 0.0;
    double snr_db = 0.0;
};
RunData generate_run_data(const ExperimentConfig& cfg, std::size_t run);

enum class Execution { parallel, serial };

/// Runs every Monte-Carlo realisation and averages the squared-error traces.
/// All algorithms of a run see the same dataset. With Execution::parallel
/// runs are spread over OpenMP threads; results are aggregated in run order
/// and are bitwise identical to Execution::serial.
ExperimentResult run_experiment(const ExperimentConfig& cfg, Execution execution = Execution::parallel);

enum class OutputFormat { csv, json };
OutputFormat output_format_from_string(std::string_view name);

/// "iteration,<id>_mse_db,..." with 1-based iterations, 15 significant digits.
std::string to_csv(const ExperimentResult& result);

/// {"config": ..., "curves": ..., "metadata": ...}. wall_clock_seconds is only
/// included when given, so default output stays byte-reproducible.
nlohmann::json to_result_json(const ExperimentResult& result,
                              std::optional<double> wall_clock_seconds = std::nullopt);

/// Canonical text form of a result document (2-space indent, sorted keys, trailing newline).
std::string dump_canonical(const nlohmann::json& j);

/// Writes to_csv / to_result_json to `path`. Throws std::runtime_error when
/// the file cannot be written.
void emit_results(const ExperimentResult& result, OutputFormat format, const std::filesystem::path& path,
                  std::optional<double> wall_clock_seconds = std::nullopt);

} // namespace cklms

#endif // CKLMS_EXPERIMENT_HPP

#include "cklms/cli.hpp"

#include "cklms/experiment.hpp"
#include "cklms/snapshot.hpp"
#include "cklms/verification.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace cklms {

namespace {

namespace fs = std::filesystem;

constexpr const char* kOutDirEnv = "CKLMS_OUT_DIR";

void print_checks(std::ostream& out, const std::vector<verify::CheckResult>& checks) {
    for (const auto& c : checks) {
        out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": measured " << std::setprecision(6) << c.measured
            << ", threshold " << c.threshold << '\n';
    }
}

struct EqualizeOptions {
    std::string config;
    std::string out_dir;
    std::string format = "csv";
    std::size_t mc_runs = 0;
    bool snapshot = false;
    bool timing = false;
    bool dataset = false;
};

int run_equalize(const EqualizeOptions& opt, std::ostream& out) {
    const auto format = output_format_from_string(opt.format);
    auto experiments = load_config_file(opt.config);

    fs::path dir = opt.out_dir;
    if (dir.empty()) {
        const char* env = std::getenv(kOutDirEnv);
        dir = (env && *env) ? fs::path(env) : fs::path("results");
    }
    fs::create_directories(dir);

    for (auto& cfg : experiments) {
        if (opt.mc_runs > 0) cfg.mc_runs = opt.mc_runs;
        const auto t0 = std::chrono::steady_clock::now();
        const ExperimentResult result = run_experiment(cfg);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const fs::path file = dir / (cfg.name + (format == OutputFormat::csv ? ".csv" : ".json"));
        emit_results(result, format, file, opt.timing ? std::optional<double>(seconds) : std::nullopt);

        out << cfg.name << ": " << result.dataset_size << " samples x " << cfg.mc_runs << " runs in " << std::fixed
            << std::setprecision(1) << seconds << " s -> " << file.string() << '\n';
        double snr = 0.0;
        for (double v : result.run_snr_db) snr += v;
        out << "  measured SNR " << std::setprecision(2) << snr / static_cast<double>(result.run_snr_db.size())
            << " dB\n";
        for (const auto& c : result.curves) {
            out << "  " << std::left << std::setw(12) << c.algorithm << std::right << " steady-state MSE "
                << std::setprecision(2) << c.steady_state_db(500) << " dB";
            if (c.kind == Algorithm::cklms) {
                double mean = 0.0;
                for (auto s : c.final_dict_sizes) mean += static_cast<double>(s);
                out << ", mean final dictionary " << std::setprecision(1)
                    << mean / static_cast<double>(c.final_dict_sizes.size());
            }
            if (c.non_finite_runs > 0) out << ", " << c.non_finite_runs << " run(s) diverged";
            out << '\n';
        }
        out.unsetf(std::ios::fixed);

        if (opt.snapshot && result.cklms_snapshot) {
            const fs::path snap = dir / (cfg.name + ".snapshot.json");
            std::ofstream os(snap);
            if (!os) throw std::runtime_error("cannot open '" + snap.string() + "' for writing");
            os << dump_canonical(*result.cklms_snapshot);
            out << "  snapshot -> " << snap.string() << '\n';
        }
        if (opt.dataset) {
            const RunData run0 = generate_run_data(cfg, 0);
            const fs::path data = dir / (cfg.name + ".dataset.csv");
            write_dataset_csv(run0.dataset, data);
            out << "  dataset -> " << data.string() << '\n';
        }
    }
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Complex kernel LMS toolkit: channel-equalization experiments and numerical self-checks"};
    app.require_subcommand(1);

    EqualizeOptions eq;
    auto* equalize = app.add_subcommand("equalize", "Run Monte-Carlo learning-curve experiments from a config file");
    equalize->add_option("--config", eq.config, "Experiment config (JSON)")->required();
    equalize->add_option("--out", eq.out_dir,
                         std::string("Output directory (default: $") + kOutDirEnv + ", else ./results)");
    equalize->add_option("--format", eq.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    equalize->add_option("--mc-runs", eq.mc_runs, "Override mc_runs of every experiment")
        ->check(CLI::PositiveNumber);
    equalize->add_flag("--snapshot", eq.snapshot, "Also write the final CKLMS state of run 0");
    equalize->add_flag("--timing", eq.timing, "Include wall-clock time in JSON metadata");
    equalize->add_flag("--dump-dataset", eq.dataset, "Also write the dataset of run 0 as CSV");

    std::uint64_t wseed = 1;
    auto* vw = app.add_subcommand("verify-wirtinger", "Finite-difference checks of the Wirtinger gradient rules");
    vw->add_option("--seed", wseed, "Random seed");

    std::size_t n_points = 50;
    double sigma = 5.0;
    std::uint64_t kseed = 1;
    auto* vk = app.add_subcommand("verify-kernel", "Hermitian/PSD checks of the Gaussian kernels");
    vk->add_option("--n-points", n_points, "Points in the Gram matrix")->check(CLI::PositiveNumber);
    vk->add_option("--sigma", sigma, "Kernel width")->check(CLI::PositiveNumber);
    vk->add_option("--seed", kseed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*equalize) return run_equalize(eq, out);
        if (*vw) {
            const auto checks = verify::wirtinger_suite(wseed);
            print_checks(out, checks);
            return verify::all_passed(checks) ? 0 : 1;
        }
        if (*vk) {
            const auto checks = verify::kernel_suite(n_points, sigma, kseed);
            print_checks(out, checks);
            return verify::all_passed(checks) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

} // namespace cklms

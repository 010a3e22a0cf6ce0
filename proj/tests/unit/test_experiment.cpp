#include "cklms/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cklms;
using nlohmann::json;

namespace {

json small_config() {
    return json::parse(R"({
      "name": "small",
      "signal": {"rho": 0.5, "n_samples": 300},
      "channel": {"snr_db": 20},
      "algorithms": [
        {"type": "cklms", "mu": 0.5, "kernel": {"family": "complex_gaussian", "sigma": 5},
         "novelty": {"delta1": 0.1, "delta2": 0.2}, "normalization": "self_kernel"},
        {"type": "nclms", "mu": 0.0625},
        {"type": "wl_nclms", "id": "wl", "mu": 0.0625, "epsilon": 1e-6}
      ],
      "mc_runs": 4,
      "master_seed": 17
    })");
}

std::string parse_error(const json& j) {
    try {
        parse_config(j);
    } catch (const UsageError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("config parsing: defaults and ids") {
    const auto cfgs = parse_config(small_config());
    REQUIRE(cfgs.size() == 1);
    const auto& c = cfgs[0];
    CHECK(c.name == "small");
    CHECK(c.embedding.filter_length == 5);
    CHECK(c.embedding.delay == 2);
    REQUIRE(c.snr_db.has_value());
    CHECK(*c.snr_db == 20.0);
    CHECK(c.algorithms[0].id == "cklms");
    CHECK(c.algorithms[0].filter.normalization == StepNormalization::self_kernel);
    CHECK(c.algorithms[2].id == "wl");
    CHECK(c.channel.linear_taps.size() == 2);
}

TEST_CASE("config parsing: errors name the offending field") {
    auto j = small_config();
    j["algorithms"][1]["mu"] = "fast";
    CHECK(parse_error(j).find("'algorithms[1].mu'") != std::string::npos);

    j = small_config();
    j["signal"]["colour"] = 1;
    CHECK(parse_error(j).find("'signal.colour': unknown field") != std::string::npos);

    j = small_config();
    j["algorithms"][0]["kernel"]["sigma"] = -1;
    CHECK(parse_error(j).find("'algorithms[0].kernel.sigma'") != std::string::npos);

    j = small_config();
    j["channel"]["noise_stddev"] = 0.1;
    CHECK(parse_error(j).find("'channel.snr_db'") != std::string::npos);

    j = small_config();
    j["algorithms"][0]["type"] = "krls";
    CHECK(parse_error(j).find("'algorithms[0].type'") != std::string::npos);

    j = small_config();
    j["algorithms"][2]["id"] = "nclms";
    CHECK(parse_error(j).find("duplicate algorithm id") != std::string::npos);

    j = small_config();
    j.erase("algorithms");
    CHECK(parse_error(j).find("'algorithms': missing required field") != std::string::npos);

    CHECK(parse_error(json::parse(R"({"experiments": [] })")).find("'experiments'") != std::string::npos);
}

TEST_CASE("config round trip through to_json") {
    const auto a = parse_config(small_config())[0];
    const auto b = parse_experiment(to_json(a));
    CHECK(to_json(a) == to_json(b));
}

TEST_CASE("missing config file names the path") {
    try {
        load_config_file("/nonexistent/cfg.json");
        FAIL("expected an error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("/nonexistent/cfg.json") != std::string::npos);
    }
}

TEST_CASE("seed derivation") {
    CHECK(derive_seed(1, 0, 0) == derive_seed(1, 0, 0));
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
    CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
    // SplitMix64 reference output for state 0 -> first draw
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("dB transform and floor") {
    CHECK(mse_to_db(1.0) == 0.0);
    CHECK(mse_to_db(0.01) == doctest::Approx(-20.0));
    CHECK(mse_to_db(0.0) == kDbFloor);
    CHECK(mse_to_db(1e-30) == kDbFloor);
    CHECK(std::isnan(mse_to_db(std::nan(""))));
}

TEST_CASE("learning curve helpers") {
    LearningCurve c;
    c.mse = {1.0, 3.0, 5.0, 7.0};
    const auto s = c.smoothed_mse(2);
    CHECK(s == std::vector<double>{1.0, 2.0, 4.0, 6.0});
    CHECK(c.smoothed_mse(1) == c.mse);
    CHECK(c.steady_state_db(2) == doctest::Approx(10.0 * std::log10(6.0)));
}

TEST_CASE("run_experiment: shapes, determinism, parallel equals serial") {
    const auto cfg = parse_config(small_config())[0];
    const auto a = run_experiment(cfg, Execution::parallel);
    const auto b = run_experiment(cfg, Execution::serial);
    CHECK(a.dataset_size == 295);
    REQUIRE(a.curves.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.curves[i].mse.size() == 295);
        CHECK(a.curves[i].mse == b.curves[i].mse);
        CHECK(a.curves[i].non_finite_runs == 0);
    }
    const auto& k = a.curve("cklms");
    CHECK(k.final_dict_sizes.size() == 4);
    CHECK(k.dict_monotone);
    for (auto s : k.final_dict_sizes) CHECK(s < 295);
    CHECK(to_csv(a) == to_csv(run_experiment(cfg)));
    CHECK(a.run_snr_db.size() == 4);
    for (double snr : a.run_snr_db) CHECK(snr == doctest::Approx(20.0).epsilon(0.05));
    CHECK_THROWS_AS(a.curve("missing"), UsageError);
}

TEST_CASE("run_experiment: single run, ten samples, one baseline") {
    auto cfg = parse_config(small_config())[0];
    cfg.signal.n_samples = 10;
    cfg.mc_runs = 1;
    cfg.algorithms.erase(cfg.algorithms.begin());
    cfg.algorithms.pop_back();
    const auto r = run_experiment(cfg);
    REQUIRE(r.curves.size() == 1);
    CHECK(r.curves[0].mse.size() == r.dataset_size);
    CHECK(r.dataset_size == 5);
}

TEST_CASE("run_experiment: errors carry the run index and algorithm id") {
    auto cfg = parse_config(small_config())[0];
    cfg.signal.n_samples = 7; // N <= L + D
    try {
        run_experiment(cfg);
        FAIL("expected an error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("run 0") != std::string::npos);
    }
}

TEST_CASE("noise-free kernel LMS learns the channel inverse") {
    // Non-circular input with a wide kernel keeps kappa(z, z) close to 1,
    // where the un-normalised update is stable.
    const json j = json::parse(R"({
      "name": "convergence",
      "signal": {"rho": 0.1, "n_samples": 2005},
      "channel": {"noise_stddev": 0},
      "algorithms": [{"type": "cklms", "mu": 1, "kernel": {"family": "complex_gaussian", "sigma": 20}}],
      "mc_runs": 1,
      "master_seed": 3
    })");
    const auto r = run_experiment(parse_config(j)[0]);
    const auto& c = r.curves[0];
    REQUIRE(c.mse.size() == 2000);
    CHECK(c.final_dict_sizes[0] == 2000);
    double head = 0.0, tail = 0.0;
    for (std::size_t n = 0; n < 20; ++n) head += c.mse[n];
    for (std::size_t n = 1800; n < 2000; ++n) tail += c.mse[n];
    const double gain = 10.0 * std::log10((head / 20.0) / (tail / 200.0));
    CAPTURE(gain);
    CHECK(gain >= 10.0);
}

TEST_CASE("CSV and JSON output") {
    auto cfg = parse_config(small_config())[0];
    cfg.signal.n_samples = 10;
    cfg.mc_runs = 2;
    const auto r = run_experiment(cfg);
    const std::string csv = to_csv(r);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line == "iteration,cklms_mse_db,nclms_mse_db,wl_mse_db");
    std::size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == r.dataset_size);
    CHECK(csv.substr(csv.find('\n') + 1, 2) == "1,");

    const json doc = to_result_json(r);
    CHECK(doc.contains("config"));
    CHECK(doc["curves"]["wl"]["mse"].size() == r.dataset_size);
    CHECK(doc["metadata"]["mc_runs"] == 2);
    CHECK(doc["metadata"]["dictionary"]["cklms"]["final_sizes"].size() == 2);
    CHECK_FALSE(doc["metadata"].contains("wall_clock_seconds"));
    CHECK(to_result_json(r, 1.5)["metadata"]["wall_clock_seconds"] == 1.5);

    const std::string text = dump_canonical(doc);
    CHECK(dump_canonical(json::parse(text)) == text);

    const auto dir = std::filesystem::temp_directory_path() / "cklms_emit_test";
    std::filesystem::create_directories(dir);
    emit_results(r, OutputFormat::csv, dir / "a.csv");
    std::ifstream f(dir / "a.csv");
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == csv);
    CHECK_THROWS(emit_results(r, OutputFormat::csv, dir / "missing" / "x" / "a.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("CSV: three iterations give four lines") {
    ExperimentResult r;
    r.config.algorithms.push_back({"nclms", FilterConfig{}});
    LearningCurve c;
    c.algorithm = "nclms";
    c.kind = Algorithm::nclms;
    c.mse = {1.0, 0.1, 0.0};
    r.curves.push_back(c);
    r.dataset_size = 3;
    CHECK(to_csv(r) == "iteration,nclms_mse_db\n1,0\n2,-10\n3,-120\n");
}

TEST_CASE("CSV values parse back to the in-memory curve to 12 significant digits") {
    auto cfg = parse_config(small_config())[0];
    cfg.mc_runs = 2;
    const auto r = run_experiment(cfg);
    std::istringstream is(to_csv(r));
    std::string line;
    std::getline(is, line);
    std::vector<std::vector<double>> db;
    for (const auto& c : r.curves) db.push_back(c.mse_db());
    std::size_t n = 0;
    while (std::getline(is, line)) {
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        CHECK(std::stoul(cell) == n + 1);
        for (std::size_t k = 0; k < db.size(); ++k) {
            std::getline(row, cell, ',');
            const double v = std::stod(cell);
            CHECK(std::abs(v - db[k][n]) <= 1e-12 * std::max(1.0, std::abs(db[k][n])));
        }
        ++n;
    }
    CHECK(n == r.dataset_size);
}

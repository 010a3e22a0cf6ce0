#include "cklms/cli.hpp"

#include <json.hpp>

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "cklms");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cklms::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

constexpr const char* kSmallConfig = R"({
  "name": "tiny",
  "signal": {"n_samples": 200},
  "channel": {"snr_db": 15},
  "algorithms": [
    {"type": "cklms", "mu": 0.25, "kernel": {"family": "complex_gaussian", "sigma": 5},
     "novelty": {"delta1": 0.1, "delta2": 0.2}},
    {"type": "nclms", "mu": 0.0625}
  ],
  "mc_runs": 3,
  "master_seed": 5
})";

fs::path write_config(const fs::path& dir) {
    const auto p = dir / "tiny.config.json";
    std::ofstream(p) << kSmallConfig;
    return p;
}

} // namespace

TEST_CASE("--help prints usage and exits 0") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("equalize") != std::string::npos);
    CHECK(r.out.find("verify-kernel") != std::string::npos);
}

TEST_CASE("a subcommand is required") { CHECK(run({}).code != 0); }

TEST_CASE("missing config file: nonzero exit naming the path") {
    const auto r = run({"equalize", "--config", "/no/such/config.json", "--out", "/tmp"});
    CHECK(r.code != 0);
    CHECK(r.err.find("/no/such/config.json") != std::string::npos);
}

TEST_CASE("malformed config names the field") {
    TempDir tmp("cklms_cli_bad");
    const auto p = tmp.path / "bad.json";
    std::ofstream(p) << R"({"signal": {}, "algorithms": [{"type": "nclms", "mu": -1}]})";
    const auto r = run({"equalize", "--config", p.string(), "--out", tmp.path.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("algorithms[0].mu") != std::string::npos);
}

TEST_CASE("unknown output format is rejected") {
    TempDir tmp("cklms_cli_fmt");
    const auto r = run({"equalize", "--config", write_config(tmp.path).string(), "--format", "xml"});
    CHECK(r.code != 0);
}

TEST_CASE("equalize writes byte-identical CSV on repeat runs") {
    TempDir tmp("cklms_cli_eq");
    const auto cfg = write_config(tmp.path);
    const auto a = tmp.path / "a";
    const auto b = tmp.path / "b";
    REQUIRE(run({"equalize", "--config", cfg.string(), "--out", a.string()}).code == 0);
    REQUIRE(run({"equalize", "--config", cfg.string(), "--out", b.string()}).code == 0);
    const std::string csv = slurp(a / "tiny.csv");
    CHECK(csv.rfind("iteration,cklms_mse_db,nclms_mse_db\n", 0) == 0);
    CHECK(csv == slurp(b / "tiny.csv"));
}

TEST_CASE("equalize: JSON, snapshot, dataset, mc-runs override") {
    TempDir tmp("cklms_cli_json");
    const auto cfg = write_config(tmp.path);
    const auto r = run({"equalize", "--config", cfg.string(), "--out", tmp.path.string(), "--format", "json",
                        "--snapshot", "--dump-dataset", "--mc-runs", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("tiny") != std::string::npos);
    const auto doc = nlohmann::json::parse(slurp(tmp.path / "tiny.json"));
    CHECK(doc["metadata"]["mc_runs"] == 2);
    CHECK_FALSE(doc["metadata"].contains("wall_clock_seconds"));
    const auto snap = nlohmann::json::parse(slurp(tmp.path / "tiny.snapshot.json"));
    CHECK(snap["format"] == "cklms-snapshot/1");
    CHECK(fs::exists(tmp.path / "tiny.dataset.csv"));

    const auto t = run({"equalize", "--config", cfg.string(), "--out", tmp.path.string(), "--format", "json",
                        "--timing", "--mc-runs", "1"});
    INFO(t.err);
    REQUIRE(t.code == 0);
    CHECK(nlohmann::json::parse(slurp(tmp.path / "tiny.json"))["metadata"].contains("wall_clock_seconds"));
}

TEST_CASE("output directory falls back to CKLMS_OUT_DIR") {
    TempDir tmp("cklms_cli_env");
    const auto cfg = write_config(tmp.path);
    const auto env_dir = tmp.path / "from_env";
    ::setenv("CKLMS_OUT_DIR", env_dir.c_str(), 1);
    const auto r = run({"equalize", "--config", cfg.string(), "--mc-runs", "1"});
    ::unsetenv("CKLMS_OUT_DIR");
    CHECK(r.code == 0);
    CHECK(fs::exists(env_dir / "tiny.csv"));
}

TEST_CASE("bundled configuration runs with a single Monte-Carlo run") {
    TempDir tmp("cklms_cli_bundled");
    const auto r = run({"equalize", "--config", std::string(CKLMS_SOURCE_DIR) + "/configs/equalization_default.json", "--out",
                        tmp.path.string(), "--mc-runs", "1"});
    CHECK(r.code == 0);
    CHECK(fs::exists(tmp.path / "circular.csv"));
    CHECK(fs::exists(tmp.path / "noncircular.csv"));
}

TEST_CASE("verify subcommands") {
    const auto w = run({"verify-wirtinger", "--seed", "4"});
    CHECK(w.code == 0);
    CHECK(w.out.find("[FAIL]") == std::string::npos);
    const auto k = run({"verify-kernel", "--n-points", "30", "--sigma", "1"});
    CHECK(k.code == 0);
    CHECK(k.out.find("[PASS] Gram PSD") != std::string::npos);
    CHECK(run({"verify-kernel", "--sigma", "-2"}).code != 0);
}

#include "cklms/experiment.hpp"

#include "cklms/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace cklms {

using nlohmann::json;

// ---------------------------------------------------------------------------
// config parsing

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
    throw UsageError("config field '" + path + "': " + what);
}

/// Thin cursor over a JSON object that remembers its path and rejects
/// unknown keys once the caller has consumed the ones it knows about.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) field_error(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json& at(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) field_error(join(path_, key), "missing required field");
        return j_.at(key);
    }

    std::string child(const std::string& key) const { return join(path_, key); }

    double number(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number()) field_error(child(key), "expected a number");
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::uint64_t count(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            field_error(child(key), "expected a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    std::uint64_t count_or(const std::string& key, std::uint64_t fallback) {
        return has(key) ? count(key) : fallback;
    }

    std::string string(const std::string& key) {
        const json& v = at(key);
        if (!v.is_string()) field_error(child(key), "expected a string");
        return v.get<std::string>();
    }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.contains(key)) field_error(child(key), "unknown field");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

cplx parse_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    field_error(path, "expected a number or a [re, im] pair");
}

std::vector<cplx> parse_complex_list(const json& v, const std::string& path) {
    if (!v.is_array()) field_error(path, "expected an array of [re, im] pairs");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_complex(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

json complex_list_json(const std::vector<cplx>& values) {
    json out = json::array();
    for (const auto& v : values) out.push_back(json::array({v.real(), v.imag()}));
    return out;
}

template <class Fn>
auto rethrow_as_field(const std::string& path, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const UsageError& e) {
        const std::string msg = e.what();
        if (msg.rfind("config field", 0) == 0) throw;
        field_error(path, msg);
    }
}

AlgorithmSpec parse_algorithm(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    AlgorithmSpec spec;
    const std::string type = r.string("type");
    spec.filter.algorithm = rethrow_as_field(r.child("type"), [&] { return algorithm_from_string(type); });
    spec.id = r.has("id") ? r.string("id") : type;
    spec.filter.mu = r.number("mu");
    if (!(spec.filter.mu > 0.0)) field_error(r.child("mu"), "must be positive");

    if (spec.filter.algorithm == Algorithm::cklms) {
        ObjectReader k(r.at("kernel"), r.child("kernel"));
        const std::string family = k.string("family");
        spec.filter.kernel.family =
            rethrow_as_field(k.child("family"), [&] { return kernel_family_from_string(family); });
        spec.filter.kernel.sigma = k.number("sigma");
        if (!(spec.filter.kernel.sigma > 0.0)) field_error(k.child("sigma"), "must be positive");
        k.finish();

        if (r.has("novelty")) {
            ObjectReader n(r.at("novelty"), r.child("novelty"));
            spec.filter.novelty.delta1 = n.number_or("delta1", 0.0);
            spec.filter.novelty.delta2 = n.number_or("delta2", 0.0);
            if (spec.filter.novelty.delta1 < 0.0) field_error(n.child("delta1"), "must be nonnegative");
            if (spec.filter.novelty.delta2 < 0.0) field_error(n.child("delta2"), "must be nonnegative");
            n.finish();
        }
        if (r.has("normalization")) {
            const std::string norm = r.string("normalization");
            spec.filter.normalization =
                rethrow_as_field(r.child("normalization"), [&] { return step_normalization_from_string(norm); });
        }
    } else {
        spec.filter.epsilon = r.number_or("epsilon", spec.filter.epsilon);
        if (spec.filter.epsilon < 0.0) field_error(r.child("epsilon"), "must be nonnegative");
    }
    r.finish();
    return spec;
}

} // namespace

void ExperimentConfig::validate() const {
    signal.validate();
    channel.validate();
    if (algorithms.empty()) throw UsageError("experiment '" + name + "' lists no algorithms");
    if (mc_runs == 0) throw UsageError("experiment '" + name + "': mc_runs must be >= 1");
    if (smoothing_window == 0) throw UsageError("experiment '" + name + "': smoothing_window must be >= 1");
    if (snr_db && !std::isfinite(*snr_db)) throw UsageError("experiment '" + name + "': snr_db must be finite");
    std::set<std::string> ids;
    for (const auto& a : algorithms) {
        if (!ids.insert(a.id).second) throw UsageError("experiment '" + name + "': duplicate algorithm id '" + a.id + "'");
        if (a.filter.algorithm == Algorithm::cklms) {
            a.filter.kernel.validate();
            a.filter.novelty.validate();
        }
    }
}

ExperimentConfig parse_experiment(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    ExperimentConfig cfg;
    if (r.has("name")) cfg.name = r.string("name");

    {
        ObjectReader s(r.at("signal"), r.child("signal"));
        cfg.signal.rho = s.number_or("rho", cfg.signal.rho);
        if (!(cfg.signal.rho >= 0.0 && cfg.signal.rho <= 1.0)) field_error(s.child("rho"), "must lie in [0, 1]");
        cfg.signal.amplitude = s.number_or("amplitude", cfg.signal.amplitude);
        cfg.signal.n_samples = s.count_or("n_samples", cfg.signal.n_samples);
        if (cfg.signal.n_samples == 0) field_error(s.child("n_samples"), "must be >= 1");
        s.finish();
    }
    if (r.has("channel")) {
        ObjectReader c(r.at("channel"), r.child("channel"));
        if (c.has("linear_taps")) cfg.channel.linear_taps = parse_complex_list(c.at("linear_taps"), c.child("linear_taps"));
        if (cfg.channel.linear_taps.empty()) field_error(c.child("linear_taps"), "needs at least one tap");
        if (c.has("poly_coeffs")) cfg.channel.poly_coeffs = parse_complex_list(c.at("poly_coeffs"), c.child("poly_coeffs"));
        const bool has_snr = c.has("snr_db");
        const bool has_std = c.has("noise_stddev");
        if (has_snr && has_std) field_error(c.child("snr_db"), "give either snr_db or noise_stddev, not both");
        if (has_snr) cfg.snr_db = c.number("snr_db");
        if (has_std) {
            cfg.channel.noise_stddev = c.number("noise_stddev");
            if (cfg.channel.noise_stddev < 0.0) field_error(c.child("noise_stddev"), "must be nonnegative");
        }
        c.finish();
    }
    if (r.has("embedding")) {
        ObjectReader e(r.at("embedding"), r.child("embedding"));
        cfg.embedding.filter_length = e.count_or("filter_length", cfg.embedding.filter_length);
        cfg.embedding.delay = e.count_or("delay", cfg.embedding.delay);
        e.finish();
    }
    {
        const json& algs = r.at("algorithms");
        if (!algs.is_array() || algs.empty()) field_error(r.child("algorithms"), "expected a non-empty array");
        for (std::size_t i = 0; i < algs.size(); ++i)
            cfg.algorithms.push_back(parse_algorithm(algs[i], r.child("algorithms") + "[" + std::to_string(i) + "]"));
    }
    cfg.mc_runs = r.count_or("mc_runs", cfg.mc_runs);
    if (cfg.mc_runs == 0) field_error(r.child("mc_runs"), "must be >= 1");
    cfg.master_seed = r.count_or("master_seed", cfg.master_seed);
    cfg.smoothing_window = r.count_or("smoothing_window", cfg.smoothing_window);
    if (cfg.smoothing_window == 0) field_error(r.child("smoothing_window"), "must be >= 1");
    r.finish();

    rethrow_as_field(path.empty() ? cfg.name : path, [&] {
        cfg.validate();
        return 0;
    });
    return cfg;
}

std::vector<ExperimentConfig> parse_config(const json& j) {
    std::vector<ExperimentConfig> out;
    if (j.is_object() && j.contains("experiments")) {
        ObjectReader r(j, "");
        const json& list = r.at("experiments");
        r.finish();
        if (!list.is_array() || list.empty()) field_error("experiments", "expected a non-empty array");
        std::set<std::string> names;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string path = "experiments[" + std::to_string(i) + "]";
            out.push_back(parse_experiment(list[i], path));
            if (!names.insert(out.back().name).second) field_error(path + ".name", "duplicate experiment name");
        }
    } else {
        out.push_back(parse_experiment(j));
    }
    return out;
}

std::vector<ExperimentConfig> load_config_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file '" + path.string() + "'");
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw UsageError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
    json channel{{"linear_taps", complex_list_json(cfg.channel.linear_taps)},
                 {"poly_coeffs", complex_list_json(cfg.channel.poly_coeffs)}};
    if (cfg.snr_db)
        channel["snr_db"] = *cfg.snr_db;
    else
        channel["noise_stddev"] = cfg.channel.noise_stddev;

    json algs = json::array();
    for (const auto& a : cfg.algorithms) {
        json o{{"id", a.id}, {"type", std::string(to_string(a.filter.algorithm))}, {"mu", a.filter.mu}};
        if (a.filter.algorithm == Algorithm::cklms) {
            o["kernel"] = {{"family", std::string(to_string(a.filter.kernel.family))}, {"sigma", a.filter.kernel.sigma}};
            o["novelty"] = {{"delta1", a.filter.novelty.delta1}, {"delta2", a.filter.novelty.delta2}};
            o["normalization"] = std::string(to_string(a.filter.normalization));
        } else {
            o["epsilon"] = a.filter.epsilon;
        }
        algs.push_back(std::move(o));
    }

    return json{
        {"name", cfg.name},
        {"signal", {{"rho", cfg.signal.rho}, {"amplitude", cfg.signal.amplitude}, {"n_samples", cfg.signal.n_samples}}},
        {"channel", channel},
        {"embedding", {{"filter_length", cfg.embedding.filter_length}, {"delay", cfg.embedding.delay}}},
        {"algorithms", algs},
        {"mc_runs", cfg.mc_runs},
        {"master_seed", cfg.master_seed},
        {"smoothing_window", cfg.smoothing_window},
    };
}

// ---------------------------------------------------------------------------
// seeding and curves

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(master ^ splitmix64(run + 1)) + stream);
}

double mse_to_db(double mse) noexcept {
    if (std::isnan(mse)) return mse;
    if (mse <= 0.0) return kDbFloor;
    return std::max(kDbFloor, 10.0 * std::log10(mse));
}

std::vector<double> LearningCurve::mse_db() const {
    std::vector<double> out(mse.size());
    for (std::size_t i = 0; i < mse.size(); ++i) out[i] = mse_to_db(mse[i]);
    return out;
}

std::vector<double> LearningCurve::smoothed_mse(std::size_t window) const {
    if (window <= 1) return mse;
    std::vector<double> out(mse.size());
    for (std::size_t i = 0; i < mse.size(); ++i) {
        const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
        double acc = 0.0;
        for (std::size_t k = lo; k <= i; ++k) acc += mse[k];
        out[i] = acc / static_cast<double>(i - lo + 1);
    }
    return out;
}

double LearningCurve::steady_state_db(std::size_t count) const {
    if (mse.empty()) throw UsageError("steady_state_db: empty curve");
    const std::size_t n = std::min(count, mse.size());
    double acc = 0.0;
    for (std::size_t i = mse.size() - n; i < mse.size(); ++i) acc += mse[i];
    return mse_to_db(acc / static_cast<double>(n));
}

const LearningCurve& ExperimentResult::curve(const std::string& id) const {
    for (const auto& c : curves)
        if (c.algorithm == id) return c;
    throw UsageError("no curve for algorithm '" + id + "'");
}

// ---------------------------------------------------------------------------
// Monte-Carlo driver

namespace {

struct RunOutcome {
    std::vector<std::vector<double>> squared_errors;    // per algorithm
    std::vector<std::vector<std::size_t>> dict_sizes;   // per algorithm, cklms only
    double snr_db = 0.0;
    double noise_stddev = 0.0;
    std::size_t dataset_size = 0;
    std::optional<json> snapshot;
    std::exception_ptr error;
};

} // namespace

RunData generate_run_data(const ExperimentConfig& cfg, std::size_t run) {
    SignalConfig signal = cfg.signal;
    signal.seed = derive_seed(cfg.master_seed, run, 0);
    const auto s = generate_input(signal);
    const auto q = channel_response(s, cfg.channel);
    RunData rd;
    rd.noise_stddev = cfg.snr_db ? noise_stddev_for_snr(mean_power(q), *cfg.snr_db) : cfg.channel.noise_stddev;
    const auto r = add_noise(q, rd.noise_stddev, derive_seed(cfg.master_seed, run, 1));
    rd.snr_db = measured_snr_db(q, r);
    rd.dataset = build_dataset(r, s, cfg.embedding);
    return rd;
}

namespace {

RunOutcome run_once(const ExperimentConfig& cfg, std::size_t run) {
    RunOutcome out;
    std::size_t alg_index = 0;
    try {
        RunData rd = generate_run_data(cfg, run);
        out.noise_stddev = rd.noise_stddev;
        out.snr_db = rd.snr_db;
        const Dataset& data = rd.dataset;
        out.dataset_size = data.size();

        bool snapshot_taken = false;
        for (; alg_index < cfg.algorithms.size(); ++alg_index) {
            const auto& alg = cfg.algorithms[alg_index];
            FilterRun fr = run_filter(data.inputs, data.targets, alg.filter);
            std::vector<double> sq(fr.records.size());
            std::vector<std::size_t> sizes;
            if (alg.filter.algorithm == Algorithm::cklms) sizes.resize(fr.records.size());
            for (std::size_t n = 0; n < fr.records.size(); ++n) {
                sq[n] = fr.records[n].squared_error;
                if (!sizes.empty()) sizes[n] = fr.records[n].dict_size;
            }
            if (run == 0 && !snapshot_taken && alg.filter.algorithm == Algorithm::cklms) {
                out.snapshot = to_snapshot(std::get<Cklms>(fr.final_state));
                snapshot_taken = true;
            }
            out.squared_errors.push_back(std::move(sq));
            out.dict_sizes.push_back(std::move(sizes));
        }
    } catch (const std::exception& e) {
        std::string where = "run " + std::to_string(run);
        if (alg_index < cfg.algorithms.size()) where += ", algorithm '" + cfg.algorithms[alg_index].id + "'";
        try {
            throw;
        } catch (const UsageError&) {
            out.error = std::make_exception_ptr(UsageError(where + ": " + e.what()));
        } catch (const NumericError&) {
            out.error = std::make_exception_ptr(NumericError(where + ": " + e.what()));
        } catch (...) {
            out.error = std::make_exception_ptr(std::runtime_error(where + ": " + e.what()));
        }
    }
    return out;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, Execution execution) {
    cfg.validate();
    const std::size_t runs = cfg.mc_runs;
    std::vector<RunOutcome> outcomes(runs);

    if (execution == Execution::parallel) {
        const auto n = static_cast<std::ptrdiff_t>(runs);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t r = 0; r < n; ++r)
            outcomes[static_cast<std::size_t>(r)] = run_once(cfg, static_cast<std::size_t>(r));
    } else {
        for (std::size_t r = 0; r < runs; ++r) outcomes[r] = run_once(cfg, r);
    }
    for (const auto& o : outcomes)
        if (o.error) std::rethrow_exception(o.error);

    ExperimentResult result;
    result.config = cfg;
    result.dataset_size = outcomes.front().dataset_size;
    result.cklms_snapshot = outcomes.front().snapshot;
    const std::size_t len = result.dataset_size;
    const double inv_runs = 1.0 / static_cast<double>(runs);

    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
        LearningCurve curve;
        curve.algorithm = cfg.algorithms[a].id;
        curve.kind = cfg.algorithms[a].filter.algorithm;
        curve.mse.assign(len, 0.0);
        const bool kernel = curve.kind == Algorithm::cklms;
        if (kernel) curve.mean_dict_size.assign(len, 0.0);

        for (const auto& o : outcomes) {
            const auto& sq = o.squared_errors[a];
            bool finite = true;
            for (std::size_t n = 0; n < len; ++n) {
                curve.mse[n] += sq[n];
                finite = finite && std::isfinite(sq[n]);
            }
            if (!finite) ++curve.non_finite_runs;
            if (kernel) {
                const auto& sizes = o.dict_sizes[a];
                std::size_t prev = 0;
                for (std::size_t n = 0; n < len; ++n) {
                    curve.mean_dict_size[n] += static_cast<double>(sizes[n]);
                    if (sizes[n] < prev || sizes[n] > prev + 1) curve.dict_monotone = false;
                    prev = sizes[n];
                }
                curve.final_dict_sizes.push_back(sizes.empty() ? 0 : sizes.back());
            }
        }
        for (auto& v : curve.mse) v *= inv_runs;
        for (auto& v : curve.mean_dict_size) v *= inv_runs;
        result.curves.push_back(std::move(curve));
    }
    for (const auto& o : outcomes) {
        result.run_snr_db.push_back(o.snr_db);
        result.run_noise_stddev.push_back(o.noise_stddev);
    }
    return result;
}

// ---------------------------------------------------------------------------
// output

OutputFormat output_format_from_string(std::string_view name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw UsageError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

namespace {

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    out += buf;
}

} // namespace

std::string to_csv(const ExperimentResult& result) {
    const std::size_t window = result.config.smoothing_window;
    std::vector<std::vector<double>> cols;
    std::string out = "iteration";
    for (const auto& c : result.curves) {
        out += "," + c.algorithm + "_mse_db";
        auto smoothed = c.smoothed_mse(window);
        for (auto& v : smoothed) v = mse_to_db(v);
        cols.push_back(std::move(smoothed));
    }
    out += '\n';
    for (std::size_t n = 0; n < result.dataset_size; ++n) {
        out += std::to_string(n + 1);
        for (const auto& col : cols) {
            out += ',';
            append_number(out, col[n]);
        }
        out += '\n';
    }
    return out;
}

json to_result_json(const ExperimentResult& result, std::optional<double> wall_clock_seconds) {
    const std::size_t window = result.config.smoothing_window;
    json curves = json::object();
    json dictionaries = json::object();
    json non_finite = json::object();
    for (const auto& c : result.curves) {
        const auto smoothed = c.smoothed_mse(window);
        std::vector<double> db(smoothed.size());
        for (std::size_t i = 0; i < db.size(); ++i) db[i] = mse_to_db(smoothed[i]);
        curves[c.algorithm] = {{"algorithm", std::string(to_string(c.kind))}, {"mse", smoothed}, {"mse_db", db}};
        non_finite[c.algorithm] = c.non_finite_runs;
        if (c.kind == Algorithm::cklms) {
            std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
            double mean = 0.0;
            for (auto s : c.final_dict_sizes) {
                lo = std::min(lo, s);
                hi = std::max(hi, s);
                mean += static_cast<double>(s);
            }
            mean /= static_cast<double>(c.final_dict_sizes.size());
            dictionaries[c.algorithm] = {{"final_sizes", c.final_dict_sizes},
                                         {"final_min", lo},
                                         {"final_max", hi},
                                         {"final_mean", mean},
                                         {"monotone", c.dict_monotone},
                                         {"mean_size", c.mean_dict_size}};
        }
    }

    double snr_mean = 0.0;
    for (auto v : result.run_snr_db) snr_mean += v;
    snr_mean /= static_cast<double>(result.run_snr_db.size());

    json metadata{
        {"dataset_size", result.dataset_size},
        {"mc_runs", result.config.mc_runs},
        {"db_floor", kDbFloor},
        {"measured_snr_db", {{"mean", snr_mean}, {"per_run", result.run_snr_db}}},
        {"noise_stddev", result.run_noise_stddev},
        {"dictionary", dictionaries},
        {"non_finite_runs", non_finite},
        {"seed_derivation", "splitmix64(splitmix64(master_seed ^ splitmix64(run + 1)) + stream); "
                            "stream 0 = input signal, 1 = channel noise"},
    };
    if (wall_clock_seconds) metadata["wall_clock_seconds"] = *wall_clock_seconds;

    return json{{"config", to_json(result.config)}, {"curves", curves}, {"metadata", metadata}};
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

void emit_results(const ExperimentResult& result, OutputFormat format, const std::filesystem::path& path,
                  std::optional<double> wall_clock_seconds) {
    if (result.curves.empty()) throw UsageError("emit_results: no curves to write");
    const std::string text =
        format == OutputFormat::csv ? to_csv(result) : dump_canonical(to_result_json(result, wall_clock_seconds));
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    os << text;
    os.flush();
    if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

} // namespace cklms

#include "cklms/channel.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <string>

namespace cklms {

void SignalConfig::validate() const {
    if (!(rho >= 0.0 && rho <= 1.0)) throw UsageError("signal rho must lie in [0, 1]");
    if (!std::isfinite(amplitude)) throw UsageError("signal amplitude must be finite");
    if (n_samples == 0) throw UsageError("signal n_samples must be >= 1");
}

void ChannelConfig::validate() const {
    if (linear_taps.empty()) throw UsageError("channel needs at least one linear tap");
    if (!(noise_stddev >= 0.0) || !std::isfinite(noise_stddev))
        throw UsageError("channel noise_stddev must be finite and nonnegative");
}

std::vector<cplx> generate_input(const SignalConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double re_scale = cfg.amplitude * std::sqrt(1.0 - cfg.rho * cfg.rho);
    const double im_scale = cfg.amplitude * cfg.rho;
    std::vector<cplx> s(cfg.n_samples);
    for (auto& v : s) {
        const double x = gauss(rng);
        const double y = gauss(rng);
        v = {re_scale * x, im_scale * y};
    }
    return s;
}

std::vector<cplx> channel_response(std::span<const cplx> s, const ChannelConfig& cfg) {
    cfg.validate();
    if (s.empty()) throw UsageError("channel input is empty");
    std::vector<cplx> q(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) {
        cplx t{};
        for (std::size_t k = 0; k < cfg.linear_taps.size() && k <= n; ++k) t += cfg.linear_taps[k] * s[n - k];
        cplx acc = t;
        cplx power = t;
        for (const auto& c : cfg.poly_coeffs) {
            power *= t;
            acc += c * power;
        }
        q[n] = acc;
    }
    return q;
}

std::vector<cplx> add_noise(std::span<const cplx> q, double stddev, std::uint64_t seed) {
    std::vector<cplx> r(q.begin(), q.end());
    if (stddev == 0.0) return r;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, stddev);
    for (auto& v : r) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v += cplx{re, im};
    }
    return r;
}

std::vector<cplx> apply_channel(std::span<const cplx> s, const ChannelConfig& cfg) {
    const auto q = channel_response(s, cfg);
    return add_noise(q, cfg.noise_stddev, cfg.seed);
}

double mean_power(std::span<const cplx> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return acc / static_cast<double>(x.size());
}

double noise_stddev_for_snr(double signal_power, double snr_db) {
    return std::sqrt(signal_power / std::pow(10.0, snr_db / 10.0) / 2.0);
}

double measured_snr_db(std::span<const cplx> q, std::span<const cplx> r) {
    require_same_size(q.size(), r.size(), "measured_snr_db");
    double noise = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) noise += std::norm(r[i] - q[i]);
    if (noise == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(mean_power(q) * static_cast<double>(q.size()) / noise);
}

Dataset build_dataset(std::span<const cplx> r, std::span<const cplx> s, const EmbeddingConfig& cfg) {
    require_same_size(r.size(), s.size(), "build_dataset r/s");
    const std::size_t N = r.size();
    const std::size_t L = cfg.filter_length;
    const std::size_t D = cfg.delay;
    if (N <= L + D)
        throw UsageError("build_dataset: need more than L + D = " + std::to_string(L + D) + " samples, got " +
                         std::to_string(N));

    const std::size_t first = L > D ? L - D : 0;
    const std::size_t last = N - 1 - D;
    Dataset out;
    for (std::size_t n = first; n <= last; ++n) {
        ComplexVector x(L + 1);
        for (std::size_t j = 0; j <= L; ++j) x[j] = r[n + D - j];
        out.inputs.push_back(std::move(x));
        out.targets.push_back(s[n]);
        out.times.push_back(n);
    }
    return out;
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    const std::size_t dim = data.inputs.empty() ? 0 : data.inputs.front().size();
    os << "n";
    for (std::size_t j = 0; j < dim; ++j) os << ",x" << j << "_re,x" << j << "_im";
    os << ",target_re,target_im\n";
    os << std::setprecision(17);
    for (std::size_t k = 0; k < data.size(); ++k) {
        os << data.times[k];
        for (const auto& v : data.inputs[k]) os << ',' << v.real() << ',' << v.imag();
        os << ',' << data.targets[k].real() << ',' << data.targets[k].imag() << '\n';
    }
    if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

} // namespace cklms

#ifndef CKLMS_CHANNEL_HPP
#define CKLMS_CHANNEL_HPP

// Synthetic data for the nonlinear channel-equalization benchmark.
//
//   s(n) = A (sqrt(1 - rho^2) X(n) + i rho Y(n)),  X, Y ~ N(0, 1) i.i.d.
//   t(n) = h0 s(n) + h1 s(n-1) + ...               (s(n) = 0 for n < 0)
//   q(n) = t(n) + c2 t(n)^2 + c3 t(n)^3 + ...
//   r(n) = q(n) + v(n),  v circular Gaussian, stddev per real component
//
// The equalizer sees x(n) = (r(n+D), r(n+D-1), ..., r(n+D-L)) and is trained
// on s(n). Indices are 0-based; sample n is kept when every index it touches
// lies in [0, N-1], i.e. for max(0, L-D) <= n <= N-1-D.

#include "cklms/types.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace cklms {

struct SignalConfig {
    double rho = 0.7071067811865476; // sqrt(2)/2: circular
    double amplitude = 0.70;
    std::size_t n_samples = 5000;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ChannelConfig {
    std::vector<cplx> linear_taps{{-0.9, 0.8}, {0.6, -0.7}};
    /// Coefficients of t^2, t^3, ... in the memoryless nonlinearity.
    std::vector<cplx> poly_coeffs{{0.1, 0.15}, {0.06, 0.05}};
    double noise_stddev = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EmbeddingConfig {
    std::size_t filter_length = 5; // L
    std::size_t delay = 2;         // D

    std::size_t input_dim() const noexcept { return filter_length + 1; }
};

struct Dataset {
    std::vector<ComplexVector> inputs;
    std::vector<cplx> targets;
    /// Time index n of each pair (target is s(n)).
    std::vector<std::size_t> times;

    std::size_t size() const noexcept { return targets.size(); }
};

std::vector<cplx> generate_input(const SignalConfig& cfg);

/// Noise-free channel output q(n).
std::vector<cplx> channel_response(std::span<const cplx> s, const ChannelConfig& cfg);

/// Adds circular complex Gaussian noise with the given per-component stddev.
std::vector<cplx> add_noise(std::span<const cplx> q, double stddev, std::uint64_t seed);

/// Observed r(n) = channel_response(s) + noise(cfg.noise_stddev, cfg.seed).
std::vector<cplx> apply_channel(std::span<const cplx> s, const ChannelConfig& cfg);

/// Mean |x|^2.
double mean_power(std::span<const cplx> x);

/// Per-component noise stddev giving the requested SNR against `signal_power`.
double noise_stddev_for_snr(double signal_power, double snr_db);

/// 10 log10(mean|q|^2 / mean|r - q|^2); +inf when r == q.
double measured_snr_db(std::span<const cplx> q, std::span<const cplx> r);

Dataset build_dataset(std::span<const cplx> r, std::span<const cplx> s, const EmbeddingConfig& cfg);

/// CSV header: n,x0_re,x0_im,...,xL_re,xL_im,target_re,target_im
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);

} // namespace cklms

#endif // CKLMS_CHANNEL_HPP

#include "cklms/filters.hpp"

#include <cmath>
#include <string>

namespace cklms {

void NoveltyConfig::validate() const {
    if (!(delta1 >= 0.0) || !(delta2 >= 0.0) || !std::isfinite(delta1) || !std::isfinite(delta2))
        throw UsageError("novelty thresholds must be finite and nonnegative");
}

std::string_view to_string(StepNormalization n) {
    return n == StepNormalization::none ? "none" : "self_kernel";
}

StepNormalization step_normalization_from_string(std::string_view name) {
    if (name == "none") return StepNormalization::none;
    if (name == "self_kernel") return StepNormalization::self_kernel;
    throw UsageError("unknown step normalization '" + std::string(name) + "' (expected none or self_kernel)");
}

void Dictionary::append(std::span<const cplx> center, cplx coefficient, double self_kernel) {
    if (center.empty()) throw UsageError("dictionary center must be non-empty");
    if (empty())
        dim_ = center.size();
    else
        require_same_size(dim_, center.size(), "dictionary append");
    centers_.insert(centers_.end(), center.begin(), center.end());
    coefficients_.push_back(coefficient);
    self_kernels_.push_back(self_kernel);
}

namespace {

void check_linear_params(double mu, double epsilon) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw UsageError("step size mu must be positive");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw UsageError("epsilon must be nonnegative");
}

void check_sample(std::span<const cplx> z, cplx d, std::size_t dim) {
    require_same_size(dim, z.size(), "linear filter input");
    if (!is_finite(d)) throw NumericError("non-finite desired response");
    for (const auto& v : z)
        if (!is_finite(v)) throw NumericError("non-finite input component");
}

} // namespace

Nclms::Nclms(std::size_t dim, double mu, double epsilon) : w_(dim), mu_(mu), epsilon_(epsilon) {
    check_linear_params(mu, epsilon);
}

cplx Nclms::predict(std::span<const cplx> z) const {
    require_same_size(w_.size(), z.size(), "nclms predict");
    return inner(z, w_);
}

StepRecord Nclms::step(std::span<const cplx> z, cplx d) {
    check_sample(z, d, w_.size());
    StepRecord rec;
    rec.prediction = inner(z, w_);
    rec.error = d - rec.prediction;
    rec.squared_error = std::norm(rec.error);

    double power = epsilon_;
    for (const auto& v : z) power += std::norm(v);
    // Zero regressor with eps = 0 carries no direction; leave w unchanged.
    if (power > 0.0) {
        const cplx scale = (mu_ / power) * std::conj(rec.error);
        for (std::size_t i = 0; i < z.size(); ++i) w_[i] += scale * z[i];
    }
    return rec;
}

WlNclms::WlNclms(std::size_t dim, double mu, double epsilon) : w_(dim), g_(dim), mu_(mu), epsilon_(epsilon) {
    check_linear_params(mu, epsilon);
}

cplx WlNclms::predict(std::span<const cplx> z) const {
    require_same_size(w_.size(), z.size(), "wl-nclms predict");
    cplx acc{};
    for (std::size_t i = 0; i < z.size(); ++i) acc += z[i] * std::conj(w_[i]) + std::conj(z[i]) * std::conj(g_[i]);
    return acc;
}

StepRecord WlNclms::step(std::span<const cplx> z, cplx d) {
    check_sample(z, d, w_.size());
    StepRecord rec;
    rec.prediction = predict(z);
    rec.error = d - rec.prediction;
    rec.squared_error = std::norm(rec.error);

    double power = 0.0;
    for (const auto& v : z) power += std::norm(v);
    power = epsilon_ + 2.0 * power;
    if (power > 0.0) {
        const cplx scale = (mu_ / power) * std::conj(rec.error);
        for (std::size_t i = 0; i < z.size(); ++i) {
            w_[i] += scale * z[i];
            g_[i] += scale * std::conj(z[i]);
        }
    }
    return rec;
}

std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::cklms: return "cklms";
    case Algorithm::nclms: return "nclms";
    case Algorithm::wl_nclms: return "wl_nclms";
    }
    return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
    if (name == "cklms") return Algorithm::cklms;
    if (name == "nclms") return Algorithm::nclms;
    if (name == "wl_nclms") return Algorithm::wl_nclms;
    throw UsageError("unknown algorithm '" + std::string(name) + "' (expected cklms, nclms or wl_nclms)");
}

namespace {

FilterState make_filter(const FilterConfig& cfg, std::size_t dim) {
    switch (cfg.algorithm) {
    case Algorithm::cklms:
        return Cklms(GaussianKernel(cfg.kernel), cfg.mu, cfg.novelty, cfg.normalization);
    case Algorithm::nclms: return Nclms(dim, cfg.mu, cfg.epsilon);
    case Algorithm::wl_nclms: return WlNclms(dim, cfg.mu, cfg.epsilon);
    }
    throw UsageError("unknown algorithm");
}

} // namespace

FilterRun run_filter(std::span<const ComplexVector> inputs, std::span<const cplx> targets,
                     const FilterConfig& config) {
    if (inputs.empty()) throw UsageError("run_filter: empty sample sequence");
    require_same_size(inputs.size(), targets.size(), "run_filter inputs/targets");
    const std::size_t dim = inputs.front().size();

    FilterRun run{{}, make_filter(config, dim)};
    run.records.reserve(inputs.size());
    for (std::size_t n = 0; n < inputs.size(); ++n) {
        try {
            require_same_size(dim, inputs[n].size(), "run_filter sample");
            run.records.push_back(
                std::visit([&](auto& f) { return f.step(inputs[n], targets[n]); }, run.final_state));
        } catch (const NumericError& e) {
            throw NumericError("iteration " + std::to_string(n) + ": " + e.what());
        } catch (const UsageError& e) {
            throw UsageError("iteration " + std::to_string(n) + ": " + e.what());
        }
    }
    return run;
}

} // namespace cklms

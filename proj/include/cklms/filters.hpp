#ifndef CKLMS_FILTERS_HPP
#define CKLMS_FILTERS_HPP

#include "cklms/kernel.hpp"
#include "cklms/types.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cklms {

/// Hermitian reproducing kernel usable by KernelLms.
template <class K>
concept ReproducingKernel = requires(const K& k, std::span<const cplx> z) {
    { k(z, z) } -> std::convertible_to<cplx>;
    { k.self(z) } -> std::convertible_to<double>;
    k.check_input(z);
};

/// Novelty-criterion thresholds. delta1 bounds the RKHS distance to the
/// nearest stored center, delta2 the prediction error magnitude. Both zero
/// admits every sample.
struct NoveltyConfig {
    double delta1 = 0.0;
    double delta2 = 0.0;

    void validate() const;
};

/// Step-size scaling for the kernel filter. `none` is the plain coefficient
/// rule a(n) = mu e(n); `self_kernel` divides by kappa(z(n), z(n)).
enum class StepNormalization { none, self_kernel };

std::string_view to_string(StepNormalization n);
StepNormalization step_normalization_from_string(std::string_view name);

/// Append-only list of centers z(k) with coefficients a(k). Centers are kept
/// in one contiguous buffer; kappa(z(k), z(k)) is cached per center.
class Dictionary {
public:
    Dictionary() = default;

    std::size_t size() const noexcept { return coefficients_.size(); }
    bool empty() const noexcept { return coefficients_.empty(); }
    /// Dimension of the stored centers; 0 while empty.
    std::size_t dim() const noexcept { return dim_; }

    std::span<const cplx> center(std::size_t k) const noexcept {
        return std::span<const cplx>(centers_).subspan(k * dim_, dim_);
    }
    std::span<const cplx> centers() const noexcept { return centers_; }
    std::span<const cplx> coefficients() const noexcept { return coefficients_; }
    std::span<const double> self_kernels() const noexcept { return self_kernels_; }

    void append(std::span<const cplx> center, cplx coefficient, double self_kernel);

private:
    std::size_t dim_ = 0;
    std::vector<cplx> centers_;
    std::vector<cplx> coefficients_;
    std::vector<double> self_kernels_;
};

struct StepRecord {
    cplx prediction;
    cplx error;
    double squared_error = 0.0;
    bool admitted = false;
    std::size_t dict_size = 0;
};

/// Complex kernel LMS with novelty-criterion sparsification.
///
/// Prediction is sum_k a(k) kappa(z, z(k)); the error e = d - prediction is
/// stored as a(n) = mu e(n) when the sample is admitted. A sample is admitted
/// when the dictionary is empty, or when its RKHS distance to every center is
/// >= delta1 and |e| >= delta2 (tested in that order).
template <ReproducingKernel Kernel>
class KernelLms {
public:
    KernelLms(Kernel kernel, double mu, NoveltyConfig novelty = {},
              StepNormalization normalization = StepNormalization::none)
        : kernel_(std::move(kernel)), mu_(mu), novelty_(novelty), normalization_(normalization) {
        if (!(mu_ > 0.0) || !std::isfinite(mu_)) throw UsageError("step size mu must be positive");
        novelty_.validate();
    }

    /// Rebuilds a filter from a stored dictionary (see snapshot.hpp).
    static KernelLms restore(Kernel kernel, double mu, NoveltyConfig novelty, StepNormalization normalization,
                             Dictionary dictionary, std::size_t iteration) {
        KernelLms f(std::move(kernel), mu, novelty, normalization);
        if (dictionary.size() > iteration) throw UsageError("dictionary larger than iteration count");
        f.dict_ = std::move(dictionary);
        f.iteration_ = iteration;
        return f;
    }

    cplx predict(std::span<const cplx> z) const {
        check_dimension(z);
        if (dict_.empty()) return {};
        std::vector<cplx> row(dict_.size());
        kernel_row(kernel_, z, dict_.centers(), dict_.dim(), std::span<cplx>(row));
        return expand(row);
    }

    StepRecord step(std::span<const cplx> z, cplx d) {
        if (!is_finite(d)) throw NumericError("non-finite desired response");
        for (const auto& v : z)
            if (!is_finite(v)) throw NumericError("non-finite input component");
        check_dimension(z);
        kernel_.check_input(z);

        StepRecord rec;
        const double kzz = kernel_.self(z);
        bool admit = true;
        if (!dict_.empty()) {
            row_.resize(dict_.size());
            kernel_row(kernel_, z, dict_.centers(), dict_.dim(), std::span<cplx>(row_));
            rec.prediction = expand(row_);
            rec.error = d - rec.prediction;
            // Re kappa(c, z) == Re kappa(z, c) for a Hermitian kernel.
            double nearest = std::numeric_limits<double>::infinity();
            const auto self = dict_.self_kernels();
            for (std::size_t k = 0; k < row_.size(); ++k) {
                const double dist_sq = std::max(0.0, kzz + self[k] - 2.0 * row_[k].real());
                nearest = std::min(nearest, dist_sq);
            }
            if (std::sqrt(nearest) < novelty_.delta1)
                admit = false;
            else if (std::abs(rec.error) < novelty_.delta2)
                admit = false;
        } else {
            rec.prediction = {};
            rec.error = d;
        }
        rec.squared_error = std::norm(rec.error);

        if (admit) {
            cplx a = mu_ * rec.error;
            if (normalization_ == StepNormalization::self_kernel) a /= kzz;
            dict_.append(z, a, kzz);
        }
        ++iteration_;
        rec.admitted = admit;
        rec.dict_size = dict_.size();
        return rec;
    }

    const Dictionary& dictionary() const noexcept { return dict_; }
    const Kernel& kernel() const noexcept { return kernel_; }
    std::size_t iteration() const noexcept { return iteration_; }
    double mu() const noexcept { return mu_; }
    const NoveltyConfig& novelty() const noexcept { return novelty_; }
    StepNormalization normalization() const noexcept { return normalization_; }

private:
    void check_dimension(std::span<const cplx> z) const {
        if (z.empty()) throw UsageError("empty input vector");
        if (!dict_.empty()) require_same_size(dict_.dim(), z.size(), "kernel LMS input");
    }

    cplx expand(std::span<const cplx> row) const noexcept {
        const auto a = dict_.coefficients();
        cplx acc{};
        for (std::size_t k = 0; k < row.size(); ++k) acc += a[k] * row[k];
        return acc;
    }

    Kernel kernel_;
    double mu_;
    NoveltyConfig novelty_;
    StepNormalization normalization_;
    Dictionary dict_;
    std::size_t iteration_ = 0;
    std::vector<cplx> row_;
};

using Cklms = KernelLms<GaussianKernel>;

/// Normalized complex LMS: prediction <z, w>, w += mu / (eps + |z|^2) conj(e) z.
class Nclms {
public:
    Nclms(std::size_t dim, double mu, double epsilon = 1e-6);

    cplx predict(std::span<const cplx> z) const;
    StepRecord step(std::span<const cplx> z, cplx d);

    const ComplexVector& weights() const noexcept { return w_; }
    ComplexVector& weights() noexcept { return w_; }
    double mu() const noexcept { return mu_; }
    double epsilon() const noexcept { return epsilon_; }

private:
    ComplexVector w_;
    double mu_;
    double epsilon_;
};

/// Widely linear normalized complex LMS: prediction <z, w> + <z*, g>.
/// Equivalent to Nclms on the augmented regressor (z, z*), so the step is
/// normalised by eps + 2 |z|^2.
class WlNclms {
public:
    WlNclms(std::size_t dim, double mu, double epsilon = 1e-6);

    cplx predict(std::span<const cplx> z) const;
    StepRecord step(std::span<const cplx> z, cplx d);

    const ComplexVector& weights() const noexcept { return w_; }
    const ComplexVector& conj_weights() const noexcept { return g_; }
    ComplexVector& weights() noexcept { return w_; }
    ComplexVector& conj_weights() noexcept { return g_; }
    double mu() const noexcept { return mu_; }
    double epsilon() const noexcept { return epsilon_; }

private:
    ComplexVector w_;
    ComplexVector g_;
    double mu_;
    double epsilon_;
};

enum class Algorithm { cklms, nclms, wl_nclms };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);

struct FilterConfig {
    Algorithm algorithm = Algorithm::cklms;
    double mu = 1.0;
    KernelSpec kernel = KernelSpec::complex_gaussian(5.0);
    NoveltyConfig novelty{};
    StepNormalization normalization = StepNormalization::none;
    double epsilon = 1e-6; // linear baselines only
};

using FilterState = std::variant<Cklms, Nclms, WlNclms>;

struct FilterRun {
    std::vector<StepRecord> records;
    FilterState final_state;
};

/// Feeds (inputs[n], targets[n]) to a fresh filter in order. Errors raised by
/// a step are rethrown with the 0-based iteration index in the message.
FilterRun run_filter(std::span<const ComplexVector> inputs, std::span<const cplx> targets,
                     const FilterConfig& config);

} // namespace cklms

#endif // CKLMS_FILTERS_HPP

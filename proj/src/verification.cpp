#include "cklms/verification.hpp"

#include "cklms/kernel.hpp"
#include "cklms/wirtinger.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cklms::verify {

namespace {

using wirtinger::max_abs_diff;

ComplexVector random_complex(std::size_t dim, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale * std::sqrt(0.5));
    ComplexVector v(dim);
    for (auto& c : v) c = {g(rng), g(rng)};
    return v;
}

ComplexVector random_real(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexVector v(dim);
    for (auto& c : v) c = {g(rng), 0.0};
    return v;
}

double norm(const ComplexVector& v) { return std::sqrt(v.norm_sq()); }

CheckResult make(std::string name, double measured, double threshold) {
    return {std::move(name), measured <= threshold, measured, threshold};
}

} // namespace

CheckResult lms_gradient_identity(std::size_t instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> dims(1, 8);
    double worst = 0.0;
    for (std::size_t i = 0; i < instances; ++i) {
        const std::size_t m = dims(rng);
        const ComplexVector phi = random_complex(m, rng);
        const ComplexVector w = random_complex(m, rng);
        std::normal_distribution<double> g(0.0, 1.0);
        const cplx d{g(rng), g(rng)};
        const auto numeric = wirtinger::numeric_wirtinger_gradient(wirtinger::lms_loss(phi, d), w);
        const auto exact = wirtinger::lms_loss_conj_gradient(phi, d, w);
        ComplexVector diff = numeric.conj_r_derivative;
        for (std::size_t k = 0; k < m; ++k) diff[k] -= exact[k];
        worst = std::max(worst, norm(diff) / std::max(norm(exact), 1e-300));
    }
    return make("lms gradient identity (relative)", worst, 1e-6);
}

std::vector<CheckResult> battery_gradients(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto battery = wirtinger::standard_battery(dim, seed ^ 0x5eedULL);
    std::vector<CheckResult> out;
    double worst_analytic = 0.0, worst_holo = 0.0, worst_anti = 0.0, worst_real = 0.0;
    for (int probe = 0; probe < 5; ++probe) {
        const ComplexVector z = random_complex(dim, rng);
        for (const auto& f : battery) {
            const auto g = wirtinger::numeric_wirtinger_gradient(f.fn, z);
            const auto a = f.analytic(z);
            double scale = 1.0;
            for (std::size_t i = 0; i < dim; ++i)
                scale = std::max({scale, std::abs(a.r_derivative[i]), std::abs(a.conj_r_derivative[i])});
            worst_analytic = std::max(worst_analytic, max_abs_diff(g.r_derivative, a.r_derivative) / scale);
            worst_analytic = std::max(worst_analytic, max_abs_diff(g.conj_r_derivative, a.conj_r_derivative) / scale);
            const ComplexVector zero(dim);
            if (f.holomorphic) worst_holo = std::max(worst_holo, max_abs_diff(g.conj_r_derivative, zero));
            if (f.antiholomorphic) worst_anti = std::max(worst_anti, max_abs_diff(g.r_derivative, zero));
            if (f.real_valued)
                worst_real = std::max(worst_real, max_abs_diff(g.conj_r_derivative, g.r_derivative.conj()) / scale);
        }
    }
    out.push_back(make("battery numeric vs closed-form gradients", worst_analytic, 1e-6));
    out.push_back(make("holomorphic: conjugate R-derivative vanishes", worst_holo, 1e-6));
    out.push_back(make("anti-holomorphic: R-derivative vanishes", worst_anti, 1e-6));
    out.push_back(make("real-valued: conj R-derivative = conj(R-derivative)", worst_real, 1e-6));
    return out;
}

CheckResult inner_product_rules(std::size_t dim, std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const ComplexVector w = random_complex(dim, rng);
        const ComplexVector probe = random_complex(dim, rng);
        worst = std::max(worst, wirtinger::check_inner_product_gradients(w, probe));
    }
    return make("inner-product gradient rules", worst, 1e-6);
}

CheckResult taylor_battery(std::size_t dim, double h_norm, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto battery = wirtinger::standard_battery(dim, seed ^ 0x5eedULL);
    double worst = 0.0;
    for (int probe = 0; probe < 5; ++probe) {
        const ComplexVector z = random_complex(dim, rng);
        ComplexVector h = random_complex(dim, rng);
        const double n = norm(h);
        for (auto& c : h) c *= h_norm / n;
        for (const auto& f : battery) worst = std::max(worst, wirtinger::check_taylor_first_order(f.fn, z, h));
    }
    return make("first-order Taylor residual", worst, 1e-6);
}

CheckResult taylor_quadratic_scaling(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const wirtinger::ComplexFunctional T = [](const ComplexVector& z) {
        return z[0] * std::conj(z[0]) * std::conj(z[0]);
    };
    const ComplexVector z{{1.0, 1.0}};
    ComplexVector dir = random_complex(1, rng);
    const double n = norm(dir);
    ComplexVector h_big{dir[0] * (1e-3 / n)};
    ComplexVector h_small{dir[0] * (1e-4 / n)};
    const double ratio = wirtinger::check_taylor_first_order(T, z, h_big) /
                         wirtinger::check_taylor_first_order(T, z, h_small);
    // Pass band: the ratio of an O(|h|^2) remainder lies near 100.
    CheckResult r{"Taylor remainder scales quadratically (ratio ~100)", ratio > 80.0 && ratio < 120.0, ratio, 100.0};
    return r;
}

CheckResult steepest_ascent_trials(std::size_t trials, std::size_t directions, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<wirtinger::TestFunction> real_fns;
    for (auto& f : wirtinger::standard_battery(4, seed ^ 0xa5cULL))
        if (f.real_valued) real_fns.push_back(std::move(f));

    std::size_t passed = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto& f = real_fns[t % real_fns.size()];
        const ComplexVector z = random_complex(4, rng);
        if (wirtinger::check_steepest_ascent(f.fn, z, directions, rng())) ++passed;
    }
    const double failures = static_cast<double>(trials - passed);
    return make("steepest ascent along conjugate gradient (" + std::to_string(passed) + "/" +
                    std::to_string(trials) + " trials)",
                failures, 0.0);
}

std::vector<CheckResult> wirtinger_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;
    out.push_back(lms_gradient_identity(100, seed));
    for (auto& r : battery_gradients(3, seed + 1)) out.push_back(std::move(r));
    out.push_back(inner_product_rules(5, 20, seed + 2));
    out.push_back(taylor_battery(3, 1e-4, seed + 3));
    out.push_back(taylor_quadratic_scaling(seed + 4));
    out.push_back(steepest_ascent_trials(50, 200, seed + 5));
    return out;
}

CheckResult kernel_hermitian_symmetry(std::size_t pairs, double sigma, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto spec = KernelSpec::complex_gaussian(sigma);
    double worst = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const ComplexVector z = random_complex(dim, rng);
        const ComplexVector w = random_complex(dim, rng);
        const cplx kzw = eval_complex_gaussian(z, w, spec);
        const cplx kwz = eval_complex_gaussian(w, z, spec);
        worst = std::max(worst, std::abs(kwz - std::conj(kzw)) / std::abs(kzw));
    }
    return make("Hermitian symmetry kappa(w,z) = conj kappa(z,w) (relative)", worst, 1e-12);
}

CheckResult kernel_restriction_identity(std::size_t pairs, double sigma, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto cspec = KernelSpec::complex_gaussian(sigma);
    const auto rspec = KernelSpec::real_gaussian(sigma);
    double worst = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const ComplexVector x = random_real(dim, rng);
        const ComplexVector y = random_real(dim, rng);
        const cplx kc = eval_complex_gaussian(x, y, cspec);
        const double kr = eval_real_gaussian(x, y, rspec);
        worst = std::max(worst, std::abs(kc - cplx{kr, 0.0}) / kr);
    }
    return make("restriction to real inputs equals real Gaussian (relative)", worst, 1e-14);
}

std::vector<CheckResult> gram_validity(std::size_t n_points, double sigma, std::size_t dim, bool complex_family,
                                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ComplexVector> points;
    for (std::size_t i = 0; i < n_points; ++i)
        points.push_back(complex_family ? random_complex(dim, rng) : random_real(dim, rng));
    const auto spec = complex_family ? KernelSpec::complex_gaussian(sigma) : KernelSpec::real_gaussian(sigma);
    const GramMatrix K = gram(points, spec);
    const std::string tag = std::string(complex_family ? "complex" : "real") + " Gaussian, N=" +
                            std::to_string(n_points) + ", sigma=" + std::to_string(sigma).substr(0, 4);
    std::vector<CheckResult> out;
    out.push_back(make("Gram Hermitian (" + tag + ")", hermitian_defect(K.entries), 1e-12));
    const double scaled = -min_eigenvalue(K.entries) / (1.0 + std::abs(K.entries.trace()));
    CheckResult psd{"Gram PSD, -min eig / (1 + |trace|) (" + tag + ")", is_positive_semidefinite(K, 1e-10),
                    scaled, 1e-10};
    out.push_back(psd);
    return out;
}

std::vector<CheckResult> kernel_suite(std::size_t n_points, double sigma, std::uint64_t seed) {
    std::vector<CheckResult> out;
    out.push_back(kernel_hermitian_symmetry(1000, sigma, 6, seed));
    out.push_back(kernel_restriction_identity(1000, sigma, 6, seed + 1));
    for (auto& r : gram_validity(n_points, sigma, 6, true, seed + 2)) out.push_back(std::move(r));
    for (auto& r : gram_validity(n_points, sigma, 6, false, seed + 3)) out.push_back(std::move(r));
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

} // namespace cklms::verify

#ifndef CKLMS_VERIFICATION_HPP
#define CKLMS_VERIFICATION_HPP

// Seeded numerical self-checks surfaced by `cklms verify-wirtinger` and
// `cklms verify-kernel`. Each check reports the measured worst-case value
// next to the threshold it was held to.

#include <cstdint>
#include <string>
#include <vector>

namespace cklms::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
};

/// Numeric conjugate R-derivative of |d - <phi, w>|^2 against -conj(e) phi
/// on `instances` random problems in C^m, m in [1, 8]; relative error.
CheckResult lms_gradient_identity(std::size_t instances, std::uint64_t seed);

/// Numeric vs closed-form gradients of the standard battery, plus the
/// holomorphic / anti-holomorphic / real-valued structure checks.
std::vector<CheckResult> battery_gradients(std::size_t dim, std::uint64_t seed);

/// Inner-product gradient rules on random w, probe in C^dim.
CheckResult inner_product_rules(std::size_t dim, std::size_t trials, std::uint64_t seed);

/// First-order Taylor residual of every battery function with |h| = h_norm.
CheckResult taylor_battery(std::size_t dim, double h_norm, std::uint64_t seed);

/// Residual ratio of z (z*)^2 for |h| = 1e-3 vs 1e-4 (ideal: 100).
CheckResult taylor_quadratic_scaling(std::uint64_t seed);

/// Steepest-ascent check on `trials` real-valued functionals (cycling the
/// real-valued battery entries) against `directions` random directions.
CheckResult steepest_ascent_trials(std::size_t trials, std::size_t directions, std::uint64_t seed);

std::vector<CheckResult> wirtinger_suite(std::uint64_t seed);

/// max relative |kappa(w,z) - conj(kappa(z,w))| over random pairs.
CheckResult kernel_hermitian_symmetry(std::size_t pairs, double sigma, std::size_t dim, std::uint64_t seed);

/// Complex vs real Gaussian kernel on real inputs, max relative difference.
CheckResult kernel_restriction_identity(std::size_t pairs, double sigma, std::size_t dim, std::uint64_t seed);

/// Gram matrix of n random points: Hermitian defect and min eigenvalue
/// relative to (1 + |trace|). Two results: hermitian, psd.
std::vector<CheckResult> gram_validity(std::size_t n_points, double sigma, std::size_t dim, bool complex_family,
                                       std::uint64_t seed);

std::vector<CheckResult> kernel_suite(std::size_t n_points, double sigma, std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace cklms::verify

#endif // CKLMS_VERIFICATION_HPP

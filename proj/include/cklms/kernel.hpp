#ifndef CKLMS_KERNEL_HPP
#define CKLMS_KERNEL_HPP

#include "cklms/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cklms {

enum class KernelFamily { complex_gaussian, real_gaussian };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

struct KernelSpec {
    KernelFamily family = KernelFamily::complex_gaussian;
    double sigma = 1.0;

    static KernelSpec complex_gaussian(double sigma) { return {KernelFamily::complex_gaussian, sigma}; }
    static KernelSpec real_gaussian(double sigma) { return {KernelFamily::real_gaussian, sigma}; }

    /// Throws UsageError unless sigma is finite and positive.
    void validate() const;
};

/// exp(-sum_i (z_i - conj(w_i))^2 / sigma^2), no argument checking.
///
/// The exponent is accumulated component-wise so that swapping the arguments
/// negates its imaginary part exactly; Hermitian symmetry then holds bitwise.
inline cplx complex_gaussian_unchecked(std::span<const cplx> z, std::span<const cplx> w,
                                       double inv_sigma_sq) noexcept {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double a = z[i].real() - w[i].real();
        const double b = z[i].imag() + w[i].imag();
        re += a * a - b * b;
        im += 2.0 * a * b;
    }
    const double mag = std::exp(-re * inv_sigma_sq);
    const double phase = -im * inv_sigma_sq;
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

inline double real_gaussian_unchecked(std::span<const cplx> x, std::span<const cplx> y,
                                      double inv_sigma_sq) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i].real() - y[i].real();
        acc += d * d;
    }
    return std::exp(-acc * inv_sigma_sq);
}

/// Complex Gaussian kernel. Throws UsageError on dimension mismatch or a
/// spec of the wrong family, NumericError when the value overflows.
cplx eval_complex_gaussian(const ComplexVector& z, const ComplexVector& w, const KernelSpec& spec);

/// Real Gaussian kernel on real-valued inputs; nonzero imaginary parts are a
/// usage error.
double eval_real_gaussian(const ComplexVector& x, const ComplexVector& y, const KernelSpec& spec);

/// Dispatches on spec.family.
cplx eval_kernel(const ComplexVector& z, const ComplexVector& w, const KernelSpec& spec);

/// Callable Gaussian kernel used by the filters. operator() does not check
/// dimensions; callers validate once per input with check_input().
class GaussianKernel {
public:
    explicit GaussianKernel(KernelSpec spec);

    cplx operator()(std::span<const cplx> z, std::span<const cplx> c) const noexcept {
        if (spec_.family == KernelFamily::complex_gaussian)
            return complex_gaussian_unchecked(z, c, inv_sigma_sq_);
        return {real_gaussian_unchecked(z, c, inv_sigma_sq_), 0.0};
    }

    /// kappa(z, z); always real for a Hermitian kernel.
    double self(std::span<const cplx> z) const noexcept { return (*this)(z, z).real(); }

    void check_input(std::span<const cplx> z) const;

    const KernelSpec& spec() const noexcept { return spec_; }

private:
    KernelSpec spec_;
    double inv_sigma_sq_;
};

/// Rows shorter than this are evaluated without spawning a team.
inline constexpr std::size_t kParallelRowThreshold = 1024;

/// out[k] = kernel(z, center_k) where center_k = centers[k*dim .. (k+1)*dim).
/// Reference implementation for kernel_row.
template <class Kernel>
void kernel_row_serial(const Kernel& kernel, std::span<const cplx> z, std::span<const cplx> centers,
                       std::size_t dim, std::span<cplx> out) {
    const std::size_t n = out.size();
    for (std::size_t k = 0; k < n; ++k) out[k] = kernel(z, centers.subspan(k * dim, dim));
}

/// OpenMP version of kernel_row_serial. Each entry is computed independently,
/// so the result is bitwise identical to the serial path for any team size.
template <class Kernel>
void kernel_row(const Kernel& kernel, std::span<const cplx> z, std::span<const cplx> centers,
                std::size_t dim, std::span<cplx> out) {
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (out.size() >= kParallelRowThreshold)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        out[uk] = kernel(z, centers.subspan(uk * dim, dim));
    }
}

struct GramMatrix {
    Eigen::MatrixXcd entries;
    std::vector<ComplexVector> points;

    std::size_t size() const noexcept { return points.size(); }
};

/// K[i][j] = kappa(points[i], points[j]); rows distributed over OpenMP threads.
GramMatrix gram(const std::vector<ComplexVector>& points, const KernelSpec& spec);

/// Single-threaded reference for gram().
GramMatrix gram_serial(const std::vector<ComplexVector>& points, const KernelSpec& spec);

/// max |K[i][j] - conj(K[j][i])| / max(1, |K[i][j]|).
double hermitian_defect(const Eigen::MatrixXcd& K);

/// Smallest eigenvalue of a Hermitian matrix (lower triangle is read).
double min_eigenvalue(const Eigen::MatrixXcd& K);

/// True iff the smallest eigenvalue is >= -tol * (1 + |trace|).
/// Throws UsageError when K is not square or not Hermitian to 1e-12 relative.
bool is_positive_semidefinite(const Eigen::MatrixXcd& K, double tol);
bool is_positive_semidefinite(const GramMatrix& K, double tol);

/// ||Phi(z) - Phi(c)||^2 = kappa(z,z) + kappa(c,c) - 2 Re kappa(c,z), clamped at 0.
double rkhs_distance_sq(const ComplexVector& z, const ComplexVector& c, const KernelSpec& spec);

} // namespace cklms

#endif // CKLMS_KERNEL_HPP

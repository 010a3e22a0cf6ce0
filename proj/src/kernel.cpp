#include "cklms/kernel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace cklms {

std::string_view to_string(KernelFamily family) {
    switch (family) {
    case KernelFamily::complex_gaussian: return "complex_gaussian";
    case KernelFamily::real_gaussian: return "real_gaussian";
    }
    return "unknown";
}

KernelFamily kernel_family_from_string(std::string_view name) {
    if (name == "complex_gaussian") return KernelFamily::complex_gaussian;
    if (name == "real_gaussian") return KernelFamily::real_gaussian;
    throw UsageError("unknown kernel family '" + std::string(name) +
                     "' (expected complex_gaussian or real_gaussian)");
}

void KernelSpec::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw UsageError("kernel sigma must be a positive finite number");
}

namespace {

void require_family(const KernelSpec& spec, KernelFamily family, const char* what) {
    spec.validate();
    if (spec.family != family)
        throw UsageError(std::string(what) + ": kernel spec has family " +
                         std::string(to_string(spec.family)));
}

void require_real(const ComplexVector& x, const char* what) {
    if (!x.is_real())
        throw UsageError(std::string(what) + ": real Gaussian kernel needs real-valued input");
}

} // namespace

cplx eval_complex_gaussian(const ComplexVector& z, const ComplexVector& w, const KernelSpec& spec) {
    require_family(spec, KernelFamily::complex_gaussian, "eval_complex_gaussian");
    require_same_size(z.size(), w.size(), "eval_complex_gaussian");
    const cplx k = complex_gaussian_unchecked(z, w, 1.0 / (spec.sigma * spec.sigma));
    if (!is_finite(k)) throw NumericError("eval_complex_gaussian: kernel value overflowed");
    return k;
}

double eval_real_gaussian(const ComplexVector& x, const ComplexVector& y, const KernelSpec& spec) {
    require_family(spec, KernelFamily::real_gaussian, "eval_real_gaussian");
    require_same_size(x.size(), y.size(), "eval_real_gaussian");
    require_real(x, "eval_real_gaussian");
    require_real(y, "eval_real_gaussian");
    return real_gaussian_unchecked(x, y, 1.0 / (spec.sigma * spec.sigma));
}

cplx eval_kernel(const ComplexVector& z, const ComplexVector& w, const KernelSpec& spec) {
    if (spec.family == KernelFamily::complex_gaussian) return eval_complex_gaussian(z, w, spec);
    return {eval_real_gaussian(z, w, spec), 0.0};
}

GaussianKernel::GaussianKernel(KernelSpec spec) : spec_(spec) {
    spec_.validate();
    inv_sigma_sq_ = 1.0 / (spec_.sigma * spec_.sigma);
}

void GaussianKernel::check_input(std::span<const cplx> z) const {
    if (spec_.family != KernelFamily::real_gaussian) return;
    for (const auto& v : z)
        if (v.imag() != 0.0)
            throw UsageError("real Gaussian kernel needs real-valued input");
}

namespace {

void check_points(const std::vector<ComplexVector>& points, const KernelSpec& spec) {
    spec.validate();
    if (points.empty()) throw UsageError("gram: point list is empty");
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        require_same_size(dim, p.size(), "gram");
        if (spec.family == KernelFamily::real_gaussian) require_real(p, "gram");
    }
}

} // namespace

GramMatrix gram(const std::vector<ComplexVector>& points, const KernelSpec& spec) {
    check_points(points, spec);
    const GaussianKernel kernel(spec);
    const auto n = static_cast<Eigen::Index>(points.size());
    GramMatrix out{Eigen::MatrixXcd(n, n), points};
#pragma omp parallel for schedule(dynamic, 4)
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out.entries(i, j) = kernel(points[static_cast<std::size_t>(i)],
                                       points[static_cast<std::size_t>(j)]);
    return out;
}

GramMatrix gram_serial(const std::vector<ComplexVector>& points, const KernelSpec& spec) {
    check_points(points, spec);
    const GaussianKernel kernel(spec);
    const auto n = static_cast<Eigen::Index>(points.size());
    GramMatrix out{Eigen::MatrixXcd(n, n), points};
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out.entries(i, j) = kernel(points[static_cast<std::size_t>(i)],
                                       points[static_cast<std::size_t>(j)]);
    return out;
}

double hermitian_defect(const Eigen::MatrixXcd& K) {
    if (K.rows() != K.cols()) throw UsageError("matrix is not square");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < K.rows(); ++i)
        for (Eigen::Index j = i; j < K.cols(); ++j) {
            const double scale = std::max(1.0, std::abs(K(i, j)));
            worst = std::max(worst, std::abs(K(i, j) - std::conj(K(j, i))) / scale);
        }
    return worst;
}

double min_eigenvalue(const Eigen::MatrixXcd& K) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(K, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("eigenvalue solver did not converge");
    return solver.eigenvalues().minCoeff();
}

bool is_positive_semidefinite(const Eigen::MatrixXcd& K, double tol) {
    if (K.rows() == 0) throw UsageError("is_positive_semidefinite: empty matrix");
    if (hermitian_defect(K) > 1e-12) throw UsageError("is_positive_semidefinite: matrix is not Hermitian");
    const double trace = std::abs(K.trace());
    return min_eigenvalue(K) >= -tol * (1.0 + trace);
}

bool is_positive_semidefinite(const GramMatrix& K, double tol) {
    return is_positive_semidefinite(K.entries, tol);
}

double rkhs_distance_sq(const ComplexVector& z, const ComplexVector& c, const KernelSpec& spec) {
    require_same_size(z.size(), c.size(), "rkhs_distance_sq");
    const double kzz = eval_kernel(z, z, spec).real();
    const double kcc = eval_kernel(c, c, spec).real();
    const double cross = eval_kernel(c, z, spec).real();
    return std::max(0.0, kzz + kcc - 2.0 * cross);
}

} // namespace cklms

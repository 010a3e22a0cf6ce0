#ifndef CKLMS_TYPES_HPP
#define CKLMS_TYPES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cklms {

using cplx = std::complex<double>;

/// Caller violated a precondition (dimension mismatch, bad parameter, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite input or evaluation result.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed-length vector in C^n, n >= 1.
class ComplexVector {
public:
    explicit ComplexVector(std::size_t n) : data_(n) { check_nonempty(); }
    ComplexVector(std::initializer_list<cplx> values) : data_(values) { check_nonempty(); }
    explicit ComplexVector(std::vector<cplx> values) : data_(std::move(values)) { check_nonempty(); }
    explicit ComplexVector(std::span<const cplx> values) : data_(values.begin(), values.end()) {
        check_nonempty();
    }

    /// Real vector embedded with zero imaginary parts.
    static ComplexVector from_real(std::span<const double> values) {
        std::vector<cplx> out(values.begin(), values.end());
        return ComplexVector(std::move(out));
    }

    std::size_t size() const noexcept { return data_.size(); }
    cplx& operator[](std::size_t i) noexcept { return data_[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return data_[i]; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    std::span<const cplx> view() const noexcept { return data_; }
    std::span<cplx> view() noexcept { return data_; }
    operator std::span<const cplx>() const noexcept { return data_; }

    bool is_real() const noexcept {
        for (const auto& v : data_)
            if (v.imag() != 0.0) return false;
        return true;
    }

    bool is_finite() const noexcept {
        for (const auto& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    ComplexVector conj() const {
        ComplexVector out(*this);
        for (auto& v : out.data_) v = std::conj(v);
        return out;
    }

    double norm_sq() const noexcept {
        double acc = 0.0;
        for (const auto& v : data_) acc += std::norm(v);
        return acc;
    }

    friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

private:
    void check_nonempty() const {
        if (data_.empty()) throw UsageError("ComplexVector must have length >= 1");
    }

    std::vector<cplx> data_;
};

// <a, b> = sum a_i * conj(b_i), linear in the first slot.
inline cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
    return acc;
}

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw UsageError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
}

inline bool is_finite(cplx v) noexcept {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

} // namespace cklms

#endif // CKLMS_TYPES_HPP

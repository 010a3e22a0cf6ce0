#ifndef CKLMS_WIRTINGER_HPP
#define CKLMS_WIRTINGER_HPP

// Finite-difference checks of Wirtinger-calculus identities on C^n.
//
// A functional T(z) = u(x, y) + i v(x, y) has
//   dT/dz  = 1/2 (u_x + v_y) + i/2 (v_x - u_y)
//   dT/dz* = 1/2 (u_x - v_y) + i/2 (v_x + u_y)
// evaluated component-wise. Real-valued T increases fastest along dT/dz*.

#include "cklms/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cklms::wirtinger {

using ComplexFunctional = std::function<cplx(const ComplexVector&)>;

inline constexpr double kDefaultStep = 1e-5;

struct WirtingerGradient {
    ComplexVector r_derivative;      // dT/dz
    ComplexVector conj_r_derivative; // dT/dz*
};

/// Central differences on each of the 2n real coordinates. Throws
/// NumericError if T is non-finite at a probe point, UsageError if step <= 0.
WirtingerGradient numeric_wirtinger_gradient(const ComplexFunctional& T, const ComplexVector& z,
                                             double step = kDefaultStep);

/// Worst absolute deviation of the numeric gradients of <f,w>, <w,f>, <f*,w>
/// and <w,f*> at `probe` from their closed forms (w*, 0), (0, w), (0, w*), (w, 0).
double check_inner_product_gradients(const ComplexVector& w, const ComplexVector& probe,
                                     double step = kDefaultStep);

/// |T(z+h) - T(z) - <h, (dT/dz)*> - <h*, (dT/dz*)*>| with numeric gradients.
double check_taylor_first_order(const ComplexFunctional& T, const ComplexVector& z,
                                const ComplexVector& h, double step = kDefaultStep);

/// Compares the first-order increase of real-valued T along the normalised
/// conjugate gradient against `n_directions` random unit directions (seeded).
/// Returns true when the conjugate gradient direction is never beaten.
/// Throws UsageError when the conjugate gradient vanishes.
bool check_steepest_ascent(const ComplexFunctional& T, const ComplexVector& z, std::size_t n_directions,
                           std::uint64_t seed, double probe_step = 1e-4);

/// L(w) = |d - <phi, w>|^2, the instantaneous CKLMS loss with an explicit feature vector.
ComplexFunctional lms_loss(ComplexVector phi, cplx d);

/// Closed-form conjugate R-derivative of lms_loss: -conj(e) * phi.
ComplexVector lms_loss_conj_gradient(const ComplexVector& phi, cplx d, const ComplexVector& w);

struct TestFunction {
    std::string name;
    ComplexFunctional fn;
    std::function<WirtingerGradient(const ComplexVector&)> analytic;
    bool holomorphic = false;
    bool antiholomorphic = false;
    bool real_valued = false;
};

/// Standard battery on C^dim: sum z, sum z*, sum z z*, sum z (z*)^2,
/// sum Re z, |z|^4, sum z^3 and an LMS loss with fixed seeded phi, d.
std::vector<TestFunction> standard_battery(std::size_t dim, std::uint64_t seed);

/// Largest absolute component difference between two vectors of equal size.
double max_abs_diff(const ComplexVector& a, const ComplexVector& b);

} // namespace cklms::wirtinger

#endif // CKLMS_WIRTINGER_HPP

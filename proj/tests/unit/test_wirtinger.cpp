#include "cklms/verification.hpp"
#include "cklms/wirtinger.hpp"

#include <doctest.h>

#include <cmath>

using namespace cklms;
using namespace cklms::wirtinger;

TEST_CASE("z (z*)^2 at 1+i: dT/dz = -2i, dT/dz* = 4") {
    const ComplexFunctional T = [](const ComplexVector& z) { return z[0] * std::conj(z[0]) * std::conj(z[0]); };
    const auto g = numeric_wirtinger_gradient(T, ComplexVector{{1.0, 1.0}});
    CHECK(std::abs(g.r_derivative[0] - cplx(0.0, -2.0)) < 1e-8);
    CHECK(std::abs(g.conj_r_derivative[0] - cplx(4.0, 0.0)) < 1e-8);
}

TEST_CASE("holomorphic and anti-holomorphic monomials") {
    const ComplexVector z{{0.4, -1.3}, {2.0, 0.5}};
    const auto g = numeric_wirtinger_gradient([](const ComplexVector& v) { return v[0] * v[1]; }, z);
    CHECK(std::abs(g.r_derivative[0] - z[1]) < 1e-9);
    CHECK(std::abs(g.r_derivative[1] - z[0]) < 1e-9);
    CHECK(std::abs(g.conj_r_derivative[0]) < 1e-9);

    const auto h = numeric_wirtinger_gradient([](const ComplexVector& v) { return std::conj(v[0]); }, z);
    CHECK(std::abs(h.r_derivative[0]) < 1e-9);
    CHECK(std::abs(h.conj_r_derivative[0] - 1.0) < 1e-9);
}

TEST_CASE("|z|^2 is real: conj gradient is z, gradient is z*") {
    const ComplexVector z{{0.7, -0.2}};
    const auto g = numeric_wirtinger_gradient([](const ComplexVector& v) { return cplx(std::norm(v[0]), 0.0); }, z);
    CHECK(std::abs(g.conj_r_derivative[0] - z[0]) < 1e-9);
    CHECK(std::abs(g.r_derivative[0] - std::conj(z[0])) < 1e-9);
}

TEST_CASE("LMS loss gradient is -conj(e) phi") {
    const ComplexVector phi{{1.0, 2.0}, {-0.5, 0.3}};
    const ComplexVector w{{0.1, 0.1}, {0.4, -0.9}};
    const cplx d{0.3, -1.2};
    const cplx e = d - inner(phi, w);
    const auto exact = lms_loss_conj_gradient(phi, d, w);
    for (std::size_t i = 0; i < 2; ++i) CHECK(exact[i] == -std::conj(e) * phi[i]);
    const auto num = numeric_wirtinger_gradient(lms_loss(phi, d), w);
    CHECK(max_abs_diff(num.conj_r_derivative, exact) < 1e-8);
}

TEST_CASE("inner-product rules and Taylor residual") {
    const ComplexVector w{{0.3, -0.8}, {1.2, 0.1}, {-0.4, 0.4}};
    const ComplexVector probe{{-1.0, 0.2}, {0.5, 0.5}, {0.0, -2.0}};
    CHECK(check_inner_product_gradients(w, probe) < 1e-8);
    for (const auto& f : standard_battery(3, 9)) {
        CAPTURE(f.name);
        ComplexVector h{{1e-4, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
        CHECK(check_taylor_first_order(f.fn, probe, h) < 1e-6);
    }
}

TEST_CASE("steepest ascent: gradient direction beats random directions") {
    const ComplexFunctional T = [](const ComplexVector& v) {
        return cplx(std::norm(v[0]) + 3.0 * std::norm(v[1]) + v[0].real() * v[1].imag(), 0.0);
    };
    CHECK(check_steepest_ascent(T, ComplexVector{{0.5, -0.1}, {0.2, 0.9}}, 200, 42));
    CHECK_THROWS_AS(check_steepest_ascent(T, ComplexVector{{0.0, 0.0}, {0.0, 0.0}}, 10, 1), UsageError);
}

TEST_CASE("error handling") {
    const ComplexVector z{{1.0, 0.0}};
    CHECK_THROWS_AS(numeric_wirtinger_gradient([](const ComplexVector& v) { return v[0]; }, z, 0.0), UsageError);
    CHECK_THROWS_AS(numeric_wirtinger_gradient([](const ComplexVector&) { return cplx(NAN, 0.0); }, z),
                    NumericError);
}

TEST_CASE("self-check suite passes for several seeds") {
    for (std::uint64_t seed : {1u, 2u, 99u}) {
        for (const auto& r : verify::wirtinger_suite(seed)) {
            CAPTURE(r.name);
            CAPTURE(r.measured);
            CHECK(r.passed);
        }
    }
}

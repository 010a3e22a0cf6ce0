#include "cklms/wirtinger.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cklms::wirtinger {

namespace {

cplx eval_checked(const ComplexFunctional& T, const ComplexVector& z) {
    const cplx v = T(z);
    if (!is_finite(v)) throw NumericError("functional returned a non-finite value");
    return v;
}

ComplexVector random_vector(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVector v(dim);
    for (auto& c : v) c = {gauss(rng), gauss(rng)};
    return v;
}

} // namespace

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
    require_same_size(a.size(), b.size(), "max_abs_diff");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

WirtingerGradient numeric_wirtinger_gradient(const ComplexFunctional& T, const ComplexVector& z,
                                             double step) {
    if (!(step > 0.0)) throw UsageError("finite-difference step must be positive");
    const std::size_t n = z.size();
    WirtingerGradient g{ComplexVector(n), ComplexVector(n)};
    ComplexVector probe = z;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx orig = z[i];

        probe[i] = orig + cplx{step, 0.0};
        const cplx fxp = eval_checked(T, probe);
        probe[i] = orig - cplx{step, 0.0};
        const cplx fxm = eval_checked(T, probe);
        probe[i] = orig + cplx{0.0, step};
        const cplx fyp = eval_checked(T, probe);
        probe[i] = orig - cplx{0.0, step};
        const cplx fym = eval_checked(T, probe);
        probe[i] = orig;

        // dT/dx = u_x + i v_x, dT/dy = u_y + i v_y
        const cplx dx = (fxp - fxm) / (2.0 * step);
        const cplx dy = (fyp - fym) / (2.0 * step);
        const double ux = dx.real(), vx = dx.imag();
        const double uy = dy.real(), vy = dy.imag();

        g.r_derivative[i] = {0.5 * (ux + vy), 0.5 * (vx - uy)};
        g.conj_r_derivative[i] = {0.5 * (ux - vy), 0.5 * (vx + uy)};
    }
    return g;
}

double check_inner_product_gradients(const ComplexVector& w, const ComplexVector& probe, double step) {
    require_same_size(w.size(), probe.size(), "check_inner_product_gradients");
    const std::size_t n = w.size();
    const ComplexVector zero(n);
    const ComplexVector wc = w.conj();

    struct Case {
        ComplexFunctional fn;
        const ComplexVector& expect_r;
        const ComplexVector& expect_conj;
    };
    const Case cases[] = {
        // <f, w>
        {[&](const ComplexVector& f) { return inner(f, w); }, wc, zero},
        // <w, f>
        {[&](const ComplexVector& f) { return inner(w, f); }, zero, w},
        // <f*, w>
        {[&](const ComplexVector& f) { return inner(f.conj(), w); }, zero, wc},
        // <w, f*>
        {[&](const ComplexVector& f) { return inner(w, f.conj()); }, w, zero},
    };

    double worst = 0.0;
    for (const auto& c : cases) {
        const auto g = numeric_wirtinger_gradient(c.fn, probe, step);
        worst = std::max(worst, max_abs_diff(g.r_derivative, c.expect_r));
        worst = std::max(worst, max_abs_diff(g.conj_r_derivative, c.expect_conj));
    }
    return worst;
}

double check_taylor_first_order(const ComplexFunctional& T, const ComplexVector& z, const ComplexVector& h,
                                double step) {
    require_same_size(z.size(), h.size(), "check_taylor_first_order");
    const auto g = numeric_wirtinger_gradient(T, z, step);
    ComplexVector shifted = z;
    for (std::size_t i = 0; i < z.size(); ++i) shifted[i] += h[i];

    const cplx predicted = eval_checked(T, z) + inner(h, g.r_derivative.conj()) +
                           inner(h.conj(), g.conj_r_derivative.conj());
    return std::abs(eval_checked(T, shifted) - predicted);
}

bool check_steepest_ascent(const ComplexFunctional& T, const ComplexVector& z, std::size_t n_directions,
                           std::uint64_t seed, double probe_step) {
    const auto g = numeric_wirtinger_gradient(T, z);
    const double gnorm = std::sqrt(g.conj_r_derivative.norm_sq());
    if (!(gnorm > 0.0)) throw UsageError("check_steepest_ascent: conjugate gradient is zero");

    // Central difference along a unit direction: first-order increase only.
    const auto increase = [&](const ComplexVector& u) {
        ComplexVector plus = z, minus = z;
        for (std::size_t i = 0; i < z.size(); ++i) {
            plus[i] += probe_step * u[i];
            minus[i] -= probe_step * u[i];
        }
        return (eval_checked(T, plus).real() - eval_checked(T, minus).real()) / (2.0 * probe_step);
    };

    ComplexVector ascent = g.conj_r_derivative;
    for (auto& c : ascent) c /= gnorm;
    const double best = increase(ascent);

    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < n_directions; ++k) {
        ComplexVector u = random_vector(z.size(), rng);
        const double norm = std::sqrt(u.norm_sq());
        for (auto& c : u) c /= norm;
        if (increase(u) > best) return false;
    }
    return true;
}

ComplexFunctional lms_loss(ComplexVector phi, cplx d) {
    return [phi = std::move(phi), d](const ComplexVector& w) {
        require_same_size(phi.size(), w.size(), "lms_loss");
        return cplx{std::norm(d - inner(phi, w)), 0.0};
    };
}

ComplexVector lms_loss_conj_gradient(const ComplexVector& phi, cplx d, const ComplexVector& w) {
    require_same_size(phi.size(), w.size(), "lms_loss_conj_gradient");
    const cplx e = d - inner(phi, w);
    ComplexVector g(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) g[i] = -std::conj(e) * phi[i];
    return g;
}

std::vector<TestFunction> standard_battery(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ComplexVector phi = random_vector(dim, rng);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const cplx d{gauss(rng), gauss(rng)};

    const auto fill = [dim](auto&& f) {
        ComplexVector out(dim);
        for (std::size_t i = 0; i < dim; ++i) out[i] = f(i);
        return out;
    };

    std::vector<TestFunction> battery;

    battery.push_back({"sum z",
                       [](const ComplexVector& z) {
                           cplx s{};
                           for (auto v : z) s += v;
                           return s;
                       },
                       [fill](const ComplexVector&) {
                           return WirtingerGradient{fill([](std::size_t) { return cplx{1.0, 0.0}; }),
                                                    fill([](std::size_t) { return cplx{}; })};
                       },
                       true, false, false});

    battery.push_back({"sum z*",
                       [](const ComplexVector& z) {
                           cplx s{};
                           for (auto v : z) s += std::conj(v);
                           return s;
                       },
                       [fill](const ComplexVector&) {
                           return WirtingerGradient{fill([](std::size_t) { return cplx{}; }),
                                                    fill([](std::size_t) { return cplx{1.0, 0.0}; })};
                       },
                       false, true, false});

    battery.push_back({"sum z z*",
                       [](const ComplexVector& z) {
                           cplx s{};
                           for (auto v : z) s += v * std::conj(v);
                           return s;
                       },
                       [fill](const ComplexVector& z) {
                           return WirtingerGradient{fill([&](std::size_t i) { return std::conj(z[i]); }),
                                                    fill([&](std::size_t i) { return z[i]; })};
                       },
                       false, false, true});

    battery.push_back({"sum z (z*)^2",
                       [](const ComplexVector& z) {
                           cplx s{};
                           for (auto v : z) s += v * std::conj(v) * std::conj(v);
                           return s;
                       },
                       [fill](const ComplexVector& z) {
                           return WirtingerGradient{
                               fill([&](std::size_t i) { return std::conj(z[i]) * std::conj(z[i]); }),
                               fill([&](std::size_t i) { return 2.0 * z[i] * std::conj(z[i]); })};
                       },
                       false, false, false});

    battery.push_back({"sum Re z",
                       [](const ComplexVector& z) {
                           double s = 0.0;
                           for (auto v : z) s += v.real();
                           return cplx{s, 0.0};
                       },
                       [fill](const ComplexVector&) {
                           return WirtingerGradient{fill([](std::size_t) { return cplx{0.5, 0.0}; }),
                                                    fill([](std::size_t) { return cplx{0.5, 0.0}; })};
                       },
                       false, false, true});

    battery.push_back({"|z|^4",
                       [](const ComplexVector& z) { return cplx{z.norm_sq() * z.norm_sq(), 0.0}; },
                       [fill](const ComplexVector& z) {
                           const double n2 = z.norm_sq();
                           return WirtingerGradient{fill([&](std::size_t i) { return 2.0 * n2 * std::conj(z[i]); }),
                                                    fill([&](std::size_t i) { return 2.0 * n2 * z[i]; })};
                       },
                       false, false, true});

    battery.push_back({"sum z^3",
                       [](const ComplexVector& z) {
                           cplx s{};
                           for (auto v : z) s += v * v * v;
                           return s;
                       },
                       [fill](const ComplexVector& z) {
                           return WirtingerGradient{fill([&](std::size_t i) { return 3.0 * z[i] * z[i]; }),
                                                    fill([](std::size_t) { return cplx{}; })};
                       },
                       true, false, false});

    battery.push_back({"lms loss",
                       lms_loss(phi, d),
                       [phi, d](const ComplexVector& w) {
                           ComplexVector conj_grad = lms_loss_conj_gradient(phi, d, w);
                           return WirtingerGradient{conj_grad.conj(), conj_grad};
                       },
                       false, false, true});

    return battery;
}

} // namespace cklms::wirtinger

#include "cklms/snapshot.hpp"

#include <doctest.h>

#include <random>

using namespace cklms;

namespace {

Cklms trained(std::size_t steps) {
    Cklms f(GaussianKernel(KernelSpec::complex_gaussian(2.0)), 0.4, {0.1, 0.05}, StepNormalization::self_kernel);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 0.5);
    for (std::size_t n = 0; n < steps; ++n) {
        ComplexVector z(3);
        for (auto& c : z) c = {g(rng), g(rng)};
        f.step(z, {g(rng), g(rng)});
    }
    return f;
}

} // namespace

TEST_CASE("snapshot round trip restores an identical filter") {
    Cklms a = trained(60);
    const auto js = to_snapshot(a);
    CHECK(js["format"] == "cklms-snapshot/1");
    Cklms b = cklms_from_snapshot(nlohmann::json::parse(js.dump()));
    CHECK(b.iteration() == a.iteration());
    CHECK(b.mu() == a.mu());
    CHECK(b.normalization() == a.normalization());
    REQUIRE(b.dictionary().size() == a.dictionary().size());
    for (std::size_t k = 0; k < a.dictionary().size(); ++k) {
        CHECK(b.dictionary().coefficients()[k] == a.dictionary().coefficients()[k]);
        CHECK(b.dictionary().self_kernels()[k] == a.dictionary().self_kernels()[k]);
    }
    // both continue identically
    const ComplexVector z{{0.1, -0.3}, {0.2, 0.2}, {-0.5, 0.0}};
    const auto ra = a.step(z, {1.0, 0.0});
    const auto rb = b.step(z, {1.0, 0.0});
    CHECK(ra.prediction == rb.prediction);
    CHECK(ra.admitted == rb.admitted);
}

TEST_CASE("malformed snapshots are rejected") {
    auto js = to_snapshot(trained(10));
    auto bad = js;
    bad["format"] = "other/1";
    CHECK_THROWS_AS(cklms_from_snapshot(bad), UsageError);
    bad = js;
    bad.erase("mu");
    CHECK_THROWS_AS(cklms_from_snapshot(bad), UsageError);
    bad = js;
    bad["dictionary"]["coefficients"].erase(0);
    CHECK_THROWS_AS(cklms_from_snapshot(bad), UsageError);
    bad = js;
    bad["iteration"] = 0;
    CHECK_THROWS_AS(cklms_from_snapshot(bad), UsageError);
}

#include "cklms/snapshot.hpp"

#include <string>

namespace cklms {

namespace {

using nlohmann::json;

json to_pair(cplx v) { return json::array({v.real(), v.imag()}); }

cplx from_pair(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw UsageError(std::string("snapshot field '") + field + "': expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw UsageError(std::string("snapshot: missing field '") + key + "'");
    return j.at(key);
}

} // namespace

json to_snapshot(const Cklms& filter) {
    const auto& dict = filter.dictionary();
    json centers = json::array();
    for (std::size_t k = 0; k < dict.size(); ++k) {
        json c = json::array();
        for (const auto& v : dict.center(k)) c.push_back(to_pair(v));
        centers.push_back(std::move(c));
    }
    json coeffs = json::array();
    for (const auto& a : dict.coefficients()) coeffs.push_back(to_pair(a));

    const auto& spec = filter.kernel().spec();
    return json{
        {"format", "cklms-snapshot/1"},
        {"kernel", {{"family", std::string(to_string(spec.family))}, {"sigma", spec.sigma}}},
        {"mu", filter.mu()},
        {"novelty", {{"delta1", filter.novelty().delta1}, {"delta2", filter.novelty().delta2}}},
        {"normalization", std::string(to_string(filter.normalization()))},
        {"iteration", filter.iteration()},
        {"dictionary", {{"dimension", dict.dim()}, {"centers", centers}, {"coefficients", coeffs}}},
    };
}

Cklms cklms_from_snapshot(const json& snapshot) {
    if (require(snapshot, "format") != "cklms-snapshot/1")
        throw UsageError("snapshot: unsupported format tag");
    const json& k = require(snapshot, "kernel");
    const KernelSpec spec{kernel_family_from_string(require(k, "family").get<std::string>()),
                          require(k, "sigma").get<double>()};
    const json& nov = require(snapshot, "novelty");
    const NoveltyConfig novelty{require(nov, "delta1").get<double>(), require(nov, "delta2").get<double>()};
    const auto normalization =
        step_normalization_from_string(require(snapshot, "normalization").get<std::string>());

    const GaussianKernel kernel(spec);
    const json& d = require(snapshot, "dictionary");
    const json& centers = require(d, "centers");
    const json& coeffs = require(d, "coefficients");
    if (!centers.is_array() || !coeffs.is_array() || centers.size() != coeffs.size())
        throw UsageError("snapshot: centers and coefficients must be arrays of equal length");
    const auto dim = require(d, "dimension").get<std::size_t>();

    Dictionary dict;
    std::vector<cplx> center;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        center.clear();
        for (const auto& v : centers[i]) center.push_back(from_pair(v, "dictionary.centers"));
        require_same_size(dim, center.size(), "snapshot center");
        dict.append(center, from_pair(coeffs[i], "dictionary.coefficients"), kernel.self(center));
    }
    return Cklms::restore(kernel, require(snapshot, "mu").get<double>(), novelty, normalization,
                          std::move(dict), require(snapshot, "iteration").get<std::size_t>());
}

} // namespace cklms

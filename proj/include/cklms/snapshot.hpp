#ifndef CKLMS_SNAPSHOT_HPP
#define CKLMS_SNAPSHOT_HPP

// JSON snapshot of a CKLMS filter:
//
//   {
//     "format": "cklms-snapshot/1",
//     "kernel": {"family": "complex_gaussian", "sigma": 5.0},
//     "mu": 1.0,
//     "novelty": {"delta1": 0.1, "delta2": 0.2},
//     "normalization": "none",
//     "iteration": 4995,
//     "dictionary": {
//       "dimension": 6,
//       "centers": [[[re, im], ...], ...],
//       "coefficients": [[re, im], ...]
//     }
//   }
//
// Cached self-kernel values are recomputed on load.

#include "cklms/filters.hpp"

#include <json.hpp>

namespace cklms {

nlohmann::json to_snapshot(const Cklms& filter);
Cklms cklms_from_snapshot(const nlohmann::json& snapshot);

} // namespace cklms

#endif // CKLMS_SNAPSHOT_HPP

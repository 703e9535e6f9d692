#pragma once

#include <json.hpp>

#include "rcfpi/detect.hpp"
#include "rcfpi/operators.hpp"
#include "rcfpi/pgextra.hpp"
#include "rcfpi/selection.hpp"

namespace rcfpi {

using json = nlohmann::json;

// BlockVector <-> {"block_dims": [...], "data": [...]}
json to_json(const BlockVector& v);
BlockVector block_vector_from_json(const json& j);

// {"kind": "box_corner"|"halfspace"|"neighborhood"|"hyperbola_region"|"product", ...}
ConvexSet convex_set_from_json(const json& j);

// {"kind": "scaled_projection"|"translation"|"coupled_shift_2d", ...}
AveragedOperator operator_from_json(const json& j);

// {"kind": "uniform_single", "m": 2} or {"support": [{"vector": [...], "prob": p}, ...]}
// or {"kind": "hub_weighted", "m": 40, "hub_prob": 0.3}
SelectionDistribution selection_from_json(const json& j);

// {"m": 40, "edges": "star1_clique"} or {"m": ..., "edges": [[i, j], ...]}
NetworkGraph network_from_json(const json& j);

// same object plus "epsilon_w"; builds the Metropolis weights
MixingMatrix mixing_from_json(const json& j);

// {"epsilon":..., "delta":..., "p":..., "alpha":..., "beta":..., "theta":..., "safety":...}
DetectionConfig detection_config_from_json(const json& j);

json to_json(const DetectionReport& r);

}  // namespace rcfpi

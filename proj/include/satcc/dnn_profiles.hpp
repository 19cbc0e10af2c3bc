#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace satcc {

// Per-layer compute cost of a model, as an ordered list of positive integer
// multiply-accumulate (MAC) counts at a 224x224x3 input. Convolutions cost
// k^2 * C_in * C_out * H_out * W_out, fully-connected layers fan_in * fan_out.
// Pooling, activation and batch-norm are folded into the preceding weighted
// layer (their cost is negligible and they never execute standalone).
struct LayerProfile {
  std::string model_name;
  std::vector<std::string> layer_names;
  std::vector<std::int64_t> layer_workloads;

  std::size_t size() const { return layer_workloads.size(); }
  std::int64_t total() const;
};

// Built-in models:
//  - "VGG19": 19 weighted layers (16 conv + 3 FC).
//  - "ResNet101": 105 weighted layers, flattened from the bottleneck block
//    table (3,4,23,3). Flattening rule: stem conv first; each block emits its
//    1x1 / 3x3 / 1x1 convs in execution order, and the first block of every
//    stage additionally emits its 1x1 projection conv after them; the FC
//    classifier closes the list. Strides follow the common v1.5 layout
//    (downsampling in the 3x3 conv).
// Unknown names raise std::invalid_argument.
LayerProfile builtin_profile(std::string_view model_name);

// JSON document form:
//   {"model": "<name>", "layers": [{"label": "...", "workload": <int>}, ...]}
// Parse/validation failures raise ConfigError naming the offending entry.
LayerProfile load_profile(const std::string& json_text);
LayerProfile load_profile_file(const std::string& path);
std::string profile_to_json(const LayerProfile& profile);

// Rescale raw MAC counts to coarser workload units (ceil division, so no
// layer collapses to zero). unit_macs must be >= 1; 1 is the identity.
LayerProfile scale_profile(const LayerProfile& profile, std::int64_t unit_macs);

}  // namespace satcc

#include "satcc/dnn_profiles.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "satcc/errors.hpp"

namespace satcc {

std::int64_t LayerProfile::total() const {
  return std::accumulate(layer_workloads.begin(), layer_workloads.end(),
                         std::int64_t{0});
}

namespace {

void push(LayerProfile& p, std::string name, std::int64_t macs) {
  p.layer_names.push_back(std::move(name));
  p.layer_workloads.push_back(macs);
}

inline std::int64_t conv_macs(int k, std::int64_t c_in, std::int64_t c_out,
                              std::int64_t out_hw) {
  return std::int64_t{k} * k * c_in * c_out * out_hw * out_hw;
}

LayerProfile make_vgg19() {
  LayerProfile p;
  p.model_name = "VGG19";
  struct Stage { int convs; std::int64_t width; std::int64_t hw; };
  // (conv count, output channels, spatial size); 3x3 convs, pool after stage.
  const Stage stages[] = {
      {2, 64, 224}, {2, 128, 112}, {4, 256, 56}, {4, 512, 28}, {4, 512, 14}};
  std::int64_t c_in = 3;
  int stage_no = 1;
  for (const auto& st : stages) {
    for (int i = 1; i <= st.convs; ++i) {
      push(p, "conv" + std::to_string(stage_no) + "_" + std::to_string(i),
           conv_macs(3, c_in, st.width, st.hw));
      c_in = st.width;
    }
    ++stage_no;
  }
  push(p, "fc6", std::int64_t{512 * 7 * 7} * 4096);
  push(p, "fc7", std::int64_t{4096} * 4096);
  push(p, "fc8", std::int64_t{4096} * 1000);
  return p;
}

LayerProfile make_resnet101() {
  LayerProfile p;
  p.model_name = "ResNet101";
  // 7x7 stem conv, stride 2: 224 -> 112; max-pool to 56 is folded in.
  push(p, "conv1", conv_macs(7, 3, 64, 112));
  struct Stage { int blocks; std::int64_t width; std::int64_t out_hw; };
  const Stage stages[] = {{3, 64, 56}, {4, 128, 28}, {23, 256, 14}, {3, 512, 7}};
  std::int64_t c_in = 64;  // after the stem + pool
  int stage_no = 2;
  for (const auto& st : stages) {
    const std::int64_t expanded = st.width * 4;
    for (int b = 1; b <= st.blocks; ++b) {
      const std::string tag = "conv" + std::to_string(stage_no) + "_" +
                              std::to_string(b);
      // First block may downsample; the 1x1 reduce runs at the input
      // resolution, the (strided) 3x3 and everything after at out_hw.
      const std::int64_t in_hw =
          (b == 1 && stage_no > 2) ? st.out_hw * 2 : st.out_hw;
      push(p, tag + "a", c_in * st.width * in_hw * in_hw);
      push(p, tag + "b", conv_macs(3, st.width, st.width, st.out_hw));
      push(p, tag + "c", st.width * expanded * st.out_hw * st.out_hw);
      if (b == 1)
        push(p, tag + "p", c_in * expanded * st.out_hw * st.out_hw);
      c_in = expanded;
    }
    ++stage_no;
  }
  push(p, "fc", std::int64_t{2048} * 1000);
  return p;
}

}  // namespace

LayerProfile builtin_profile(std::string_view model_name) {
  if (model_name == "VGG19") return make_vgg19();
  if (model_name == "ResNet101") return make_resnet101();
  throw std::invalid_argument("builtin_profile: unknown model '" +
                              std::string(model_name) +
                              "' (available: VGG19, ResNet101)");
}

LayerProfile load_profile(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("profile: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("profile: top level must be an object");
  if (!doc.contains("model") || !doc["model"].is_string())
    throw ConfigError("profile: missing string field 'model'");
  if (!doc.contains("layers") || !doc["layers"].is_array())
    throw ConfigError("profile: missing array field 'layers'");

  LayerProfile p;
  p.model_name = doc["model"].get<std::string>();
  const auto& layers = doc["layers"];
  if (layers.empty()) throw ConfigError("profile: 'layers' must not be empty");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& entry = layers[i];
    const std::string where = "profile: layers[" + std::to_string(i) + "]";
    if (!entry.is_object()) throw ConfigError(where + ": must be an object");
    if (!entry.contains("workload") || !entry["workload"].is_number_integer())
      throw ConfigError(where + ": missing integer field 'workload'");
    const std::int64_t w = entry["workload"].get<std::int64_t>();
    std::string label = entry.value("label", "layer" + std::to_string(i));
    if (w <= 0)
      throw ConfigError(where + " ('" + label + "'): workload must be positive");
    push(p, std::move(label), w);
  }
  return p;
}

LayerProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("profile: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_profile(buf.str());
}

std::string profile_to_json(const LayerProfile& profile) {
  nlohmann::json doc;
  doc["model"] = profile.model_name;
  doc["layers"] = nlohmann::json::array();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    doc["layers"].push_back({{"label", profile.layer_names[i]},
                             {"workload", profile.layer_workloads[i]}});
  }
  return doc.dump(2);
}

LayerProfile scale_profile(const LayerProfile& profile, std::int64_t unit_macs) {
  if (unit_macs < 1)
    throw std::invalid_argument("scale_profile: unit_macs must be >= 1");
  LayerProfile out = profile;
  for (auto& w : out.layer_workloads) w = (w + unit_macs - 1) / unit_macs;
  return out;
}

}  // namespace satcc

// Copyright 2026 The DGCL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dgcl/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dgcl/dataio.hpp"
#include "json.hpp"

namespace dgcl {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  return std::filesystem::path(stem.string() + suffix);
}

void write_le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double read_le(const unsigned char* bytes) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& stem, const TrainConfig& config, ParameterSet& params) {
  std::ofstream bin(with_suffix(stem, ".bin"), std::ios::binary);
  if (!bin) throw DataError("cannot write checkpoint " + stem.string());
  nlohmann::json tensors = nlohmann::json::array();
  std::size_t offset = 0;
  params.for_each(
      [&](const std::string& channel, const std::string& name, Parameter& p) {
        tensors.push_back({{"channel", channel}, {"name", name}, {"rows", p.value.rows()}, {"cols", p.value.cols()}, {"offset", offset}});
        for (double v : p.value.flat()) write_le(bin, v);
        offset += p.value.size();
      },
      true);
  nlohmann::json manifest{{"format", kCheckpointFormat},
                          {"config", to_json(config)},
                          {"num_items", params.num_items()},
                          {"binary", with_suffix(stem, ".bin").filename().string()},
                          {"total_values", offset},
                          {"tensors", tensors}};
  std::ofstream js(with_suffix(stem, ".json"));
  if (!js) throw DataError("cannot write checkpoint manifest " + stem.string());
  js << manifest.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& stem) {
  std::ifstream js(with_suffix(stem, ".json"));
  if (!js) throw DataError("cannot open checkpoint manifest " + with_suffix(stem, ".json").string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(js);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint manifest: ") + e.what());
  }
  if (manifest.value("format", "") != kCheckpointFormat) throw DataError("checkpoint: unknown format");

  Checkpoint ck;
  ck.config = config_from_json(manifest.at("config"));
  ck.params = zero_parameters(ck.config, manifest.at("num_items").get<std::size_t>());

  std::ifstream bin(with_suffix(stem, ".bin"), std::ios::binary);
  if (!bin) throw DataError("cannot open checkpoint data " + with_suffix(stem, ".bin").string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
  const auto total = manifest.at("total_values").get<std::size_t>();
  if (bytes.size() != total * 8) throw DataError("checkpoint: binary size does not match manifest");

  const auto& tensors = manifest.at("tensors");
  std::size_t index = 0;
  ck.params.for_each(
      [&](const std::string& channel, const std::string& name, Parameter& p) {
        if (index >= tensors.size()) throw DataError("checkpoint: missing tensor " + channel + "/" + name);
        const auto& t = tensors[index++];
        if (t.at("channel") != channel || t.at("name") != name || t.at("rows") != p.value.rows() || t.at("cols") != p.value.cols()) {
          throw DataError("checkpoint: tensor " + channel + "/" + name + " does not match the configured shapes");
        }
        const auto offset = t.at("offset").get<std::size_t>();
        if ((offset + p.value.size()) * 8 > bytes.size()) throw DataError("checkpoint: tensor extends past the data file");
        for (std::size_t i = 0; i < p.value.size(); ++i) p.value[i] = read_le(bytes.data() + (offset + i) * 8);
      },
      true);
  if (index != tensors.size()) throw DataError("checkpoint: unexpected extra tensors");
  ck.params.zero_grad();
  return ck;
}

}  // namespace dgcl

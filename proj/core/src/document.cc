// Copyright 2026 The cnnscale Authors
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

#include "cnnscale/document.h"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

namespace cnnscale {
namespace {

using Json = nlohmann::ordered_json;

std::string Child(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}
std::string Child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

void RequireObject(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
}

void RequireArray(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
}

void RejectUnknown(const Json& j, const std::string& path,
                   std::initializer_list<std::string_view> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (std::string_view key : allowed) known = known || item.key() == key;
    if (!known) {
      throw ParseError(Child(path, item.key()), "unknown field");
    }
  }
}

const Json& Require(const Json& j, const std::string& path,
                    std::string_view key) {
  auto it = j.find(std::string(key));
  if (it == j.end()) {
    throw ParseError(path, "missing field \"" + std::string(key) + "\"");
  }
  return *it;
}

std::int64_t AsInt(const Json& j, const std::string& path) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned() &&
        j.get<std::uint64_t>() >
            static_cast<std::uint64_t>(INT64_MAX)) {
      throw ParseError(path, "integer out of range");
    }
    return j.get<std::int64_t>();
  }
  throw ParseError(path, "expected an integer");
}

std::int64_t IntField(const Json& j, const std::string& path,
                      std::string_view key) {
  return AsInt(Require(j, path, key), Child(path, key));
}

std::string StringField(const Json& j, const std::string& path,
                        std::string_view key) {
  const Json& v = Require(j, path, key);
  if (!v.is_string()) throw ParseError(Child(path, key), "expected a string");
  return v.get<std::string>();
}

Rational RationalValue(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(AsInt(j, path));
    if (j.is_number_float()) return RationalFromDouble(j.get<double>());
    if (j.is_string()) return ParseRational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(path, e.what());
  }
  throw ParseError(path, "expected a number or a \"p/q\" string");
}

MicroLayer ParseMicroLayer(const Json& j, const std::string& path) {
  RequireObject(j, path);
  RejectUnknown(j, path,
                {"kernel_width", "kernel_height", "depth", "out_rows",
                 "out_cols"});
  MicroLayer m;
  m.kernel_width = IntField(j, path, "kernel_width");
  m.kernel_height = IntField(j, path, "kernel_height");
  m.depth = IntField(j, path, "depth");
  m.out_rows = IntField(j, path, "out_rows");
  m.out_cols = IntField(j, path, "out_cols");
  return m;
}

Annotation ParseAnnotation(const Json& j, const std::string& path) {
  RequireObject(j, path);
  RejectUnknown(j, path, {"kind", "site", "channels", "attributes"});
  Annotation note;
  note.kind = StringField(j, path, "kind");
  if (auto it = j.find("site"); it != j.end()) {
    const std::string site_path = Child(path, "site");
    if (*it == "output") {
      note.site = AnnotationSite::kOutput;
    } else if (*it == "input") {
      note.site = AnnotationSite::kInput;
    } else {
      throw ParseError(site_path, "expected \"input\" or \"output\"");
    }
  }
  if (j.contains("channels")) {
    note.channels = IntField(j, path, "channels");
  }
  if (auto it = j.find("attributes"); it != j.end()) {
    RequireObject(*it, Child(path, "attributes"));
    note.attributes = *it;
  }
  return note;
}

MacroLayer ParseMacroLayer(const Json& j, const std::string& path) {
  RequireObject(j, path);
  RejectUnknown(j, path, {"name", "input_channels", "branches", "annotations"});
  MacroLayer layer;
  layer.name = StringField(j, path, "name");
  if (j.contains("input_channels")) {
    layer.input_channels = IntField(j, path, "input_channels");
  }
  const std::string branches_path = Child(path, "branches");
  const Json& branches = Require(j, path, "branches");
  RequireArray(branches, branches_path);
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const std::string branch_path = Child(branches_path, b);
    RequireArray(branches[b], branch_path);
    Branch branch;
    for (std::size_t m = 0; m < branches[b].size(); ++m) {
      branch.micro_layers.push_back(
          ParseMicroLayer(branches[b][m], Child(branch_path, m)));
    }
    layer.branches.push_back(std::move(branch));
  }
  if (auto it = j.find("annotations"); it != j.end()) {
    const std::string notes_path = Child(path, "annotations");
    RequireArray(*it, notes_path);
    for (std::size_t a = 0; a < it->size(); ++a) {
      layer.annotations.push_back(
          ParseAnnotation((*it)[a], Child(notes_path, a)));
    }
  }
  return layer;
}

ScopeSettings ParseScope(const Json& j, const std::string& path) {
  RequireObject(j, path);
  RejectUnknown(j, path, {"alpha", "beta", "lambda", "scope_aware"});
  ScopeSettings settings;
  settings.scope.alpha = IntField(j, path, "alpha");
  settings.scope.beta = IntField(j, path, "beta");
  if (auto it = j.find("lambda"); it != j.end()) {
    settings.scope.lambda = RationalValue(*it, Child(path, "lambda"));
  }
  if (auto it = j.find("scope_aware"); it != j.end()) {
    if (!it->is_boolean()) {
      throw ParseError(Child(path, "scope_aware"), "expected a boolean");
    }
    settings.scope_aware = it->get<bool>();
  }
  return settings;
}

Json MicroLayerJson(const MicroLayer& m) {
  Json j = Json::object();
  j["kernel_width"] = m.kernel_width;
  j["kernel_height"] = m.kernel_height;
  j["depth"] = m.depth;
  j["out_rows"] = m.out_rows;
  j["out_cols"] = m.out_cols;
  return j;
}

Json AnnotationJson(const Annotation& note) {
  Json j = Json::object();
  j["kind"] = note.kind;
  j["site"] = note.site == AnnotationSite::kInput ? "input" : "output";
  if (note.channels) j["channels"] = *note.channels;
  if (!note.attributes.empty()) j["attributes"] = note.attributes;
  return j;
}

Json MacroLayerJson(const MacroLayer& layer) {
  Json j = Json::object();
  j["name"] = layer.name;
  if (layer.input_channels) j["input_channels"] = *layer.input_channels;
  Json branches = Json::array();
  for (const Branch& branch : layer.branches) {
    Json chain = Json::array();
    for (const MicroLayer& m : branch.micro_layers) {
      chain.push_back(MicroLayerJson(m));
    }
    branches.push_back(std::move(chain));
  }
  j["branches"] = std::move(branches);
  if (!layer.annotations.empty()) {
    Json notes = Json::array();
    for (const Annotation& note : layer.annotations) {
      notes.push_back(AnnotationJson(note));
    }
    j["annotations"] = std::move(notes);
  }
  return j;
}

Json NetworkJson(const Network& network,
                 const std::optional<ScopeSettings>& scope) {
  Json j = Json::object();
  j["name"] = network.name;
  j["input_channels"] = network.input_channels;
  j["classifier_classes"] = network.classifier_classes;
  if (scope) {
    Json s = Json::object();
    s["alpha"] = scope->scope.alpha;
    s["beta"] = scope->scope.beta;
    s["lambda"] = FormatExact(scope->scope.lambda);
    s["scope_aware"] = scope->scope_aware;
    j["scope"] = std::move(s);
  }
  Json layers = Json::array();
  for (const MacroLayer& layer : network.macro_layers) {
    layers.push_back(MacroLayerJson(layer));
  }
  j["macro_layers"] = std::move(layers);
  return j;
}

}  // namespace

nlohmann::ordered_json ToJson(const NetworkDocument& document) {
  return NetworkJson(document.network, document.scope);
}

nlohmann::ordered_json ToJson(const Network& network) {
  return NetworkJson(network, std::nullopt);
}

NetworkDocument NetworkDocumentFromJson(const nlohmann::ordered_json& json) {
  const std::string root;
  RequireObject(json, root);
  RejectUnknown(json, root,
                {"name", "input_channels", "classifier_classes", "scope",
                 "macro_layers"});
  NetworkDocument document;
  Network& network = document.network;
  network.name = StringField(json, root, "name");
  network.input_channels = IntField(json, root, "input_channels");
  network.classifier_classes = IntField(json, root, "classifier_classes");
  if (auto it = json.find("scope"); it != json.end()) {
    document.scope = ParseScope(*it, "/scope");
  }
  const Json& layers = Require(json, root, "macro_layers");
  RequireArray(layers, "/macro_layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    network.macro_layers.push_back(
        ParseMacroLayer(layers[i], Child("/macro_layers", i)));
  }
  return document;
}

std::string Serialize(const NetworkDocument& document) {
  return ToJson(document).dump(2) + "\n";
}

std::string Serialize(const Network& network) {
  return ToJson(network).dump(2) + "\n";
}

NetworkDocument Deserialize(std::string_view text) {
  Json json;
  try {
    json = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
  return NetworkDocumentFromJson(json);
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

NetworkDocument ReadNetworkDocument(const std::filesystem::path& path) {
  return Deserialize(ReadTextFile(path));
}

}  // namespace cnnscale

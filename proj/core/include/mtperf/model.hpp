// Copyright 2026 The mtperf Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mtperf/canonical_json.hpp"
#include "mtperf/metamodel.hpp"

namespace mtperf {

using Value = std::variant<std::int64_t, std::string, bool>;

AttrType type_of(const Value& value);
std::string value_to_string(const Value& value);

struct ModelObject {
  std::string id;
  std::string cls;
  std::map<std::string, Value> attrs;
  std::map<std::string, std::vector<std::string>> refs;

  bool operator==(const ModelObject&) const = default;
};

/// Ordered instance graph. Object ids are unique; the id index is kept in
/// sync by add().
class Model {
 public:
  Model() = default;
  explicit Model(std::string metamodel) : metamodel_(std::move(metamodel)) {}

  const std::string& metamodel() const { return metamodel_; }
  const std::vector<ModelObject>& objects() const { return objects_; }
  std::size_t size() const { return objects_.size(); }

  /// Throws ValidationError on a duplicate id.
  void add(ModelObject object);
  void reserve(std::size_t n);

  std::optional<std::size_t> index_of(std::string_view id) const;
  const ModelObject* find(std::string_view id) const;

  std::size_t link_count() const;

  bool operator==(const Model& other) const {
    return metamodel_ == other.metamodel_ && objects_ == other.objects_;
  }

 private:
  std::string metamodel_;
  std::vector<ModelObject> objects_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Throws ParseError / SchemaError / ValidationError (duplicate ids,
/// dangling links).
Model model_from_json(const Json& doc);
Json model_to_json(const Model& model);

Model parse_model(std::string_view text);
Model load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const Model& model);
/// On-disk form: canonical JSON followed by LF.
std::string canonical_model_text(const Model& model);

std::string content_hash(const Model& model);
/// Hash of free text (transformation source) taken over its raw bytes.
std::string content_hash(std::string_view source_text);

enum class ViolationKind {
  MetamodelMismatch,
  DuplicateId,
  UnknownClass,
  UnknownAttribute,
  AttributeType,
  UnknownReference,
  LowerBound,
  UpperBound,
  DanglingLink,
  LinkTargetClass,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string object_id;
  std::string feature;
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> check_conformance(const Model& model, const MetaModel& mm);

}  // namespace mtperf

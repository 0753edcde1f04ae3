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
#include <vector>

#include "mtperf/canonical_json.hpp"

namespace mtperf {

enum class AttrType { Int, String, Bool };

std::string_view to_string(AttrType type);
std::optional<AttrType> attr_type_from_string(std::string_view name);

struct AttrDef {
  std::string name;
  AttrType type = AttrType::Int;

  bool operator==(const AttrDef&) const = default;
};

/// Upper bound of a reference multiplicity meaning "no limit".
inline constexpr std::int64_t kUnbounded = -1;

struct RefDef {
  std::string name;
  std::string target;
  std::int64_t lower = 0;
  std::int64_t upper = kUnbounded;

  bool bounded() const { return upper != kUnbounded; }
  bool operator==(const RefDef&) const = default;
};

struct ClassDef {
  std::string name;
  std::optional<std::string> superclass;
  std::vector<AttrDef> attrs;
  std::vector<RefDef> refs;

  bool operator==(const ClassDef&) const = default;
};

/// A validated class/attribute/reference schema with single inheritance.
///
/// Construction checks every intra-metamodel invariant (unique names,
/// existing superclasses, acyclic inheritance, existing reference targets,
/// feature names unique along the inheritance chain, sane multiplicities)
/// and throws ValidationError naming the offending element.
class MetaModel {
 public:
  MetaModel(std::string name, std::vector<ClassDef> classes);

  const std::string& name() const { return name_; }
  const std::vector<ClassDef>& classes() const { return classes_; }

  const ClassDef* find_class(std::string_view name) const;
  bool has_class(std::string_view name) const { return find_class(name) != nullptr; }

  /// True when `cls` equals `ancestor` or inherits from it.
  bool is_subclass_of(std::string_view cls, std::string_view ancestor) const;

  /// Attribute lookup including inherited attributes.
  const AttrDef* find_attr(std::string_view cls, std::string_view attr) const;
  /// Reference lookup including inherited references.
  const RefDef* find_ref(std::string_view cls, std::string_view ref) const;

  /// All attributes of `cls`, inherited ones first (root-most class first).
  std::vector<AttrDef> all_attrs(std::string_view cls) const;
  std::vector<RefDef> all_refs(std::string_view cls) const;

  /// `cls` followed by its superclasses up to the root.
  std::vector<std::string> lineage(std::string_view cls) const;

  bool operator==(const MetaModel& other) const {
    return name_ == other.name_ && classes_ == other.classes_;
  }

 private:
  std::string name_;
  std::vector<ClassDef> classes_;
  std::unordered_map<std::string, std::size_t> index_;
};

MetaModel metamodel_from_json(const Json& doc);
Json metamodel_to_json(const MetaModel& mm);

MetaModel parse_metamodel(std::string_view text);
MetaModel load_metamodel(const std::filesystem::path& path);
void save_metamodel(const std::filesystem::path& path, const MetaModel& mm);

std::string content_hash(const MetaModel& mm);

}  // namespace mtperf

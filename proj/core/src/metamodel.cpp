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

#include "mtperf/metamodel.hpp"

#include <set>
#include <unordered_set>

#include "json_schema.hpp"
#include "mtperf/error.hpp"
#include "mtperf/hash.hpp"

namespace mtperf {

std::string_view to_string(AttrType type) {
  switch (type) {
    case AttrType::Int: return "int";
    case AttrType::String: return "string";
    case AttrType::Bool: return "bool";
  }
  return "?";
}

std::optional<AttrType> attr_type_from_string(std::string_view name) {
  if (name == "int") return AttrType::Int;
  if (name == "string") return AttrType::String;
  if (name == "bool") return AttrType::Bool;
  return std::nullopt;
}

MetaModel::MetaModel(std::string name, std::vector<ClassDef> classes)
    : name_(std::move(name)), classes_(std::move(classes)) {
  if (name_.empty()) throw ValidationError("metamodel name must not be empty");
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    if (c.name.empty()) throw ValidationError("class #" + std::to_string(i) + " has an empty name");
    if (!index_.emplace(c.name, i).second) {
      throw ValidationError("duplicate class '" + c.name + "'");
    }
  }
  for (const auto& c : classes_) {
    if (c.superclass && !index_.contains(*c.superclass)) {
      throw ValidationError("class '" + c.name + "' has unknown superclass '" + *c.superclass + "'");
    }
    for (const auto& r : c.refs) {
      if (!index_.contains(r.target)) {
        throw ValidationError("reference '" + c.name + "." + r.name + "' targets unknown class '" +
                              r.target + "'");
      }
      if (r.lower < 0) {
        throw ValidationError("reference '" + c.name + "." + r.name + "' has negative lower bound");
      }
      if (r.upper != kUnbounded && r.upper < r.lower) {
        throw ValidationError("reference '" + c.name + "." + r.name +
                              "' has upper bound below lower bound");
      }
    }
  }
  // Acyclicity: walk each chain; a chain longer than the class count loops.
  for (const auto& c : classes_) {
    std::vector<std::string> chain{c.name};
    const ClassDef* cur = &c;
    while (cur->superclass) {
      if (*cur->superclass == c.name || chain.size() > classes_.size()) {
        std::string cycle;
        for (const auto& n : chain) cycle += n + " -> ";
        cycle += *cur->superclass;
        throw ValidationError("cyclic inheritance: " + cycle);
      }
      chain.push_back(*cur->superclass);
      cur = &classes_[index_.at(*cur->superclass)];
    }
  }
  for (const auto& c : classes_) {
    std::unordered_set<std::string> seen;
    for (const auto& cls : lineage(c.name)) {
      const auto& def = classes_[index_.at(cls)];
      for (const auto& a : def.attrs) {
        if (!seen.insert(a.name).second) {
          throw ValidationError("feature '" + a.name + "' declared twice in the hierarchy of '" +
                                c.name + "'");
        }
      }
      for (const auto& r : def.refs) {
        if (!seen.insert(r.name).second) {
          throw ValidationError("feature '" + r.name + "' declared twice in the hierarchy of '" +
                                c.name + "'");
        }
      }
    }
  }
}

const ClassDef* MetaModel::find_class(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &classes_[it->second];
}

bool MetaModel::is_subclass_of(std::string_view cls, std::string_view ancestor) const {
  const ClassDef* cur = find_class(cls);
  while (cur) {
    if (cur->name == ancestor) return true;
    cur = cur->superclass ? find_class(*cur->superclass) : nullptr;
  }
  return false;
}

std::vector<std::string> MetaModel::lineage(std::string_view cls) const {
  std::vector<std::string> out;
  const ClassDef* cur = find_class(cls);
  while (cur) {
    out.push_back(cur->name);
    cur = cur->superclass ? find_class(*cur->superclass) : nullptr;
  }
  return out;
}

const AttrDef* MetaModel::find_attr(std::string_view cls, std::string_view attr) const {
  const ClassDef* cur = find_class(cls);
  while (cur) {
    for (const auto& a : cur->attrs) {
      if (a.name == attr) return &a;
    }
    cur = cur->superclass ? find_class(*cur->superclass) : nullptr;
  }
  return nullptr;
}

const RefDef* MetaModel::find_ref(std::string_view cls, std::string_view ref) const {
  const ClassDef* cur = find_class(cls);
  while (cur) {
    for (const auto& r : cur->refs) {
      if (r.name == ref) return &r;
    }
    cur = cur->superclass ? find_class(*cur->superclass) : nullptr;
  }
  return nullptr;
}

std::vector<AttrDef> MetaModel::all_attrs(std::string_view cls) const {
  auto chain = lineage(cls);
  std::vector<AttrDef> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const auto& def = *find_class(*it);
    out.insert(out.end(), def.attrs.begin(), def.attrs.end());
  }
  return out;
}

std::vector<RefDef> MetaModel::all_refs(std::string_view cls) const {
  auto chain = lineage(cls);
  std::vector<RefDef> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const auto& def = *find_class(*it);
    out.insert(out.end(), def.refs.begin(), def.refs.end());
  }
  return out;
}

MetaModel metamodel_from_json(const Json& doc) {
  using namespace detail;
  require_object(doc, "metamodel");
  check_keys(doc, {"name", "classes"}, "metamodel");
  std::string name = get_string(doc, "name", "metamodel");
  const Json& classes_json = require_field(doc, "classes", "metamodel");
  require_array(classes_json, "metamodel.classes");

  std::vector<ClassDef> classes;
  for (std::size_t i = 0; i < classes_json.size(); ++i) {
    const Json& cj = classes_json[i];
    std::string ctx = "classes[" + std::to_string(i) + "]";
    require_object(cj, ctx);
    check_keys(cj, {"name", "superclass", "attrs", "refs"}, ctx);
    ClassDef c;
    c.name = get_string(cj, "name", ctx);
    ctx = "class '" + c.name + "'";
    if (auto it = cj.find("superclass"); it != cj.end() && !it->is_null()) {
      if (!it->is_string()) throw SchemaError(ctx + ": superclass must be a string or null");
      c.superclass = it->get<std::string>();
    }
    if (auto it = cj.find("attrs"); it != cj.end()) {
      require_array(*it, ctx + ".attrs");
      for (const Json& aj : *it) {
        require_object(aj, ctx + ".attrs[]");
        check_keys(aj, {"name", "type"}, ctx + ".attrs[]");
        AttrDef a;
        a.name = get_string(aj, "name", ctx + ".attrs[]");
        std::string type = get_string(aj, "type", ctx + "." + a.name);
        auto t = attr_type_from_string(type);
        if (!t) throw SchemaError(ctx + "." + a.name + ": unknown attribute type '" + type + "'");
        a.type = *t;
        c.attrs.push_back(std::move(a));
      }
    }
    if (auto it = cj.find("refs"); it != cj.end()) {
      require_array(*it, ctx + ".refs");
      for (const Json& rj : *it) {
        require_object(rj, ctx + ".refs[]");
        check_keys(rj, {"name", "target", "lower", "upper"}, ctx + ".refs[]");
        RefDef r;
        r.name = get_string(rj, "name", ctx + ".refs[]");
        std::string rctx = ctx + "." + r.name;
        r.target = get_string(rj, "target", rctx);
        r.lower = get_int(rj, "lower", rctx);
        r.upper = get_int(rj, "upper", rctx);
        c.refs.push_back(std::move(r));
      }
    }
    classes.push_back(std::move(c));
  }
  return MetaModel(std::move(name), std::move(classes));
}

Json metamodel_to_json(const MetaModel& mm) {
  Json classes = Json::array();
  for (const auto& c : mm.classes()) {
    Json attrs = Json::array();
    for (const auto& a : c.attrs) attrs.push_back({{"name", a.name}, {"type", to_string(a.type)}});
    Json refs = Json::array();
    for (const auto& r : c.refs) {
      refs.push_back({{"name", r.name}, {"target", r.target}, {"lower", r.lower}, {"upper", r.upper}});
    }
    classes.push_back({{"name", c.name},
                       {"superclass", c.superclass ? Json(*c.superclass) : Json(nullptr)},
                       {"attrs", std::move(attrs)},
                       {"refs", std::move(refs)}});
  }
  return {{"name", mm.name()}, {"classes", std::move(classes)}};
}

MetaModel parse_metamodel(std::string_view text) {
  return metamodel_from_json(parse_json(text, "metamodel"));
}

MetaModel load_metamodel(const std::filesystem::path& path) {
  return metamodel_from_json(parse_json(read_text_file(path), path.string()));
}

void save_metamodel(const std::filesystem::path& path, const MetaModel& mm) {
  write_canonical_file(path, metamodel_to_json(mm));
}

std::string content_hash(const MetaModel& mm) {
  return sha256_hex(canonical_dump(metamodel_to_json(mm)));
}

}  // namespace mtperf

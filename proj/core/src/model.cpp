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

#include "mtperf/model.hpp"

#include "json_schema.hpp"
#include "mtperf/error.hpp"
#include "mtperf/hash.hpp"

namespace mtperf {

AttrType type_of(const Value& value) {
  switch (value.index()) {
    case 0: return AttrType::Int;
    case 1: return AttrType::String;
    default: return AttrType::Bool;
  }
}

std::string value_to_string(const Value& value) {
  if (auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  if (auto* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
  return Json(std::get<std::string>(value)).dump();
}

void Model::add(ModelObject object) {
  if (!index_.emplace(object.id, objects_.size()).second) {
    throw ValidationError("duplicate object id '" + object.id + "'");
  }
  objects_.push_back(std::move(object));
}

void Model::reserve(std::size_t n) {
  objects_.reserve(n);
  index_.reserve(n);
}

std::optional<std::size_t> Model::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const ModelObject* Model::find(std::string_view id) const {
  auto i = index_of(id);
  return i ? &objects_[*i] : nullptr;
}

std::size_t Model::link_count() const {
  std::size_t n = 0;
  for (const auto& o : objects_) {
    for (const auto& [_, links] : o.refs) n += links.size();
  }
  return n;
}

Model model_from_json(const Json& doc) {
  using namespace detail;
  require_object(doc, "model");
  check_keys(doc, {"metamodel", "objects"}, "model");
  Model model(get_string(doc, "metamodel", "model"));
  const Json& objects = require_field(doc, "objects", "model");
  require_array(objects, "model.objects");
  model.reserve(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const Json& oj = objects[i];
    std::string ctx = "objects[" + std::to_string(i) + "]";
    require_object(oj, ctx);
    check_keys(oj, {"id", "class", "attrs", "refs"}, ctx);
    ModelObject o;
    o.id = get_string(oj, "id", ctx);
    o.cls = get_string(oj, "class", ctx);
    ctx = "object '" + o.id + "'";
    if (auto it = oj.find("attrs"); it != oj.end()) {
      require_object(*it, ctx + ".attrs");
      for (const auto& [name, v] : it->items()) {
        if (v.is_boolean()) {
          o.attrs.emplace(name, v.get<bool>());
        } else if (v.is_number_integer()) {
          o.attrs.emplace(name, as_int(v, ctx + "." + name));
        } else if (v.is_string()) {
          o.attrs.emplace(name, v.get<std::string>());
        } else {
          throw SchemaError(ctx + "." + name + ": attribute values must be int, string or bool");
        }
      }
    }
    if (auto it = oj.find("refs"); it != oj.end()) {
      require_object(*it, ctx + ".refs");
      for (const auto& [name, v] : it->items()) {
        require_array(v, ctx + ".refs." + name);
        std::vector<std::string> links;
        links.reserve(v.size());
        for (const Json& l : v) {
          if (!l.is_string()) throw SchemaError(ctx + ".refs." + name + ": link ids must be strings");
          links.push_back(l.get<std::string>());
        }
        o.refs.emplace(name, std::move(links));
      }
    }
    model.add(std::move(o));
  }
  for (const auto& o : model.objects()) {
    for (const auto& [name, links] : o.refs) {
      for (const auto& l : links) {
        if (!model.index_of(l)) {
          throw ValidationError("object '" + o.id + "' ref '" + name + "' links unknown id '" + l + "'");
        }
      }
    }
  }
  return model;
}

Json model_to_json(const Model& model) {
  Json objects = Json::array();
  for (const auto& o : model.objects()) {
    Json attrs = Json::object();
    for (const auto& [name, v] : o.attrs) {
      std::visit([&](const auto& x) { attrs[name] = x; }, v);
    }
    Json refs = Json::object();
    for (const auto& [name, links] : o.refs) refs[name] = links;
    objects.push_back({{"id", o.id}, {"class", o.cls}, {"attrs", std::move(attrs)},
                       {"refs", std::move(refs)}});
  }
  return {{"metamodel", model.metamodel()}, {"objects", std::move(objects)}};
}

Model parse_model(std::string_view text) { return model_from_json(parse_json(text, "model")); }

Model load_model(const std::filesystem::path& path) {
  return model_from_json(parse_json(read_text_file(path), path.string()));
}

std::string canonical_model_text(const Model& model) {
  return canonical_dump(model_to_json(model)) + "\n";
}

void save_model(const std::filesystem::path& path, const Model& model) {
  write_text_file(path, canonical_model_text(model));
}

std::string content_hash(const Model& model) {
  return sha256_hex(canonical_dump(model_to_json(model)));
}

std::string content_hash(std::string_view source_text) { return sha256_hex(source_text); }

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::MetamodelMismatch: return "metamodel_mismatch";
    case ViolationKind::DuplicateId: return "duplicate_id";
    case ViolationKind::UnknownClass: return "unknown_class";
    case ViolationKind::UnknownAttribute: return "unknown_attribute";
    case ViolationKind::AttributeType: return "attribute_type";
    case ViolationKind::UnknownReference: return "unknown_reference";
    case ViolationKind::LowerBound: return "lower_bound";
    case ViolationKind::UpperBound: return "upper_bound";
    case ViolationKind::DanglingLink: return "dangling_link";
    case ViolationKind::LinkTargetClass: return "link_target_class";
  }
  return "?";
}

std::vector<Violation> check_conformance(const Model& model, const MetaModel& mm) {
  std::vector<Violation> out;
  std::unordered_map<std::string, std::vector<RefDef>> refs_by_class;
  if (!model.objects().empty() && model.metamodel() != mm.name()) {
    out.push_back({ViolationKind::MetamodelMismatch, "", "",
                   "model declares metamodel '" + model.metamodel() + "' but '" + mm.name() +
                       "' was supplied"});
  }
  for (const auto& o : model.objects()) {
    if (model.find(o.id) != &o) {
      out.push_back({ViolationKind::DuplicateId, o.id, "", "duplicate object id"});
    }
    if (!mm.has_class(o.cls)) {
      out.push_back({ViolationKind::UnknownClass, o.id, "", "unknown class '" + o.cls + "'"});
      continue;
    }
    for (const auto& [name, v] : o.attrs) {
      const AttrDef* def = mm.find_attr(o.cls, name);
      if (!def) {
        out.push_back({ViolationKind::UnknownAttribute, o.id, name,
                       "class '" + o.cls + "' has no attribute '" + name + "'"});
      } else if (def->type != type_of(v)) {
        out.push_back({ViolationKind::AttributeType, o.id, name,
                       "attribute '" + name + "' expects " + std::string(to_string(def->type)) +
                           ", got " + std::string(to_string(type_of(v)))});
      }
    }
    for (const auto& [name, _] : o.refs) {
      if (!mm.find_ref(o.cls, name)) {
        out.push_back({ViolationKind::UnknownReference, o.id, name,
                       "class '" + o.cls + "' has no reference '" + name + "'"});
      }
    }
    auto cached = refs_by_class.find(o.cls);
    if (cached == refs_by_class.end()) {
      cached = refs_by_class.emplace(o.cls, mm.all_refs(o.cls)).first;
    }
    for (const auto& def : cached->second) {
      auto it = o.refs.find(def.name);
      const std::size_t n = it == o.refs.end() ? 0 : it->second.size();
      if (static_cast<std::int64_t>(n) < def.lower) {
        out.push_back({ViolationKind::LowerBound, o.id, def.name,
                       "reference '" + def.name + "' has " + std::to_string(n) +
                           " links, needs at least " + std::to_string(def.lower)});
      }
      if (def.bounded() && static_cast<std::int64_t>(n) > def.upper) {
        out.push_back({ViolationKind::UpperBound, o.id, def.name,
                       "reference '" + def.name + "' has " + std::to_string(n) +
                           " links, allows at most " + std::to_string(def.upper)});
      }
      if (it == o.refs.end()) continue;
      for (const auto& target_id : it->second) {
        const ModelObject* target = model.find(target_id);
        if (!target) {
          out.push_back({ViolationKind::DanglingLink, o.id, def.name,
                         "link to unknown object '" + target_id + "'"});
        } else if (!mm.is_subclass_of(target->cls, def.target)) {
          out.push_back({ViolationKind::LinkTargetClass, o.id, def.name,
                         "link to '" + target_id + "' of class '" + target->cls + "', expected '" +
                             def.target + "'"});
        }
      }
    }
  }
  return out;
}

}  // namespace mtperf

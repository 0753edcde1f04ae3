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

#include "mtperf/genmodel.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <unordered_set>

#include "json_schema.hpp"

namespace mtperf {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t stream_seed(std::uint64_t seed, std::string_view cls, std::uint64_t ordinal,
                          std::string_view feature) {
  std::uint64_t k = SplitMix64::mix(seed ^ fnv1a64(cls));
  k = SplitMix64::mix(k + ordinal);
  return SplitMix64::mix(k ^ fnv1a64(feature));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64::mix(seed + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

Scale Scale::parse(std::string_view text) {
  auto bad = [&]() -> SpecError { return SpecError("invalid scale '" + std::string(text) + "'"); };
  auto parse_uint = [&](std::string_view s) {
    std::int64_t v = 0;
    if (s.empty()) throw bad();
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 0) throw bad();
    return v;
  };
  Scale s;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    s.num = parse_uint(text.substr(0, slash));
    s.den = parse_uint(text.substr(slash + 1));
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 9) throw bad();
    s.den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) s.den *= 10;
    s.num = (whole.empty() ? 0 : parse_uint(whole)) * s.den + parse_uint(frac);
  } else {
    s.num = parse_uint(text);
    s.den = 1;
  }
  if (s.num <= 0 || s.den <= 0) throw SpecError("scale must be positive, got '" + std::string(text) + "'");
  const std::int64_t g = std::gcd(s.num, s.den);
  s.num /= g;
  s.den /= g;
  return s;
}

std::int64_t Scale::apply(std::int64_t base) const {
  const __int128 twice = static_cast<__int128>(2) * base * num + den;
  return static_cast<std::int64_t>(twice / (static_cast<__int128>(2) * den));
}

std::string Scale::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

namespace {

using detail::check_keys;
using detail::get_int;
using detail::require_object;

AttrGen attr_gen_from_json(const Json& j, const std::string& ctx) {
  require_object(j, ctx);
  if (j.size() != 1) throw SchemaError(ctx + ": expected exactly one of intRange, stringPool, boolBernoulli");
  const auto& [kind, body] = *j.items().begin();
  require_object(body, ctx + "." + kind);
  if (kind == "intRange") {
    check_keys(body, {"lo", "hi"}, ctx + ".intRange");
    IntRange r{get_int(body, "lo", ctx), get_int(body, "hi", ctx)};
    if (r.hi < r.lo) throw SpecError(ctx + ": intRange hi < lo");
    return r;
  }
  if (kind == "stringPool") {
    check_keys(body, {"prefix", "size"}, ctx + ".stringPool");
    StringPool p{detail::get_string(body, "prefix", ctx), 1000};
    if (body.contains("size")) p.size = get_int(body, "size", ctx);
    if (p.size < 1) throw SpecError(ctx + ": stringPool size must be >= 1");
    return p;
  }
  if (kind == "boolBernoulli") {
    check_keys(body, {"p"}, ctx + ".boolBernoulli");
    BoolBernoulli b{detail::get_number(body, "p", ctx)};
    if (!(b.p >= 0.0 && b.p <= 1.0)) throw SpecError(ctx + ": boolBernoulli p must be in [0, 1]");
    return b;
  }
  throw SchemaError(ctx + ": unknown generator '" + kind + "'");
}

Json to_json(const AttrGen& g) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IntRange>) {
          return {{"intRange", {{"lo", x.lo}, {"hi", x.hi}}}};
        } else if constexpr (std::is_same_v<T, StringPool>) {
          return {{"stringPool", {{"prefix", x.prefix}, {"size", x.size}}}};
        } else {
          return {{"boolBernoulli", {{"p", x.p}}}};
        }
      },
      g);
}

}  // namespace

GenSpec gen_spec_from_json(const Json& j) {
  require_object(j, "genspec");
  check_keys(j, {"classes", "refs"}, "genspec");
  GenSpec spec;
  if (auto it = j.find("classes"); it != j.end()) {
    require_object(*it, "genspec.classes");
    for (const auto& [cls, cj] : it->items()) {
      const std::string ctx = "genspec.classes." + cls;
      require_object(cj, ctx);
      check_keys(cj, {"baseCount", "attrs"}, ctx);
      ClassGen g;
      g.base_count = get_int(cj, "baseCount", ctx);
      if (g.base_count < 0) throw SpecError(ctx + ": baseCount must be >= 0");
      if (auto a = cj.find("attrs"); a != cj.end()) {
        require_object(*a, ctx + ".attrs");
        for (const auto& [attr, aj] : a->items()) g.attrs.emplace(attr, attr_gen_from_json(aj, ctx + "." + attr));
      }
      spec.per_class.emplace(cls, std::move(g));
    }
  }
  if (auto it = j.find("refs"); it != j.end()) {
    require_object(*it, "genspec.refs");
    for (const auto& [key, rj] : it->items()) {
      const std::string ctx = "genspec.refs." + key;
      require_object(rj, ctx);
      check_keys(rj, {"mode", "linksPerObject"}, ctx);
      RefFill f;
      if (auto m = rj.find("mode"); m != rj.end()) {
        if (*m == "uniform") f.mode = FillMode::Uniform;
        else if (*m == "roundRobin") f.mode = FillMode::RoundRobin;
        else throw SchemaError(ctx + ".mode: expected 'uniform' or 'roundRobin'");
      }
      if (auto l = rj.find("linksPerObject"); l != rj.end()) {
        if (l->is_number_integer()) {
          f.links = LinksFixed{detail::as_int(*l, ctx + ".linksPerObject")};
        } else if (*l == "lower") {
          f.links = LinksLower{};
        } else if (l->is_object() && l->size() == 1 && l->contains("upperCapped")) {
          f.links = LinksUpperCapped{get_int(*l, "upperCapped", ctx + ".linksPerObject")};
        } else {
          throw SchemaError(ctx + ".linksPerObject: expected an integer, \"lower\" or {\"upperCapped\": n}");
        }
      }
      spec.ref_fill.emplace(key, f);
    }
  }
  return spec;
}

Json to_json(const GenSpec& spec) {
  Json classes = Json::object();
  for (const auto& [cls, g] : spec.per_class) {
    Json attrs = Json::object();
    for (const auto& [name, gen] : g.attrs) attrs[name] = to_json(gen);
    classes[cls] = {{"baseCount", g.base_count}, {"attrs", std::move(attrs)}};
  }
  Json refs = Json::object();
  for (const auto& [key, f] : spec.ref_fill) {
    Json links = std::visit(
        [](const auto& x) -> Json {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, LinksFixed>) return x.n;
          else if constexpr (std::is_same_v<T, LinksLower>) return "lower";
          else return {{"upperCapped", x.cap}};
        },
        f.links);
    refs[key] = {{"mode", f.mode == FillMode::Uniform ? "uniform" : "roundRobin"}, {"linksPerObject", links}};
  }
  return {{"classes", std::move(classes)}, {"refs", std::move(refs)}};
}

GenSpec load_gen_spec(const std::filesystem::path& path) {
  return gen_spec_from_json(parse_json(read_text_file(path), path.string()));
}

void check_gen_spec(const GenSpec& spec, const MetaModel& mm) {
  for (const auto& [cls, g] : spec.per_class) {
    if (!mm.has_class(cls)) throw SpecError("genspec names unknown class '" + cls + "'");
    for (const auto& [attr, gen] : g.attrs) {
      const AttrDef* def = mm.find_attr(cls, attr);
      if (!def) throw SpecError("genspec names unknown attribute '" + cls + "." + attr + "'");
      const bool ok = (def->type == AttrType::Int && std::holds_alternative<IntRange>(gen)) ||
                      (def->type == AttrType::String && std::holds_alternative<StringPool>(gen)) ||
                      (def->type == AttrType::Bool && std::holds_alternative<BoolBernoulli>(gen));
      if (!ok) throw SpecError("generator for '" + cls + "." + attr + "' does not match its type");
    }
  }
  for (const auto& [key, _] : spec.ref_fill) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) throw SpecError("genspec ref key '" + key + "' must be Class.ref");
    const std::string cls = key.substr(0, dot);
    const std::string ref = key.substr(dot + 1);
    if (!mm.has_class(cls)) throw SpecError("genspec names unknown class '" + cls + "'");
    if (!mm.find_ref(cls, ref)) throw SpecError("genspec names unknown reference '" + key + "'");
  }
}

namespace {

const AttrGen* find_attr_gen(const GenSpec& spec, const MetaModel& mm, const std::string& cls,
                             const std::string& attr) {
  for (const auto& c : mm.lineage(cls)) {
    auto it = spec.per_class.find(c);
    if (it == spec.per_class.end()) continue;
    auto g = it->second.attrs.find(attr);
    if (g != it->second.attrs.end()) return &g->second;
  }
  return nullptr;
}

RefFill find_ref_fill(const GenSpec& spec, const MetaModel& mm, const std::string& cls, const std::string& ref) {
  for (const auto& c : mm.lineage(cls)) {
    auto it = spec.ref_fill.find(c + "." + ref);
    if (it != spec.ref_fill.end()) return it->second;
  }
  return RefFill{};
}

Value draw(const AttrGen* gen, const AttrDef& def, SplitMix64& rng) {
  if (!gen) {
    switch (def.type) {
      case AttrType::Int: return static_cast<std::int64_t>(rng.below(101));
      case AttrType::String: return def.name + std::to_string(rng.below(1000));
      case AttrType::Bool: return rng.unit() < 0.5;
    }
  }
  return std::visit(
      [&](const auto& g) -> Value {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, IntRange>) {
          const auto span = static_cast<std::uint64_t>(g.hi) - static_cast<std::uint64_t>(g.lo);
          const std::uint64_t off = span == UINT64_MAX ? rng.next() : rng.below(span + 1);
          return static_cast<std::int64_t>(static_cast<std::uint64_t>(g.lo) + off);
        } else if constexpr (std::is_same_v<T, StringPool>) {
          return g.prefix + std::to_string(rng.below(static_cast<std::uint64_t>(g.size)));
        } else {
          return rng.unit() < g.p;
        }
      },
      *gen);
}

std::int64_t link_count(const RefFill& fill, const RefDef& ref, const std::string& key) {
  const std::int64_t n = std::visit(
      [&](const auto& l) -> std::int64_t {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, LinksFixed>) return l.n;
        else if constexpr (std::is_same_v<T, LinksLower>) return ref.lower;
        else return ref.bounded() ? std::min(ref.upper, l.cap) : l.cap;
      },
      fill.links);
  if (n < ref.lower || (ref.bounded() && n > ref.upper)) {
    throw SpecError("linksPerObject " + std::to_string(n) + " for '" + key + "' violates multiplicity [" +
                    std::to_string(ref.lower) + ", " + (ref.bounded() ? std::to_string(ref.upper) : "*") + "]");
  }
  return n;
}

}  // namespace

Model generate(const MetaModel& mm, const GenSpec& spec, const Scale& scale, std::uint64_t seed) {
  check_gen_spec(spec, mm);
  if (scale.num <= 0 || scale.den <= 0) throw SpecError("scale must be positive");

  struct Planned {
    std::string cls;
    std::int64_t ordinal;
  };
  std::vector<Planned> plan;
  for (const auto& c : mm.classes()) {
    auto it = spec.per_class.find(c.name);
    const std::int64_t count = it == spec.per_class.end() ? 0 : scale.apply(it->second.base_count);
    for (std::int64_t i = 0; i < count; ++i) plan.push_back({c.name, i});
  }

  // Target pools: members of a class and all of its subclasses, in id order.
  std::map<std::string, std::vector<std::size_t>> pools;
  for (const auto& c : mm.classes()) {
    auto& pool = pools[c.name];
    for (std::size_t i = 0; i < plan.size(); ++i) {
      if (mm.is_subclass_of(plan[i].cls, c.name)) pool.push_back(i);
    }
  }

  std::vector<ModelObject> objects(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    objects[i].id = "o" + std::to_string(i + 1);
    objects[i].cls = plan[i].cls;
  }

  std::map<std::string, std::vector<AttrDef>> attrs_of;
  std::map<std::string, std::vector<RefDef>> refs_of;
  for (const auto& c : mm.classes()) {
    attrs_of[c.name] = mm.all_attrs(c.name);
    refs_of[c.name] = mm.all_refs(c.name);
  }

  std::map<std::string, std::size_t> cursors;
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto& [cls, ordinal] = plan[i];
    ModelObject& o = objects[i];
    for (const auto& def : attrs_of[cls]) {
      SplitMix64 rng(stream_seed(seed, cls, static_cast<std::uint64_t>(ordinal), def.name));
      o.attrs.emplace(def.name, draw(find_attr_gen(spec, mm, cls, def.name), def, rng));
    }
    for (const auto& ref : refs_of[cls]) {
      const std::string key = cls + "." + ref.name;
      const RefFill fill = find_ref_fill(spec, mm, cls, ref.name);
      const auto links = static_cast<std::size_t>(link_count(fill, ref, key));
      const auto& pool = pools[ref.target];
      if (links > pool.size()) {
        throw UnsatisfiableSpec("'" + key + "' needs " + std::to_string(links) + " distinct '" + ref.target +
                                "' targets per object but only " + std::to_string(pool.size()) + " exist");
      }
      chosen.clear();
      if (fill.mode == FillMode::RoundRobin) {
        std::size_t& cursor = cursors[key];
        for (std::size_t j = 0; j < links; ++j) chosen.push_back(pool[(cursor + j) % pool.size()]);
        if (!pool.empty()) cursor = (cursor + links) % pool.size();
      } else {
        // Floyd's sampling: `links` distinct positions out of pool.size().
        SplitMix64 rng(stream_seed(seed, cls, static_cast<std::uint64_t>(ordinal), "ref:" + ref.name));
        std::unordered_set<std::size_t> taken;
        for (std::size_t j = pool.size() - links; j < pool.size(); ++j) {
          std::size_t t = static_cast<std::size_t>(rng.below(j + 1));
          if (!taken.insert(t).second) {
            t = j;
            taken.insert(t);
          }
          chosen.push_back(pool[t]);
        }
      }
      std::vector<std::string> ids;
      ids.reserve(chosen.size());
      for (std::size_t t : chosen) ids.push_back(objects[t].id);
      o.refs.emplace(ref.name, std::move(ids));
    }
  }

  Model model(mm.name());
  model.reserve(objects.size());
  for (auto& o : objects) model.add(std::move(o));
  return model;
}

std::vector<Model> scale_series(const MetaModel& mm, const GenSpec& spec, const std::vector<Scale>& scales,
                                std::uint64_t seed) {
  std::vector<Model> out;
  out.reserve(scales.size());
  for (std::size_t i = 0; i < scales.size(); ++i) out.push_back(generate(mm, spec, scales[i], derive_seed(seed, i)));
  return out;
}

}  // namespace mtperf

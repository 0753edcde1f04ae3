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
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mtperf/canonical_json.hpp"
#include "mtperf/error.hpp"
#include "mtperf/metamodel.hpp"
#include "mtperf/model.hpp"

namespace mtperf {

class SpecError : public Error {
 public:
  using Error::Error;
};

class UnsatisfiableSpec : public Error {
 public:
  using Error::Error;
};

/// SplitMix64 (Steele, Lea, Flood). The output function doubles as the
/// key-mixing function for stream derivation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }
  /// Uniform in [0, bound) via the high half of a 128-bit product.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }
  /// Uniform in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// 64-bit FNV-1a over the bytes of `s`.
std::uint64_t fnv1a64(std::string_view s);

/// Seed of the stream for one (class, object ordinal, feature) triple:
///   mix(mix(mix(seed ^ fnv(cls)) + ordinal) ^ fnv(feature))
std::uint64_t stream_seed(std::uint64_t seed, std::string_view cls, std::uint64_t ordinal,
                          std::string_view feature);

/// Seed for element `index` of a scale series: mix(seed + (index + 1) * golden).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Exact positive rational scale factor.
struct Scale {
  std::int64_t num = 1;
  std::int64_t den = 1;

  /// Accepts "2", "1.5", "3/4". Throws SpecError on malformed or non-positive input.
  static Scale parse(std::string_view text);
  /// round-half-up(base * num / den)
  std::int64_t apply(std::int64_t base) const;
  std::string to_string() const;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 100;
};
struct StringPool {
  std::string prefix;
  std::int64_t size = 1000;
};
struct BoolBernoulli {
  double p = 0.5;
};
using AttrGen = std::variant<IntRange, StringPool, BoolBernoulli>;

struct ClassGen {
  std::int64_t base_count = 0;
  std::map<std::string, AttrGen> attrs;
};

enum class FillMode { Uniform, RoundRobin };

/// Number of links per source object: a fixed count, the reference's lower
/// bound, or min(upper, cap).
struct LinksFixed {
  std::int64_t n = 0;
};
struct LinksLower {};
struct LinksUpperCapped {
  std::int64_t cap = 0;
};
using LinksPerObject = std::variant<LinksFixed, LinksLower, LinksUpperCapped>;

struct RefFill {
  FillMode mode = FillMode::RoundRobin;
  LinksPerObject links = LinksLower{};
};

/// Generation recipe. Keys of `ref_fill` are "Class.ref". Classes absent
/// from `per_class` get 0 objects; attributes without a generator get a
/// type default; references without a policy use roundRobin with the lower
/// bound.
struct GenSpec {
  std::map<std::string, ClassGen> per_class;
  std::map<std::string, RefFill> ref_fill;
};

GenSpec gen_spec_from_json(const Json& j);
Json to_json(const GenSpec& spec);
GenSpec load_gen_spec(const std::filesystem::path& path);

/// Throws SpecError when the spec names features the metamodel lacks.
void check_gen_spec(const GenSpec& spec, const MetaModel& mm);

/// Deterministic conforming instance of `mm`. Objects are created class by
/// class in metamodel order with ids o1, o2, ...; every link list holds
/// distinct targets drawn from the target class and its subclasses.
Model generate(const MetaModel& mm, const GenSpec& spec, const Scale& scale, std::uint64_t seed);

std::vector<Model> scale_series(const MetaModel& mm, const GenSpec& spec, const std::vector<Scale>& scales,
                                std::uint64_t seed);

}  // namespace mtperf

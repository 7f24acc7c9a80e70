// Copyright 2026 The tagground Authors
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

#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tagground/error.hpp"
#include "tagground/grounding.hpp"
#include "tagground/recommender.hpp"
#include "tagground/text.hpp"

namespace tagground {

enum class VariationMode {
  kSetDisplacement,  // share of the top-k set not in the baseline top-k
  kRankAware,        // share of the k rank positions whose item changed
};

NLOHMANN_JSON_SERIALIZE_ENUM(Strategy, {{Strategy::kAllExpansion, "all"},
                                        {Strategy::kSibling, "sibling"},
                                        {Strategy::kMft, "mft"}})
NLOHMANN_JSON_SERIALIZE_ENUM(SiblingScope,
                             {{SiblingScope::kEitherResource, "either"},
                              {SiblingScope::kExpandedTagResource, "expanded"}})
NLOHMANN_JSON_SERIALIZE_ENUM(MatchingMode, {{MatchingMode::kGreedy, "greedy"},
                                            {MatchingMode::kExact, "exact"}})
NLOHMANN_JSON_SERIALIZE_ENUM(VariationMode,
                             {{VariationMode::kSetDisplacement, "set"},
                              {VariationMode::kRankAware, "rank"}})
NLOHMANN_JSON_SERIALIZE_ENUM(NormalizationMode,
                             {{NormalizationMode::kPreserve, "preserve"},
                              {NormalizationMode::kFoldSeparators,
                               "fold-separators"}})

/// Everything that determines an evaluation report. `workers` only changes
/// how fast the report is produced, so it is left out of the snapshot.
struct EvalConfig {
  std::string corpus_name = "corpus";
  std::size_t k = 10;
  std::vector<Strategy> strategies = {Strategy::kAllExpansion,
                                      Strategy::kSibling, Strategy::kMft};
  bool fallback_to_all = false;
  double mft_threshold = kDefaultMftThreshold;
  SiblingScope sibling_scope = SiblingScope::kEitherResource;
  MatchingMode matching = MatchingMode::kGreedy;
  VariationMode variation = VariationMode::kSetDisplacement;
  NormalizationMode normalization = NormalizationMode::kPreserve;

  // Input provenance, recorded so a snapshot names what it was run on.
  std::string corpus_path;
  std::vector<std::string> ontology_paths;
  std::string thesaurus_path;
  std::string catalog_path;

  std::size_t workers = 1;

  GroundingStrategy strategy(Strategy s) const {
    GroundingStrategy g;
    g.value = s;
    g.fallback_to_all = fallback_to_all;
    g.mft_threshold = mft_threshold;
    g.sibling_scope = sibling_scope;
    return g;
  }
};

inline void to_json(nlohmann::ordered_json& j, const EvalConfig& c) {
  j = nlohmann::ordered_json{
      {"corpus_name", c.corpus_name},
      {"k", c.k},
      {"strategies", c.strategies},
      {"fallback_to_all", c.fallback_to_all},
      {"mft_threshold", c.mft_threshold},
      {"sibling_scope", c.sibling_scope},
      {"matching", c.matching},
      {"variation", c.variation},
      {"normalization", c.normalization},
      {"corpus_path", c.corpus_path},
      {"ontology_paths", c.ontology_paths},
      {"thesaurus_path", c.thesaurus_path},
      {"catalog_path", c.catalog_path},
  };
}

/// Reads the keys present in `j` over the defaults already in `c`.
inline void from_json(const nlohmann::ordered_json& j, EvalConfig& c) {
  const auto read = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  // Enum conversion maps unknown names to the first enumerator; a value that
  // does not survive the round trip was not a known name.
  const auto read_checked = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    j.at(key).get_to(field);
    if (nlohmann::ordered_json(field) != j.at(key)) {
      throw Error(std::string("unknown value for ") + key + ": " +
                  j.at(key).dump());
    }
  };
  read("corpus_name", c.corpus_name);
  read("k", c.k);
  read_checked("strategies", c.strategies);
  read("fallback_to_all", c.fallback_to_all);
  read("mft_threshold", c.mft_threshold);
  read_checked("sibling_scope", c.sibling_scope);
  read_checked("matching", c.matching);
  read_checked("variation", c.variation);
  read_checked("normalization", c.normalization);
  read("corpus_path", c.corpus_path);
  read("ontology_paths", c.ontology_paths);
  read("thesaurus_path", c.thesaurus_path);
  read("catalog_path", c.catalog_path);
  read("workers", c.workers);
}

/// Loads a JSON config file on top of the defaults.
inline EvalConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  EvalConfig config;
  try {
    from_json(nlohmann::ordered_json::parse(in), config);
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad config file " + path + ": " + e.what());
  }
  return config;
}

}  // namespace tagground

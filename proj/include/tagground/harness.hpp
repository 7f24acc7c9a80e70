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

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tagground/config.hpp"
#include "tagground/corpus.hpp"
#include "tagground/error.hpp"
#include "tagground/expansion.hpp"
#include "tagground/grounding.hpp"
#include "tagground/parallel.hpp"
#include "tagground/recommender.hpp"

namespace tagground {

/// How one query's top-k list moved away from the lexical baseline.
struct VariationMeasure {
  ResourceId query;
  std::vector<ResourceId> baseline_topk;
  std::vector<ResourceId> strategy_topk;
  double rate = 0.0;
};

struct VariationResult {
  double rate = 0.0;  // mean over queries
  std::vector<VariationMeasure> per_query;
};

inline double variation_of(const std::vector<ResourceId>& baseline,
                           const std::vector<ResourceId>& strategy,
                           std::size_t k, VariationMode mode) {
  std::size_t changed = 0;
  if (mode == VariationMode::kSetDisplacement) {
    const std::set<ResourceId> base(baseline.begin(), baseline.end());
    for (const ResourceId& id : std::set<ResourceId>(strategy.begin(),
                                                     strategy.end())) {
      if (!base.contains(id)) ++changed;
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      const ResourceId* b = i < baseline.size() ? &baseline[i] : nullptr;
      const ResourceId* s = i < strategy.size() ? &strategy[i] : nullptr;
      if (b == nullptr && s == nullptr) continue;
      if (b == nullptr || s == nullptr || *b != *s) ++changed;
    }
  }
  return static_cast<double>(changed) / static_cast<double>(k);
}

struct VariationOptions {
  std::size_t k = 10;
  MatchingMode matching = MatchingMode::kGreedy;
  VariationMode mode = VariationMode::kSetDisplacement;
  std::size_t workers = 1;
};

/// Mean top-k variation of `strategy` against the lexical baseline, with
/// every resource of the corpus serving once as the query. For MFT the
/// query's most prolific author is the target user.
inline VariationResult variation_rate(const Grounder& grounder,
                                      const GroundingStrategy& strategy,
                                      const VariationOptions& options) {
  const Corpus& corpus = grounder.corpus();
  if (corpus.empty()) throw UndefinedRate("variation rate of an empty corpus");
  if (options.k == 0) throw ContractViolation("k must be positive");

  std::map<ResourceId, UserProfile> profiles;
  if (strategy.value == Strategy::kMft) {
    profiles = query_profiles(corpus, strategy.mft_threshold);
  }
  std::vector<ResourceId> queries;
  for (const auto& [id, r] : corpus.resources()) queries.push_back(id);

  VariationResult result;
  result.per_query.resize(queries.size());
  detail::parallel_for(queries.size(), options.workers, [&](std::size_t i) {
    const ResourceId& query = queries[i];
    ScoringContext ctx{&grounder, nullptr, options.matching};
    if (strategy.value == Strategy::kMft) ctx.target_profile = &profiles.at(query);
    const auto base =
        recommend(corpus, query, options.k, RecommendationMode::baseline(), ctx);
    const auto grounded = recommend(corpus, query, options.k,
                                    RecommendationMode::grounded(strategy), ctx);
    VariationMeasure& m = result.per_query[i];
    m.query = query;
    m.baseline_topk = base.ids();
    m.strategy_topk = grounded.ids();
    m.rate = variation_of(m.baseline_topk, m.strategy_topk, options.k,
                          options.mode);
  });

  double sum = 0.0;
  for (const auto& m : result.per_query) sum += m.rate;
  result.rate = sum / static_cast<double>(queries.size());
  return result;
}

inline VariationResult variation_rate(const Corpus& corpus,
                                      const GroundingStrategy& strategy,
                                      const TreasureSet& treasures,
                                      const VariationOptions& options) {
  if (corpus.empty()) throw UndefinedRate("variation rate of an empty corpus");
  const Grounder grounder(corpus, treasures);
  return variation_rate(grounder, strategy, options);
}

/// Rates for one treasure group (thesaurus only, ontologies only, both).
struct GroupRow {
  std::string group;
  double expansion_rate = 0.0;
  std::vector<std::pair<Strategy, double>> grounding_rates;
  std::vector<std::pair<Strategy, VariationResult>> variations;

  double grounding(Strategy s) const {
    for (const auto& [k, v] : grounding_rates) {
      if (k == s) return v;
    }
    throw NotFound("strategy not evaluated: " + std::string(to_string(s)));
  }

  double variation(Strategy s) const {
    for (const auto& [k, v] : variations) {
      if (k == s) return v.rate;
    }
    throw NotFound("strategy not evaluated: " + std::string(to_string(s)));
  }
};

struct EvalReport {
  EvalConfig config;
  std::vector<GroupRow> groups;

  const GroupRow& group(std::string_view name) const {
    for (const auto& g : groups) {
      if (g.group == name) return g;
    }
    throw NotFound("no treasure group " + std::string(name));
  }
};

/// The treasure groups a report covers, in report order.
inline std::vector<std::pair<std::string, TreasureSet>> treasure_groups(
    const TreasureSet& treasures) {
  std::vector<std::pair<std::string, TreasureSet>> out;
  const bool has_thesaurus = treasures.thesaurus() != nullptr;
  const bool has_ontologies = !treasures.ontologies().empty();
  if (has_thesaurus) out.emplace_back("thesaurus", treasures.thesaurus_only());
  if (has_ontologies) out.emplace_back("ontologies", treasures.ontologies_only());
  if (has_thesaurus && has_ontologies) out.emplace_back("combined", treasures);
  return out;
}

/// Runs the expansion, grounding and variation metrics for every treasure
/// group and every configured strategy.
inline EvalReport evaluate(const Corpus& corpus, const TreasureSet& treasures,
                           const EvalConfig& config) {
  if (treasures.empty()) {
    throw ContractViolation("evaluate needs at least one treasure");
  }
  if (config.k == 0) throw ContractViolation("k must be positive");
  EvalReport report;
  report.config = config;
  const VariationOptions options{config.k, config.matching, config.variation,
                                 config.workers};
  for (auto& [name, group] : treasure_groups(treasures)) {
    const Grounder grounder(corpus, group);
    GroupRow row;
    row.group = name;
    row.expansion_rate = expansion_rate(corpus, group);
    for (const Strategy s : config.strategies) {
      const GroundingStrategy strategy = config.strategy(s);
      row.grounding_rates.emplace_back(
          s, grounding_rate(grounder, strategy, config.workers));
      row.variations.emplace_back(s, variation_rate(grounder, strategy, options));
    }
    report.groups.push_back(std::move(row));
  }
  return report;
}

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string join(const std::vector<ResourceId>& ids, char sep) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out.push_back(sep);
    out += ids[i];
  }
  return out;
}

}  // namespace detail

/// Expansion and grounding rates: one row per metric, one column per
/// treasure group.
inline std::string grounding_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "Data";
  for (const auto& g : report.groups) {
    out << ',' << detail::csv_field(report.config.corpus_name + '/' + g.group);
  }
  out << "\nSemantic Expansions";
  for (const auto& g : report.groups) {
    out << ',' << detail::fixed(g.expansion_rate, 6);
  }
  out << '\n';
  for (const Strategy s : report.config.strategies) {
    out << display_name(s);
    for (const auto& g : report.groups) {
      out << ',' << detail::fixed(g.grounding(s), 6);
    }
    out << '\n';
  }
  return out.str();
}

/// Mean variation rates: one row per strategy, one column per group.
inline std::string variation_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "Strategy";
  for (const auto& g : report.groups) {
    out << ',' << detail::csv_field(report.config.corpus_name + '/' + g.group);
  }
  out << '\n';
  for (const Strategy s : report.config.strategies) {
    out << display_name(s);
    for (const auto& g : report.groups) {
      out << ',' << detail::fixed(g.variation(s), 6);
    }
    out << '\n';
  }
  return out.str();
}

/// Per-query breakdown behind variation_csv. Top-k lists are
/// space-separated resource ids.
inline std::string queries_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "group,strategy,query,baseline_topk,strategy_topk,rate\n";
  for (const auto& g : report.groups) {
    for (const auto& [s, v] : g.variations) {
      for (const auto& m : v.per_query) {
        out << g.group << ',' << to_string(s) << ','
            << detail::csv_field(m.query) << ','
            << detail::csv_field(detail::join(m.baseline_topk, ' ')) << ','
            << detail::csv_field(detail::join(m.strategy_topk, ' ')) << ','
            << detail::fixed(m.rate, 6) << '\n';
      }
    }
  }
  return out.str();
}

inline std::string config_json(const EvalConfig& config) {
  nlohmann::ordered_json j = config;
  return j.dump(2) + '\n';
}

inline std::string to_markdown(const EvalReport& report) {
  const auto pct = [](double v) { return detail::fixed(100.0 * v, 1) + "%"; };
  std::ostringstream out;
  out << "# Semantic grounding report: " << report.config.corpus_name << "\n\n";
  out << "## Semantic expansions and groundings\n\n| Data |";
  for (const auto& g : report.groups) out << ' ' << g.group << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < report.groups.size(); ++i) out << "---|";
  out << "\n| Semantic Expansions |";
  for (const auto& g : report.groups) out << ' ' << pct(g.expansion_rate) << " |";
  out << '\n';
  for (const Strategy s : report.config.strategies) {
    out << "| " << display_name(s) << " |";
    for (const auto& g : report.groups) out << ' ' << pct(g.grounding(s)) << " |";
    out << '\n';
  }
  out << "\n## Variation of the recommendations (k = " << report.config.k
      << ")\n\n| Strategy |";
  for (const auto& g : report.groups) out << ' ' << g.group << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < report.groups.size(); ++i) out << "---|";
  out << '\n';
  for (const Strategy s : report.config.strategies) {
    out << "| " << display_name(s) << " |";
    for (const auto& g : report.groups) out << ' ' << pct(g.variation(s)) << " |";
    out << '\n';
  }
  out << "\n## Configuration\n\n```json\n" << config_json(report.config)
      << "```\n";
  return out.str();
}

}  // namespace tagground

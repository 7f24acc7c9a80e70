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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tagground/corpus.hpp"
#include "tagground/error.hpp"
#include "tagground/expansion.hpp"
#include "tagground/knowledge.hpp"
#include "tagground/parallel.hpp"
#include "tagground/text.hpp"

namespace tagground {

enum class Strategy { kAllExpansion, kSibling, kMft };

inline std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::kAllExpansion: return "all";
    case Strategy::kSibling: return "sibling";
    case Strategy::kMft: return "mft";
  }
  return "?";
}

inline std::string_view display_name(Strategy s) noexcept {
  switch (s) {
    case Strategy::kAllExpansion: return "All Expansion Strategy";
    case Strategy::kSibling: return "Sibling Strategy";
    case Strategy::kMft: return "MFT Strategy";
  }
  return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view name) {
  const std::string key = text::lower(text::trim(name));
  if (key == "all" || key == "allexpansion") return Strategy::kAllExpansion;
  if (key == "sibling") return Strategy::kSibling;
  if (key == "mft") return Strategy::kMft;
  return std::nullopt;
}

/// Whose sibling tags may validate a candidate.
enum class SiblingScope {
  kEitherResource,       // siblings from both resources
  kExpandedTagResource,  // only the resource holding the expanded-to tag
};

struct GroundingStrategy {
  Strategy value = Strategy::kAllExpansion;
  /// Sibling: degrade to AllExpansion when neither resource has context.
  /// MFT: degrade to AllExpansion when there is no usable profile.
  bool fallback_to_all = false;
  double mft_threshold = kDefaultMftThreshold;
  SiblingScope sibling_scope = SiblingScope::kEitherResource;

  static GroundingStrategy all() { return {Strategy::kAllExpansion}; }
  static GroundingStrategy sibling(bool fallback = false) {
    return {Strategy::kSibling, fallback};
  }
  static GroundingStrategy mft(bool fallback = false,
                               double threshold = kDefaultMftThreshold) {
    return {Strategy::kMft, fallback, threshold};
  }
};

/// A validated semantic link between two tags on two resources.
struct Grounding {
  NormalizedTag tag_a;
  ResourceId resource_a;
  NormalizedTag tag_b;
  ResourceId resource_b;
  SemanticExpansion via;
  Strategy strategy = Strategy::kAllExpansion;
  std::set<NormalizedTag> context_evidence;
  bool via_fallback = false;
};

enum class GroundingFailure {
  kNone,
  kNoExpansion,
  kContextValidationFailed,
  kNoClearPreference,
};

inline std::string_view to_string(GroundingFailure f) noexcept {
  switch (f) {
    case GroundingFailure::kNone: return "grounded";
    case GroundingFailure::kNoExpansion: return "no expansion";
    case GroundingFailure::kContextValidationFailed:
      return "context validation failed";
    case GroundingFailure::kNoClearPreference: return "no clear preference";
  }
  return "?";
}

struct GroundingOutcome {
  std::optional<Grounding> grounding;
  GroundingFailure failure = GroundingFailure::kNone;

  explicit operator bool() const noexcept { return grounding.has_value(); }
};

/// Grounds tag pairs against a fixed corpus and treasure set.
///
/// Expansions of every vocabulary tag are computed once up front, so a
/// Grounder is cheap to query repeatedly and is immutable afterwards.
/// Holds references to the corpus; the corpus must outlive it.
class Grounder {
 public:
  Grounder(const Corpus& corpus, TreasureSet treasures,
           bool precompute_vocabulary = true)
      : corpus_(&corpus), treasures_(std::move(treasures)) {
    if (!precompute_vocabulary) return;
    for (const NormalizedTag& tag : corpus.vocabulary()) {
      cache_.emplace(tag, make_entry(tag));
    }
  }

  const Corpus& corpus() const noexcept { return *corpus_; }
  const TreasureSet& treasures() const noexcept { return treasures_; }

  std::vector<SemanticExpansion> expansions(const NormalizedTag& tag) const {
    Entry scratch;
    return lookup(tag, scratch).expansions;
  }

  /// Attempts to ground tag_a on resource_a with tag_b on resource_b.
  ///
  /// Candidates are the expansions of tag_a that reach tag_b, followed by
  /// the expansions of tag_b that reach tag_a, each in expansion order; the
  /// first candidate that passes the strategy's context check wins.
  ///
  /// Context terms never include tag_a or tag_b themselves.
  GroundingOutcome ground(const NormalizedTag& tag_a,
                          const ResourceId& resource_a,
                          const NormalizedTag& tag_b,
                          const ResourceId& resource_b,
                          const GroundingStrategy& strategy,
                          const UserProfile* profile = nullptr) const {
    if (tag_a == tag_b) {
      throw ContractViolation("lexically identical tags need no grounding");
    }
    if (resource_a == resource_b) {
      throw ContractViolation("grounding needs two distinct resources");
    }
    const Resource& res_a = corpus_->resource(resource_a);
    const Resource& res_b = corpus_->resource(resource_b);

    if (strategy.value == Strategy::kMft && profile == nullptr &&
        !strategy.fallback_to_all) {
      throw MissingContext("MFT grounding needs a user profile");
    }

    Entry scratch_a;
    Entry scratch_b;
    const Entry& ea = lookup(tag_a, scratch_a);
    const Entry& eb = lookup(tag_b, scratch_b);

    // (expansion, true when the expanded-to tag sits on resource_b)
    std::vector<std::pair<const SemanticExpansion*, bool>> candidates;
    for (std::size_t i = 0; i < ea.expansions.size(); ++i) {
      if (ea.reaches(i, tag_b)) candidates.emplace_back(&ea.expansions[i], true);
    }
    for (std::size_t i = 0; i < eb.expansions.size(); ++i) {
      if (eb.reaches(i, tag_a)) candidates.emplace_back(&eb.expansions[i], false);
    }
    if (candidates.empty()) return {std::nullopt, GroundingFailure::kNoExpansion};

    const auto accept = [&](const SemanticExpansion& via,
                            std::set<NormalizedTag> evidence, bool fallback) {
      return GroundingOutcome{
          Grounding{tag_a, resource_a, tag_b, resource_b, via, strategy.value,
                    std::move(evidence), fallback},
          GroundingFailure::kNone};
    };

    switch (strategy.value) {
      case Strategy::kAllExpansion:
        return accept(*candidates.front().first, {}, false);

      case Strategy::kSibling: {
        const auto side_a = context_of(res_a, tag_a, tag_b);
        const auto side_b = context_of(res_b, tag_a, tag_b);
        if (side_a.empty() && side_b.empty()) {
          if (strategy.fallback_to_all) {
            return accept(*candidates.front().first, {}, true);
          }
          return {std::nullopt, GroundingFailure::kContextValidationFailed};
        }
        std::set<NormalizedTag> both = side_a;
        both.insert(side_b.begin(), side_b.end());
        for (const auto& [via, reaches_b] : candidates) {
          const auto& context =
              strategy.sibling_scope == SiblingScope::kEitherResource
                  ? both
                  : (reaches_b ? side_b : side_a);
          auto evidence = validate(*via, tag_a, tag_b, context);
          if (!evidence.empty()) return accept(*via, std::move(evidence), false);
        }
        return {std::nullopt, GroundingFailure::kContextValidationFailed};
      }

      case Strategy::kMft: {
        if (profile == nullptr || !profile->has_clear_preference) {
          if (strategy.fallback_to_all) {
            return accept(*candidates.front().first, {}, true);
          }
          return {std::nullopt, GroundingFailure::kNoClearPreference};
        }
        std::set<NormalizedTag> context = profile->mft;
        context.erase(tag_a);
        context.erase(tag_b);
        for (const auto& [via, reaches_b] : candidates) {
          auto evidence = validate(*via, tag_a, tag_b, context);
          if (!evidence.empty()) return accept(*via, std::move(evidence), false);
        }
        return {std::nullopt, GroundingFailure::kContextValidationFailed};
      }
    }
    return {std::nullopt, GroundingFailure::kNoExpansion};
  }

  bool grounds(const NormalizedTag& tag_a, const ResourceId& resource_a,
               const NormalizedTag& tag_b, const ResourceId& resource_b,
               const GroundingStrategy& strategy,
               const UserProfile* profile = nullptr) const {
    return static_cast<bool>(
        ground(tag_a, resource_a, tag_b, resource_b, strategy, profile));
  }

  /// The context terms that the candidate's own treasure recognises.
  /// Ontology: the term is a concept of the store. Thesaurus: the term shares
  /// a synset with tag_a, tag_b or the expanded term.
  std::set<NormalizedTag> validate(const SemanticExpansion& via,
                                   const NormalizedTag& tag_a,
                                   const NormalizedTag& tag_b,
                                   const std::set<NormalizedTag>& context) const {
    std::set<NormalizedTag> evidence;
    if (via.source_kind == SourceKind::kSynset) {
      const Thesaurus* th = treasures_.thesaurus();
      if (th == nullptr || th->treasure_id() != via.treasure_id) return evidence;
      for (const NormalizedTag& term : context) {
        if (th->share_synset(term, tag_a) || th->share_synset(term, tag_b) ||
            th->share_synset(term, via.expanded_term)) {
          evidence.insert(term);
        }
      }
      return evidence;
    }
    const OntologyStore* store = treasures_.find_ontology(via.treasure_id);
    if (store == nullptr) return evidence;
    for (const NormalizedTag& term : context) {
      if (has_concept(*store, term)) evidence.insert(term);
    }
    return evidence;
  }

 private:
  struct Entry {
    std::vector<SemanticExpansion> expansions;
    // Forms of each expanded term that count as reaching another tag: the
    // normalized term itself plus, for ontology concepts, the camelCase split.
    std::vector<std::set<std::string, std::less<>>> reach_forms;

    bool reaches(std::size_t i, const NormalizedTag& other) const {
      return reach_forms[i].contains(other.view());
    }
  };

  Entry make_entry(const NormalizedTag& tag) const {
    Entry entry;
    entry.expansions = expand(tag, treasures_);
    entry.reach_forms.reserve(entry.expansions.size());
    for (const SemanticExpansion& e : entry.expansions) {
      std::set<std::string, std::less<>> forms{e.expanded_term.value()};
      if (e.source_kind == SourceKind::kOntologyClass) {
        const OntologyStore* store = treasures_.find_ontology(e.treasure_id);
        const auto mode = store ? store->normalization()
                                : NormalizationMode::kPreserve;
        for (auto& f : normalize_concept(e.expanded_label, mode)) {
          forms.insert(std::move(f));
        }
      }
      entry.reach_forms.push_back(std::move(forms));
    }
    return entry;
  }

  const Entry& lookup(const NormalizedTag& tag, Entry& scratch) const {
    const auto it = cache_.find(tag);
    if (it != cache_.end()) return it->second;
    scratch = make_entry(tag);
    return scratch;
  }

  static std::set<NormalizedTag> context_of(const Resource& resource,
                                            const NormalizedTag& tag_a,
                                            const NormalizedTag& tag_b) {
    std::set<NormalizedTag> out;
    for (const auto& [t, count] : resource.tags) {
      if (t != tag_a && t != tag_b) out.insert(t);
    }
    return out;
  }

  const Corpus* corpus_;
  TreasureSet treasures_;
  std::unordered_map<NormalizedTag, Entry> cache_;
};

/// One-off grounding without a prebuilt Grounder.
inline GroundingOutcome ground(const NormalizedTag& tag_a,
                               const ResourceId& resource_a,
                               const NormalizedTag& tag_b,
                               const ResourceId& resource_b,
                               const GroundingStrategy& strategy,
                               const Corpus& corpus, const TreasureSet& treasures,
                               const UserProfile* profile = nullptr) {
  const Grounder grounder(corpus, treasures, /*precompute_vocabulary=*/false);
  return grounder.ground(tag_a, resource_a, tag_b, resource_b, strategy, profile);
}

/// Profiles of each resource's most prolific author, keyed by resource.
/// Used wherever a batch run needs "the query's user" for MFT.
inline std::map<ResourceId, UserProfile> query_profiles(const Corpus& corpus,
                                                        double threshold) {
  std::map<AuthorId, UserProfile> by_author;
  std::map<ResourceId, UserProfile> out;
  for (const auto& [id, resource] : corpus.resources()) {
    const AuthorId& author = corpus.most_prolific_author(id);
    auto it = by_author.find(author);
    if (it == by_author.end()) {
      it = by_author.emplace(author, build_profile(corpus, author, threshold))
               .first;
    }
    out.emplace(id, it->second);
  }
  return out;
}

/// Distinct tags grounded at least once with a tag on another resource,
/// as a share of the vocabulary. Every ordered pair of distinct resources is
/// tried; MFT uses the profile of the first resource's most prolific author.
inline double grounding_rate(const Grounder& grounder,
                             const GroundingStrategy& strategy,
                             std::size_t workers = 1) {
  const Corpus& corpus = grounder.corpus();
  const auto& vocabulary = corpus.vocabulary();
  if (vocabulary.empty()) {
    throw UndefinedRate("grounding rate of an empty vocabulary");
  }
  std::vector<const Resource*> resources;
  for (const auto& [id, r] : corpus.resources()) resources.push_back(&r);

  std::map<ResourceId, UserProfile> profiles;
  if (strategy.value == Strategy::kMft) {
    profiles = query_profiles(corpus, strategy.mft_threshold);
  }

  std::vector<std::set<NormalizedTag>> grounded(resources.size());
  detail::parallel_for(resources.size(), workers, [&](std::size_t i) {
    const Resource& a = *resources[i];
    const UserProfile* profile = nullptr;
    if (strategy.value == Strategy::kMft) profile = &profiles.at(a.id);
    for (const Resource* b : resources) {
      if (b == &a) continue;
      for (const auto& [ta, ca] : a.tags) {
        for (const auto& [tb, cb] : b->tags) {
          if (ta == tb) continue;
          if (grounded[i].contains(ta) && grounded[i].contains(tb)) continue;
          if (grounder.grounds(ta, a.id, tb, b->id, strategy, profile)) {
            grounded[i].insert(ta);
            grounded[i].insert(tb);
          }
        }
      }
    }
  });

  std::set<NormalizedTag> all;
  for (const auto& s : grounded) all.insert(s.begin(), s.end());
  return static_cast<double>(all.size()) /
         static_cast<double>(vocabulary.size());
}

inline double grounding_rate(const Corpus& corpus,
                             const GroundingStrategy& strategy,
                             const TreasureSet& treasures,
                             std::size_t workers = 1) {
  if (corpus.vocabulary().empty()) {
    throw UndefinedRate("grounding rate of an empty vocabulary");
  }
  const Grounder grounder(corpus, treasures);
  return grounding_rate(grounder, strategy, workers);
}

}  // namespace tagground

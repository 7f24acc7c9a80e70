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
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "tagground/corpus.hpp"
#include "tagground/error.hpp"
#include "tagground/knowledge.hpp"
#include "tagground/text.hpp"

namespace tagground {

/// Which endpoint of the source triple the tag matched.
enum class Direction { kTagAsSubject, kTagAsObject };

enum class SourceKind { kOntologyClass, kSynset };

inline std::string_view to_string(Direction d) noexcept {
  return d == Direction::kTagAsSubject ? "tag-as-subject" : "tag-as-object";
}

inline std::string_view to_string(SourceKind k) noexcept {
  return k == SourceKind::kOntologyClass ? "Ontology Class" : "Synset";
}

inline constexpr std::string_view kSynonymProperty = "isSynonymOf";

/// One candidate meaning of a tag, taken from one treasure.
struct SemanticExpansion {
  NormalizedTag source_tag;
  NormalizedTag expanded_term;
  std::string expanded_label;  // concept name as written in the treasure
  std::string property;        // verbatim predicate, or "isSynonymOf"
  Direction direction = Direction::kTagAsSubject;
  RelationCategory category = RelationCategory::kEquivalence;
  std::string treasure_id;
  SourceKind source_kind = SourceKind::kOntologyClass;

  /// The relationship as a sentence, e.g. "workshopPaper isSubClassOf Paper".
  std::string relationship(std::string_view source_label) const {
    const std::string src(source_label);
    if (direction == Direction::kTagAsSubject) {
      return src + ' ' + property + ' ' + expanded_label;
    }
    return expanded_label + ' ' + property + ' ' + src;
  }

  friend bool operator==(const SemanticExpansion&,
                         const SemanticExpansion&) = default;
};

/// The knowledge sources consulted for expansion: any number of ontologies
/// and at most one thesaurus. Treasure ids are unique within a set.
class TreasureSet {
 public:
  TreasureSet() = default;

  TreasureSet(std::vector<OntologyStore> ontologies,
              std::optional<Thesaurus> thesaurus) {
    for (auto& store : ontologies) {
      add_ontology(std::make_shared<const OntologyStore>(std::move(store)));
    }
    if (thesaurus) {
      set_thesaurus(std::make_shared<const Thesaurus>(std::move(*thesaurus)));
    }
  }

  void add_ontology(std::shared_ptr<const OntologyStore> store) {
    check_unique(store->treasure_id());
    ontologies_.push_back(std::move(store));
  }

  void set_thesaurus(std::shared_ptr<const Thesaurus> thesaurus) {
    thesaurus_.reset();
    check_unique(thesaurus->treasure_id());
    thesaurus_ = std::move(thesaurus);
  }

  const std::vector<std::shared_ptr<const OntologyStore>>& ontologies()
      const noexcept {
    return ontologies_;
  }

  const Thesaurus* thesaurus() const noexcept { return thesaurus_.get(); }

  const OntologyStore* find_ontology(std::string_view id) const {
    for (const auto& store : ontologies_) {
      if (store->treasure_id() == id) return store.get();
    }
    return nullptr;
  }

  bool empty() const noexcept { return ontologies_.empty() && !thesaurus_; }

  TreasureSet thesaurus_only() const {
    TreasureSet out;
    out.thesaurus_ = thesaurus_;
    return out;
  }

  TreasureSet ontologies_only() const {
    TreasureSet out;
    out.ontologies_ = ontologies_;
    return out;
  }

 private:
  void check_unique(const std::string& id) const {
    const bool clash = find_ontology(id) != nullptr ||
                       (thesaurus_ && thesaurus_->treasure_id() == id);
    if (clash) throw ContractViolation("duplicate treasure id: " + id);
  }

  std::vector<std::shared_ptr<const OntologyStore>> ontologies_;
  std::shared_ptr<const Thesaurus> thesaurus_;
};

namespace detail {

inline void expand_in_ontology(const NormalizedTag& tag,
                               const OntologyStore& store,
                               std::vector<SemanticExpansion>& out) {
  const NormalizationMode mode = store.normalization();
  for (const std::size_t index : store.incident(tag.value())) {
    const StoredTriple& t = store.triples()[index];
    if (t.rejected()) continue;
    const bool as_subject = t.subject_forms.contains(tag.value());
    const bool as_object = t.object_forms.contains(tag.value());
    if (as_subject == as_object) continue;  // self-loop on the tag's concept
    const std::string& other = as_subject ? t.triple.object : t.triple.subject;
    const std::string_view label = concept_local_name(other);
    NormalizedTag expanded(label, mode);
    if (expanded == tag) continue;
    out.push_back({tag, std::move(expanded), std::string(label),
                   t.triple.predicate,
                   as_subject ? Direction::kTagAsSubject
                              : Direction::kTagAsObject,
                   *t.category, store.treasure_id(),
                   SourceKind::kOntologyClass});
  }
}

inline void expand_in_thesaurus(const NormalizedTag& tag,
                                const Thesaurus& thesaurus,
                                std::vector<SemanticExpansion>& out) {
  for (const std::size_t id : thesaurus.synset_ids(tag)) {
    for (const NormalizedTag& member : thesaurus.all_synsets()[id]) {
      if (member == tag) continue;
      out.push_back({tag, member, member.value(),
                     std::string(kSynonymProperty), Direction::kTagAsSubject,
                     RelationCategory::kEquivalence, thesaurus.treasure_id(),
                     SourceKind::kSynset});
    }
  }
}

// Deduplicates on (expanded term, property, treasure, direction) and sorts by
// (treasure, expanded term, property, direction).
inline void canonicalize(std::vector<SemanticExpansion>& expansions) {
  const auto key = [](const SemanticExpansion& e) {
    return std::tie(e.treasure_id, e.expanded_term, e.property, e.direction);
  };
  std::stable_sort(expansions.begin(), expansions.end(),
                   [&](const auto& l, const auto& r) { return key(l) < key(r); });
  expansions.erase(
      std::unique(expansions.begin(), expansions.end(),
                  [&](const auto& l, const auto& r) { return key(l) == key(r); }),
      expansions.end());
}

}  // namespace detail

/// Every candidate meaning of `tag` across the given treasures.
///
/// An ontology contributes one expansion per accepted-property triple that
/// touches the tag's concept, in either direction; the expanded term is the
/// other endpoint. The thesaurus contributes every co-member of every synset
/// holding the tag.
inline std::vector<SemanticExpansion> expand(const NormalizedTag& tag,
                                             std::span<const OntologyStore> stores,
                                             const Thesaurus* thesaurus) {
  std::vector<SemanticExpansion> out;
  for (const OntologyStore& store : stores) {
    detail::expand_in_ontology(tag, store, out);
  }
  if (thesaurus != nullptr) detail::expand_in_thesaurus(tag, *thesaurus, out);
  detail::canonicalize(out);
  return out;
}

inline std::vector<SemanticExpansion> expand(const NormalizedTag& tag,
                                             const TreasureSet& treasures) {
  std::vector<SemanticExpansion> out;
  for (const auto& store : treasures.ontologies()) {
    detail::expand_in_ontology(tag, *store, out);
  }
  if (const Thesaurus* th = treasures.thesaurus()) {
    detail::expand_in_thesaurus(tag, *th, out);
  }
  detail::canonicalize(out);
  return out;
}

/// Share of the corpus vocabulary with at least one expansion.
inline double expansion_rate(const Corpus& corpus, const TreasureSet& treasures) {
  const auto& vocabulary = corpus.vocabulary();
  if (vocabulary.empty()) {
    throw UndefinedRate("expansion rate of an empty vocabulary");
  }
  std::size_t expanded = 0;
  for (const NormalizedTag& tag : vocabulary) {
    if (!expand(tag, treasures).empty()) ++expanded;
  }
  return static_cast<double>(expanded) / static_cast<double>(vocabulary.size());
}

}  // namespace tagground

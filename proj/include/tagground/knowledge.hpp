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
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tagground/error.hpp"
#include "tagground/text.hpp"

namespace tagground {

enum class RelationCategory { kPartnership, kEquivalence, kDefinition };

inline std::string_view to_string(RelationCategory c) noexcept {
  switch (c) {
    case RelationCategory::kPartnership: return "Partnership";
    case RelationCategory::kEquivalence: return "Equivalence";
    case RelationCategory::kDefinition: return "Definition";
  }
  return "?";
}

/// Local name of a property: the text after the last '#', '/' or ':'.
/// "http://www.w3.org/2000/01/rdf-schema#subClassOf", "rdfs:subClassOf" and
/// "<subClassOf>" all reduce to "subClassOf".
inline std::string_view property_local_name(std::string_view predicate) {
  predicate = text::trim(predicate);
  if (predicate.size() >= 2 && predicate.front() == '<' &&
      predicate.back() == '>') {
    predicate = predicate.substr(1, predicate.size() - 2);
  }
  const std::size_t cut = predicate.find_last_of("#/:");
  if (cut != std::string_view::npos && cut + 1 < predicate.size()) {
    predicate.remove_prefix(cut + 1);
  }
  return predicate;
}

/// Which ontology properties may carry a semantic expansion.
///
/// Names are matched case-insensitively on their local name. The catalog is
/// total: a property that is not accepted is rejected.
class PropertyCatalog {
 public:
  PropertyCatalog() = default;

  /// The stock catalog of 21 accepted properties in three categories.
  static PropertyCatalog standard() {
    PropertyCatalog catalog;
    for (const char* name : {"subClassOf", "specify", "hasPartOf",
                             "intersectionOf", "unionOf", "complementOf",
                             "generalizes"}) {
      catalog.accept(name, RelationCategory::kPartnership);
    }
    for (const char* name :
         {"equivalentClass", "equivalentProperty", "SymmetricProperty",
          "sameAs", "similarTo", "associatedWith", "hasRelatedConcept"}) {
      catalog.accept(name, RelationCategory::kEquivalence);
    }
    for (const char* name : {"isA", "hasTypeOf", "hasMeaning", "typify",
                             "meaningOf", "belongsTo", "type"}) {
      catalog.accept(name, RelationCategory::kDefinition);
    }
    return catalog;
  }

  void accept(std::string_view property, RelationCategory category) {
    std::string key = key_of(property);
    rejected_.erase(key);
    accepted_[std::move(key)] = category;
  }

  void reject(std::string_view property) {
    std::string key = key_of(property);
    accepted_.erase(key);
    rejected_.insert(std::move(key));
  }

  std::optional<RelationCategory> classify(std::string_view predicate) const {
    const auto it = accepted_.find(key_of(predicate));
    if (it == accepted_.end()) return std::nullopt;
    return it->second;
  }

  /// Keys are lowercased local names.
  const std::map<std::string, RelationCategory>& accepted() const noexcept {
    return accepted_;
  }
  const std::set<std::string>& explicitly_rejected() const noexcept {
    return rejected_;
  }

  /// Applies `property = Partnership|Equivalence|Definition|Rejected` lines.
  /// '#' starts a comment line.
  void apply_overrides(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string_view body = text::trim(text::chomp(line));
      if (body.empty() || body.front() == '#') continue;
      const std::size_t eq = body.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(line_no, "expected 'property = Category'");
      }
      const std::string_view name = text::trim(body.substr(0, eq));
      const std::string value = text::lower(text::trim(body.substr(eq + 1)));
      if (name.empty()) throw ParseError(line_no, "missing property name");
      if (value == "partnership") {
        accept(name, RelationCategory::kPartnership);
      } else if (value == "equivalence") {
        accept(name, RelationCategory::kEquivalence);
      } else if (value == "definition") {
        accept(name, RelationCategory::kDefinition);
      } else if (value == "rejected") {
        reject(name);
      } else {
        throw ParseError(line_no, "unknown category '" + value + "'");
      }
    }
  }

 private:
  static std::string key_of(std::string_view property) {
    return text::lower(property_local_name(property));
  }

  std::map<std::string, RelationCategory> accepted_;
  std::set<std::string> rejected_;
};

/// Returns nullopt for a rejected property.
inline std::optional<RelationCategory> classify_property(
    const PropertyCatalog& catalog, std::string_view predicate) {
  return catalog.classify(predicate);
}

namespace detail {

inline std::string_view concept_local_name(std::string_view name) {
  name = text::trim(name);
  const bool iri = name.size() >= 2 && name.front() == '<' && name.back() == '>';
  if (iri) name = name.substr(1, name.size() - 2);
  if (iri || name.find("://") != std::string_view::npos) {
    const std::size_t cut = name.find_last_of("#/");
    if (cut != std::string_view::npos && cut + 1 < name.size()) {
      name.remove_prefix(cut + 1);
    }
  }
  return name;
}

// "JavaDocReference" -> "Java Doc Reference", "XMLParser" -> "XML Parser",
// "foo_bar" -> "foo bar".
inline std::string split_camel_case(std::string_view name) {
  std::string out;
  out.reserve(name.size() + 8);
  for (std::size_t i = 0; i < name.size(); ++i) {
    const char c = name[i];
    if (c == '_') {
      out.push_back(' ');
      continue;
    }
    if (i > 0 && text::is_upper(c)) {
      const char prev = name[i - 1];
      const bool next_lower = i + 1 < name.size() && text::is_lower(name[i + 1]);
      if (text::is_lower(prev) || text::is_digit(prev) ||
          (text::is_upper(prev) && next_lower)) {
        out.push_back(' ');
      }
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

/// The lookup forms of an ontology concept name: the lowercased name as a
/// whole, and its camelCase split. "workshopPaper" gives {"workshoppaper",
/// "workshop paper"}; "Paper" gives {"paper"}.
inline std::set<std::string> normalize_concept(
    std::string_view name, NormalizationMode mode = NormalizationMode::kPreserve) {
  const std::string_view local = detail::concept_local_name(name);
  std::set<std::string> forms;
  std::string whole = normalize_text(local, mode);
  if (whole.empty()) return forms;
  forms.insert(std::move(whole));
  std::string split = normalize_text(detail::split_camel_case(local), mode);
  if (!split.empty()) forms.insert(std::move(split));
  return forms;
}

struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// A loaded triple together with its classification. Triples with a
/// rejected predicate are kept (category is empty); their endpoints still
/// count as concepts of the store.
struct StoredTriple {
  Triple triple;
  std::optional<RelationCategory> category;
  std::set<std::string> subject_forms;
  std::set<std::string> object_forms;

  bool rejected() const noexcept { return !category.has_value(); }
};

using ConceptSet = std::set<std::string, std::less<>>;

/// One ontology ("treasure"), indexed by normalized concept form.
class OntologyStore {
 public:
  OntologyStore() = default;
  explicit OntologyStore(std::string treasure_id,
                         NormalizationMode mode = NormalizationMode::kPreserve)
      : treasure_id_(std::move(treasure_id)), mode_(mode) {}

  const std::string& treasure_id() const noexcept { return treasure_id_; }
  NormalizationMode normalization() const noexcept { return mode_; }
  const std::vector<StoredTriple>& triples() const noexcept { return triples_; }
  const ConceptSet& concepts() const noexcept { return concepts_; }

  bool has_concept(std::string_view term) const {
    return concepts_.find(term) != concepts_.end();
  }

  /// Indices into triples() of every triple with an endpoint whose forms
  /// include `form`. Ascending, no duplicates.
  const std::vector<std::size_t>& incident(const std::string& form) const {
    static const std::vector<std::size_t> kNone;
    const auto it = by_concept_.find(form);
    return it == by_concept_.end() ? kNone : it->second;
  }

  void add(Triple triple, std::optional<RelationCategory> category) {
    StoredTriple stored{std::move(triple), category, {}, {}};
    stored.subject_forms = normalize_concept(stored.triple.subject, mode_);
    stored.object_forms = normalize_concept(stored.triple.object, mode_);
    const std::size_t index = triples_.size();
    for (const auto* forms : {&stored.subject_forms, &stored.object_forms}) {
      for (const std::string& form : *forms) {
        concepts_.insert(form);
        auto& bucket = by_concept_[form];
        if (bucket.empty() || bucket.back() != index) bucket.push_back(index);
      }
    }
    triples_.push_back(std::move(stored));
  }

 private:
  std::string treasure_id_;
  NormalizationMode mode_ = NormalizationMode::kPreserve;
  std::vector<StoredTriple> triples_;
  ConceptSet concepts_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_concept_;
};

inline bool has_concept(const OntologyStore& store, const NormalizedTag& term) {
  return store.has_concept(term.view());
}

/// Parses `subject<TAB>predicate<TAB>object` lines. '#' lines and blank
/// lines are skipped; anything else malformed throws ParseError.
inline OntologyStore load_ontology(
    std::istream& in, std::string treasure_id, const PropertyCatalog& catalog,
    NormalizationMode mode = NormalizationMode::kPreserve) {
  OntologyStore store(std::move(treasure_id), mode);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = text::chomp(line);
    if (text::trim(body).empty() || body.front() == '#') continue;
    const auto fields = text::split(body, '\t');
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected subject<TAB>predicate<TAB>object");
    }
    for (const std::string_view f : fields) {
      if (text::trim(f).empty()) throw ParseError(line_no, "empty triple field");
    }
    Triple t{std::string(fields[0]), std::string(fields[1]),
             std::string(fields[2])};
    const auto category = catalog.classify(t.predicate);
    store.add(std::move(t), category);
  }
  if (in.bad()) throw ParseError(line_no + 1, "stream read error");
  return store;
}

/// Writes the store back out in load_ontology's format, one triple per line.
inline void write_triples(std::ostream& out, const OntologyStore& store) {
  for (const StoredTriple& t : store.triples()) {
    out << t.triple.subject << '\t' << t.triple.predicate << '\t'
        << t.triple.object << '\n';
  }
}

using Synset = std::vector<NormalizedTag>;

/// Synonym sets, indexed by member term.
class Thesaurus {
 public:
  static constexpr std::string_view kDefaultId = "wordnet";

  explicit Thesaurus(std::string treasure_id = std::string(kDefaultId))
      : treasure_id_(std::move(treasure_id)) {}

  const std::string& treasure_id() const noexcept { return treasure_id_; }
  const std::vector<Synset>& all_synsets() const noexcept { return synsets_; }

  /// Adds a synset; duplicate members are dropped. Returns false (and adds
  /// nothing) when fewer than two distinct terms remain.
  bool add(Synset terms) {
    Synset unique;
    for (auto& t : terms) {
      if (std::find(unique.begin(), unique.end(), t) == unique.end()) {
        unique.push_back(std::move(t));
      }
    }
    if (unique.size() < 2) return false;
    const std::size_t index = synsets_.size();
    for (const auto& t : unique) by_term_[t].push_back(index);
    synsets_.push_back(std::move(unique));
    return true;
  }

  /// Indices of the synsets containing `term`, in load order.
  const std::vector<std::size_t>& synset_ids(const NormalizedTag& term) const {
    static const std::vector<std::size_t> kNone;
    const auto it = by_term_.find(term);
    return it == by_term_.end() ? kNone : it->second;
  }

  bool contains(const NormalizedTag& term) const {
    return by_term_.contains(term);
  }

  /// True when some synset holds both terms.
  bool share_synset(const NormalizedTag& a, const NormalizedTag& b) const {
    const auto& ia = synset_ids(a);
    const auto& ib = synset_ids(b);
    for (std::size_t i : ia) {
      if (std::find(ib.begin(), ib.end(), i) != ib.end()) return true;
    }
    return false;
  }

 private:
  std::string treasure_id_;
  std::vector<Synset> synsets_;
  std::unordered_map<NormalizedTag, std::vector<std::size_t>> by_term_;
};

/// All synsets containing `term`, in load order.
inline std::vector<Synset> synsets(const Thesaurus& thesaurus,
                                   const NormalizedTag& term) {
  std::vector<Synset> out;
  for (std::size_t i : thesaurus.synset_ids(term)) {
    out.push_back(thesaurus.all_synsets()[i]);
  }
  return out;
}

/// One synset per line, comma-separated terms. '#' lines and blank lines
/// are skipped. A line with fewer than two distinct terms is an error.
inline Thesaurus load_thesaurus(
    std::istream& in, std::string treasure_id = std::string(Thesaurus::kDefaultId),
    NormalizationMode mode = NormalizationMode::kPreserve) {
  Thesaurus thesaurus(std::move(treasure_id));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = text::trim(text::chomp(line));
    if (body.empty() || body.front() == '#') continue;
    Synset terms;
    for (const std::string_view part : text::split(body, ',')) {
      if (text::trim(part).empty()) {
        throw ParseError(line_no, "empty synset member");
      }
      terms.emplace_back(part, mode);
    }
    if (!thesaurus.add(std::move(terms))) {
      throw ParseError(line_no, "a synset needs at least two distinct terms");
    }
  }
  if (in.bad()) throw ParseError(line_no + 1, "stream read error");
  return thesaurus;
}

}  // namespace tagground

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

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/random_world.hpp"
#include "tagground/expansion.hpp"

namespace tagground {
namespace {

using Row = std::tuple<std::string, std::string, std::string, SourceKind>;

std::vector<Row> rows(const std::vector<SemanticExpansion>& expansions) {
  std::vector<Row> out;
  for (const auto& e : expansions) {
    out.emplace_back(e.expanded_term.value(), e.property, e.treasure_id,
                     e.source_kind);
  }
  return out;
}

TEST(Expand, PaperReproducesTheSevenRowTable) {
  const auto treasures = testing::worked_example_treasures();
  const auto expansions = expand(NormalizedTag("paper"), treasures);
  const auto onto = SourceKind::kOntologyClass;
  const auto syn = SourceKind::kSynset;
  const std::vector<Row> expected = {
      {"handcraft", "madeOf", "arts.owl", onto},
      {"conferencepaper", "isSubClassOf", "conference.owl", onto},
      {"workshoppaper", "isSubClassOf", "conference.owl", onto},
      {"wood", "derivedFrom", "nature.owl", onto},
      {"newspaper", "isSynonymOf", "wordnet", syn},
      {"report", "isSynonymOf", "wordnet", syn},
      {"scientific paper", "isSynonymOf", "wordnet", syn},
  };
  EXPECT_EQ(rows(expansions), expected);

  // Relationship column as a sentence, directions included.
  ASSERT_EQ(expansions.size(), 7u);
  EXPECT_EQ(expansions[0].relationship("Paper"), "Handcraft madeOf Paper");
  EXPECT_EQ(expansions[2].relationship("Paper"),
            "workshopPaper isSubClassOf Paper");
  EXPECT_EQ(expansions[3].relationship("paper"), "paper derivedFrom wood");
  EXPECT_EQ(expansions[2].direction, Direction::kTagAsObject);
  EXPECT_EQ(expansions[3].direction, Direction::kTagAsSubject);
  EXPECT_EQ(expansions[2].category, RelationCategory::kPartnership);
}

TEST(Expand, ReferenceHasThreeOntologyMeanings) {
  const auto expansions =
      expand(NormalizedTag("reference"), testing::worked_example_treasures());
  const auto onto = SourceKind::kOntologyClass;
  const std::vector<Row> expected = {
      {"conference", "contains", "conference.owl", onto},
      {"referencesystem", "isSuperClass", "context.owl", onto},
      {"javadocreference", "isTypeOf", "java.owl", onto},
  };
  EXPECT_EQ(rows(expansions), expected);
  EXPECT_EQ(expansions[2].expanded_label, "JavaDocReference");
  EXPECT_EQ(expansions[2].category, RelationCategory::kDefinition);
}

TEST(Expand, NothingLoaded) {
  EXPECT_TRUE(expand(NormalizedTag("paper"), TreasureSet{}).empty());
  EXPECT_TRUE(expand(NormalizedTag("paper"), {}, nullptr).empty());
}

TEST(Expand, RejectedPropertyYieldsNoExpansion) {
  // conference.owl holds "Paper disjointWith Review".
  const auto treasures = testing::worked_example_treasures();
  for (const auto& e : expand(NormalizedTag("review"), treasures)) {
    ADD_FAILURE() << "unexpected expansion " << e.expanded_term;
  }
  EXPECT_TRUE(treasures.find_ontology("conference.owl")
                  ->has_concept("review"));
}

TEST(Expand, SpanOverloadMatchesTreasureSet) {
  const auto treasures = testing::worked_example_treasures();
  std::vector<OntologyStore> stores;
  for (const auto& s : treasures.ontologies()) stores.push_back(*s);
  for (const char* tag : {"paper", "reference", "workshop", "library"}) {
    EXPECT_EQ(expand(NormalizedTag(tag), stores, treasures.thesaurus()),
              expand(NormalizedTag(tag), treasures))
        << tag;
  }
}

TEST(Expand, DeduplicatesRepeatedTriples) {
  OntologyStore store("dup.owl");
  store.add({"a", "isA", "b"}, RelationCategory::kDefinition);
  store.add({"a", "isA", "b"}, RelationCategory::kDefinition);
  store.add({"b", "isA", "a"}, RelationCategory::kDefinition);
  const std::vector<OntologyStore> stores = {store};
  const auto expansions = expand(NormalizedTag("a"), stores, nullptr);
  ASSERT_EQ(expansions.size(), 2u);  // one per direction
  EXPECT_NE(expansions[0].direction, expansions[1].direction);
}

Corpus vocabulary_corpus(std::initializer_list<const char*> tags) {
  std::vector<TaggingRecord> records;
  int i = 0;
  for (const char* t : tags) records.push_back({"r" + std::to_string(i++), "u", t});
  return ingest(records).corpus;
}

TEST(ExpansionRate, HandCountedFixture) {
  // "paper" expands (seven ways); "todo" is a self-reference tag no treasure
  // knows. 1 of 2.
  const auto corpus = vocabulary_corpus({"paper", "todo"});
  EXPECT_DOUBLE_EQ(expansion_rate(corpus, testing::worked_example_treasures()),
                   0.5);
}

TEST(ExpansionRate, NoTreasures) {
  EXPECT_DOUBLE_EQ(expansion_rate(vocabulary_corpus({"paper", "todo"}), {}), 0.0);
}

TEST(ExpansionRate, SaturatedThesaurus) {
  Thesaurus th;
  th.add({NormalizedTag("a"), NormalizedTag("b")});
  th.add({NormalizedTag("c"), NormalizedTag("z")});
  const auto corpus = vocabulary_corpus({"a", "b", "c"});
  EXPECT_DOUBLE_EQ(expansion_rate(corpus, TreasureSet({}, th)), 1.0);
}

TEST(ExpansionRate, EmptyVocabulary) {
  EXPECT_THROW(expansion_rate(Corpus{}, testing::worked_example_treasures()),
               UndefinedRate);
}

TEST(ExpansionRate, ScaleFree) {
  const Corpus corpus = testing::load_corpus("paperlike/corpus.tsv");
  std::vector<TaggingRecord> doubled;
  for (const auto& [id, r] : corpus.resources()) {
    for (const auto& [tag, count] : r.tags) {
      doubled.push_back({id, "u", tag.value()});
      doubled.push_back({id + "-copy", "u", tag.value()});
    }
  }
  const auto treasures = testing::paperlike_treasures();
  EXPECT_DOUBLE_EQ(expansion_rate(ingest(doubled).corpus, treasures),
                   expansion_rate(corpus, treasures));
}

bool contains(const std::vector<SemanticExpansion>& haystack,
              const SemanticExpansion& needle) {
  return std::find(haystack.begin(), haystack.end(), needle) != haystack.end();
}

TEST(ExpandProperties, RandomWorlds) {
  const PropertyCatalog catalog = PropertyCatalog::standard();
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto world = testing::random_world(seed);
    const auto& all = world.treasures;

    // Growing prefixes of the treasure list.
    std::vector<TreasureSet> chain(1);
    for (const auto& store : all.ontologies()) {
      TreasureSet next = chain.back();
      next.add_ontology(store);
      chain.push_back(std::move(next));
    }
    if (all.thesaurus() != nullptr) chain.push_back(all);

    double previous_rate = -1.0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const double rate = expansion_rate(world.corpus, chain[i]);
      EXPECT_GE(rate, previous_rate) << "seed " << seed;
      previous_rate = rate;
    }

    for (const auto& tag : world.corpus.vocabulary()) {
      std::vector<SemanticExpansion> previous;
      for (const auto& set : chain) {
        const auto current = expand(tag, set);
        for (const auto& e : previous) {
          EXPECT_TRUE(contains(current, e)) << "seed " << seed;
        }
        previous = current;
      }
      for (const auto& e : previous) {
        EXPECT_NE(e.expanded_term, e.source_tag);
        EXPECT_EQ(e.source_tag, tag);
        if (e.source_kind == SourceKind::kSynset) {
          EXPECT_EQ(e.property, "isSynonymOf");
          EXPECT_EQ(e.category, RelationCategory::kEquivalence);
          continue;
        }
        // Never a rejected property.
        ASSERT_TRUE(classify_property(catalog, e.property).has_value());
        EXPECT_EQ(*classify_property(catalog, e.property), e.category);
        // The triple exists with the tag at the stated endpoint.
        const OntologyStore* store = all.find_ontology(e.treasure_id);
        ASSERT_NE(store, nullptr);
        const bool found = std::any_of(
            store->triples().begin(), store->triples().end(),
            [&](const StoredTriple& t) {
              if (t.triple.predicate != e.property) return false;
              const auto& mine = e.direction == Direction::kTagAsSubject
                                     ? t.subject_forms
                                     : t.object_forms;
              const auto& other = e.direction == Direction::kTagAsSubject
                                      ? t.triple.object
                                      : t.triple.subject;
              return mine.contains(tag.value()) && other == e.expanded_label;
            });
        EXPECT_TRUE(found) << "seed " << seed << " " << e.expanded_term;
      }
    }
  }
}

}  // namespace
}  // namespace tagground

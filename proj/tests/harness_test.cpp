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

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_world.hpp"
#include "tagground/harness.hpp"

namespace tagground {
namespace {

using testing::load_corpus;

constexpr Strategy kStrategies[] = {Strategy::kAllExpansion, Strategy::kSibling,
                                    Strategy::kMft};

TEST(VariationOf, SetDisplacement) {
  const std::vector<ResourceId> base = {"a", "b", "c"};
  EXPECT_DOUBLE_EQ(variation_of(base, base, 3, VariationMode::kSetDisplacement),
                   0.0);
  EXPECT_DOUBLE_EQ(variation_of(base, {"c", "b", "a"}, 3,
                                VariationMode::kSetDisplacement),
                   0.0);
  EXPECT_DOUBLE_EQ(variation_of(base, {"a", "x", "y"}, 3,
                                VariationMode::kSetDisplacement),
                   2.0 / 3.0);
  EXPECT_DOUBLE_EQ(variation_of({}, {"x"}, 1, VariationMode::kSetDisplacement),
                   1.0);
  EXPECT_DOUBLE_EQ(variation_of({}, {}, 4, VariationMode::kSetDisplacement), 0.0);
  // A shorter strategy list displaces nothing new.
  EXPECT_DOUBLE_EQ(variation_of(base, {"a"}, 3, VariationMode::kSetDisplacement),
                   0.0);
}

TEST(VariationOf, RankAware) {
  const std::vector<ResourceId> base = {"a", "b", "c"};
  EXPECT_DOUBLE_EQ(variation_of(base, base, 3, VariationMode::kRankAware), 0.0);
  EXPECT_DOUBLE_EQ(
      variation_of(base, {"b", "a", "c"}, 3, VariationMode::kRankAware),
      2.0 / 3.0);
  EXPECT_DOUBLE_EQ(variation_of(base, {"a", "b"}, 4, VariationMode::kRankAware),
                   1.0 / 4.0);
}

TEST(VariationRate, NoTreasuresIsZero) {
  const Corpus corpus = load_corpus("paperlike/corpus.tsv");
  for (const Strategy s : kStrategies) {
    const auto result =
        variation_rate(corpus, {s}, TreasureSet{}, VariationOptions{});
    EXPECT_DOUBLE_EQ(result.rate, 0.0);
    EXPECT_EQ(result.per_query.size(), corpus.resources().size());
  }
}

TEST(VariationRate, TwoResourceFixture) {
  const Corpus corpus = load_corpus("corpora/venues.tsv");
  VariationOptions options;
  options.k = 1;
  const auto result = variation_rate(corpus, GroundingStrategy::all(),
                                     testing::worked_example_treasures(),
                                     options);
  ASSERT_EQ(result.per_query.size(), 2u);
  const auto& a = result.per_query[0];
  EXPECT_EQ(a.query, "A");
  EXPECT_TRUE(a.baseline_topk.empty());
  EXPECT_EQ(a.strategy_topk, std::vector<ResourceId>{"B"});
  EXPECT_DOUBLE_EQ(a.rate, 1.0);
  EXPECT_DOUBLE_EQ(result.rate, 1.0);
}

TEST(VariationRate, Errors) {
  const Corpus empty;
  EXPECT_THROW(variation_rate(empty, GroundingStrategy::all(), TreasureSet{},
                              VariationOptions{}),
               UndefinedRate);
  const Corpus corpus = load_corpus("corpora/venues.tsv");
  VariationOptions options;
  options.k = 0;
  EXPECT_THROW(variation_rate(corpus, GroundingStrategy::all(), TreasureSet{},
                              options),
               ContractViolation);
}

class PaperlikeReport : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new Corpus(load_corpus("paperlike/corpus.tsv"));
    treasures_ = new TreasureSet(testing::paperlike_treasures());
    EvalConfig config;
    config.corpus_name = "paperlike";
    report_ = new EvalReport(evaluate(*corpus_, *treasures_, config));
  }
  static void TearDownTestSuite() {
    delete report_;
    delete treasures_;
    delete corpus_;
  }

  static Corpus* corpus_;
  static TreasureSet* treasures_;
  static EvalReport* report_;
};

Corpus* PaperlikeReport::corpus_ = nullptr;
TreasureSet* PaperlikeReport::treasures_ = nullptr;
EvalReport* PaperlikeReport::report_ = nullptr;

TEST_F(PaperlikeReport, GroupsInOrder) {
  ASSERT_EQ(report_->groups.size(), 3u);
  EXPECT_EQ(report_->groups[0].group, "thesaurus");
  EXPECT_EQ(report_->groups[1].group, "ontologies");
  EXPECT_EQ(report_->groups[2].group, "combined");
}

TEST_F(PaperlikeReport, ThesaurusExpandsMoreThanOntologies) {
  EXPECT_GT(report_->group("thesaurus").expansion_rate,
            report_->group("ontologies").expansion_rate);
}

TEST_F(PaperlikeReport, CombinedGroundsAtLeastAsMuch) {
  for (const Strategy s : kStrategies) {
    EXPECT_GE(report_->group("combined").grounding(s),
              report_->group("thesaurus").grounding(s));
    EXPECT_GE(report_->group("combined").grounding(s),
              report_->group("ontologies").grounding(s));
  }
}

TEST_F(PaperlikeReport, RatesAreFractions) {
  for (const auto& g : report_->groups) {
    EXPECT_GE(g.expansion_rate, 0.0);
    EXPECT_LE(g.expansion_rate, 1.0);
    for (const Strategy s : kStrategies) {
      EXPECT_GE(g.grounding(s), 0.0);
      EXPECT_LE(g.grounding(s), 1.0);
      EXPECT_GE(g.variation(s), 0.0);
      EXPECT_LE(g.variation(s), 1.0);
    }
  }
}

TEST_F(PaperlikeReport, AllExpansionVariesMost) {
  for (const auto& g : report_->groups) {
    EXPECT_GE(g.variation(Strategy::kAllExpansion), g.variation(Strategy::kSibling))
        << g.group;
    EXPECT_GE(g.variation(Strategy::kAllExpansion), g.variation(Strategy::kMft))
        << g.group;
  }
  EXPECT_GT(report_->group("combined").variation(Strategy::kAllExpansion), 0.0);
}

TEST_F(PaperlikeReport, TopListsMatchBruteForceEnumeration) {
  const auto profiles = query_profiles(*corpus_, kDefaultMftThreshold);
  const auto groups = treasure_groups(*treasures_);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& [name, group] = groups[gi];
    const GroupRow& row = report_->groups[gi];
    for (const auto& [s, variation] : row.variations) {
      double sum = 0.0;
      for (const auto& m : variation.per_query) {
        const UserProfile* profile = &profiles.at(m.query);
        EXPECT_EQ(m.baseline_topk,
                  testing::oracle_recommend(*corpus_, group, m.query, 10,
                                            std::nullopt, profile));
        EXPECT_EQ(m.strategy_topk,
                  testing::oracle_recommend(*corpus_, group, m.query, 10, s,
                                            profile))
            << name << ' ' << to_string(s) << ' ' << m.query;
        sum += variation_of(m.baseline_topk, m.strategy_topk, 10,
                            VariationMode::kSetDisplacement);
      }
      EXPECT_NEAR(variation.rate, sum / 12.0, 1e-12);
    }
  }
}

TEST_F(PaperlikeReport, ZeroGroundingMeansZeroVariation) {
  for (const auto& g : report_->groups) {
    for (const Strategy s : kStrategies) {
      if (g.grounding(s) == 0.0) {
        EXPECT_EQ(g.variation(s), 0.0);
      }
    }
  }
}

TEST_F(PaperlikeReport, RerunIsByteIdentical) {
  EvalConfig config = report_->config;
  const EvalReport again = evaluate(*corpus_, *treasures_, config);
  EXPECT_EQ(grounding_csv(again), grounding_csv(*report_));
  EXPECT_EQ(variation_csv(again), variation_csv(*report_));
  EXPECT_EQ(queries_csv(again), queries_csv(*report_));
  EXPECT_EQ(to_markdown(again), to_markdown(*report_));
  config.workers = 4;
  const EvalReport parallel = evaluate(*corpus_, *treasures_, config);
  EXPECT_EQ(grounding_csv(parallel), grounding_csv(*report_));
  EXPECT_EQ(variation_csv(parallel), variation_csv(*report_));
  EXPECT_EQ(queries_csv(parallel), queries_csv(*report_));
}

TEST_F(PaperlikeReport, CsvLayout) {
  const std::string grounding = grounding_csv(*report_);
  std::istringstream lines(grounding);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line,
            "Data,paperlike/thesaurus,paperlike/ontologies,paperlike/combined");
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("Semantic Expansions,", 0), 0u);
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("All Expansion Strategy,", 0), 0u);
  const std::string variation = variation_csv(*report_);
  EXPECT_EQ(variation.rfind("Strategy,paperlike/thesaurus,", 0), 0u);
  EXPECT_NE(to_markdown(*report_).find("| Sibling Strategy |"), std::string::npos);
}

TEST(Evaluate, Errors) {
  const Corpus corpus = load_corpus("corpora/venues.tsv");
  EXPECT_THROW(evaluate(corpus, TreasureSet{}, EvalConfig{}), ContractViolation);
  EvalConfig config;
  config.k = 0;
  EXPECT_THROW(evaluate(corpus, testing::worked_example_treasures(), config),
               ContractViolation);
  EXPECT_THROW(evaluate(Corpus{}, testing::worked_example_treasures(),
                        EvalConfig{}),
               UndefinedRate);
}

TEST(Evaluate, GroupsFollowLoadedTreasures) {
  const Corpus corpus = load_corpus("corpora/venues.tsv");
  const auto only_ontologies =
      evaluate(corpus, testing::worked_example_treasures(false), EvalConfig{});
  ASSERT_EQ(only_ontologies.groups.size(), 1u);
  EXPECT_EQ(only_ontologies.groups[0].group, "ontologies");
}

TEST(EvalConfigJson, RoundTrip) {
  EvalConfig config;
  config.corpus_name = "demo";
  config.k = 3;
  config.strategies = {Strategy::kSibling, Strategy::kMft};
  config.fallback_to_all = true;
  config.mft_threshold = 0.5;
  config.sibling_scope = SiblingScope::kExpandedTagResource;
  config.matching = MatchingMode::kExact;
  config.variation = VariationMode::kRankAware;
  config.normalization = NormalizationMode::kFoldSeparators;
  config.ontology_paths = {"a.owl", "b.owl"};
  config.thesaurus_path = "wn.txt";
  const nlohmann::ordered_json j = config;
  const EvalConfig back = j.get<EvalConfig>();
  EXPECT_EQ(nlohmann::ordered_json(back), j);
  EXPECT_EQ(j.at("sibling_scope"), "expanded");
  EXPECT_EQ(j.at("variation"), "rank");
}

TEST(EvalConfigJson, RejectsUnknownEnumValue) {
  const auto j = nlohmann::ordered_json::parse(R"({"matching": "psychic"})");
  EvalConfig config;
  EXPECT_ANY_THROW(config = j.get<EvalConfig>());
}

TEST(HarnessProperties, ScaleFreeExpansionRate) {
  const Corpus corpus = load_corpus("paperlike/corpus.tsv");
  std::vector<TaggingRecord> doubled;
  for (const auto& [id, r] : corpus.resources()) {
    const AuthorId author = *r.authors.begin();
    for (const auto& [t, n] : r.tags) {
      doubled.push_back({id, author, t.value()});
      doubled.push_back({id + "_copy", author, t.value()});
    }
  }
  const Corpus twice = ingest(doubled).corpus;
  const auto treasures = testing::paperlike_treasures();
  EXPECT_DOUBLE_EQ(expansion_rate(twice, treasures),
                   expansion_rate(corpus, treasures));
}

TEST(HarnessProperties, RandomWorldConsistency) {
  for (std::uint64_t seed = 900; seed < 930; ++seed) {
    testing::RandomWorldShape shape;
    shape.max_resources = 10;
    const auto world = testing::random_world(seed, shape);
    if (world.corpus.empty() || world.treasures.empty()) continue;
    const Grounder grounder(world.corpus, world.treasures);
    VariationOptions options;
    options.k = 3;
    for (const Strategy s : kStrategies) {
      const double g = grounding_rate(grounder, {s});
      const auto v = variation_rate(grounder, {s}, options);
      if (g == 0.0) {
        EXPECT_EQ(v.rate, 0.0) << seed;
      }
      EXPECT_GE(v.rate, 0.0);
      EXPECT_LE(v.rate, 1.0);
    }
  }
}

}  // namespace
}  // namespace tagground

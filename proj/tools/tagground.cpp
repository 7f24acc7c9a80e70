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

// Command-line front end: expand, ground, recommend, recommend-user and
// evaluate over tagging files, ontology files and a thesaurus.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef TAGGROUND_CLI11_SINGLE_HEADER
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "tagground/tagground.hpp"

namespace fs = std::filesystem;
using namespace tagground;

namespace {

constexpr const char* kConfigEnv = "TAGGROUND_CONFIG";

const std::map<std::string, NormalizationMode> kNormalizations = {
    {"preserve", NormalizationMode::kPreserve},
    {"fold-separators", NormalizationMode::kFoldSeparators}};
const std::map<std::string, SiblingScope> kScopes = {
    {"either", SiblingScope::kEitherResource},
    {"expanded", SiblingScope::kExpandedTagResource}};
const std::map<std::string, MatchingMode> kMatchings = {
    {"greedy", MatchingMode::kGreedy}, {"exact", MatchingMode::kExact}};
const std::map<std::string, Strategy> kStrategies = {
    {"all", Strategy::kAllExpansion},
    {"sibling", Strategy::kSibling},
    {"mft", Strategy::kMft}};
const std::map<std::string, VariationMode> kVariations = {
    {"set", VariationMode::kSetDisplacement},
    {"rank", VariationMode::kRankAware}};

/// Options shared by every subcommand. Each one overrides the matching
/// config field only when given on the command line.
struct GlobalOptions {
  std::string config_path;
  std::string corpus;
  std::vector<std::string> ontologies;
  std::string thesaurus;
  std::string catalog;
  std::string normalization;
  bool fallback = false;
  double mft_threshold = kDefaultMftThreshold;
  std::string sibling_scope;
  std::string matching;
  std::size_t workers = 1;
};

struct Options {
  CLI::Option* corpus = nullptr;
  CLI::Option* ontologies = nullptr;
  CLI::Option* thesaurus = nullptr;
  CLI::Option* catalog = nullptr;
  CLI::Option* normalization = nullptr;
  CLI::Option* fallback = nullptr;
  CLI::Option* mft_threshold = nullptr;
  CLI::Option* sibling_scope = nullptr;
  CLI::Option* matching = nullptr;
  CLI::Option* workers = nullptr;
};

EvalConfig effective_config(const GlobalOptions& g, const Options& o) {
  EvalConfig config;
  std::string path = g.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv); env != nullptr) path = env;
  }
  if (!path.empty()) config = load_config(path);
  if (o.corpus->count() > 0) config.corpus_path = g.corpus;
  if (o.ontologies->count() > 0) config.ontology_paths = g.ontologies;
  if (o.thesaurus->count() > 0) config.thesaurus_path = g.thesaurus;
  if (o.catalog->count() > 0) config.catalog_path = g.catalog;
  if (o.normalization->count() > 0) config.normalization = kNormalizations.at(g.normalization);
  if (o.fallback->count() > 0) config.fallback_to_all = g.fallback;
  if (o.mft_threshold->count() > 0) config.mft_threshold = g.mft_threshold;
  if (o.sibling_scope->count() > 0) config.sibling_scope = kScopes.at(g.sibling_scope);
  if (o.matching->count() > 0) config.matching = kMatchings.at(g.matching);
  if (o.workers->count() > 0) config.workers = g.workers;
  return config;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

struct LoadedCorpus {
  Corpus corpus;
  std::vector<Reject> rejects;
};

LoadedCorpus load_corpus(const EvalConfig& config) {
  if (config.corpus_path.empty()) {
    throw Error("no tagging file given (use --corpus)");
  }
  auto in = open_input(config.corpus_path);
  IngestResult result = ingest(in, config.normalization);
  for (const Reject& r : result.rejects) {
    std::fprintf(stderr, "tagground: warning: %s:%zu: %s\n",
                 config.corpus_path.c_str(), r.line, r.reason.c_str());
  }
  return {std::move(result.corpus), std::move(result.rejects)};
}

TreasureSet load_treasures(const EvalConfig& config) {
  PropertyCatalog catalog = PropertyCatalog::standard();
  if (!config.catalog_path.empty()) {
    auto in = open_input(config.catalog_path);
    catalog.apply_overrides(in);
  }
  TreasureSet treasures;
  for (const std::string& path : config.ontology_paths) {
    auto in = open_input(path);
    try {
      treasures.add_ontology(std::make_shared<const OntologyStore>(load_ontology(
          in, fs::path(path).filename().string(), catalog, config.normalization)));
    } catch (const ParseError& e) {
      throw Error(path + ": " + e.what());
    }
  }
  if (!config.thesaurus_path.empty()) {
    auto in = open_input(config.thesaurus_path);
    try {
      treasures.set_thesaurus(std::make_shared<const Thesaurus>(load_thesaurus(
          in, std::string(Thesaurus::kDefaultId), config.normalization)));
    } catch (const ParseError& e) {
      throw Error(config.thesaurus_path + ": " + e.what());
    }
  }
  return treasures;
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

/// Splits "tag@resource" at the last '@'.
std::pair<std::string, ResourceId> tag_at_resource(const std::string& arg) {
  const auto at = arg.rfind('@');
  if (at == std::string::npos || at == 0 || at + 1 == arg.size()) {
    throw Error("expected <tag>@<resource>, got '" + arg + "'");
  }
  return {arg.substr(0, at), arg.substr(at + 1)};
}

// --- expand -----------------------------------------------------------------

int run_expand(const EvalConfig& config, const std::string& raw,
               const std::string& format) {
  const TreasureSet treasures = load_treasures(config);
  if (treasures.empty()) {
    throw Error("no treasures given (use --ontology and/or --thesaurus)");
  }
  const NormalizedTag tag(raw, config.normalization);
  const auto expansions = expand(tag, treasures);
  if (format == "csv") {
    std::cout << "tag,semantic_expansion,type,relationship,category,treasure\n";
    for (const auto& e : expansions) {
      std::cout << csv_cell(tag.value()) << ',' << csv_cell(e.expanded_term.value())
                << ',' << to_string(e.source_kind) << ','
                << csv_cell(e.relationship(raw)) << ',' << to_string(e.category)
                << ',' << csv_cell(e.treasure_id) << '\n';
    }
    return 0;
  }
  std::cout << "| Tag | Semantic Expansion | Type | Relationship | Treasure |\n"
            << "|---|---|---|---|---|\n";
  for (const auto& e : expansions) {
    std::cout << "| " << md_cell(tag.value()) << " | "
              << md_cell(e.expanded_term.value()) << " | "
              << to_string(e.source_kind) << " | "
              << md_cell(e.relationship(raw)) << " | " << md_cell(e.treasure_id)
              << " |\n";
  }
  if (expansions.empty()) std::cout << "\n(no expansions for " << tag << ")\n";
  return 0;
}

// --- ground -----------------------------------------------------------------

int run_ground(const EvalConfig& config, const std::string& first,
               const std::string& second, Strategy strategy,
               const std::string& user) {
  const auto [raw_a, ra] = tag_at_resource(first);
  const auto [raw_b, rb] = tag_at_resource(second);
  const LoadedCorpus loaded = load_corpus(config);
  const Corpus& corpus = loaded.corpus;
  const TreasureSet treasures = load_treasures(config);
  const NormalizedTag a(raw_a, config.normalization);
  const NormalizedTag b(raw_b, config.normalization);

  std::optional<UserProfile> profile;
  if (strategy == Strategy::kMft) {
    const AuthorId author = user.empty() ? corpus.most_prolific_author(ra) : user;
    profile = build_profile(corpus, author, config.mft_threshold);
  }
  const auto outcome = ground(a, ra, b, rb, config.strategy(strategy), corpus,
                              treasures, profile ? &*profile : nullptr);
  if (!outcome) {
    std::cout << "none: " << to_string(outcome.failure) << '\n';
    return 0;
  }
  const Grounding& g = *outcome.grounding;
  const std::string source_raw = g.via.source_tag == a ? raw_a : raw_b;
  std::cout << "grounded: " << g.tag_a << '@' << g.resource_a << " ~ " << g.tag_b
            << '@' << g.resource_b << '\n'
            << "strategy: " << display_name(g.strategy)
            << (g.via_fallback ? " (fell back to All Expansion)" : "") << '\n'
            << "relationship: " << g.via.relationship(source_raw) << '\n'
            << "category: " << to_string(g.via.category) << '\n'
            << "treasure: " << g.via.treasure_id << " ("
            << to_string(g.via.source_kind) << ")\n";
  if (profile) std::cout << "user: " << profile->author_id << '\n';
  std::cout << "evidence:";
  if (g.context_evidence.empty()) std::cout << " -";
  for (const auto& t : g.context_evidence) std::cout << ' ' << t;
  std::cout << '\n';
  return 0;
}

// --- recommend --------------------------------------------------------------

std::string why(const SimilarityScore& score) {
  std::string out;
  for (const auto& p : score.matched_pairs) {
    if (!out.empty()) out += "; ";
    out += p.kind == MatchKind::kLexical
               ? p.tag_a.value()
               : p.tag_a.value() + " ~ " + p.tag_b.value();
  }
  return out;
}

void print_recommendations(const RecommendationList& list, std::size_t k,
                           const std::string& title) {
  std::cout << title << " (mode " << list.mode.name() << ", k = " << k << ")\n\n"
            << "| Rank | Resource | Score | Why |\n|---|---|---|---|\n";
  std::size_t rank = 0;
  for (const auto& item : list.items) {
    std::cout << "| " << ++rank << " | " << md_cell(item.resource) << " | "
              << fixed(item.score.value, 4) << " | " << md_cell(why(item.score))
              << " |\n";
  }
  if (list.items.empty()) std::cout << "\n(no recommendations)\n";
}

RecommendationMode parse_mode(const std::string& name, const EvalConfig& config) {
  if (name == "baseline") return RecommendationMode::baseline();
  return RecommendationMode::grounded(config.strategy(*parse_strategy(name)));
}

int run_recommend(const EvalConfig& config, const ResourceId& query,
                  std::size_t k, const std::string& mode_name,
                  const std::string& user) {
  const LoadedCorpus loaded = load_corpus(config);
  const Corpus& corpus = loaded.corpus;
  const RecommendationMode mode = parse_mode(mode_name, config);
  corpus.resource(query);  // unknown resource fails before any work
  std::optional<Grounder> grounder;
  std::optional<UserProfile> profile;
  ScoringContext ctx{nullptr, nullptr, config.matching};
  if (!mode.is_baseline()) {
    grounder.emplace(corpus, load_treasures(config));
    ctx.grounder = &*grounder;
    const AuthorId author =
        user.empty() ? corpus.most_prolific_author(query) : user;
    profile = build_profile(corpus, author, config.mft_threshold);
    ctx.target_profile = &*profile;
  }
  const auto list = recommend(corpus, query, k, mode, ctx, config.workers);
  print_recommendations(list, k, "Recommendations for resource " + query);
  return 0;
}

int run_recommend_user(const EvalConfig& config, const AuthorId& author,
                       std::size_t k, const std::string& mode_name) {
  const LoadedCorpus loaded = load_corpus(config);
  const Corpus& corpus = loaded.corpus;
  const RecommendationMode mode = parse_mode(mode_name, config);
  const UserProfile profile = build_profile(corpus, author, config.mft_threshold);
  std::optional<Grounder> grounder;
  ScoringContext ctx{nullptr, &profile, config.matching};
  if (!mode.is_baseline()) {
    grounder.emplace(corpus, load_treasures(config));
    ctx.grounder = &*grounder;
  }
  const auto list = recommend_for_user(corpus, author, k, mode, ctx);
  print_recommendations(list, k, "Recommendations for user " + author);
  return 0;
}

// --- evaluate ---------------------------------------------------------------

int run_evaluate(EvalConfig config, const std::string& format,
                 const std::string& out_dir) {
  const LoadedCorpus loaded = load_corpus(config);
  const TreasureSet treasures = load_treasures(config);
  if (treasures.empty()) {
    throw Error("no treasures given (use --ontology and/or --thesaurus)");
  }
  const EvalReport report = evaluate(loaded.corpus, treasures, config);

  if (out_dir.empty()) {
    if (format == "md") {
      std::cout << to_markdown(report);
    } else {
      std::cout << grounding_csv(report) << '\n' << variation_csv(report);
    }
    return 0;
  }
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  std::vector<fs::path> written;
  const auto emit = [&](const char* name, const std::string& content) {
    write_file(dir / name, content);
    written.push_back(dir / name);
  };
  if (format == "md") {
    emit("report.md", to_markdown(report));
  } else {
    emit("grounding.csv", grounding_csv(report));
    emit("variation.csv", variation_csv(report));
    emit("queries.csv", queries_csv(report));
  }
  emit("config.json", config_json(report.config));
  if (!loaded.rejects.empty()) {
    std::ostringstream rejects;
    rejects << "line\treason\ttext\n";
    for (const Reject& r : loaded.rejects) {
      rejects << r.line << '\t' << r.reason << '\t' << r.text << '\n';
    }
    emit("rejects.tsv", rejects.str());
  }
  for (const auto& p : written) std::cout << "wrote " << p.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantically grounded tag similarity for tag-based recommendation",
               "tagground"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  Options o;
  app.add_option("--config", g.config_path,
                 std::string("JSON config file (default: $") + kConfigEnv + ")");
  o.corpus = app.add_option("--corpus", g.corpus, "Tagging file (TSV)");
  o.ontologies = app.add_option("--ontology", g.ontologies,
                                "Ontology triple file; repeatable");
  o.thesaurus = app.add_option("--thesaurus", g.thesaurus, "Synset file");
  o.catalog = app.add_option("--catalog", g.catalog,
                             "Property catalog overrides");
  o.normalization = app.add_option("--normalize", g.normalization,
                                   "Tag normalization")
                        ->check(CLI::IsMember(kNormalizations));
  o.fallback = app.add_flag("--fallback", g.fallback,
                            "Fall back to All Expansion when context is missing");
  o.mft_threshold = app.add_option("--mft-threshold", g.mft_threshold,
                                   "MFT frequency threshold in (0, 1]");
  o.sibling_scope = app.add_option("--sibling-scope", g.sibling_scope,
                                   "Sibling context resources")
                        ->check(CLI::IsMember(kScopes));
  o.matching = app.add_option("--matching", g.matching, "Pair matching")
                   ->check(CLI::IsMember(kMatchings));
  o.workers = app.add_option("--workers", g.workers, "Worker threads")
                  ->check(CLI::PositiveNumber);

  std::string format = "md";

  auto* expand_cmd = app.add_subcommand("expand", "List the semantic expansions of a tag");
  std::string expand_tag;
  expand_cmd->add_option("tag", expand_tag, "Tag to expand")->required();
  expand_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"md", "csv"}));

  auto* ground_cmd = app.add_subcommand("ground", "Ground two tags of two resources");
  std::string ground_a;
  std::string ground_b;
  std::string ground_strategy = "all";
  std::string ground_user;
  ground_cmd->add_option("first", ground_a, "<tag>@<resource>")->required();
  ground_cmd->add_option("second", ground_b, "<tag>@<resource>")->required();
  ground_cmd->add_option("--strategy", ground_strategy, "Grounding strategy")
      ->check(CLI::IsMember(kStrategies));
  ground_cmd->add_option("--user", ground_user,
                         "User whose MFT profile is used (default: main author "
                         "of the first resource)");

  auto* recommend_cmd =
      app.add_subcommand("recommend", "Rank resources similar to a resource");
  ResourceId query;
  std::size_t k = 10;
  std::string mode = "baseline";
  std::string recommend_user;
  const std::vector<std::string> modes = {"baseline", "all", "sibling", "mft"};
  recommend_cmd->add_option("resource", query, "Query resource id")->required();
  recommend_cmd->add_option("-k", k, "Number of recommendations")
      ->check(CLI::PositiveNumber);
  recommend_cmd->add_option("--mode", mode, "Similarity mode")
      ->check(CLI::IsMember(modes));
  recommend_cmd->add_option("--user", recommend_user,
                            "User whose MFT profile is used (default: main "
                            "author of the query)");

  auto* user_cmd = app.add_subcommand(
      "recommend-user", "Rank resources for a user by their best match");
  AuthorId author;
  user_cmd->add_option("user", author, "Author id")->required();
  user_cmd->add_option("-k", k, "Number of recommendations")
      ->check(CLI::PositiveNumber);
  user_cmd->add_option("--mode", mode, "Similarity mode")
      ->check(CLI::IsMember(modes));

  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Expansion, grounding and variation rates per treasure group");
  std::vector<std::string> eval_strategies;
  std::string out_dir;
  std::string corpus_name;
  std::string variation;
  auto* strategies_opt =
      eval_cmd->add_option("--strategies", eval_strategies, "Strategies to run")
          ->delimiter(',')
          ->check(CLI::IsMember(kStrategies));
  auto* k_opt = eval_cmd->add_option("-k", k, "Top-k for variation")
                    ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"md", "csv"}));
  eval_cmd->add_option("--out", out_dir, "Directory to write the report into");
  auto* name_opt = eval_cmd->add_option("--name", corpus_name,
                                        "Corpus name used in report headers");
  auto* variation_opt =
      eval_cmd->add_option("--variation", variation, "Variation measure")
          ->check(CLI::IsMember(kVariations));

  CLI11_PARSE(app, argc, argv);

  try {
    EvalConfig config = effective_config(g, o);
    if (*expand_cmd) return run_expand(config, expand_tag, format);
    if (*ground_cmd) {
      return run_ground(config, ground_a, ground_b, kStrategies.at(ground_strategy),
                        ground_user);
    }
    if (*recommend_cmd) {
      return run_recommend(config, query, k, mode, recommend_user);
    }
    if (*user_cmd) return run_recommend_user(config, author, k, mode);
    if (strategies_opt->count() > 0) {
      config.strategies.clear();
      for (const auto& name : eval_strategies) {
        config.strategies.push_back(kStrategies.at(name));
      }
    }
    if (k_opt->count() > 0) config.k = k;
    if (variation_opt->count() > 0) config.variation = kVariations.at(variation);
    if (name_opt->count() > 0) {
      config.corpus_name = corpus_name;
    } else if (config.corpus_name == EvalConfig{}.corpus_name &&
               !config.corpus_path.empty()) {
      config.corpus_name = fs::path(config.corpus_path).stem().string();
    }
    if (eval_cmd->get_option("--format")->count() == 0 && !out_dir.empty()) {
      format = "csv";
    }
    return run_evaluate(config, format, out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "tagground: error: %s\n", e.what());
    return 1;
  }
}

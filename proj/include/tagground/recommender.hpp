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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tagground/corpus.hpp"
#include "tagground/error.hpp"
#include "tagground/grounding.hpp"
#include "tagground/parallel.hpp"

namespace tagground {

enum class MatchKind { kLexical, kGrounded };

inline std::string_view to_string(MatchKind k) noexcept {
  return k == MatchKind::kLexical ? "lexical" : "grounded";
}

/// How cross-resource grounded pairs are paired up after lexical matching.
enum class MatchingMode {
  kGreedy,  // first fit in lexicographic (tag_a, tag_b) order
  kExact,   // maximum bipartite matching
};

struct MatchedPair {
  NormalizedTag tag_a;
  NormalizedTag tag_b;
  MatchKind kind = MatchKind::kLexical;

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

/// Generalized binary cosine: matched tag pairs over sqrt(|Ta| * |Tb|).
struct SimilarityScore {
  double value = 0.0;
  std::vector<MatchedPair> matched_pairs;
  std::size_t size_a = 0;
  std::size_t size_b = 0;

  std::size_t match_count() const noexcept { return matched_pairs.size(); }

  /// Exact three-way comparison of the underlying ratios, free of rounding:
  /// m1 / sqrt(n1) vs m2 / sqrt(n2) compares as m1^2 * n2 vs m2^2 * n1.
  friend int compare(const SimilarityScore& l, const SimilarityScore& r) {
    const std::uint64_t ml = l.match_count();
    const std::uint64_t mr = r.match_count();
    const std::uint64_t nl = static_cast<std::uint64_t>(l.size_a) * l.size_b;
    const std::uint64_t nr = static_cast<std::uint64_t>(r.size_a) * r.size_b;
    const std::uint64_t lhs = ml * ml * (nr == 0 ? 1 : nr);
    const std::uint64_t rhs = mr * mr * (nl == 0 ? 1 : nl);
    if (ml == 0 || mr == 0) return (ml > 0) - (mr > 0);
    return (lhs > rhs) - (lhs < rhs);
  }
};

/// Baseline (lexical cosine) when `strategy` is empty, otherwise grounded.
struct RecommendationMode {
  std::optional<GroundingStrategy> strategy;

  static RecommendationMode baseline() { return {}; }
  static RecommendationMode grounded(GroundingStrategy s) { return {s}; }

  bool is_baseline() const noexcept { return !strategy.has_value(); }

  std::string name() const {
    return strategy ? std::string(to_string(strategy->value)) : "baseline";
  }
};

struct ScoringContext {
  const Grounder* grounder = nullptr;
  /// The user receiving recommendations; consulted by MFT only.
  const UserProfile* target_profile = nullptr;
  MatchingMode matching = MatchingMode::kGreedy;
};

namespace detail {

using TagList = std::vector<const NormalizedTag*>;

inline TagList tag_list(const Resource& r) {
  TagList out;
  out.reserve(r.tags.size());
  for (const auto& [tag, count] : r.tags) out.push_back(&tag);
  return out;
}

// Kuhn's augmenting-path matching; left vertices tried in order, so the
// result is deterministic.
inline std::vector<int> max_bipartite_matching(
    const std::vector<std::vector<std::size_t>>& adjacency, std::size_t right) {
  std::vector<int> match_right(right, -1);
  std::vector<char> seen;
  const auto augment = [&](auto&& self, std::size_t u) -> bool {
    for (const std::size_t v : adjacency[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match_right[v] < 0 ||
          self(self, static_cast<std::size_t>(match_right[v]))) {
        match_right[v] = static_cast<int>(u);
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < adjacency.size(); ++u) {
    seen.assign(right, 0);
    augment(augment, u);
  }
  return match_right;
}

inline SimilarityScore score_ordered(const Resource& a, const Resource& b,
                                     const RecommendationMode& mode,
                                     const ScoringContext& ctx) {
  SimilarityScore score;
  score.size_a = a.tags.size();
  score.size_b = b.tags.size();

  TagList rest_a;
  TagList rest_b;
  for (const auto& [tag, count] : a.tags) {
    if (b.tags.contains(tag)) {
      score.matched_pairs.push_back({tag, tag, MatchKind::kLexical});
    } else {
      rest_a.push_back(&tag);
    }
  }
  for (const auto& [tag, count] : b.tags) {
    if (!a.tags.contains(tag)) rest_b.push_back(&tag);
  }

  if (!mode.is_baseline() && !rest_a.empty() && !rest_b.empty()) {
    if (ctx.grounder == nullptr) {
      throw ContractViolation("grounded similarity needs a Grounder");
    }
    const GroundingStrategy& strategy = *mode.strategy;
    const auto edge = [&](std::size_t i, std::size_t j) {
      return ctx.grounder->grounds(*rest_a[i], a.id, *rest_b[j], b.id, strategy,
                                   ctx.target_profile);
    };
    if (ctx.matching == MatchingMode::kGreedy) {
      std::vector<char> used(rest_b.size(), 0);
      for (std::size_t i = 0; i < rest_a.size(); ++i) {
        for (std::size_t j = 0; j < rest_b.size(); ++j) {
          if (used[j] || !edge(i, j)) continue;
          used[j] = 1;
          score.matched_pairs.push_back(
              {*rest_a[i], *rest_b[j], MatchKind::kGrounded});
          break;
        }
      }
    } else {
      std::vector<std::vector<std::size_t>> adjacency(rest_a.size());
      for (std::size_t i = 0; i < rest_a.size(); ++i) {
        for (std::size_t j = 0; j < rest_b.size(); ++j) {
          if (edge(i, j)) adjacency[i].push_back(j);
        }
      }
      const auto match_right = max_bipartite_matching(adjacency, rest_b.size());
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t j = 0; j < match_right.size(); ++j) {
        if (match_right[j] >= 0) {
          pairs.emplace_back(static_cast<std::size_t>(match_right[j]), j);
        }
      }
      std::sort(pairs.begin(), pairs.end());
      for (const auto& [i, j] : pairs) {
        score.matched_pairs.push_back(
            {*rest_a[i], *rest_b[j], MatchKind::kGrounded});
      }
    }
  }

  const double denom = std::sqrt(static_cast<double>(score.size_a) *
                                 static_cast<double>(score.size_b));
  score.value = denom > 0.0
                    ? static_cast<double>(score.match_count()) / denom
                    : 0.0;
  return score;
}

}  // namespace detail

/// Similarity of two distinct resources over their distinct tag sets.
///
/// Identical tags match first. In grounded modes the remaining tags are then
/// paired one-to-one through groundings. Baseline mode is plain binary
/// cosine. The pair is always scored in ascending resource-id order, so the
/// value does not depend on argument order; matched pairs are reported in
/// the caller's (a, b) orientation.
inline SimilarityScore pair_similarity(const Resource& a, const Resource& b,
                                       const RecommendationMode& mode,
                                       const ScoringContext& ctx = {}) {
  if (a.id == b.id) {
    throw ContractViolation("pair_similarity of a resource with itself");
  }
  if (a.id < b.id) return detail::score_ordered(a, b, mode, ctx);
  SimilarityScore score = detail::score_ordered(b, a, mode, ctx);
  std::swap(score.size_a, score.size_b);
  for (MatchedPair& p : score.matched_pairs) std::swap(p.tag_a, p.tag_b);
  return score;
}

struct RecommendationItem {
  ResourceId resource;
  SimilarityScore score;
};

struct RecommendationList {
  ResourceId query;
  RecommendationMode mode;
  std::vector<RecommendationItem> items;

  std::vector<ResourceId> ids() const {
    std::vector<ResourceId> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(item.resource);
    return out;
  }
};

namespace detail {

inline void rank(std::vector<RecommendationItem>& items, std::size_t k) {
  std::erase_if(items, [](const RecommendationItem& item) {
    return item.score.match_count() == 0;
  });
  std::sort(items.begin(), items.end(), [](const auto& l, const auto& r) {
    const int c = compare(l.score, r.score);
    if (c != 0) return c > 0;
    return l.resource < r.resource;
  });
  if (items.size() > k) items.resize(k);
}

inline void check_grounder(const Corpus& corpus, const RecommendationMode& mode,
                           const ScoringContext& ctx) {
  if (mode.is_baseline()) return;
  if (ctx.grounder == nullptr) {
    throw ContractViolation("grounded recommendation needs a Grounder");
  }
  if (&ctx.grounder->corpus() != &corpus) {
    throw ContractViolation("Grounder was built for a different corpus");
  }
}

}  // namespace detail

/// Top-k resources by pair_similarity. Scores are strictly non-increasing,
/// ties go to the smaller resource id, and zero scores are dropped.
inline RecommendationList recommend(const Corpus& corpus,
                                    const ResourceId& query, std::size_t k,
                                    const RecommendationMode& mode,
                                    const ScoringContext& ctx = {},
                                    std::size_t workers = 1) {
  if (k == 0) throw ContractViolation("k must be positive");
  const Resource& q = corpus.resource(query);
  detail::check_grounder(corpus, mode, ctx);

  std::vector<const Resource*> others;
  for (const auto& [id, r] : corpus.resources()) {
    if (id != query) others.push_back(&r);
  }
  std::vector<RecommendationItem> items(others.size());
  detail::parallel_for(others.size(), workers, [&](std::size_t i) {
    items[i] = {others[i]->id, pair_similarity(q, *others[i], mode, ctx)};
  });
  detail::rank(items, k);
  return {query, mode, std::move(items)};
}

/// Recommends resources the author has not tagged, scoring each candidate
/// by its best pair_similarity against any of the author's resources.
inline RecommendationList recommend_for_user(const Corpus& corpus,
                                             const AuthorId& author,
                                             std::size_t k,
                                             const RecommendationMode& mode,
                                             const ScoringContext& ctx = {}) {
  if (k == 0) throw ContractViolation("k must be positive");
  corpus.author_tags(author);  // throws NotFound
  detail::check_grounder(corpus, mode, ctx);

  std::vector<const Resource*> own;
  std::vector<const Resource*> candidates;
  for (const auto& [id, r] : corpus.resources()) {
    (r.authors.contains(author) ? own : candidates).push_back(&r);
  }
  std::vector<RecommendationItem> items;
  for (const Resource* c : candidates) {
    RecommendationItem best{c->id, {}};
    for (const Resource* mine : own) {
      SimilarityScore s = pair_similarity(*c, *mine, mode, ctx);
      if (compare(s, best.score) > 0) best.score = std::move(s);
    }
    items.push_back(std::move(best));
  }
  detail::rank(items, k);
  return {author, mode, std::move(items)};
}

}  // namespace tagground

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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tagground/error.hpp"
#include "tagground/text.hpp"

namespace tagground {

/// One `<tag, resource, author>` assignment as read from input.
struct TaggingRecord {
  std::string resource_id;
  std::string author_id;
  std::string raw_tag;
};

/// A taggable item, aggregated over every author who tagged it.
struct Resource {
  ResourceId id;
  std::map<NormalizedTag, std::size_t> tags;  // tag -> occurrence count
  std::set<AuthorId> authors;

  std::set<NormalizedTag> distinct_tags() const {
    std::set<NormalizedTag> out;
    for (const auto& [tag, count] : tags) out.insert(tag);
    return out;
  }

  bool has_tag(const NormalizedTag& tag) const { return tags.contains(tag); }

  friend bool operator==(const Resource&, const Resource&) = default;
};

struct UserProfile {
  AuthorId author_id;
  std::map<NormalizedTag, std::size_t> tag_frequencies;
  std::set<NormalizedTag> mft;
  bool has_clear_preference = false;
};

/// A line or record skipped during ingestion.
struct Reject {
  std::size_t line = 0;  // 0 when ingesting in-memory records
  std::string reason;
  std::string text;
};

/// Immutable folksonomy snapshot. Built once by CorpusBuilder; every query
/// after that is const and safe to share across threads.
class Corpus {
 public:
  Corpus() = default;

  const std::map<ResourceId, Resource>& resources() const noexcept {
    return resources_;
  }

  const Resource& resource(const ResourceId& id) const {
    const auto it = resources_.find(id);
    if (it == resources_.end()) throw NotFound("unknown resource: " + id);
    return it->second;
  }

  bool has_resource(const ResourceId& id) const {
    return resources_.contains(id);
  }

  bool has_author(const AuthorId& id) const { return authors_.contains(id); }

  /// Full tagging history of one author, summed over all resources.
  const std::map<NormalizedTag, std::size_t>& author_tags(
      const AuthorId& id) const {
    const auto it = authors_.find(id);
    if (it == authors_.end()) throw NotFound("unknown author: " + id);
    return it->second;
  }

  std::vector<AuthorId> authors() const {
    std::vector<AuthorId> out;
    out.reserve(authors_.size());
    for (const auto& [id, tags] : authors_) out.push_back(id);
    return out;
  }

  const std::set<NormalizedTag>& vocabulary() const noexcept {
    return vocabulary_;
  }

  /// The author with the most tag assignments on the resource; ties go to
  /// the smallest author id.
  const AuthorId& most_prolific_author(const ResourceId& id) const {
    const auto it = postings_.find(id);
    if (it == postings_.end() || it->second.empty()) {
      throw NotFound("unknown resource: " + id);
    }
    const auto best = std::max_element(
        it->second.begin(), it->second.end(),
        [](const auto& l, const auto& r) { return l.second < r.second; });
    return best->first;
  }

  std::size_t record_count() const noexcept { return record_count_; }

  NormalizationMode normalization() const noexcept { return mode_; }

  bool empty() const noexcept { return resources_.empty(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  friend class CorpusBuilder;

  std::map<ResourceId, Resource> resources_;
  std::map<AuthorId, std::map<NormalizedTag, std::size_t>> authors_;
  // resource -> author -> assignments on that resource
  std::map<ResourceId, std::map<AuthorId, std::size_t>> postings_;
  std::set<NormalizedTag> vocabulary_;
  std::size_t record_count_ = 0;
  NormalizationMode mode_ = NormalizationMode::kPreserve;
};

/// Single-writer accumulator for a Corpus.
class CorpusBuilder {
 public:
  explicit CorpusBuilder(NormalizationMode mode = NormalizationMode::kPreserve) {
    corpus_.mode_ = mode;
  }

  /// Adds one record. Throws RejectedRecord when any field is blank.
  void add(const TaggingRecord& record) {
    const std::string_view resource = text::trim(record.resource_id);
    const std::string_view author = text::trim(record.author_id);
    if (resource.empty()) throw RejectedRecord("empty resource id");
    if (author.empty()) throw RejectedRecord("empty author id");
    NormalizedTag tag(record.raw_tag, corpus_.mode_);

    const ResourceId rid(resource);
    const AuthorId aid(author);
    Resource& r = corpus_.resources_[rid];
    r.id = rid;
    ++r.tags[tag];
    r.authors.insert(aid);
    ++corpus_.authors_[aid][tag];
    ++corpus_.postings_[rid][aid];
    corpus_.vocabulary_.insert(std::move(tag));
    ++corpus_.record_count_;
  }

  Corpus build() && { return std::move(corpus_); }

 private:
  Corpus corpus_;
};

struct IngestResult {
  Corpus corpus;
  std::vector<Reject> rejects;
};

/// Builds a corpus from in-memory records. Invalid records are skipped and
/// reported; duplicates of the same triple raise the tag's count.
inline IngestResult ingest(std::span<const TaggingRecord> records,
                           NormalizationMode mode = NormalizationMode::kPreserve) {
  CorpusBuilder builder(mode);
  std::vector<Reject> rejects;
  for (const TaggingRecord& record : records) {
    try {
      builder.add(record);
    } catch (const RejectedRecord& e) {
      rejects.push_back({0, e.what(),
                         record.resource_id + '\t' + record.author_id + '\t' +
                             record.raw_tag});
    }
  }
  return {std::move(builder).build(), std::move(rejects)};
}

/// Reads the tab-separated `resource<TAB>author<TAB>tag` format. Lines
/// starting with '#' and blank lines are ignored; malformed lines land in
/// the rejects list. Throws IngestError if the stream fails mid-read.
inline IngestResult ingest(std::istream& in,
                           NormalizationMode mode = NormalizationMode::kPreserve) {
  CorpusBuilder builder(mode);
  std::vector<Reject> rejects;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = text::chomp(line);
    if (text::trim(body).empty() || body.front() == '#') continue;
    const auto fields = text::split(body, '\t');
    if (fields.size() != 3) {
      rejects.push_back({line_no,
                         "expected 3 tab-separated fields, got " +
                             std::to_string(fields.size()),
                         std::string(body)});
      continue;
    }
    try {
      builder.add({std::string(fields[0]), std::string(fields[1]),
                   std::string(fields[2])});
    } catch (const RejectedRecord& e) {
      rejects.push_back({line_no, e.what(), std::string(body)});
    }
  }
  if (in.bad()) throw IngestError(line_no + 1, "stream read error");
  return {std::move(builder).build(), std::move(rejects)};
}

/// Distinct tags on the resource other than `tag`. The query tag does not
/// have to be present on the resource.
inline std::set<NormalizedTag> sibling_tags(const Corpus& corpus,
                                            const ResourceId& resource_id,
                                            const NormalizedTag& tag) {
  const Resource& r = corpus.resource(resource_id);
  std::set<NormalizedTag> out;
  for (const auto& [t, count] : r.tags) {
    if (t != tag) out.insert(t);
  }
  return out;
}

inline constexpr double kDefaultMftThreshold = 0.7;

/// Builds the author's tag-frequency profile and MFT set.
///
/// A tag is in the MFT set when its frequency is at least `threshold` times
/// the author's top frequency. An author who never repeats a tag (top
/// frequency 1) has no clear preference and an empty MFT set.
inline UserProfile build_profile(const Corpus& corpus, const AuthorId& author_id,
                                 double threshold = kDefaultMftThreshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ContractViolation("MFT threshold must lie in (0, 1]");
  }
  UserProfile profile;
  profile.author_id = author_id;
  profile.tag_frequencies = corpus.author_tags(author_id);

  std::size_t max_freq = 0;
  for (const auto& [tag, freq] : profile.tag_frequencies) {
    max_freq = std::max(max_freq, freq);
  }
  profile.has_clear_preference = max_freq > 1;
  if (!profile.has_clear_preference) return profile;

  const double cutoff = threshold * static_cast<double>(max_freq);
  for (const auto& [tag, freq] : profile.tag_frequencies) {
    if (static_cast<double>(freq) >= cutoff) profile.mft.insert(tag);
  }
  return profile;
}

}  // namespace tagground

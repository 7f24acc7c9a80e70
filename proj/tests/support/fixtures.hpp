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

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tagground/tagground.hpp"

#ifndef TAGGROUND_DATA_DIR
#error "TAGGROUND_DATA_DIR must point at the data/ directory"
#endif

namespace tagground::testing {

inline std::string data_path(const std::string& relative) {
  return std::string(TAGGROUND_DATA_DIR) + "/" + relative;
}

inline std::ifstream open_data(const std::string& relative) {
  std::ifstream in(data_path(relative));
  if (!in) throw Error("missing fixture " + data_path(relative));
  return in;
}

inline Corpus load_corpus(const std::string& relative) {
  auto in = open_data(relative);
  return ingest(in).corpus;
}

inline PropertyCatalog fixture_catalog() {
  PropertyCatalog catalog = PropertyCatalog::standard();
  auto in = open_data("treasures/catalog.conf");
  catalog.apply_overrides(in);
  return catalog;
}

inline OntologyStore load_store(const std::string& dir, const std::string& file,
                                const PropertyCatalog& catalog) {
  auto in = open_data(dir + "/" + file);
  return load_ontology(in, file, catalog);
}

/// The miniature treasures behind the worked examples: five ontologies and
/// a thesaurus, classified with the harvested-property catalog.
inline TreasureSet worked_example_treasures(bool with_thesaurus = true) {
  const PropertyCatalog catalog = fixture_catalog();
  std::vector<OntologyStore> stores;
  for (const char* file :
       {"conference.owl", "arts.owl", "nature.owl", "context.owl", "java.owl"}) {
    stores.push_back(load_store("treasures", file, catalog));
  }
  std::optional<Thesaurus> thesaurus;
  if (with_thesaurus) {
    auto in = open_data("treasures/wordnet.txt");
    thesaurus = load_thesaurus(in);
  }
  return TreasureSet(std::move(stores), std::move(thesaurus));
}

/// Broad thesaurus plus three narrow ontologies, stock catalog.
inline TreasureSet paperlike_treasures() {
  const PropertyCatalog catalog = PropertyCatalog::standard();
  std::vector<OntologyStore> stores;
  for (const char* file : {"conference.owl", "photography.owl", "trip.owl"}) {
    stores.push_back(load_store("paperlike", file, catalog));
  }
  auto in = open_data("paperlike/wordnet.txt");
  return TreasureSet(std::move(stores), load_thesaurus(in));
}

}  // namespace tagground::testing

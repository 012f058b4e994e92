// Copyright 2026 The Hatex Authors.
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

#include "hatex/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "hatex/common.h"
#include "hatex/csv.h"

namespace hatex {

int LabeledCorpus::class_index(std::string_view name) const {
  for (size_t i = 0; i < class_names.size(); ++i) {
    if (class_names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

void LabeledCorpus::Validate() const {
  if (num_classes() < 2) throw ContractError("corpus needs at least 2 classes");
  std::unordered_set<std::string> ids;
  for (const auto& doc : documents) {
    if (!ids.insert(doc.id).second) {
      throw ContractError("duplicate document id '" + doc.id + "'");
    }
    if (doc.label < 0 || doc.label >= num_classes()) {
      throw ContractError("document '" + doc.id + "' has label out of range");
    }
    if (doc.gold_rationale) {
      for (int pos : *doc.gold_rationale) {
        if (pos < 0 || pos >= static_cast<int>(doc.tokens.size())) {
          throw ContractError("document '" + doc.id +
                              "' has rationale position out of range");
        }
      }
    }
  }
}

namespace {

std::vector<int> ParseRationale(const std::string& field, const std::string& id,
                                size_t token_count) {
  std::vector<int> positions;
  std::stringstream ss(field);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    size_t used = 0;
    int pos = -1;
    try {
      pos = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || pos < 0) {
      throw FormatError("row '" + id + "': bad rationale index '" + item + "'");
    }
    if (static_cast<size_t>(pos) >= token_count) {
      throw FormatError("row '" + id + "': rationale index " + item +
                        " exceeds token count " + std::to_string(token_count));
    }
    positions.push_back(pos);
  }
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()),
                  positions.end());
  return positions;
}

}  // namespace

LabeledCorpus LoadCorpus(const std::string& path, const CorpusSchema& schema) {
  const CsvTable table = CsvTable::ReadFile(path);
  if (table.header().empty() || table.rows().empty()) {
    throw FormatError(path + ": no documents");
  }
  const size_t id_col = table.require_column(schema.id_column);
  const size_t text_col = table.require_column(schema.text_column);
  const size_t label_col = table.require_column(schema.label_column);
  const auto rationale_col = table.column(schema.rationale_column);

  LabeledCorpus corpus;
  corpus.provenance = path;
  if (!schema.class_names.empty()) {
    corpus.class_names = schema.class_names;
  } else {
    std::set<std::string> labels;
    for (const auto& row : table.rows()) labels.insert(row[label_col]);
    corpus.class_names.assign(labels.begin(), labels.end());
  }

  std::unordered_set<std::string> seen;
  for (size_t r = 0; r < table.rows().size(); ++r) {
    const auto& row = table.rows()[r];
    Document doc;
    doc.id = row[id_col];
    if (!seen.insert(doc.id).second) {
      throw FormatError("line " + std::to_string(table.line_of(r)) +
                        ": duplicate id '" + doc.id + "'");
    }
    doc.label = corpus.class_index(row[label_col]);
    if (doc.label < 0) {
      throw LabelError("row '" + doc.id + "': unknown label '" +
                       row[label_col] + "'");
    }
    doc.raw = row[text_col];
    doc.tokens = Preprocess(doc.raw, schema.preprocess);
    doc.empty = doc.tokens.empty();
    if (rationale_col && !row[*rationale_col].empty()) {
      doc.gold_rationale =
          ParseRationale(row[*rationale_col], doc.id, doc.tokens.size());
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.num_classes() < 2) {
    throw LabelError(path + ": need at least 2 distinct labels");
  }
  return corpus;
}

void WriteCorpusCsv(const LabeledCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  WriteCsvRow(out, {"id", "text", "label", "rationale"});
  for (const auto& doc : corpus.documents) {
    std::string rationale;
    if (doc.gold_rationale) {
      for (size_t i = 0; i < doc.gold_rationale->size(); ++i) {
        if (i) rationale += ';';
        rationale += std::to_string((*doc.gold_rationale)[i]);
      }
    }
    WriteCsvRow(out, {doc.id, JoinTokens(doc.tokens),
                      corpus.class_names[static_cast<size_t>(doc.label)],
                      rationale});
  }
}

LabeledCorpus FilterInfrequent(const LabeledCorpus& corpus, int min_df) {
  if (min_df < 1) throw ContractError("min_df must be >= 1");
  std::unordered_map<std::string, int> df;
  for (const auto& doc : corpus.documents) {
    std::unordered_set<std::string_view> types(doc.tokens.begin(),
                                               doc.tokens.end());
    for (auto t : types) ++df[std::string(t)];
  }
  LabeledCorpus out;
  out.class_names = corpus.class_names;
  out.provenance = corpus.provenance;
  out.documents.reserve(corpus.size());
  for (const auto& doc : corpus.documents) {
    Document kept = doc;
    kept.tokens.clear();
    std::vector<int> remap(doc.tokens.size(), -1);
    for (size_t i = 0; i < doc.tokens.size(); ++i) {
      if (df[doc.tokens[i]] >= min_df) {
        remap[i] = static_cast<int>(kept.tokens.size());
        kept.tokens.push_back(doc.tokens[i]);
      }
    }
    if (doc.gold_rationale) {
      std::vector<int> positions;
      for (int pos : *doc.gold_rationale) {
        if (remap[static_cast<size_t>(pos)] >= 0) {
          positions.push_back(remap[static_cast<size_t>(pos)]);
        }
      }
      kept.gold_rationale = std::move(positions);
    }
    kept.empty = kept.tokens.empty();
    out.documents.push_back(std::move(kept));
  }
  return out;
}

namespace {

std::vector<std::vector<size_t>> IndicesByClass(const LabeledCorpus& corpus) {
  std::vector<std::vector<size_t>> by_class(
      static_cast<size_t>(corpus.num_classes()));
  for (size_t i = 0; i < corpus.size(); ++i) {
    by_class[static_cast<size_t>(corpus.documents[i].label)].push_back(i);
  }
  return by_class;
}

}  // namespace

LabeledCorpus Subset(const LabeledCorpus& corpus,
                     const std::vector<size_t>& indices) {
  LabeledCorpus out;
  out.class_names = corpus.class_names;
  out.provenance = corpus.provenance;
  out.documents.reserve(indices.size());
  for (size_t i : indices) out.documents.push_back(corpus.documents.at(i));
  return out;
}

std::pair<LabeledCorpus, LabeledCorpus> SplitTrainTest(
    const LabeledCorpus& corpus, double test_fraction, uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ContractError("test_fraction must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::vector<bool> is_test(corpus.size(), false);
  const auto by_class = IndicesByClass(corpus);
  for (size_t c = 0; c < by_class.size(); ++c) {
    auto members = by_class[c];
    const auto n = members.size();
    if (n < 2) {
      throw ContractError("stratification: class '" + corpus.class_names[c] +
                          "' has " + std::to_string(n) + " documents");
    }
    const auto n_test =
        static_cast<size_t>(std::llround(test_fraction * static_cast<double>(n)));
    if (n_test == 0 || n_test >= n) {
      throw ContractError("stratification: class '" + corpus.class_names[c] +
                          "' would leave an empty partition");
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (size_t i = 0; i < n_test; ++i) is_test[members[i]] = true;
  }
  std::vector<size_t> train, test;
  for (size_t i = 0; i < corpus.size(); ++i) {
    (is_test[i] ? test : train).push_back(i);
  }
  return {Subset(corpus, train), Subset(corpus, test)};
}

std::vector<int> StratifiedFolds(const LabeledCorpus& corpus, int folds,
                                 uint64_t seed) {
  if (folds < 2) throw ContractError("need at least 2 folds");
  std::mt19937_64 rng(seed);
  std::vector<int> assignment(corpus.size(), 0);
  int offset = 0;
  for (auto members : IndicesByClass(corpus)) {
    if (members.size() < static_cast<size_t>(folds)) {
      throw ContractError("stratification: a class has fewer documents than "
                          "folds");
    }
    std::shuffle(members.begin(), members.end(), rng);
    // Rotating the start keeps fold sizes balanced across classes.
    for (size_t i = 0; i < members.size(); ++i) {
      assignment[members[i]] = static_cast<int>((i + static_cast<size_t>(offset)) %
                                                static_cast<size_t>(folds));
    }
    offset = static_cast<int>((static_cast<size_t>(offset) + members.size()) %
                              static_cast<size_t>(folds));
  }
  return assignment;
}

std::vector<std::vector<std::string>> PlantedTokens(const SynthSpec& spec) {
  if (!spec.planted_tokens.empty()) return spec.planted_tokens;
  std::vector<std::vector<std::string>> planted(
      static_cast<size_t>(spec.num_classes));
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int j = 0; j < spec.planted_per_class; ++j) {
      planted[static_cast<size_t>(c)].push_back(
          "c" + std::to_string(c) + "p" + std::to_string(j));
    }
  }
  return planted;
}

namespace {

std::string NoiseToken(int i) {
  std::string digits = std::to_string(i);
  return "n" + std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') +
         digits;
}

}  // namespace

LabeledCorpus SynthCorpus(const SynthSpec& spec) {
  if (spec.num_classes < 2) throw ContractError("synth: need K >= 2");
  if (spec.docs_per_class < 1) throw ContractError("synth: docs_per_class < 1");
  if (spec.noise_length < 0) throw ContractError("synth: negative noise length");
  if (spec.noise_length > 0 && spec.vocab_size < 2) {
    throw ContractError("synth: noise vocabulary needs at least 2 tokens");
  }
  const auto planted = PlantedTokens(spec);
  if (planted.size() != static_cast<size_t>(spec.num_classes)) {
    throw ContractError("synth: planted token sets must match class count");
  }
  std::set<std::string> all_planted;
  for (const auto& tokens : planted) {
    if (tokens.empty()) throw ContractError("synth: class without planted token");
    for (const auto& t : tokens) {
      if (!all_planted.insert(t).second) {
        throw ContractError("synth: planted token '" + t +
                            "' appears in more than one class");
      }
    }
  }
  for (int i = 0; i < spec.vocab_size; ++i) {
    if (all_planted.count(NoiseToken(i))) {
      throw ContractError("synth: planted token collides with noise vocabulary");
    }
  }

  std::mt19937_64 rng(spec.seed);
  auto uniform = [&rng](size_t n) {
    return static_cast<size_t>(
        std::uniform_int_distribution<uint64_t>(0, n - 1)(rng));
  };

  LabeledCorpus corpus;
  corpus.provenance = "synthetic planted-token corpus, seed " +
                      std::to_string(spec.seed);
  for (int c = 0; c < spec.num_classes; ++c) {
    corpus.class_names.push_back(
        spec.num_classes == 4 ? std::string(kHateClassNames[static_cast<size_t>(c)])
                              : "class" + std::to_string(c));
  }

  std::vector<Document> docs;
  for (int c = 0; c < spec.num_classes; ++c) {
    const auto& mine = planted[static_cast<size_t>(c)];
    for (int d = 0; d < spec.docs_per_class; ++d) {
      const size_t n_planted = mine.size() >= 2 ? 1 + uniform(2) : 1;
      std::vector<std::string> chosen = mine;
      std::shuffle(chosen.begin(), chosen.end(), rng);
      chosen.resize(n_planted);

      TokenList tokens;
      for (int i = 0; i < spec.noise_length; ++i) {
        std::string t;
        do {
          t = NoiseToken(static_cast<int>(uniform(static_cast<size_t>(spec.vocab_size))));
        } while (!tokens.empty() && tokens.back() == t);
        tokens.push_back(std::move(t));
      }
      std::vector<int> positions;
      for (const auto& token : chosen) {
        const size_t at = uniform(tokens.size() + 1);
        tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), token);
        for (int& p : positions) {
          if (p >= static_cast<int>(at)) ++p;
        }
        positions.push_back(static_cast<int>(at));
      }
      std::sort(positions.begin(), positions.end());
      Document doc;
      doc.label = c;
      doc.tokens = std::move(tokens);
      doc.raw = JoinTokens(doc.tokens);
      doc.gold_rationale = std::move(positions);
      docs.push_back(std::move(doc));
    }
  }
  std::shuffle(docs.begin(), docs.end(), rng);
  for (size_t i = 0; i < docs.size(); ++i) docs[i].id = std::to_string(i);
  corpus.documents = std::move(docs);
  return corpus;
}

}  // namespace hatex

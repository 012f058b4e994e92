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

#ifndef HATEX_CORPUS_H_
#define HATEX_CORPUS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hatex/text.h"

namespace hatex {

// The four hate categories. Corpora may declare any K >= 2 classes; these
// are the names used when K == 4 and no schema overrides them.
enum class HateClass : int {
  kPersonal = 0,
  kPolitical = 1,
  kReligious = 2,
  kGeopolitical = 3,
};

inline constexpr std::array<std::string_view, 4> kHateClassNames = {
    "personal", "political", "religious", "geopolitical"};

struct Document {
  std::string id;
  std::string raw;
  TokenList tokens;
  int label = 0;
  // Sorted, unique token positions; absent when the source had no rationale.
  std::optional<std::vector<int>> gold_rationale;
  // Set when preprocessing or filtering left no tokens.
  bool empty = false;
};

struct LabeledCorpus {
  std::vector<Document> documents;
  std::vector<std::string> class_names;
  std::string provenance;

  int num_classes() const { return static_cast<int>(class_names.size()); }
  size_t size() const { return documents.size(); }
  // Index of `name` in class_names, or -1.
  int class_index(std::string_view name) const;
  // Throws ContractError on duplicate ids, bad labels or bad rationales.
  void Validate() const;
};

struct CorpusSchema {
  std::string id_column = "id";
  std::string text_column = "text";
  std::string label_column = "label";
  std::string rationale_column = "rationale";
  // Fixed class list. When empty, classes are the sorted distinct labels.
  std::vector<std::string> class_names;
  PreprocessConfig preprocess;
};

LabeledCorpus LoadCorpus(const std::string& path, const CorpusSchema& schema);

// Writes id,text,label[,rationale] with text as space-joined tokens.
void WriteCorpusCsv(const LabeledCorpus& corpus, const std::string& path);

// Removes token types whose document frequency is below `min_df` and remaps
// gold rationale positions onto the surviving tokens.
LabeledCorpus FilterInfrequent(const LabeledCorpus& corpus, int min_df);

// Stratified split. Each class contributes round(test_fraction * n_c)
// documents to the test side; both sides keep corpus order.
std::pair<LabeledCorpus, LabeledCorpus> SplitTrainTest(
    const LabeledCorpus& corpus, double test_fraction, uint64_t seed);

// Stratified assignment of documents to `folds` folds; returns fold index per
// document.
std::vector<int> StratifiedFolds(const LabeledCorpus& corpus, int folds,
                                 uint64_t seed);

// Subset of `corpus` with the given document indices, in that order.
LabeledCorpus Subset(const LabeledCorpus& corpus,
                     const std::vector<size_t>& indices);

struct SynthSpec {
  int num_classes = 4;
  int docs_per_class = 50;
  int planted_per_class = 2;
  int vocab_size = 200;    // noise vocabulary size
  int noise_length = 20;   // noise tokens per document
  uint64_t seed = 0;
  // Optional explicit planted tokens per class; generated when empty.
  std::vector<std::vector<std::string>> planted_tokens;
};

// Planted-token corpus: every document carries one or two indicator tokens
// of its class inside class-independent noise. gold_rationale marks the
// indicator positions.
LabeledCorpus SynthCorpus(const SynthSpec& spec);

// Planted tokens SynthCorpus uses for `spec`, per class.
std::vector<std::vector<std::string>> PlantedTokens(const SynthSpec& spec);

}  // namespace hatex

#endif  // HATEX_CORPUS_H_

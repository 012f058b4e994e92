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

#ifndef HATEX_TEXT_H_
#define HATEX_TEXT_H_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hatex/common.h"

namespace hatex {

using TokenList = std::vector<std::string>;

// Reserved token used to pad sequences to a fixed length.
inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";

struct PreprocessConfig {
  bool normalize_hashtags = true;
  // Emojis, emoticons, @mentions and consecutive duplicate tokens.
  bool strip_emojis_mentions_duplicates = true;
  bool lowercase = true;
  // Applied to every token after all other rules. Empty means identity.
  std::function<std::string(const std::string&)> stemmer;
  int min_df = 5;
  int max_len = 100;

  void Validate() const;
};

// Splits on whitespace and Unicode punctuation/symbols, then applies the
// cleaning rules of `config`. Never fails; empty output is allowed.
TokenList Preprocess(std::string_view raw, const PreprocessConfig& config);

// Joins tokens with single spaces.
std::string JoinTokens(const TokenList& tokens);

// True for ASCII emoticons such as ":)", ";-(", ":D", "<3".
bool IsEmoticon(std::string_view chunk);

struct FittedSequence {
  TokenList tokens;
  std::vector<int> mask;  // 1 for real tokens, 0 for padding
};

// Truncates at the tail or pads with kPadToken so the result has exactly
// `max_len` entries.
FittedSequence FitLength(const TokenList& tokens, int max_len);

}  // namespace hatex

#endif  // HATEX_TEXT_H_

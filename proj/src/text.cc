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

#include "hatex/text.h"

#include <cctype>
#include <regex>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "hatex/common.h"

namespace hatex {
namespace {

enum class CharClass { kWord, kSeparator, kEmoji, kIgnorable };

bool IsEmojiCodePoint(UChar32 c) {
  return u_hasBinaryProperty(c, UCHAR_EXTENDED_PICTOGRAPHIC) ||
         u_hasBinaryProperty(c, UCHAR_REGIONAL_INDICATOR) ||
         u_hasBinaryProperty(c, UCHAR_EMOJI_MODIFIER) || c == 0x20E3;
}

CharClass Classify(UChar32 c) {
  if (c < 0) return CharClass::kIgnorable;  // invalid byte sequence
  if (u_isUWhiteSpace(c)) return CharClass::kSeparator;
  // Emoji sits before the punctuation test: most emoji are category So.
  if (IsEmojiCodePoint(c)) return CharClass::kEmoji;
  if (u_hasBinaryProperty(c, UCHAR_VARIATION_SELECTOR) || c == 0x200D) {
    return CharClass::kIgnorable;
  }
  if (u_ispunct(c)) return CharClass::kSeparator;
  const int8_t type = u_charType(c);
  if (type == U_MATH_SYMBOL || type == U_CURRENCY_SYMBOL ||
      type == U_MODIFIER_SYMBOL || type == U_OTHER_SYMBOL) {
    return CharClass::kSeparator;
  }
  if (type == U_CONTROL_CHAR || type == U_FORMAT_CHAR) {
    // ZWNJ is meaningful inside Bengali and Persian words.
    return c == 0x200C ? CharClass::kWord : CharClass::kIgnorable;
  }
  return CharClass::kWord;
}

void AppendUtf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<size_t>(len));
}

std::vector<std::string_view> SplitWhitespace(std::string_view raw) {
  std::vector<std::string_view> chunks;
  int32_t i = 0;
  const auto n = static_cast<int32_t>(raw.size());
  int32_t start = -1;
  while (i < n) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(raw.data(), i, n, c);
    const bool space = c >= 0 && u_isUWhiteSpace(c);
    if (space) {
      if (start >= 0) chunks.push_back(raw.substr(start, at - start));
      start = -1;
    } else if (start < 0) {
      start = at;
    }
  }
  if (start >= 0) chunks.push_back(raw.substr(start));
  return chunks;
}

// Splits one whitespace-free chunk into word tokens.
void SplitChunk(std::string_view chunk, const PreprocessConfig& config,
                TokenList& out) {
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  int32_t i = 0;
  const auto n = static_cast<int32_t>(chunk.size());
  while (i < n) {
    UChar32 c;
    U8_NEXT(chunk.data(), i, n, c);
    switch (Classify(c)) {
      case CharClass::kWord:
        AppendUtf8(current, config.lowercase ? u_tolower(c) : c);
        break;
      case CharClass::kSeparator:
        flush();
        break;
      case CharClass::kEmoji:
        flush();
        if (!config.strip_emojis_mentions_duplicates) {
          AppendUtf8(current, c);
          flush();
        }
        break;
      case CharClass::kIgnorable:
        break;
    }
  }
  flush();
}

}  // namespace

void PreprocessConfig::Validate() const {
  if (min_df < 1) throw ContractError("min_df must be >= 1");
  if (max_len < 1) throw ContractError("max_len must be >= 1");
}

bool IsEmoticon(std::string_view chunk) {
  static const std::regex kEmoticon(
      R"(^(?:[:;=8xX][-o^']?[)(\]\[dDpPoO/\\|*3}{@$]+|[)(\]\[/\\|][-o^']?[:;=]|<3+|</3|\^_*\^|-_+-|o_O|O_o)$)");
  if (chunk.size() < 2 || chunk.size() > 8) return false;
  // A chunk made only of letters (e.g. "xo", "8") is a word, not a face.
  bool has_mark = false;
  for (char ch : chunk) {
    if (static_cast<unsigned char>(ch) >= 0x80) return false;
    if (!std::isalnum(static_cast<unsigned char>(ch))) has_mark = true;
  }
  return has_mark && std::regex_match(chunk.begin(), chunk.end(), kEmoticon);
}

TokenList Preprocess(std::string_view raw, const PreprocessConfig& config) {
  TokenList tokens;
  for (std::string_view chunk : SplitWhitespace(raw)) {
    if (config.strip_emojis_mentions_duplicates) {
      if (chunk.size() > 1 && chunk.front() == '@') continue;
      if (IsEmoticon(chunk)) continue;
    }
    if (!config.normalize_hashtags && chunk.size() > 1 &&
        chunk.front() == '#') {
      // Kept verbatim as a single hashtag token.
      TokenList inner;
      SplitChunk(chunk.substr(1), config, inner);
      std::string tag = "#";
      for (const auto& part : inner) tag += part;
      if (tag.size() > 1) tokens.push_back(std::move(tag));
      continue;
    }
    SplitChunk(chunk, config, tokens);
  }
  if (config.strip_emojis_mentions_duplicates && tokens.size() > 1) {
    TokenList collapsed;
    collapsed.reserve(tokens.size());
    for (auto& token : tokens) {
      if (collapsed.empty() || collapsed.back() != token) {
        collapsed.push_back(std::move(token));
      }
    }
    tokens = std::move(collapsed);
  }
  if (config.stemmer) {
    for (auto& token : tokens) token = config.stemmer(token);
  }
  return tokens;
}

std::string JoinTokens(const TokenList& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

FittedSequence FitLength(const TokenList& tokens, int max_len) {
  if (max_len < 1) throw ContractError("max_len must be >= 1");
  const auto len = static_cast<size_t>(max_len);
  FittedSequence out;
  out.tokens.reserve(len);
  out.mask.reserve(len);
  for (size_t i = 0; i < len; ++i) {
    if (i < tokens.size()) {
      out.tokens.push_back(tokens[i]);
      out.mask.push_back(1);
    } else {
      out.tokens.emplace_back(kPadToken);
      out.mask.push_back(0);
    }
  }
  return out;
}

}  // namespace hatex

// src/data/lexicon.cc

// Copyright 2026  alignts authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "alignts/data/lexicon.hpp"

#include <unordered_map>

#include "alignts/common/error.hpp"

namespace alignts::data {

const std::vector<std::string>& phoneme_inventory() {
  static const std::vector<std::string> inventory = {
      "AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D",  "DH", "EH", "ER", "EY",
      "F",  "G",  "HH", "IH", "IY", "JH", "K",  "L",  "M",  "N",  "NG", "OW", "OY",
      "P",  "R",  "S",  "SH", "T",  "TH", "UH", "UW", "V",  "W",  "Y",  "Z",  "ZH"};
  return inventory;
}

int phoneme_id(const std::string& symbol) {
  static const std::unordered_map<std::string, int> index = [] {
    std::unordered_map<std::string, int> m;
    const auto& inv = phoneme_inventory();
    for (size_t i = 0; i < inv.size(); ++i) m[inv[i]] = static_cast<int>(i);
    return m;
  }();
  auto it = index.find(symbol);
  return it == index.end() ? -1 : it->second;
}

const std::string& phoneme_symbol(int id) {
  const auto& inv = phoneme_inventory();
  ALIGNTS_CHECK(id >= 0 && static_cast<size_t>(id) < inv.size(), "phoneme id ", id,
                " outside [0, ", inv.size(), ")");
  return inv[static_cast<size_t>(id)];
}

std::vector<std::string> to_symbols(const ctc::PhonemeSeq& seq) {
  std::vector<std::string> out;
  out.reserve(seq.size());
  for (int id : seq.ids) out.push_back(phoneme_symbol(id));
  return out;
}

ctc::PhonemeSeq to_ids(const std::vector<std::string>& symbols) {
  ctc::PhonemeSeq out;
  out.ids.reserve(symbols.size());
  for (const std::string& s : symbols) {
    int id = phoneme_id(s);
    ALIGNTS_CHECK(id >= 0, "unknown phoneme symbol '", s, "'");
    out.ids.push_back(id);
  }
  return out;
}

const ctc::PhonemeSeq* Lexicon::find(const std::string& word) const {
  for (const auto& [w, seq] : words) {
    if (w == word) return &seq;
  }
  return nullptr;
}

void Lexicon::validate() const {
  ALIGNTS_CHECK(!words.empty(), "lexicon: no words");
  for (const auto& [w, seq] : words) {
    ALIGNTS_CHECK(!seq.empty(), "lexicon: word '", w, "' has no phonemes");
    for (int id : seq.ids) {
      ALIGNTS_CHECK(id >= 0 && id < kPhonemeCount, "lexicon: word '", w, "' has phoneme id ", id,
                    " outside [0, ", kPhonemeCount, ")");
    }
  }
}

Lexicon builtin_lexicon() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
      {"apple", {"AE", "P", "AH", "L"}},
      {"banana", {"B", "AH", "N", "AE", "N", "AH"}},
      {"bird", {"B", "ER", "D"}},
      {"blue", {"B", "L", "UW"}},
      {"book", {"B", "UH", "K"}},
      {"boy", {"B", "OY"}},
      {"cat", {"K", "AE", "T"}},
      {"chair", {"CH", "EH", "R"}},
      {"cheese", {"CH", "IY", "Z"}},
      {"cow", {"K", "AW"}},
      {"dog", {"D", "AO", "G"}},
      {"ear", {"IY", "R"}},
      {"eye", {"AY"}},
      {"father", {"F", "AA", "DH", "ER"}},
      {"fish", {"F", "IH", "SH"}},
      {"five", {"F", "AY", "V"}},
      {"flower", {"F", "L", "AW", "ER"}},
      {"foot", {"F", "UH", "T"}},
      {"girl", {"G", "ER", "L"}},
      {"green", {"G", "R", "IY", "N"}},
      {"hand", {"HH", "AE", "N", "D"}},
      {"happy", {"HH", "AE", "P", "IY"}},
      {"head", {"HH", "EH", "D"}},
      {"horse", {"HH", "AO", "R", "S"}},
      {"house", {"HH", "AW", "S"}},
      {"jump", {"JH", "AH", "M", "P"}},
      {"little", {"L", "IH", "T", "AH", "L"}},
      {"measure", {"M", "EH", "ZH", "ER"}},
      {"moon", {"M", "UW", "N"}},
      {"mother", {"M", "AH", "DH", "ER"}},
      {"mouse", {"M", "AW", "S"}},
      {"nine", {"N", "AY", "N"}},
      {"nose", {"N", "OW", "Z"}},
      {"orange", {"AO", "R", "AH", "N", "JH"}},
      {"paper", {"P", "EY", "P", "ER"}},
      {"pencil", {"P", "EH", "N", "S", "AH", "L"}},
      {"purple", {"P", "ER", "P", "AH", "L"}},
      {"rain", {"R", "EY", "N"}},
      {"red", {"R", "EH", "D"}},
      {"school", {"S", "K", "UW", "L"}},
      {"seven", {"S", "EH", "V", "AH", "N"}},
      {"sheep", {"SH", "IY", "P"}},
      {"snow", {"S", "N", "OW"}},
      {"sun", {"S", "AH", "N"}},
      {"table", {"T", "EY", "B", "AH", "L"}},
      {"teacher", {"T", "IY", "CH", "ER"}},
      {"that", {"DH", "AE", "T"}},
      {"thing", {"TH", "IH", "NG"}},
      {"think", {"TH", "IH", "NG", "K"}},
      {"this", {"DH", "IH", "S"}},
      {"thrower", {"TH", "R", "OW", "ER"}},
      {"tree", {"T", "R", "IY"}},
      {"voice", {"V", "OY", "S"}},
      {"water", {"W", "AO", "T", "ER"}},
      {"window", {"W", "IH", "N", "D", "OW"}},
      {"yellow", {"Y", "EH", "L", "OW"}},
      {"zebra", {"Z", "IY", "B", "R", "AH"}},
  };
  Lexicon lex;
  lex.words.reserve(table.size());
  for (const auto& [word, symbols] : table) {
    lex.words.emplace_back(word, to_ids(symbols));
  }
  lex.validate();
  return lex;
}

}  // namespace alignts::data

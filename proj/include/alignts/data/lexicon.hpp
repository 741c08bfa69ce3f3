// include/alignts/data/lexicon.hpp

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

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "alignts/ctc/ctc.hpp"

namespace alignts::data {

inline constexpr int kPhonemeCount = 39;

// The 39-symbol stress-free ARPAbet set, in id order.
const std::vector<std::string>& phoneme_inventory();

// -1 if the symbol is not in the inventory.
int phoneme_id(const std::string& symbol);
const std::string& phoneme_symbol(int id);

std::vector<std::string> to_symbols(const ctc::PhonemeSeq& seq);
ctc::PhonemeSeq to_ids(const std::vector<std::string>& symbols);

// Fixed word -> pronunciation table. Every phoneme id is < 39 and every word
// has at least one phoneme.
struct Lexicon {
  std::vector<std::pair<std::string, ctc::PhonemeSeq>> words;

  const ctc::PhonemeSeq* find(const std::string& word) const;
  size_t size() const { return words.size(); }
  void validate() const;
};

// Built-in word list covering all 39 phonemes.
Lexicon builtin_lexicon();

}  // namespace alignts::data

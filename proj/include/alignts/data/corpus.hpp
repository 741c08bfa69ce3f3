// include/alignts/data/corpus.hpp

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

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "alignts/ctc/ctc.hpp"
#include "alignts/data/lexicon.hpp"
#include "alignts/model/features.hpp"
#include "alignts/numerics/rng.hpp"
#include "alignts/numerics/tensor.hpp"

namespace alignts::data {

// Quality labels follow the scripted-speech recording scheme:
//   1  only the target word is said
//   2  target word may be present, plus extra noise (and possible edits)
//   3  the target word is not present (a different word is spoken)
//   4  target word is present, plus an air-puff-like high-energy burst
// Label 1 is "correct" pronunciation; 2-4 are "incorrect".
inline constexpr int kNumQualityLabels = 4;

struct EditRates {
  double substitute = 0.12;
  double del = 0.05;
  double insert = 0.05;
};

struct SplitCounts {
  int train = 400;
  int dev = 50;
  int test = 50;
};

struct CorpusConfig {
  Lexicon lexicon;                 // defaults to the builtin table
  bool lexicon_is_builtin = true;  // serialization detail
  SplitCounts counts;
  std::array<double, 4> label_distribution = {0.80, 0.08, 0.06, 0.06};
  EditRates mispronunciation_edit_rates;
  std::pair<int, int> phoneme_duration_range = {2, 4};  // stacked frames per phoneme
  std::pair<int, int> silence_pad_range = {2, 5};       // stacked frames per side
  double noise_std = 0.3;
  uint64_t seed = 1;
  int base_feature_dim = 40;  // stacked dimension is 3x this
  int speakers_per_split = 8;
  double prototype_jitter_std = 0.02;

  CorpusConfig() : lexicon(builtin_lexicon()) {}
  void validate() const;
};

struct Utterance {
  std::string id;
  std::string word;
  std::string split;
  std::string speaker;
  int quality_label = 1;
  ctc::PhonemeSeq canonical;  // the prompt's phonemes
  ctc::PhonemeSeq spoken;     // what was actually emitted
  numerics::Tensor base_frames;     // [3T x d], kept for stack-order augmentation
  model::FeatureSequence features;  // identity-ordering stack of base_frames
  // Per spoken phoneme: [onset, offset] in stacked frames, offsets inclusive.
  std::vector<std::pair<int, int>> boundaries;
  std::vector<uint8_t> silence_truth;  // 1 where the generator emitted silence

  int64_t num_frames() const { return features.num_frames(); }
};

struct Corpus {
  CorpusConfig config;
  std::vector<Utterance> train;  // quality label 1 only
  std::vector<Utterance> dev;
  std::vector<Utterance> test;

  const std::vector<Utterance>& split(const std::string& name) const;
};

// Per-phoneme prototype vectors: fixed mean feature value (so energies are
// flat across phonemes) with a lower-bounded pairwise distance, drawn once
// from the corpus seed.
struct PrototypeSet {
  std::vector<numerics::Tensor> prototypes;  // one [d] vector per phoneme
  double speech_level = 1.0;
  double silence_level = 0.1;

  static PrototypeSet build(const CorpusConfig& config);
};

struct EditEvent {
  enum class Kind { kSubstitute, kDelete, kInsert };
  Kind kind;
  int position;  // position in the original sequence (gap index for inserts)
  int from = -1;
  int to = -1;
};

// Independent per-position substitute/delete and per-gap insert events.
// Errors on rates outside [0, 1].
std::pair<ctc::PhonemeSeq, std::vector<EditEvent>> inject_mispronunciation(
    const ctc::PhonemeSeq& phonemes, numerics::Rng& rng, const EditRates& rates);

// One utterance, deterministic given (rng state, word, label, config).
// `prototypes` may be null (built on the fly); `speaker_jitter` may be null
// for the no-jitter case.
Utterance synthesize_utterance(numerics::Rng& rng, const std::string& word, int quality_label,
                               const CorpusConfig& config,
                               const PrototypeSet* prototypes = nullptr,
                               const std::string& speaker = "");

// Seeded corpus: the training split is label-1 only; dev/test follow the
// label distribution. Utterance ids are disjoint across splits.
Corpus generate_corpus(const CorpusConfig& config);

// Serialization: manifest.jsonl + corpus.json + feats/<id>.atsb, raw
// little-endian doubles for features. Round-trips exactly.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);
Corpus load_corpus(const std::filesystem::path& dir);

nlohmann::json corpus_config_to_json(const CorpusConfig& config);
// Strict: unknown keys are rejected.
CorpusConfig corpus_config_from_json(const nlohmann::json& j);

}  // namespace alignts::data

// tests/test_data.cc

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

#include <filesystem>
#include <fstream>
#include <set>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "alignts/data/corpus.hpp"
#include "alignts/losses/losses.hpp"
#include "alignts/metrics/metrics.hpp"

using namespace alignts;
using data::CorpusConfig;
using data::Utterance;
using numerics::Rng;

namespace {

CorpusConfig small_config(uint64_t seed, double noise = 0.3) {
  CorpusConfig c;
  c.counts = {20, 10, 10};
  c.base_feature_dim = 8;
  c.noise_std = noise;
  c.seed = seed;
  return c;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("alignts_data_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("phoneme inventory has 39 unique symbols") {
  const auto& inv = data::phoneme_inventory();
  CHECK(inv.size() == 39);
  std::set<std::string> unique(inv.begin(), inv.end());
  CHECK(unique.size() == 39);
  CHECK(data::phoneme_id("TH") >= 0);
  CHECK(data::phoneme_id("ZZ") == -1);
}

TEST_CASE("builtin lexicon covers the whole inventory") {
  data::Lexicon lex = data::builtin_lexicon();
  std::set<int> used;
  for (const auto& [word, seq] : lex.words) {
    for (int id : seq.ids) used.insert(id);
  }
  CHECK(used.size() == 39);
  const ctc::PhonemeSeq* thrower = lex.find("thrower");
  REQUIRE(thrower != nullptr);
  CHECK(data::to_symbols(*thrower) == std::vector<std::string>{"TH", "R", "OW", "ER"});
}

TEST_CASE("inject_mispronunciation: identity at zero rates") {
  Rng rng(1);
  ctc::PhonemeSeq seq({3, 5, 7});
  auto [edited, edits] = data::inject_mispronunciation(seq, rng, {0.0, 0.0, 0.0});
  CHECK(edited == seq);
  CHECK(edits.empty());
}

TEST_CASE("inject_mispronunciation: substitute rate 1 replaces every position") {
  Rng rng(2);
  ctc::PhonemeSeq seq({3, 5, 7, 9});
  auto [edited, edits] = data::inject_mispronunciation(seq, rng, {1.0, 0.0, 0.0});
  REQUIRE(edited.size() == seq.size());
  for (size_t i = 0; i < seq.size(); ++i) CHECK(edited.ids[i] != seq.ids[i]);
  CHECK(edits.size() == seq.size());
  CHECK(metrics::edit_distance(edited, seq).distance == static_cast<int>(seq.size()));
}

TEST_CASE("inject_mispronunciation: edit distance bounded by the edit count") {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    ctc::PhonemeSeq seq;
    const int64_t len = rng.uniform_int(1, 8);
    for (int64_t i = 0; i < len; ++i) {
      seq.ids.push_back(static_cast<int>(rng.uniform_int(0, 38)));
    }
    data::EditRates rates{rng.uniform(), rng.uniform() * 0.5, rng.uniform() * 0.5};
    auto [edited, edits] = data::inject_mispronunciation(seq, rng, rates);
    CHECK(metrics::edit_distance(edited, seq).distance <= static_cast<int>(edits.size()));
  }
}

TEST_CASE("inject_mispronunciation: rejects rates outside [0,1]") {
  Rng rng(4);
  ctc::PhonemeSeq seq({1});
  CHECK_THROWS_AS(data::inject_mispronunciation(seq, rng, {1.5, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(data::inject_mispronunciation(seq, rng, {0.0, -0.1, 0.0}), Error);
}

TEST_CASE("synthesize_utterance: noiseless label 1 is exact") {
  CorpusConfig cfg = small_config(10, /*noise=*/0.0);
  cfg.prototype_jitter_std = 0.0;
  data::PrototypeSet protos = data::PrototypeSet::build(cfg);
  Rng rng(numerics::derive_seed(cfg.seed, "exactness"));
  Utterance utt = data::synthesize_utterance(rng, "cat", 1, cfg, &protos);

  CHECK(utt.spoken == utt.canonical);
  // Features are exactly piecewise-constant prototypes.
  int64_t frame = 0;
  for (size_t p = 0; p < utt.boundaries.size(); ++p) {
    for (int t = utt.boundaries[p].first; t <= utt.boundaries[p].second; ++t) {
      for (int sub = 0; sub < 3; ++sub) {
        for (int j = 0; j < cfg.base_feature_dim; ++j) {
          CHECK(utt.base_frames.at(3 * t + sub, j) ==
                protos.prototypes[static_cast<size_t>(utt.spoken.ids[p])]
                    .values[static_cast<size_t>(j)]);
        }
      }
    }
  }
  (void)frame;
  // The silence mask derived from energies matches the generator truth
  // exactly in the noiseless case.
  losses::SilenceMask mask = losses::silence_mask(utt.features);
  REQUIRE(mask.size() == utt.silence_truth.size());
  for (size_t t = 0; t < mask.size(); ++t) {
    CHECK(mask.is_silence[t] == (utt.silence_truth[t] != 0));
  }
  // Boundaries tile the non-silence region exactly.
  std::vector<bool> covered(static_cast<size_t>(utt.num_frames()), false);
  for (const auto& [on, off] : utt.boundaries) {
    for (int t = on; t <= off; ++t) covered[static_cast<size_t>(t)] = true;
  }
  for (size_t t = 0; t < covered.size(); ++t) {
    CHECK(covered[t] == (utt.silence_truth[t] == 0));
  }
}

TEST_CASE("synthesize_utterance: label 3 forces a different spoken word") {
  CorpusConfig cfg = small_config(11);
  data::PrototypeSet protos = data::PrototypeSet::build(cfg);
  for (uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    Utterance utt = data::synthesize_utterance(rng, "water", 3, cfg, &protos);
    CHECK_FALSE(utt.spoken == utt.canonical);
    CHECK(metrics::edit_distance(utt.spoken, utt.canonical).distance >= 1);
  }
}

TEST_CASE("synthesize_utterance: unknown word errors") {
  CorpusConfig cfg = small_config(12);
  Rng rng(1);
  CHECK_THROWS_WITH_AS(data::synthesize_utterance(rng, "xylophone", 1, cfg),
                       doctest::Contains("xylophone"), Error);
}

TEST_CASE("synthesize_utterance: speech frames carry more energy than silence") {
  CorpusConfig cfg = small_config(13);  // default noise
  data::PrototypeSet protos = data::PrototypeSet::build(cfg);
  int utts_checked = 0;
  for (uint64_t s = 0; s < 200; ++s) {
    Rng rng(numerics::derive_seed(cfg.seed, "energy", s));
    const auto& word = cfg.lexicon.words[s % cfg.lexicon.size()].first;
    Utterance utt = data::synthesize_utterance(rng, word, 1, cfg, &protos);
    double speech = 0.0, silence = 0.0;
    int n_speech = 0, n_silence = 0;
    for (int64_t t = 0; t < utt.num_frames(); ++t) {
      if (utt.silence_truth[static_cast<size_t>(t)]) {
        silence += utt.features.energies[static_cast<size_t>(t)];
        ++n_silence;
      } else {
        speech += utt.features.energies[static_cast<size_t>(t)];
        ++n_speech;
      }
    }
    REQUIRE(n_speech > 0);
    REQUIRE(n_silence > 0);
    CHECK(speech / n_speech > silence / n_silence);
    ++utts_checked;
  }
  CHECK(utts_checked == 200);
}

TEST_CASE("generate_corpus: the training split is label-1 only") {
  data::Corpus corpus = data::generate_corpus(small_config(14));
  for (const Utterance& u : corpus.train) CHECK(u.quality_label == 1);
}

TEST_CASE("generate_corpus: same seed gives bit-identical corpora") {
  CorpusConfig cfg = small_config(15);
  data::Corpus a = data::generate_corpus(cfg);
  data::Corpus b = data::generate_corpus(cfg);
  REQUIRE(a.dev.size() == b.dev.size());
  for (size_t i = 0; i < a.dev.size(); ++i) {
    CHECK(a.dev[i].id == b.dev[i].id);
    CHECK(a.dev[i].word == b.dev[i].word);
    CHECK(a.dev[i].quality_label == b.dev[i].quality_label);
    CHECK(a.dev[i].base_frames.values == b.dev[i].base_frames.values);  // bit-exact
  }
}

TEST_CASE("generate_corpus: ids are disjoint across splits and labels follow the distribution") {
  CorpusConfig cfg = small_config(16);
  cfg.counts = {100, 5000, 100};
  data::Corpus corpus = data::generate_corpus(cfg);
  std::set<std::string> ids;
  for (const auto* split : {&corpus.train, &corpus.dev, &corpus.test}) {
    for (const Utterance& u : *split) {
      CHECK(ids.insert(u.id).second);  // no duplicates anywhere
    }
  }
  int label1 = 0;
  for (const Utterance& u : corpus.dev) label1 += u.quality_label == 1 ? 1 : 0;
  const double frac = static_cast<double>(label1) / static_cast<double>(corpus.dev.size());
  CHECK(frac > 0.78);  // 0.80 +/- 0.02 at n=5000
  CHECK(frac < 0.82);
}

TEST_CASE("silence truth vs mask agreement thresholds") {
  // Noiseless: >= 95% agreement (exact, in fact). Default noise: >= 85%.
  for (double noise : {0.0, 0.3}) {
    CorpusConfig cfg = small_config(17, noise);
    cfg.counts = {60, 30, 30};
    data::Corpus corpus = data::generate_corpus(cfg);
    int64_t agree = 0, total = 0;
    for (const auto* split : {&corpus.train, &corpus.dev, &corpus.test}) {
      for (const Utterance& u : *split) {
        losses::SilenceMask mask = losses::silence_mask(u.features);
        for (size_t t = 0; t < mask.size(); ++t) {
          agree += mask.is_silence[t] == (u.silence_truth[t] != 0) ? 1 : 0;
          ++total;
        }
      }
    }
    const double rate = static_cast<double>(agree) / static_cast<double>(total);
    CHECK(rate >= (noise == 0.0 ? 0.95 : 0.85));
  }
}

TEST_CASE("corpus serialization round-trips bit-exactly") {
  CorpusConfig cfg = small_config(18);
  cfg.counts = {6, 4, 4};
  data::Corpus corpus = data::generate_corpus(cfg);
  auto dir = temp_dir("roundtrip");
  data::save_corpus(corpus, dir);
  data::Corpus loaded = data::load_corpus(dir);

  REQUIRE(loaded.train.size() == corpus.train.size());
  REQUIRE(loaded.dev.size() == corpus.dev.size());
  REQUIRE(loaded.test.size() == corpus.test.size());
  for (size_t i = 0; i < corpus.test.size(); ++i) {
    const Utterance& a = corpus.test[i];
    const Utterance& b = loaded.test[i];
    CHECK(a.id == b.id);
    CHECK(a.word == b.word);
    CHECK(a.speaker == b.speaker);
    CHECK(a.quality_label == b.quality_label);
    CHECK(a.canonical == b.canonical);
    CHECK(a.spoken == b.spoken);
    CHECK(a.boundaries == b.boundaries);
    CHECK(a.silence_truth == b.silence_truth);
    CHECK(a.base_frames.values == b.base_frames.values);
    CHECK(a.features.frames.values == b.features.frames.values);
    CHECK(a.features.energies == b.features.energies);
  }

  // Saving the loaded corpus reproduces the manifest byte-for-byte.
  auto dir2 = temp_dir("roundtrip2");
  data::save_corpus(loaded, dir2);
  std::ifstream m1(dir / "manifest.jsonl"), m2(dir2 / "manifest.jsonl");
  std::stringstream s1, s2;
  s1 << m1.rdbuf();
  s2 << m2.rdbuf();
  CHECK(s1.str() == s2.str());
}

TEST_CASE("corpus config json round-trip and unknown-key rejection") {
  CorpusConfig cfg = small_config(19);
  nlohmann::json j = data::corpus_config_to_json(cfg);
  CorpusConfig back = data::corpus_config_from_json(j);
  CHECK(back.seed == cfg.seed);
  CHECK(back.counts.train == cfg.counts.train);
  CHECK(back.noise_std == cfg.noise_std);
  CHECK(back.base_feature_dim == cfg.base_feature_dim);

  j["unexpected"] = 1;
  CHECK_THROWS_WITH_AS(data::corpus_config_from_json(j), doctest::Contains("unexpected"), Error);

  nlohmann::json bad = data::corpus_config_to_json(cfg);
  bad["label_distribution"] = {0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS(data::corpus_config_from_json(bad), Error);
}

TEST_CASE("prototypes: fixed mean and bounded-below separation") {
  CorpusConfig cfg = small_config(20);
  data::PrototypeSet set = data::PrototypeSet::build(cfg);
  REQUIRE(set.prototypes.size() == 39);
  for (const auto& proto : set.prototypes) {
    double mean = 0.0;
    for (double v : proto.values) mean += v;
    mean /= static_cast<double>(proto.size());
    CHECK(mean == doctest::Approx(set.speech_level).epsilon(1e-12));
  }
  const double min_dist = 0.28 * std::sqrt(static_cast<double>(cfg.base_feature_dim));
  for (size_t a = 0; a < set.prototypes.size(); ++a) {
    for (size_t b = a + 1; b < set.prototypes.size(); ++b) {
      double d2 = 0.0;
      for (int j = 0; j < cfg.base_feature_dim; ++j) {
        const double diff = set.prototypes[a].values[static_cast<size_t>(j)] -
                            set.prototypes[b].values[static_cast<size_t>(j)];
        d2 += diff * diff;
      }
      CHECK(std::sqrt(d2) >= min_dist);
    }
  }
}

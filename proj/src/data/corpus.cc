// src/data/corpus.cc

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

#include "alignts/data/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "alignts/io/tensor_io.hpp"

namespace alignts::data {

using numerics::Rng;
using numerics::Tensor;

void CorpusConfig::validate() const {
  lexicon.validate();
  double sum = 0.0;
  for (double p : label_distribution) {
    ALIGNTS_CHECK(p >= 0.0, "corpus config: negative label probability");
    sum += p;
  }
  ALIGNTS_CHECK(std::abs(sum - 1.0) < 1e-9, "corpus config: label_distribution sums to ", sum);
  ALIGNTS_CHECK(counts.train >= 0 && counts.dev >= 0 && counts.test >= 0,
                "corpus config: negative split count");
  const auto& r = mispronunciation_edit_rates;
  ALIGNTS_CHECK(r.substitute >= 0.0 && r.substitute <= 1.0 && r.del >= 0.0 && r.del <= 1.0 &&
                    r.insert >= 0.0 && r.insert <= 1.0,
                "corpus config: edit rates must lie in [0, 1]");
  ALIGNTS_CHECK(phoneme_duration_range.first >= 1 &&
                    phoneme_duration_range.second >= phoneme_duration_range.first,
                "corpus config: bad phoneme_duration_range");
  ALIGNTS_CHECK(silence_pad_range.first >= 1 &&
                    silence_pad_range.second >= silence_pad_range.first,
                "corpus config: bad silence_pad_range");
  ALIGNTS_CHECK(noise_std >= 0.0, "corpus config: negative noise_std");
  ALIGNTS_CHECK(base_feature_dim >= 1, "corpus config: base_feature_dim must be >= 1");
  ALIGNTS_CHECK(speakers_per_split >= 1, "corpus config: speakers_per_split must be >= 1");
  ALIGNTS_CHECK(prototype_jitter_std >= 0.0, "corpus config: negative prototype_jitter_std");
}

const std::vector<Utterance>& Corpus::split(const std::string& name) const {
  if (name == "train") return train;
  if (name == "dev") return dev;
  if (name == "test") return test;
  raise("unknown split '", name, "' (expected train | dev | test)");
}

PrototypeSet PrototypeSet::build(const CorpusConfig& config) {
  PrototypeSet set;
  const int d = config.base_feature_dim;
  // Pairwise separation scales with sqrt(d); redraw on a violation so nearby
  // phonemes stay distinguishable even at small d.
  const double min_dist = 0.28 * std::sqrt(static_cast<double>(d));
  Rng rng(numerics::derive_seed(config.seed, "prototypes"));
  set.prototypes.reserve(kPhonemeCount);
  for (int p = 0; p < kPhonemeCount; ++p) {
    for (int attempt = 0;; ++attempt) {
      ALIGNTS_CHECK(attempt < 1000, "prototype generation failed to separate phoneme ", p);
      Tensor proto({d});
      double mean = 0.0;
      for (double& v : proto.values) {
        v = rng.uniform(set.speech_level - 0.7, set.speech_level + 0.7);
        mean += v;
      }
      mean /= static_cast<double>(d);
      // Exact mean so every phoneme frame has the same energy.
      for (double& v : proto.values) v += set.speech_level - mean;
      bool ok = true;
      for (const Tensor& other : set.prototypes) {
        double d2 = 0.0;
        for (int j = 0; j < d; ++j) {
          const double diff = proto.values[static_cast<size_t>(j)] - other.values[static_cast<size_t>(j)];
          d2 += diff * diff;
        }
        if (std::sqrt(d2) < min_dist) {
          ok = false;
          break;
        }
      }
      if (ok) {
        set.prototypes.push_back(std::move(proto));
        break;
      }
    }
  }
  return set;
}

std::pair<ctc::PhonemeSeq, std::vector<EditEvent>> inject_mispronunciation(
    const ctc::PhonemeSeq& phonemes, Rng& rng, const EditRates& rates) {
  ALIGNTS_CHECK(!phonemes.empty(), "inject_mispronunciation: empty sequence");
  ALIGNTS_CHECK(rates.substitute >= 0.0 && rates.substitute <= 1.0 && rates.del >= 0.0 &&
                    rates.del <= 1.0 && rates.insert >= 0.0 && rates.insert <= 1.0,
                "inject_mispronunciation: rates must lie in [0, 1]");
  ctc::PhonemeSeq edited;
  std::vector<EditEvent> edits;
  const int len = static_cast<int>(phonemes.size());
  for (int pos = 0; pos <= len; ++pos) {
    if (rng.bernoulli(rates.insert)) {
      const int p = static_cast<int>(rng.uniform_int(0, kPhonemeCount - 1));
      edits.push_back({EditEvent::Kind::kInsert, pos, -1, p});
      edited.ids.push_back(p);
    }
    if (pos == len) break;
    const int original = phonemes.ids[static_cast<size_t>(pos)];
    if (rng.bernoulli(rates.del)) {
      edits.push_back({EditEvent::Kind::kDelete, pos, original, -1});
      continue;
    }
    if (rng.bernoulli(rates.substitute)) {
      int replacement = static_cast<int>(rng.uniform_int(0, kPhonemeCount - 2));
      if (replacement >= original) ++replacement;  // uniform over the other 38
      edits.push_back({EditEvent::Kind::kSubstitute, pos, original, replacement});
      edited.ids.push_back(replacement);
      continue;
    }
    edited.ids.push_back(original);
  }
  return {std::move(edited), std::move(edits)};
}

namespace {

// Mean-removed jitter so speaker variation never changes frame energies.
Tensor speaker_jitter(const CorpusConfig& config, const std::string& speaker, int phoneme) {
  Tensor jitter({config.base_feature_dim});
  if (speaker.empty() || config.prototype_jitter_std == 0.0) return jitter;
  Rng rng(numerics::derive_seed(config.seed,
                                "jitter:" + speaker + ":" + std::to_string(phoneme)));
  double mean = 0.0;
  for (double& v : jitter.values) {
    v = rng.normal(0.0, config.prototype_jitter_std);
    mean += v;
  }
  mean /= static_cast<double>(jitter.size());
  for (double& v : jitter.values) v -= mean;
  return jitter;
}

}  // namespace

Utterance synthesize_utterance(Rng& rng, const std::string& word, int quality_label,
                               const CorpusConfig& config, const PrototypeSet* prototypes,
                               const std::string& speaker) {
  ALIGNTS_CHECK(quality_label >= 1 && quality_label <= kNumQualityLabels,
                "synthesize_utterance: quality label ", quality_label, " outside 1..4");
  const ctc::PhonemeSeq* canonical = config.lexicon.find(word);
  ALIGNTS_CHECK(canonical != nullptr, "synthesize_utterance: unknown word '", word, "'");

  PrototypeSet local;
  if (prototypes == nullptr) {
    local = PrototypeSet::build(config);
    prototypes = &local;
  }

  Utterance utt;
  utt.word = word;
  utt.speaker = speaker;
  utt.quality_label = quality_label;
  utt.canonical = *canonical;

  // What is actually emitted.
  switch (quality_label) {
    case 2:
      utt.spoken = inject_mispronunciation(*canonical, rng, config.mispronunciation_edit_rates).first;
      break;
    case 3: {
      std::vector<size_t> candidates;
      for (size_t i = 0; i < config.lexicon.words.size(); ++i) {
        if (!(config.lexicon.words[i].second == *canonical)) candidates.push_back(i);
      }
      ALIGNTS_CHECK(!candidates.empty(), "synthesize_utterance: lexicon has no alternative to '",
                    word, "' for a label-3 utterance");
      const size_t pick =
          candidates[static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(candidates.size()) - 1))];
      utt.spoken = config.lexicon.words[pick].second;
      break;
    }
    default:
      utt.spoken = *canonical;
  }

  // Timing, in stacked frames.
  std::vector<int> durations(utt.spoken.size());
  int speech_frames = 0;
  for (int& dur : durations) {
    dur = static_cast<int>(
        rng.uniform_int(config.phoneme_duration_range.first, config.phoneme_duration_range.second));
    speech_frames += dur;
  }
  const int head_pad = static_cast<int>(
      rng.uniform_int(config.silence_pad_range.first, config.silence_pad_range.second));
  const int tail_pad = static_cast<int>(
      rng.uniform_int(config.silence_pad_range.first, config.silence_pad_range.second));
  const int t_len = head_pad + speech_frames + tail_pad;

  int onset = head_pad;
  utt.boundaries.reserve(durations.size());
  for (int dur : durations) {
    utt.boundaries.emplace_back(onset, onset + dur - 1);
    onset += dur;
  }

  utt.silence_truth.assign(static_cast<size_t>(t_len), 0);
  for (int t = 0; t < head_pad; ++t) utt.silence_truth[static_cast<size_t>(t)] = 1;
  for (int t = head_pad + speech_frames; t < t_len; ++t) utt.silence_truth[static_cast<size_t>(t)] = 1;

  // Label-specific acoustic events (resolved before emission so the noise
  // stream stays aligned with the frame order).
  int burst_start = -1, burst_len = 0;
  double burst_amp = 0.0;
  if (quality_label == 2) {
    burst_len = static_cast<int>(rng.uniform_int(1, std::min(3, t_len)));
    burst_start = static_cast<int>(rng.uniform_int(0, t_len - burst_len));
    burst_amp = rng.uniform(0.6, 1.2);
    for (int t = burst_start; t < burst_start + burst_len; ++t) {
      utt.silence_truth[static_cast<size_t>(t)] = 0;  // the burst is loud
    }
  }
  int puff_start = -1, puff_len = 0;
  if (quality_label == 4) {
    const bool in_head = rng.bernoulli(0.5);
    const int pad_len = in_head ? head_pad : tail_pad;
    puff_len = std::min(static_cast<int>(rng.uniform_int(1, 2)), pad_len);
    const int start_in_pad = static_cast<int>(rng.uniform_int(0, pad_len - puff_len));
    puff_start = in_head ? start_in_pad : head_pad + speech_frames + start_in_pad;
    for (int t = puff_start; t < puff_start + puff_len; ++t) {
      utt.silence_truth[static_cast<size_t>(t)] = 0;
    }
  }

  // Which phoneme (if any) each stacked frame belongs to.
  std::vector<int> frame_phoneme(static_cast<size_t>(t_len), -1);
  for (size_t p = 0; p < utt.boundaries.size(); ++p) {
    for (int t = utt.boundaries[p].first; t <= utt.boundaries[p].second; ++t) {
      frame_phoneme[static_cast<size_t>(t)] = utt.spoken.ids[p];
    }
  }

  // Jitter per phoneme used in this utterance.
  std::vector<Tensor> jitter(static_cast<size_t>(kPhonemeCount));
  for (int id : utt.spoken.ids) {
    if (jitter[static_cast<size_t>(id)].size() == 0) {
      jitter[static_cast<size_t>(id)] = speaker_jitter(config, speaker, id);
    }
  }

  const int d = config.base_feature_dim;
  utt.base_frames = Tensor({static_cast<int64_t>(3 * t_len), d});
  for (int t = 0; t < t_len; ++t) {
    const bool in_puff = puff_start >= 0 && t >= puff_start && t < puff_start + puff_len;
    const bool in_burst = burst_start >= 0 && t >= burst_start && t < burst_start + burst_len;
    const int phoneme = frame_phoneme[static_cast<size_t>(t)];
    for (int sub = 0; sub < 3; ++sub) {
      const int64_t row = static_cast<int64_t>(3 * t + sub);
      for (int j = 0; j < d; ++j) {
        double v;
        if (in_puff) {
          v = rng.uniform(1.7, 2.5);  // air puff: louder than speech
        } else if (phoneme >= 0) {
          v = prototypes->prototypes[static_cast<size_t>(phoneme)].values[static_cast<size_t>(j)] +
              jitter[static_cast<size_t>(phoneme)].values[static_cast<size_t>(j)] +
              rng.normal(0.0, config.noise_std);
        } else {
          v = prototypes->silence_level + rng.normal(0.0, config.noise_std);
        }
        if (in_burst) v += burst_amp;
        utt.base_frames.at(row, j) = v;
      }
    }
  }
  utt.features = model::make_feature_sequence(utt.base_frames);
  return utt;
}

namespace {

int sample_label(Rng& rng, const std::array<double, 4>& dist) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    acc += dist[static_cast<size_t>(i)];
    if (u < acc) return i + 1;
  }
  return 4;
}

std::string utt_id(const std::string& split, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%05d", split.c_str(), index);
  return buf;
}

std::string speaker_id(const std::string& split, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-spk%02d", split.c_str(), index);
  return buf;
}

}  // namespace

Corpus generate_corpus(const CorpusConfig& config) {
  config.validate();
  Corpus corpus;
  corpus.config = config;
  const PrototypeSet prototypes = PrototypeSet::build(config);

  auto make_split = [&](const std::string& split, int count, bool train_split) {
    std::vector<Utterance> utts;
    utts.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
      Rng rng(numerics::derive_seed(config.seed, "utt:" + split, static_cast<uint64_t>(i)));
      const int label = train_split ? 1 : sample_label(rng, config.label_distribution);
      const size_t word_idx =
          static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(config.lexicon.size()) - 1));
      const std::string& word = config.lexicon.words[word_idx].first;
      const int spk = static_cast<int>(rng.uniform_int(0, config.speakers_per_split - 1));
      Utterance utt = synthesize_utterance(rng, word, label, config, &prototypes,
                                           speaker_id(split, spk));
      utt.id = utt_id(split, i);
      utt.split = split;
      utts.push_back(std::move(utt));
    }
    return utts;
  };

  corpus.train = make_split("train", config.counts.train, /*train_split=*/true);
  corpus.dev = make_split("dev", config.counts.dev, /*train_split=*/false);
  corpus.test = make_split("test", config.counts.test, /*train_split=*/false);
  return corpus;
}

nlohmann::json corpus_config_to_json(const CorpusConfig& c) {
  nlohmann::json lex;
  if (c.lexicon_is_builtin) {
    lex = "builtin";
  } else {
    lex = nlohmann::json::object();
    for (const auto& [word, seq] : c.lexicon.words) lex[word] = to_symbols(seq);
  }
  return nlohmann::json{
      {"lexicon", lex},
      {"counts", {{"train", c.counts.train}, {"dev", c.counts.dev}, {"test", c.counts.test}}},
      {"label_distribution", c.label_distribution},
      {"mispronunciation_edit_rates",
       {{"substitute", c.mispronunciation_edit_rates.substitute},
        {"delete", c.mispronunciation_edit_rates.del},
        {"insert", c.mispronunciation_edit_rates.insert}}},
      {"phoneme_duration_range", {c.phoneme_duration_range.first, c.phoneme_duration_range.second}},
      {"silence_pad_range", {c.silence_pad_range.first, c.silence_pad_range.second}},
      {"noise_std", c.noise_std},
      {"seed", c.seed},
      {"base_feature_dim", c.base_feature_dim},
      {"speakers_per_split", c.speakers_per_split},
      {"prototype_jitter_std", c.prototype_jitter_std}};
}

namespace {

void reject_unknown_keys(const nlohmann::json& obj, const std::vector<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      raise(where, ": unknown key '", key, "'");
    }
  }
}

}  // namespace

CorpusConfig corpus_config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"lexicon", "counts", "label_distribution", "mispronunciation_edit_rates",
                       "phoneme_duration_range", "silence_pad_range", "noise_std", "seed",
                       "base_feature_dim", "speakers_per_split", "prototype_jitter_std"},
                      "corpus config");
  CorpusConfig c;
  if (j.contains("lexicon")) {
    const auto& lex = j.at("lexicon");
    if (lex.is_string()) {
      ALIGNTS_CHECK(lex.get<std::string>() == "builtin", "corpus config: lexicon must be ",
                    "\"builtin\" or a word -> phoneme-list object");
    } else {
      c.lexicon.words.clear();
      c.lexicon_is_builtin = false;
      for (const auto& [word, symbols] : lex.items()) {
        c.lexicon.words.emplace_back(word, to_ids(symbols.get<std::vector<std::string>>()));
      }
      std::sort(c.lexicon.words.begin(), c.lexicon.words.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    }
  }
  if (j.contains("counts")) {
    const auto& counts = j.at("counts");
    reject_unknown_keys(counts, {"train", "dev", "test"}, "corpus config counts");
    if (counts.contains("train")) c.counts.train = counts.at("train").get<int>();
    if (counts.contains("dev")) c.counts.dev = counts.at("dev").get<int>();
    if (counts.contains("test")) c.counts.test = counts.at("test").get<int>();
  }
  if (j.contains("label_distribution")) {
    c.label_distribution = j.at("label_distribution").get<std::array<double, 4>>();
  }
  if (j.contains("mispronunciation_edit_rates")) {
    const auto& rates = j.at("mispronunciation_edit_rates");
    reject_unknown_keys(rates, {"substitute", "delete", "insert"},
                        "corpus config mispronunciation_edit_rates");
    if (rates.contains("substitute")) c.mispronunciation_edit_rates.substitute = rates.at("substitute").get<double>();
    if (rates.contains("delete")) c.mispronunciation_edit_rates.del = rates.at("delete").get<double>();
    if (rates.contains("insert")) c.mispronunciation_edit_rates.insert = rates.at("insert").get<double>();
  }
  if (j.contains("phoneme_duration_range")) {
    const auto range = j.at("phoneme_duration_range").get<std::vector<int>>();
    ALIGNTS_CHECK(range.size() == 2, "corpus config: phoneme_duration_range must be [lo, hi]");
    c.phoneme_duration_range = {range[0], range[1]};
  }
  if (j.contains("silence_pad_range")) {
    const auto range = j.at("silence_pad_range").get<std::vector<int>>();
    ALIGNTS_CHECK(range.size() == 2, "corpus config: silence_pad_range must be [lo, hi]");
    c.silence_pad_range = {range[0], range[1]};
  }
  if (j.contains("noise_std")) c.noise_std = j.at("noise_std").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
  if (j.contains("base_feature_dim")) c.base_feature_dim = j.at("base_feature_dim").get<int>();
  if (j.contains("speakers_per_split")) c.speakers_per_split = j.at("speakers_per_split").get<int>();
  if (j.contains("prototype_jitter_std")) c.prototype_jitter_std = j.at("prototype_jitter_std").get<double>();
  c.validate();
  return c;
}

namespace {

nlohmann::json utterance_manifest_entry(const Utterance& u, const std::string& feat_path) {
  nlohmann::json boundaries = nlohmann::json::array();
  for (const auto& [on, off] : u.boundaries) boundaries.push_back({on, off});
  std::vector<int> silence(u.silence_truth.begin(), u.silence_truth.end());
  return nlohmann::json{{"id", u.id},
                        {"word", u.word},
                        {"label", u.quality_label},
                        {"split", u.split},
                        {"speaker", u.speaker},
                        {"path", feat_path},
                        {"canonical", to_symbols(u.canonical)},
                        {"spoken", to_symbols(u.spoken)},
                        {"boundaries", boundaries},
                        {"silence", silence}};
}

}  // namespace

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "feats");
  std::ofstream manifest(dir / "manifest.jsonl", std::ios::trunc);
  ALIGNTS_CHECK(manifest.is_open(), "cannot open manifest for writing in ", dir.string());
  auto dump_split = [&](const std::vector<Utterance>& utts) {
    for (const Utterance& u : utts) {
      const std::string feat_path = "feats/" + u.id + ".atsb";
      io::save_tensors(dir / feat_path, {{"base_frames", u.base_frames}});
      manifest << utterance_manifest_entry(u, feat_path).dump() << "\n";
    }
  };
  dump_split(corpus.train);
  dump_split(corpus.dev);
  dump_split(corpus.test);
  manifest.close();
  ALIGNTS_CHECK(manifest.good(), "manifest write failed in ", dir.string());

  std::ofstream cfg(dir / "corpus.json", std::ios::trunc);
  ALIGNTS_CHECK(cfg.is_open(), "cannot open corpus.json for writing in ", dir.string());
  nlohmann::json meta{{"config", corpus_config_to_json(corpus.config)},
                      {"phonemes", phoneme_inventory()}};
  cfg << meta.dump(2) << "\n";
  cfg.close();
  ALIGNTS_CHECK(cfg.good(), "corpus.json write failed in ", dir.string());
}

Corpus load_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::ifstream cfg(dir / "corpus.json");
  ALIGNTS_CHECK(cfg.is_open(), "no corpus.json under ", dir.string());
  nlohmann::json meta = nlohmann::json::parse(cfg);
  Corpus corpus;
  corpus.config = corpus_config_from_json(meta.at("config"));

  std::ifstream manifest(dir / "manifest.jsonl");
  ALIGNTS_CHECK(manifest.is_open(), "no manifest.jsonl under ", dir.string());
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    Utterance u;
    u.id = j.at("id").get<std::string>();
    u.word = j.at("word").get<std::string>();
    u.quality_label = j.at("label").get<int>();
    u.split = j.at("split").get<std::string>();
    u.speaker = j.at("speaker").get<std::string>();
    u.canonical = to_ids(j.at("canonical").get<std::vector<std::string>>());
    u.spoken = to_ids(j.at("spoken").get<std::vector<std::string>>());
    for (const auto& pair : j.at("boundaries")) {
      u.boundaries.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    }
    for (int s : j.at("silence").get<std::vector<int>>()) {
      u.silence_truth.push_back(static_cast<uint8_t>(s));
    }
    io::NamedTensors feats = io::load_tensors(dir / j.at("path").get<std::string>());
    const Tensor* base = io::find_tensor(feats, "base_frames");
    ALIGNTS_CHECK(base != nullptr, "feature file for ", u.id, " lacks base_frames");
    u.base_frames = *base;
    u.features = model::make_feature_sequence(u.base_frames);
    std::vector<Utterance>* target = u.split == "train"  ? &corpus.train
                                     : u.split == "dev"  ? &corpus.dev
                                     : u.split == "test" ? &corpus.test
                                                         : nullptr;
    ALIGNTS_CHECK(target != nullptr, "manifest entry ", u.id, " has unknown split ", u.split);
    target->push_back(std::move(u));
  }
  return corpus;
}

}  // namespace alignts::data

// src/pipeline/trainer.cc

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

#include "alignts/pipeline/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

#include "alignts/ctc/ctc.hpp"
#include "alignts/metrics/metrics.hpp"
#include "alignts/model/network.hpp"
#include "alignts/numerics/adam.hpp"
#include "alignts/numerics/math.hpp"
#include "alignts/numerics/tape.hpp"

namespace alignts::pipeline {

using data::Utterance;
using model::Checkpoint;
using model::FeatureSequence;
using numerics::Rng;
using numerics::Tape;
using numerics::Tensor;
using numerics::Var;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json epoch_json(const EpochRecord& e, bool with_wall) {
  nlohmann::json j{{"epoch", e.epoch},
                   {"train_loss", fmt_double(e.train_loss)},
                   {"dev_per", fmt_double(e.dev_per)},
                   {"lr", fmt_double(e.lr)},
                   {"samples_used", e.samples_used},
                   {"skipped_infeasible", e.skipped_infeasible}};
  if (with_wall) j["wall_ms"] = e.wall_ms;
  return j;
}

nlohmann::json log_json(const RunLog& log, bool with_wall) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const EpochRecord& e : log.epochs) epochs.push_back(epoch_json(e, with_wall));
  return nlohmann::json{{"config_snapshot", log.config_snapshot},
                        {"epochs", epochs},
                        {"final_checkpoint", log.final_checkpoint},
                        {"skipped_non_label1", log.skipped_non_label1}};
}

}  // namespace

std::string RunLog::canonical_json() const { return log_json(*this, /*with_wall=*/false).dump(2); }

std::string RunLog::full_json() const { return log_json(*this, /*with_wall=*/true).dump(2); }

void RunLog::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::trunc);
  ALIGNTS_CHECK(os.is_open(), "cannot open run log for writing: ", path.string());
  os << full_json() << "\n";
  os.close();
  ALIGNTS_CHECK(os.good(), "run log write failed: ", path.string());
}

namespace {

// Teacher logits per (utterance, stack ordering): inference-mode forwards,
// memoized in memory, optionally persisted to disk. Values are bit-identical
// whether computed, memoized, or reloaded.
class TeacherProvider {
 public:
  TeacherProvider(const Checkpoint& teacher, std::filesystem::path cache_dir)
      : teacher_(teacher), cache_dir_(std::move(cache_dir)) {
    if (!cache_dir_.empty()) std::filesystem::create_directories(cache_dir_);
  }

  const Tensor& logits(const Utterance& utt, int ordering) {
    const std::string key = utt.id + ".o" + std::to_string(ordering);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (!cache_dir_.empty()) {
      const auto path = cache_dir_ / (key + ".atsb");
      if (std::filesystem::exists(path)) {
        io::NamedTensors entries = io::load_tensors(path);
        const Tensor* t = io::find_tensor(entries, "logits");
        ALIGNTS_CHECK(t != nullptr, "teacher cache file ", path.string(), " lacks logits");
        return memo_.emplace(key, *t).first->second;
      }
    }
    FeatureSequence feats =
        ordering == 0 ? utt.features
                      : model::make_feature_sequence(utt.base_frames,
                                                     model::stack_orderings()[static_cast<size_t>(ordering)]);
    Tensor logits = model::model_logits(teacher_, feats);
    if (!cache_dir_.empty()) {
      io::save_tensors(cache_dir_ / (key + ".atsb"), {{"logits", logits}});
    }
    return memo_.emplace(key, std::move(logits)).first->second;
  }

 private:
  const Checkpoint& teacher_;
  std::filesystem::path cache_dir_;
  std::map<std::string, Tensor> memo_;
};

struct SampleRef {
  int utt_index = 0;  // into the filtered training list
  int ordering = 0;   // stack ordering index
};

struct SampleGrads {
  bool infeasible = false;
  double loss = 0.0;
  std::vector<std::vector<double>> grads;  // aligned with checkpoint weight order
};

// Forward + composed loss + backward for one training sample.
SampleGrads compute_sample_grads(const Checkpoint& ckpt, const losses::LossConfig& loss_config,
                                 const Utterance& utt, int ordering, const Tensor* teacher_logits,
                                 uint64_t dropout_seed) {
  SampleGrads out;
  FeatureSequence feats =
      ordering == 0 ? utt.features
                    : model::make_feature_sequence(utt.base_frames,
                                                   model::stack_orderings()[static_cast<size_t>(ordering)]);
  Tape tape;
  model::BoundModel bound = model::bind_model(tape, ckpt, /*trainable=*/true);
  Rng dropout_rng(dropout_seed);
  Var logits = model::model_forward(tape, bound, feats, /*train_mode=*/true, &dropout_rng);
  Var log_probs = tape.log_softmax_rows_op(logits);
  Var probs;
  if (loss_config.use_align) probs = tape.exp_op(log_probs);
  // No tape pushes beyond this point: value references must stay stable.
  ctc::Posteriorgram post;
  losses::LossContext ctx;
  ctx.logits = &tape.value(logits);
  ctx.log_probs = &tape.value(log_probs);
  ctx.labels = &utt.canonical;
  ctx.features = &feats;
  if (loss_config.use_align) {
    post.probs = tape.value(probs);
    post.frame_duration_ms = feats.frame_duration_ms;
    ctx.posteriorgram = &post;
  }
  ctx.teacher_logits = teacher_logits;
  if (teacher_logits != nullptr) {
    ALIGNTS_CHECK(teacher_logits->same_shape(tape.value(logits)),
                  "teacher/student logits mismatch on ", utt.id, ": ",
                  teacher_logits->shape_str(), " vs ", tape.value(logits).shape_str());
  }

  losses::ComposedLoss composed;
  try {
    composed = losses::compose_loss(loss_config, ctx);
  } catch (const ctc::CtcInfeasibleError&) {
    out.infeasible = true;
    return out;
  }
  out.loss = composed.total;

  std::vector<Tape::Seed> seeds;
  if (composed.d_log_probs) seeds.push_back({log_probs, composed.d_log_probs->values});
  if (composed.d_probs) seeds.push_back({probs, composed.d_probs->values});
  if (composed.d_logits) seeds.push_back({logits, composed.d_logits->values});
  tape.backward(seeds);

  out.grads.reserve(bound.params.size());
  for (const auto& [name, var] : bound.params) {
    auto g = tape.grad(var);
    out.grads.emplace_back(g.begin(), g.end());
  }
  return out;
}

double dev_per(const Checkpoint& ckpt, const std::vector<Utterance>& dev) {
  std::vector<metrics::ScoredPair> pairs;
  pairs.reserve(dev.size());
  for (const Utterance& utt : dev) {
    Tensor logits = model::model_logits(ckpt, utt.features);
    ctc::Posteriorgram post{numerics::softmax_rows(logits), utt.features.frame_duration_ms};
    pairs.push_back({ctc::greedy_decode(post), utt.canonical, utt.quality_label});
  }
  return metrics::per_percent(pairs, metrics::PerSubset::kAll);
}

}  // namespace

TrainResult train(const TrainConfig& config, const data::Corpus& corpus,
                  const TrainOptions& options) {
  config.validate();
  ALIGNTS_CHECK(!config.loss.needs_teacher() || options.teacher != nullptr,
                "train: loss recipe '", config.loss.recipe, "' needs a teacher checkpoint");

  TrainResult result;
  result.checkpoint = model::init_checkpoint(config.model, config.seed);
  result.checkpoint.metadata.recipe = config.loss.recipe;
  result.log.config_snapshot = train_config_to_json(config);

  if (options.teacher != nullptr) {
    ALIGNTS_CHECK(options.teacher->config.vocab_size == config.model.vocab_size,
                  "train: teacher vocab ", options.teacher->config.vocab_size,
                  " != student vocab ", config.model.vocab_size);
    ALIGNTS_CHECK(options.teacher->config.input_dim == config.model.input_dim,
                  "train: teacher input_dim ", options.teacher->config.input_dim,
                  " != student input_dim ", config.model.input_dim);
  }

  // Only quality-label-1 utterances may contribute gradients.
  std::vector<const Utterance*> train_utts;
  for (const Utterance& u : corpus.train) {
    if (u.quality_label == 1) {
      train_utts.push_back(&u);
    } else {
      ++result.log.skipped_non_label1;
    }
  }
  if (config.epochs == 0 || train_utts.empty()) return result;

  std::optional<TeacherProvider> teacher;
  if (options.teacher != nullptr) {
    teacher.emplace(*options.teacher, options.teacher_cache_dir);
  }

  const int orderings = config.augmentation ? 3 : 1;
  std::vector<SampleRef> samples;
  samples.reserve(train_utts.size() * static_cast<size_t>(orderings));
  for (int u = 0; u < static_cast<int>(train_utts.size()); ++u) {
    for (int o = 0; o < orderings; ++o) samples.push_back({u, o});
  }

  // One Adam state per named weight; a shared schedule scales every lr
  // together.
  std::vector<numerics::AdamState> adam;
  adam.reserve(result.checkpoint.weights.size());
  for (const auto& [name, t] : result.checkpoint.weights) {
    adam.push_back(numerics::AdamState::for_params(t, config.lr));
  }
  double lr = config.lr;

  const int threads = std::max(1, options.threads);
  double best_per = 0.0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<SampleRef> order = samples;
    {
      Rng shuffle_rng(numerics::derive_seed(config.seed, "shuffle", static_cast<uint64_t>(epoch)));
      for (size_t i = order.size(); i > 1; --i) {
        const size_t j = static_cast<size_t>(shuffle_rng.uniform_int(0, static_cast<int64_t>(i) - 1));
        std::swap(order[i - 1], order[j]);
      }
    }

    double loss_sum = 0.0;
    int used = 0, infeasible = 0;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(config.batch_size)) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      std::vector<SampleGrads> batch(end - start);
      auto run_sample = [&](size_t slot) {
        const SampleRef& ref = order[start + slot];
        const Utterance& utt = *train_utts[static_cast<size_t>(ref.utt_index)];
        const Tensor* t_logits =
            teacher ? &teacher->logits(utt, ref.ordering) : nullptr;
        const uint64_t dropout_seed = numerics::derive_seed(
            config.seed, "dropout:" + std::to_string(epoch), static_cast<uint64_t>(start + slot));
        batch[slot] = compute_sample_grads(result.checkpoint, config.loss, utt, ref.ordering,
                                           t_logits, dropout_seed);
      };
      if (threads <= 1 || batch.size() <= 1) {
        for (size_t slot = 0; slot < batch.size(); ++slot) run_sample(slot);
      } else {
        // Teacher forwards mutate the memo map; prefetch serially first.
        if (teacher) {
          for (size_t slot = 0; slot < batch.size(); ++slot) {
            const SampleRef& ref = order[start + slot];
            teacher->logits(*train_utts[static_cast<size_t>(ref.utt_index)], ref.ordering);
          }
        }
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int w = 0; w < threads; ++w) {
          pool.emplace_back([&] {
            for (size_t slot = next.fetch_add(1); slot < batch.size(); slot = next.fetch_add(1)) {
              run_sample(slot);
            }
          });
        }
        for (std::thread& th : pool) th.join();
      }

      // Fixed-order reduction keeps results independent of thread timing.
      int contributions = 0;
      for (const SampleGrads& g : batch) {
        if (g.infeasible) {
          ++infeasible;
          continue;
        }
        ++contributions;
        loss_sum += g.loss;
      }
      if (contributions == 0) continue;
      used += contributions;
      const double scale = 1.0 / static_cast<double>(contributions);
      for (size_t w = 0; w < result.checkpoint.weights.size(); ++w) {
        Tensor& param = result.checkpoint.weights[w].second;
        param.zero_grad();
        for (const SampleGrads& g : batch) {
          if (g.infeasible) continue;
          const std::vector<double>& src = g.grads[w];
          for (size_t i = 0; i < src.size(); ++i) param.grad[i] += src[i] * scale;
        }
        adam[w].lr = lr;
        numerics::adam_step(param, adam[w]);
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    rec.train_loss = used > 0 ? loss_sum / static_cast<double>(used) : 0.0;
    rec.samples_used = used;
    rec.skipped_infeasible = infeasible;
    rec.dev_per = corpus.dev.empty() ? 0.0 : dev_per(result.checkpoint, corpus.dev);
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    result.log.epochs.push_back(rec);

    // LR halving: never increases; applies from lr_halving_start_epoch on.
    if (epoch == 1) {
      best_per = rec.dev_per;
    } else {
      const double compare = config.lr_halving_compare == "best"
                                 ? best_per
                                 : result.log.epochs[static_cast<size_t>(epoch) - 2].dev_per;
      if (epoch >= config.lr_halving_start_epoch && rec.dev_per > compare) lr *= 0.5;
      best_per = std::min(best_per, rec.dev_per);
    }
    result.checkpoint.metadata.epoch = epoch;
  }
  return result;
}

TrainResult distill(const Checkpoint& teacher, const TrainConfig& student_config,
                    const data::Corpus& corpus, const std::filesystem::path& cache_dir,
                    int threads) {
  ALIGNTS_CHECK(student_config.loss.needs_teacher(),
                "distill: student loss recipe '", student_config.loss.recipe,
                "' has no teacher-student term");
  TrainOptions options;
  options.teacher = &teacher;
  options.teacher_cache_dir = cache_dir;
  options.threads = threads;
  return train(student_config, corpus, options);
}

}  // namespace alignts::pipeline

// tools/alignts_main.cc

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

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "alignts/ctc/ctc.hpp"
#include "alignts/data/corpus.hpp"
#include "alignts/losses/losses.hpp"
#include "alignts/model/network.hpp"
#include "alignts/numerics/math.hpp"
#include "alignts/pipeline/evaluate.hpp"
#include "alignts/pipeline/tradeoff.hpp"
#include "alignts/pipeline/trainer.hpp"

namespace {

using namespace alignts;

int cmd_gen_corpus(const std::string& config_path, const std::string& out_dir) {
  std::ifstream is(config_path);
  ALIGNTS_CHECK(is.is_open(), "cannot open config: ", config_path);
  data::CorpusConfig config = data::corpus_config_from_json(nlohmann::json::parse(is));
  data::Corpus corpus = data::generate_corpus(config);
  data::save_corpus(corpus, out_dir);
  std::cout << "wrote " << corpus.train.size() << " train / " << corpus.dev.size() << " dev / "
            << corpus.test.size() << " test utterances to " << out_dir << "\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& corpus_dir,
              const std::string& out_path, const std::string& teacher_path,
              const std::string& cache_dir, int threads) {
  pipeline::TrainConfig config = pipeline::load_train_config(config_path);
  const std::string corpus_ref = corpus_dir.empty() ? config.corpus : corpus_dir;
  ALIGNTS_CHECK(!corpus_ref.empty(), "no corpus: pass --corpus or set it in the config");
  data::Corpus corpus = data::load_corpus(corpus_ref);

  pipeline::TrainOptions options;
  options.threads = threads;
  model::Checkpoint teacher;
  if (!teacher_path.empty()) {
    teacher = model::load_checkpoint(teacher_path);
    options.teacher = &teacher;
    options.teacher_cache_dir = cache_dir;
  } else {
    ALIGNTS_CHECK(!config.loss.needs_teacher(), "loss recipe '", config.loss.recipe,
                  "' requires --teacher");
  }

  pipeline::TrainResult result = pipeline::train(config, corpus, options);
  model::save_checkpoint(out_path, result.checkpoint);
  result.log.final_checkpoint = out_path;
  result.log.save(out_path + ".runlog.json");
  if (!result.log.epochs.empty()) {
    const auto& last = result.log.epochs.back();
    std::cout << "trained " << config.loss.recipe << " for " << last.epoch
              << " epochs; final dev PER " << last.dev_per << "%\n";
  } else {
    std::cout << "wrote initialized checkpoint (0 epochs)\n";
  }
  std::cout << "checkpoint: " << out_path << "\n";
  return 0;
}

int cmd_evaluate(const std::string& ckpt_path, const std::string& corpus_dir,
                 const std::string& split, const std::string& reference_path,
                 const std::string& report_path) {
  model::Checkpoint ckpt = model::load_checkpoint(ckpt_path);
  data::Corpus corpus = data::load_corpus(corpus_dir);
  model::Checkpoint reference;
  const model::Checkpoint* ref_ptr = nullptr;
  if (!reference_path.empty()) {
    reference = model::load_checkpoint(reference_path);
    ref_ptr = &reference;
  }
  pipeline::EvalResult result = pipeline::evaluate(ckpt, corpus, split, ref_ptr);
  std::vector<metrics::ReportRow> rows{result.row};
  if (!report_path.empty()) {
    metrics::write_report_tsv(report_path, rows);
    metrics::write_report_json(report_path + ".json", rows);
  }
  std::cout << metrics::report_tsv(rows);
  if (ref_ptr == nullptr) {
    std::cout << "(no --reference checkpoint: delay columns unavailable)\n";
  } else if (result.report.delay_excluded_utts > 0) {
    std::cout << "(" << result.report.delay_excluded_utts
              << " utterances without peaks excluded from delay)\n";
  }
  return 0;
}

int cmd_stats(const std::string& ckpt_path, const std::string& corpus_dir,
              const std::string& split, const std::string& out_path) {
  model::Checkpoint ckpt = model::load_checkpoint(ckpt_path);
  data::Corpus corpus = data::load_corpus(corpus_dir);
  const auto& utts = corpus.split(split);
  ALIGNTS_CHECK(!utts.empty(), "split '", split, "' is empty");

  std::ofstream frames_out(out_path, std::ios::trunc);
  ALIGNTS_CHECK(frames_out.is_open(), "cannot open for writing: ", out_path);
  frames_out << "utt\tframe\ttime_ms\tenergy\tis_silence\tblank_posterior\tmax_nonblank_posterior"
             << "\targmax_phoneme\n";
  std::ofstream peaks_out(out_path + ".peaks.tsv", std::ios::trunc);
  ALIGNTS_CHECK(peaks_out.is_open(), "cannot open for writing: ", out_path + ".peaks.tsv");
  peaks_out << "utt\tframes_above_0.1\tnum_peaks\tmean_onset\tpeaks(onset:offset:phoneme)\n";

  for (const auto& utt : utts) {
    numerics::Tensor logits = model::model_logits(ckpt, utt.features);
    ctc::Posteriorgram post{numerics::softmax_rows(logits), utt.features.frame_duration_ms};
    losses::SilenceMask mask = losses::silence_mask(utt.features);
    const int blank = post.blank_id();
    for (int64_t t = 0; t < post.num_frames(); ++t) {
      double best = -1.0;
      int best_sym = 0;
      for (int64_t k = 0; k < post.num_symbols() - 1; ++k) {
        if (post.probs.at(t, k) > best) {
          best = post.probs.at(t, k);
          best_sym = static_cast<int>(k);
        }
      }
      char line[256];
      std::snprintf(line, sizeof(line), "%s\t%lld\t%.1f\t%.6f\t%d\t%.6f\t%.6f\t%s\n",
                    utt.id.c_str(), static_cast<long long>(t),
                    static_cast<double>(t) * post.frame_duration_ms,
                    utt.features.energies[static_cast<size_t>(t)],
                    mask.is_silence[static_cast<size_t>(t)] ? 1 : 0, post.probs.at(t, blank), best,
                    data::phoneme_symbol(best_sym).c_str());
      frames_out << line;
    }
    metrics::PeakStats stats = metrics::peak_stats(post);
    peaks_out << utt.id << "\t" << stats.frames_above_threshold << "\t" << stats.peaks.size()
              << "\t" << (stats.has_peaks() ? std::to_string(stats.mean_onset) : "n/a") << "\t";
    for (size_t i = 0; i < stats.peaks.size(); ++i) {
      if (i) peaks_out << ",";
      peaks_out << stats.peaks[i].onset << ":" << stats.peaks[i].offset << ":"
                << data::phoneme_symbol(stats.peaks[i].dominant_phoneme);
    }
    peaks_out << "\n";
  }
  std::cout << "wrote per-frame posteriors to " << out_path << " and peak stats to " << out_path
            << ".peaks.tsv\n";
  return 0;
}

int cmd_tradeoff(const std::string& config_path, const std::string& out_dir, int threads) {
  pipeline::TradeoffConfig config = pipeline::load_tradeoff_config(config_path);
  pipeline::TradeoffResult result = pipeline::run_tradeoff(config, out_dir, threads);
  std::cout << metrics::report_tsv(result.rows);
  std::cout << "full table: " << (std::filesystem::path(out_dir) / "tradeoff.tsv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aligned-CTC phoneme recognizer trainer and evaluator"};
  app.require_subcommand(1);

  std::string config_path, out_path, corpus_dir, ckpt_path, teacher_path, cache_dir,
      reference_path, report_path;
  std::string split = "test";
  int threads = 2;

  auto* gen = app.add_subcommand("gen-corpus", "generate a synthetic scripted-speech corpus");
  gen->add_option("--config", config_path, "corpus config (JSON)")->required();
  gen->add_option("--out", out_path, "output corpus directory")->required();

  auto* train = app.add_subcommand("train", "train a model on a generated corpus");
  train->add_option("--config", config_path, "train config (JSON)")->required();
  train->add_option("--corpus", corpus_dir, "corpus directory (overrides the config)");
  train->add_option("--out", out_path, "output checkpoint path")->required();
  train->add_option("--teacher", teacher_path, "teacher checkpoint (for ts recipes)");
  train->add_option("--cache-teacher", cache_dir, "directory for cached teacher logits");
  train->add_option("--threads", threads, "worker threads per batch");

  auto* eval = app.add_subcommand("evaluate", "evaluate a checkpoint on a split");
  eval->add_option("--ckpt", ckpt_path, "checkpoint to evaluate")->required();
  eval->add_option("--corpus", corpus_dir, "corpus directory")->required();
  eval->add_option("--split", split, "dev or test")->check(CLI::IsMember({"dev", "test"}));
  eval->add_option("--reference", reference_path, "reference checkpoint for delay");
  eval->add_option("--report", report_path, "report path (TSV; .json written alongside)");

  auto* stats = app.add_subcommand("stats", "dump per-utterance posteriorgrams and peak stats");
  stats->add_option("--ckpt", ckpt_path, "checkpoint")->required();
  stats->add_option("--corpus", corpus_dir, "corpus directory")->required();
  stats->add_option("--split", split, "split to dump")
      ->check(CLI::IsMember({"train", "dev", "test"}));
  stats->add_option("--out", out_path, "output TSV path")->required();

  auto* tradeoff =
      app.add_subcommand("reproduce-tradeoff", "run the window sweep and emit the latency-vs-F1 table");
  tradeoff->add_option("--config", config_path, "tradeoff config (JSON)")->required();
  tradeoff->add_option("--out", out_path, "output directory")->required();
  tradeoff->add_option("--threads", threads, "worker threads per batch");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_corpus(config_path, out_path);
    if (train->parsed())
      return cmd_train(config_path, corpus_dir, out_path, teacher_path, cache_dir, threads);
    if (eval->parsed())
      return cmd_evaluate(ckpt_path, corpus_dir, split, reference_path, report_path);
    if (stats->parsed()) return cmd_stats(ckpt_path, corpus_dir, split, out_path);
    if (tradeoff->parsed()) return cmd_tradeoff(config_path, out_path, threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

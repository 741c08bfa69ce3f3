// src/pipeline/tradeoff.cc

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

#include "alignts/pipeline/tradeoff.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "alignts/pipeline/evaluate.hpp"
#include "alignts/pipeline/trainer.hpp"

namespace alignts::pipeline {

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

TradeoffConfig load_tradeoff_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  ALIGNTS_CHECK(is.is_open(), "cannot open config: ", path.string());
  nlohmann::json j = nlohmann::json::parse(is);
  reject_unknown_keys(j, {"corpus", "corpus_dir", "student", "teacher_recipe", "windows", "modes"},
                      "tradeoff config");
  TradeoffConfig c;
  if (j.contains("corpus")) c.corpus = data::corpus_config_from_json(j.at("corpus"));
  if (j.contains("corpus_dir")) c.corpus_dir = j.at("corpus_dir").get<std::string>();
  ALIGNTS_CHECK(c.corpus.has_value() != !c.corpus_dir.empty(),
                "tradeoff config: provide exactly one of 'corpus' or 'corpus_dir'");
  ALIGNTS_CHECK(j.contains("student"), "tradeoff config: missing 'student'");
  c.student = train_config_from_json(j.at("student"));
  if (j.contains("teacher_recipe")) c.teacher_recipe = j.at("teacher_recipe").get<std::string>();
  if (j.contains("windows")) c.windows = j.at("windows").get<std::vector<int>>();
  if (j.contains("modes")) {
    c.modes = j.at("modes").get<std::vector<std::string>>();
    for (const std::string& m : c.modes) {
      ALIGNTS_CHECK(m == "best" || m == "avg", "tradeoff config: mode '", m, "'");
    }
  }
  return c;
}

TradeoffResult run_tradeoff(const TradeoffConfig& config, const std::filesystem::path& out_dir,
                            int threads) {
  namespace fs = std::filesystem;
  ALIGNTS_CHECK(!config.student.model.bidirectional,
                "tradeoff: the student model must be unidirectional");
  fs::create_directories(out_dir);

  data::Corpus corpus;
  if (config.corpus.has_value()) {
    corpus = data::generate_corpus(*config.corpus);
    data::save_corpus(corpus, out_dir / "corpus");
  } else {
    corpus = data::load_corpus(config.corpus_dir);
  }

  TrainOptions opts;
  opts.threads = threads;

  auto train_named = [&](const std::string& name, const TrainConfig& cfg,
                         const model::Checkpoint* teacher) {
    TrainOptions local = opts;
    local.teacher = teacher;
    if (teacher != nullptr) local.teacher_cache_dir = out_dir / ("cache_" + name);
    std::cerr << "[tradeoff] training " << name << " (" << cfg.loss.recipe << ")\n";
    TrainResult res = train(cfg, corpus, local);
    save_checkpoint(out_dir / (name + ".ckpt"), res.checkpoint);
    res.log.final_checkpoint = (out_dir / (name + ".ckpt")).string();
    res.log.save(out_dir / (name + ".runlog.json"));
    return res;
  };

  // Teacher chain. A ts-flavored teacher recipe itself needs a teacher: the
  // unidirectional CTC model.
  TrainConfig teacher_cfg = config.student;
  teacher_cfg.model.bidirectional = true;
  teacher_cfg.loss = losses::parse_recipe(config.teacher_recipe);
  teacher_cfg.seed = numerics::derive_seed(config.student.seed, "tradeoff:teacher");

  std::optional<TrainResult> uni_ctc;
  if (teacher_cfg.loss.needs_teacher()) {
    TrainConfig uni_cfg = config.student;
    uni_cfg.loss = losses::parse_recipe("ctc");
    uni_cfg.seed = numerics::derive_seed(config.student.seed, "tradeoff:uni-ctc");
    uni_ctc = train_named("uni_ctc", uni_cfg, nullptr);
  }
  TrainResult teacher =
      train_named("teacher", teacher_cfg, uni_ctc ? &uni_ctc->checkpoint : nullptr);

  // Delay reference: the bidirectional model trained with the align recipe.
  TrainConfig ref_cfg = config.student;
  ref_cfg.model.bidirectional = true;
  ref_cfg.loss = losses::parse_recipe("align");
  ref_cfg.seed = numerics::derive_seed(config.student.seed, "tradeoff:reference");
  TrainResult reference = train_named("reference", ref_cfg, nullptr);

  // Student sweep. Window 0 degenerates to the frame-level recipe for either
  // mode, so it contributes a single row.
  std::vector<std::string> recipes;
  for (const std::string& mode : config.modes) {
    for (int w : config.windows) {
      if (w == 0) continue;
      recipes.push_back("ts-" + mode + ":" + (w > 0 ? "+" : "") + std::to_string(w));
    }
  }
  if (std::find(config.windows.begin(), config.windows.end(), 0) != config.windows.end()) {
    recipes.push_back("ts");
  }

  TradeoffResult result;
  for (const std::string& recipe : recipes) {
    TrainConfig cfg = config.student;
    cfg.loss = losses::parse_recipe(recipe);
    std::string name = "student_" + recipe;
    std::replace(name.begin(), name.end(), ':', '_');
    std::replace(name.begin(), name.end(), '+', 'p');
    TrainResult student = train_named(name, cfg, &teacher.checkpoint);
    EvalResult eval = evaluate(student.checkpoint, corpus, "test", &reference.checkpoint);
    result.rows.push_back(eval.row);
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const metrics::ReportRow& a, const metrics::ReportRow& b) {
              return a.delay_frames < b.delay_frames;
            });
  metrics::write_report_tsv(out_dir / "tradeoff.tsv", result.rows);
  metrics::write_report_json(out_dir / "tradeoff.json", result.rows);
  return result;
}

}  // namespace alignts::pipeline

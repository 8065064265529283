// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/run_config.hpp"

#include <cstdlib>

namespace ctxforge {

namespace {

template <typename T>
T get_key(const nlohmann::json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw CtxError("config key '" + key + "': wrong type");
  }
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw CtxError("config file " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig cfg;
  cfg.train.mode = train_mode_from_string(get_key<std::string>(j, "mode", "beam"));
  cfg.train.beam_width = get_key<int>(j, "beam_width", 2);
  cfg.train.branching_factor = get_key<int>(j, "branching_factor", 3);
  cfg.train.steps_per_child = get_key<int>(j, "steps_per_child", 1);
  cfg.train.epochs = get_key<int>(j, "epochs", 2);
  cfg.train.batch_size = get_key<int>(j, "batch_size", 4);
  cfg.train.max_global_steps = get_key<int>(j, "max_global_steps", 8);
  cfg.train.best_of_n = get_key<int>(j, "best_of_n", 8);
  cfg.train.seed = get_key<unsigned>(j, "seed", 0u);
  cfg.train.information_seeking = get_key<bool>(j, "information_seeking", false);
  cfg.train.validate_in_training_mode = get_key<bool>(j, "validate_in_training_mode", false);

  cfg.backend = get_key<std::string>(j, "backend", std::string("scripted"));
  cfg.fixtures = get_key<std::string>(j, "fixtures", std::string());
  cfg.out = get_key<std::string>(j, "out", std::string());
  cfg.metric = get_key<std::string>(j, "metric", std::string("exact_match"));
  if (j.contains("train_dataset")) cfg.train_dataset = get_key<std::string>(j, "train_dataset", "");
  if (j.contains("val_dataset")) cfg.val_dataset = get_key<std::string>(j, "val_dataset", "");
  if (j.contains("test_dataset")) cfg.test_dataset = get_key<std::string>(j, "test_dataset", "");
  cfg.live_host = get_key<std::string>(j, "live_host", cfg.live_host);
  cfg.live_path = get_key<std::string>(j, "live_path", cfg.live_path);
  cfg.live_model = get_key<std::string>(j, "live_model", std::string());
  cfg.payload_cap = get_key<std::size_t>(j, "payload_cap", std::size_t{2000});
  cfg.preview = get_key<std::string>(j, "preview", std::string("topk"));
  cfg.preview_top_k = get_key<std::size_t>(j, "preview_top_k", std::size_t{8});
  return cfg;
}

void RunConfig::validate() const {
  train.validate();
  if (backend != "scripted" && backend != "live")
    throw CtxError("config key 'backend': expected scripted|live, got '" + backend + "'");
  if (backend == "scripted" && fixtures.empty())
    throw CtxError("config key 'fixtures': required for the scripted backend");
  if (backend == "live") {
    const char* key = std::getenv("CTXFORGE_API_KEY");
    if (!key || !*key)
      throw CtxError("live backend requires the CTXFORGE_API_KEY environment variable");
    if (live_model.empty()) throw CtxError("config key 'live_model': required for live backend");
  }
  if (preview != "topk" && preview != "full")
    throw CtxError("config key 'preview': expected topk|full, got '" + preview + "'");
  if (out.empty()) throw CtxError("config key 'out': required");
}

}  // namespace ctxforge

// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/sim_env.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <memory>
#include <random>
#include <sstream>

#include "ctxforge/prompts.hpp"

namespace ctxforge {

namespace fs = std::filesystem;

std::vector<std::string> FactWorld::required_facts() const {
  std::vector<std::string> all = dictionary_facts;
  all.insert(all.end(), rule_facts.begin(), rule_facts.end());
  return all;
}

std::vector<std::string> FactWorld::vocabulary() const {
  std::vector<std::string> all = required_facts();
  all.insert(all.end(), decoys.begin(), decoys.end());
  all.insert(all.end(), poisons.begin(), poisons.end());
  return all;
}

nlohmann::json FactWorld::to_json() const {
  return {{"dictionary_facts", dictionary_facts},
          {"rule_facts", rule_facts},
          {"decoys", decoys},
          {"poisons", poisons},
          {"penalty", penalty},
          {"documented_optimum", documented_optimum}};
}

FactWorld FactWorld::from_json(const nlohmann::json& j) {
  FactWorld world;
  world.dictionary_facts = j.at("dictionary_facts").get<std::vector<std::string>>();
  world.rule_facts = j.at("rule_facts").get<std::vector<std::string>>();
  world.decoys = j.at("decoys").get<std::vector<std::string>>();
  world.poisons = j.at("poisons").get<std::vector<std::string>>();
  world.penalty = j.at("penalty").get<double>();
  world.documented_optimum = j.at("documented_optimum").get<double>();
  for (const auto& p : world.poisons)
    for (const auto& r : world.required_facts())
      if (p == r) throw CtxError("world invariant violated: poison token is also required");
  return world;
}

namespace {

std::set<std::string> tokens_of_snapshot(const ContextSnapshot& snapshot) {
  std::set<std::string> tokens;
  for (const auto& r : snapshot.resources) tokens.insert(r.keywords.begin(), r.keywords.end());
  return tokens;
}

double score_from_tokens(const std::set<std::string>& tokens, const FactWorld& world) {
  auto required = world.required_facts();
  if (required.empty()) return 0;
  std::size_t present = 0;
  for (const auto& fact : required)
    if (tokens.count(fact)) ++present;
  std::size_t poisoned = 0;
  for (const auto& poison : world.poisons)
    if (tokens.count(poison)) ++poisoned;
  double score = static_cast<double>(present) / static_cast<double>(required.size());
  return score * std::pow(world.penalty, static_cast<double>(poisoned));
}

}  // namespace

double world_reward(const ContextSnapshot& snapshot, const FactWorld& world) {
  return score_from_tokens(tokens_of_snapshot(snapshot), world);
}

RewardFn make_world_reward_fn(const FactWorld& world) {
  return [world](const TaskExample&, const std::string& output) {
    std::set<std::string> tokens;
    for (auto& t : tokenize(output)) tokens.insert(std::move(t));
    return score_from_tokens(tokens, world);
  };
}

namespace {

std::string action_blob(const std::string& name, const nlohmann::json& arguments) {
  nlohmann::json j;
  j["name"] = name;
  j["arguments"] = arguments;
  return "Action:\n" + j.dump(2);
}

std::string final_blob(const std::string& answer) {
  return action_blob("final_answer_tool", {{"answer", answer}});
}

std::string add_blob(const std::string& content, const std::string& summary) {
  return action_blob("context_manage_tool",
                     {{"action", "add"}, {"content", content}, {"summary", summary}});
}

std::size_t count_tool_messages(const std::vector<Message>& messages) {
  std::size_t n = 0;
  for (const auto& m : messages)
    if (m.role == Role::Tool) ++n;
  return n;
}

const std::string& system_text(const std::vector<Message>& messages) {
  if (messages.empty()) throw CtxError("scripted agent got an empty message list");
  return messages.front().content;
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0, pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

// Preview text of an optimizer prompt (section B).
std::string optimizer_preview(const std::string& prompt) {
  return extract_section(prompt, kContextPreviewHeader);
}

// Preview text of an executor prompt (between the preview and task labels).
std::string executor_preview(const std::string& prompt) {
  std::string section = extract_section(prompt, kContextAndTaskHeader);
  std::size_t start = section.find("CONTEXT PREVIEW:");
  std::size_t end = section.find("\nTASK:");
  if (start == std::string::npos || end == std::string::npos || end < start) return section;
  start += std::string("CONTEXT PREVIEW:").size();
  return section.substr(start, end - start);
}

std::set<std::string> world_tokens_in(const std::string& text, const FactWorld& world) {
  std::set<std::string> tokens;
  for (auto& t : tokenize(text)) tokens.insert(std::move(t));
  std::set<std::string> found;
  for (const auto& word : world.vocabulary())
    if (tokens.count(word)) found.insert(word);
  return found;
}

std::vector<std::string> resource_ids_in(const std::string& preview) {
  std::vector<std::string> ids;
  std::size_t pos = 0;
  while ((pos = preview.find('[', pos)) != std::string::npos) {
    std::size_t close = preview.find(']', pos);
    if (close == std::string::npos) break;
    std::string id = preview.substr(pos + 1, close - pos - 1);
    if (!id.empty() && id[0] == 'r' &&
        std::all_of(id.begin() + 1, id.end(), [](char c) { return std::isdigit(c) != 0; }))
      ids.push_back(id);
    pos = close + 1;
  }
  return ids;
}

std::string first_missing(const std::vector<std::string>& wanted,
                          const std::set<std::string>& present) {
  for (const auto& w : wanted)
    if (!present.count(w)) return w;
  return "";
}

// One optimizer behavior = (decider at step 0, fixed summary). Step 0 emits
// the edit (or goes straight to the final answer), step 1 concludes.
CallbackChatBackend::Fn two_step_plan(
    std::function<std::string(const std::string& prompt)> step0,
    std::function<std::string(const std::string& prompt)> summary) {
  return [step0, summary](const std::vector<Message>& messages) {
    const std::string& prompt = system_text(messages);
    if (count_tool_messages(messages) == 0) {
      std::string blob = step0(prompt);
      if (!blob.empty()) return blob;
      return final_blob("no-op");
    }
    return final_blob(summary(prompt));
  };
}

}  // namespace

CallbackChatBackend::Fn make_fact_echo_executor(const FactWorld& world) {
  return [world](const std::vector<Message>& messages) {
    const std::string& prompt = system_text(messages);
    std::string preview = executor_preview(prompt);
    bool training = prompt.find("ctx_usage_summary_tool") != std::string::npos &&
                    prompt.find("Summarize:") != std::string::npos;
    if (training && count_tool_messages(messages) == 0) {
      std::ostringstream summary;
      summary << "Read the provided context.";
      for (const auto& id : resource_ids_in(preview))
        summary << " \\helpful_resource_id{" << id << "}";
      return action_blob("ctx_usage_summary_tool", {{"summary", summary.str()}});
    }
    std::ostringstream answer;
    bool first = true;
    for (const auto& token : world_tokens_in(preview, world)) {
      if (!first) answer << " ";
      answer << token;
      first = false;
    }
    return final_blob(answer.str());
  };
}

OptimizerStrategy optimizer_strategy_from_string(const std::string& label) {
  if (label == "greedy-dictionary") return OptimizerStrategy::GreedyDictionary;
  if (label == "rules-and-examples") return OptimizerStrategy::RulesAndExamples;
  if (label == "poisoner") return OptimizerStrategy::Poisoner;
  if (label == "no-op") return OptimizerStrategy::NoOp;
  throw CtxError("unknown optimizer strategy: " + label);
}

CallbackChatBackend::Fn scripted_optimizer(const FactWorld& world, OptimizerStrategy strategy) {
  switch (strategy) {
    case OptimizerStrategy::GreedyDictionary:
      return two_step_plan(
          [world](const std::string& prompt) -> std::string {
            auto present = world_tokens_in(optimizer_preview(prompt), world);
            std::string fact = first_missing(world.dictionary_facts, present);
            if (!fact.empty())
              return add_blob("dictionary entry: " + fact, "dictionary " + fact);
            std::string decoy = first_missing(world.decoys, present);
            if (!decoy.empty())
              return add_blob("glossary filler: " + decoy, "glossary " + decoy);
            return "";
          },
          [](const std::string&) { return "expanded the dictionary section"; });

    case OptimizerStrategy::RulesAndExamples:
      return two_step_plan(
          [world](const std::string& prompt) -> std::string {
            auto present = world_tokens_in(optimizer_preview(prompt), world);
            std::ostringstream content;
            content << "rules and examples:";
            bool any = false;
            for (const auto& fact : world.required_facts()) {
              if (!present.count(fact)) {
                content << " " << fact;
                any = true;
              }
            }
            if (!any) return "";
            return add_blob(content.str(), "consolidated rules and parallel examples");
          },
          [](const std::string&) { return "added consolidated rules and examples"; });

    case OptimizerStrategy::Poisoner:
      return two_step_plan(
          [world](const std::string& prompt) -> std::string {
            auto present = world_tokens_in(optimizer_preview(prompt), world);
            std::string poison = first_missing(world.poisons, present);
            if (poison.empty()) return "";
            return add_blob("reference note: " + poison, "external reference note");
          },
          [](const std::string&) { return "added an external reference note"; });

    case OptimizerStrategy::NoOp:
      return [](const std::vector<Message>&) { return final_blob("no change"); };
  }
  throw CtxError("unknown optimizer strategy");
}

CallbackChatBackend::Fn make_scenario_optimizer(const FactWorld& world, const std::string& plan) {
  if (plan == "greedy") return scripted_optimizer(world, OptimizerStrategy::GreedyDictionary);
  if (plan == "rules") return scripted_optimizer(world, OptimizerStrategy::RulesAndExamples);
  if (plan == "noop") return scripted_optimizer(world, OptimizerStrategy::NoOp);

  if (plan == "diversity") {
    auto greedy = scripted_optimizer(world, OptimizerStrategy::GreedyDictionary);
    auto rules = scripted_optimizer(world, OptimizerStrategy::RulesAndExamples);
    auto noop = scripted_optimizer(world, OptimizerStrategy::NoOp);
    return [greedy, rules, noop](const std::vector<Message>& messages) {
      std::size_t siblings = count_occurrences(system_text(messages), "[sibling] ");
      if (siblings == 0) return greedy(messages);
      if (siblings == 1) return rules(messages);
      return noop(messages);
    };
  }

  if (plan == "pollution-seq") {
    return two_step_plan(
        [world](const std::string& prompt) -> std::string {
          auto present = world_tokens_in(optimizer_preview(prompt), world);
          auto required = world.required_facts();
          std::size_t have = 0;
          for (const auto& f : required)
            if (present.count(f)) ++have;
          bool poisoned = false;
          for (const auto& p : world.poisons)
            if (present.count(p)) poisoned = true;

          if (have == 0) {
            std::ostringstream content;
            content << "facts:";
            for (std::size_t i = 0; i < std::min<std::size_t>(3, required.size()); ++i)
              content << " " << required[i];
            return add_blob(content.str(), "starter fact sheet");
          }
          if (!poisoned && !world.poisons.empty())
            return add_blob("reference note: " + world.poisons.front(),
                            "external reference note");
          std::ostringstream content;
          content << "more facts:";
          bool any = false;
          for (const auto& f : required) {
            if (!present.count(f)) {
              content << " " << f;
              any = true;
            }
          }
          if (!any) return "";
          return add_blob(content.str(), "additional fact sheet");
        },
        [](const std::string&) { return "updated the fact sheets"; });
  }

  if (plan == "pollution-beam") {
    auto clean = two_step_plan(
        [world](const std::string& prompt) -> std::string {
          auto present = world_tokens_in(optimizer_preview(prompt), world);
          auto required = world.required_facts();
          std::ostringstream content;
          content << "facts:";
          std::size_t added = 0;
          for (const auto& f : required) {
            if (!present.count(f)) {
              content << " " << f;
              if (++added == 2) break;
            }
          }
          if (added == 0) return "";
          return add_blob(content.str(), "fact sheet");
        },
        [](const std::string&) { return "added a clean fact sheet"; });
    auto poisoner = scripted_optimizer(world, OptimizerStrategy::Poisoner);
    auto noop = scripted_optimizer(world, OptimizerStrategy::NoOp);
    return [clean, poisoner, noop](const std::vector<Message>& messages) {
      std::size_t siblings = count_occurrences(system_text(messages), "[sibling] ");
      if (siblings == 0) return clean(messages);
      if (siblings == 1) return poisoner(messages);
      return noop(messages);
    };
  }

  if (plan == "unique-add") {
    auto counter = std::make_shared<std::size_t>(0);
    return [counter](const std::vector<Message>& messages) {
      if (count_tool_messages(messages) == 0) {
        std::size_t n = (*counter)++;
        return add_blob("note entry " + std::to_string(n), "note " + std::to_string(n));
      }
      return final_blob("added a note");
    };
  }

  if (plan.rfind("random:", 0) == 0) {
    unsigned seed = static_cast<unsigned>(std::stoul(plan.substr(7)));
    return two_step_plan(
        [world, seed](const std::string& prompt) -> std::string {
          std::string preview = optimizer_preview(prompt);
          auto present = world_tokens_in(preview, world);
          std::size_t siblings = count_occurrences(prompt, "[sibling] ");
          std::uint64_t h = fnv1a64(preview + "#" + std::to_string(siblings),
                                    0x1234567890ABCDEFULL ^ seed);
          switch (h % 5) {
            case 0: {
              std::string fact = first_missing(world.required_facts(), present);
              if (fact.empty()) return "";
              return add_blob("fact note: " + fact, "fact " + fact);
            }
            case 1: {
              std::string decoy = first_missing(world.decoys, present);
              if (decoy.empty()) return "";
              return add_blob("filler note: " + decoy, "filler " + decoy);
            }
            case 2: {
              std::string poison = first_missing(world.poisons, present);
              if (poison.empty()) return "";
              return add_blob("reference note: " + poison, "reference note");
            }
            case 3: {
              auto ids = resource_ids_in(preview);
              if (ids.empty()) return "";
              return action_blob("context_manage_tool",
                                 {{"action", "remove"},
                                  {"resource_id", ids[h / 7 % ids.size()]}});
            }
            default: return "";
          }
        },
        [](const std::string&) { return "random exploration step"; });
  }

  throw CtxError("unknown optimizer plan: " + plan);
}

namespace {

Dataset make_tasks(const std::string& stem, std::size_t n) {
  Dataset dataset;
  for (std::size_t i = 0; i < n; ++i)
    dataset.push_back(TaskExample{stem + " (case " + std::to_string(i) + ")", ""});
  return dataset;
}

Scenario make_scenario_shell(std::string name, FactWorld world, std::string seq_plan,
                             std::string beam_plan) {
  Scenario s;
  s.name = std::move(name);
  s.world = std::move(world);
  s.seq_plan = std::move(seq_plan);
  s.beam_plan = std::move(beam_plan);
  s.train = make_tasks("Report every known fact you can find", 8);
  s.val = make_tasks("List the facts present in the provided context", 4);
  s.test = make_tasks("Enumerate the facts available to you", 4);
  return s;
}

}  // namespace

Scenario scenario_local_optima() {
  FactWorld world;
  world.dictionary_facts = {"dicta", "dictb", "dictc", "dictd", "dicte"};
  world.rule_facts = {"rulea", "ruleb", "rulec", "ruled", "rulee"};
  world.decoys = {"decoy1", "decoy2", "decoy3", "decoy4"};
  world.poisons = {"toxin1"};
  world.documented_optimum = 1.0;  // rules-and-examples reaches all 10 required facts
  return make_scenario_shell("local_optima", std::move(world), "greedy", "diversity");
}

Scenario scenario_pollution() {
  FactWorld world;
  world.dictionary_facts = {"facta", "factb", "factc"};
  world.rule_facts = {"factd", "facte"};
  world.decoys = {"decoy1", "decoy2"};
  world.poisons = {"toxin1"};
  world.documented_optimum = 1.0;
  return make_scenario_shell("pollution", std::move(world), "pollution-seq", "pollution-beam");
}

Scenario make_random_scenario(unsigned seed) {
  std::mt19937 rng(seed);
  auto take = [&](const std::string& stem, std::size_t lo, std::size_t hi) {
    std::uniform_int_distribution<std::size_t> dist(lo, hi);
    std::size_t n = dist(rng);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(stem + std::to_string(i) + "x" + std::to_string(seed % 97));
    return out;
  };
  FactWorld world;
  world.dictionary_facts = take("dict", 2, 4);
  world.rule_facts = take("rule", 2, 4);
  world.decoys = take("decoy", 1, 3);
  world.poisons = take("toxin", 1, 2);
  Scenario s = make_scenario_shell("random-" + std::to_string(seed), std::move(world),
                                   "random:" + std::to_string(seed),
                                   "random:" + std::to_string(seed));
  return s;
}

void save_scenario(const Scenario& scenario, const std::string& dir) {
  fs::create_directories(dir);
  write_text_file((fs::path(dir) / "world.json").string(),
                  scenario.world.to_json().dump(2) + "\n");
  nlohmann::json meta;
  meta["name"] = scenario.name;
  meta["seq_plan"] = scenario.seq_plan;
  meta["beam_plan"] = scenario.beam_plan;
  meta["train_tasks"] = scenario.train.size();
  meta["val_tasks"] = scenario.val.size();
  meta["test_tasks"] = scenario.test.size();
  write_text_file((fs::path(dir) / "scenario.json").string(), meta.dump(2) + "\n");
}

Scenario load_scenario(const std::string& dir) {
  nlohmann::json meta =
      nlohmann::json::parse(read_text_file((fs::path(dir) / "scenario.json").string()));
  Scenario s;
  s.name = meta.at("name").get<std::string>();
  s.world = FactWorld::from_json(
      nlohmann::json::parse(read_text_file((fs::path(dir) / "world.json").string())));
  s.seq_plan = meta.at("seq_plan").get<std::string>();
  s.beam_plan = meta.at("beam_plan").get<std::string>();
  s.train = make_tasks("Report every known fact you can find", meta.at("train_tasks").get<std::size_t>());
  s.val = make_tasks("List the facts present in the provided context", meta.at("val_tasks").get<std::size_t>());
  s.test = make_tasks("Enumerate the facts available to you", meta.at("test_tasks").get<std::size_t>());
  return s;
}

bool is_scenario_dir(const std::string& dir) {
  return fs::exists(fs::path(dir) / "scenario.json") && fs::exists(fs::path(dir) / "world.json");
}

}  // namespace ctxforge

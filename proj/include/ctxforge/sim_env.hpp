// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ctxforge/chat_backend.hpp"
#include "ctxforge/dataset.hpp"
#include "ctxforge/evaluation.hpp"
#include "ctxforge/snapshot.hpp"

namespace ctxforge {

/// Deterministic synthetic task world. Scores depend only on which fact
/// tokens are present in the context: the required fraction, damped
/// multiplicatively for every poison token picked up.
struct FactWorld {
  std::vector<std::string> dictionary_facts;  // required; the greedy strategy's reachable half
  std::vector<std::string> rule_facts;        // required; only non-greedy strategies add these
  std::vector<std::string> decoys;            // harmless filler, scores nothing
  std::vector<std::string> poisons;           // each one present multiplies the score by penalty
  double penalty = 0.2;
  double documented_optimum = 1.0;

  std::vector<std::string> required_facts() const;
  std::vector<std::string> vocabulary() const;  // everything the world knows about

  nlohmann::json to_json() const;
  static FactWorld from_json(const nlohmann::json& j);
};

/// score = (|required facts present| / |required|) * penalty^(poisons present).
/// Presence means the token appears in some resource's keyword set, so the
/// score is a pure function of snapshot content.
double world_reward(const ContextSnapshot& snapshot, const FactWorld& world);

/// Reward over executor output text with the same formula; with the fact-echo
/// executor and a full preview this agrees exactly with world_reward on the
/// snapshot the executor saw.
RewardFn make_world_reward_fn(const FactWorld& world);

/// Scripted executor: reads the context preview out of its prompt and answers
/// with the world tokens it found there. In training mode it files the usage
/// summary (tagging every previewed resource) before answering.
CallbackChatBackend::Fn make_fact_echo_executor(const FactWorld& world);

/// Canned optimizer behaviors. Each drives the context tools through the
/// normal agent loop; all decisions are functions of the incoming prompt, so
/// runs are reproducible.
enum class OptimizerStrategy { GreedyDictionary, RulesAndExamples, Poisoner, NoOp };

OptimizerStrategy optimizer_strategy_from_string(const std::string& label);

CallbackChatBackend::Fn scripted_optimizer(const FactWorld& world, OptimizerStrategy strategy);

/// Named plans used by the scenarios and the CLI's scripted mode:
///  - "greedy":          greedy-dictionary on every child
///  - "rules":           rules-and-examples on every child
///  - "noop":            no-op on every child
///  - "diversity":       strategy by sibling count (greedy, rules, no-op)
///  - "pollution-seq":   adds facts, poisons itself on step 2, keeps adding
///  - "pollution-beam":  children are clean-adder / poisoner / no-op
///  - "unique-add":      adds one globally unique resource per call
///  - "random:<seed>":   seeded pseudo-random edits
CallbackChatBackend::Fn make_scenario_optimizer(const FactWorld& world, const std::string& plan);

/// A reproducible world + plan bundle with its synthetic task sets.
struct Scenario {
  std::string name;
  FactWorld world;
  std::string seq_plan;
  std::string beam_plan;
  Dataset train;
  Dataset val;
  Dataset test;
};

/// Greedy plateaus at 0.5 (it can only ever reach the dictionary half of the
/// required facts); the rules-and-examples branch reaches 1.0.
Scenario scenario_local_optima();

/// The sequential plan poisons itself at step 2; beam children include one
/// poisoner, one clean adder, and a no-op, so selection can reject the
/// polluted branch.
Scenario scenario_pollution();

/// Randomized world for property runs (elitism monotonicity).
Scenario make_random_scenario(unsigned seed);

void save_scenario(const Scenario& scenario, const std::string& dir);
Scenario load_scenario(const std::string& dir);
bool is_scenario_dir(const std::string& dir);

}  // namespace ctxforge

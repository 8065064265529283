// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ctxforge/util.hpp"

namespace ctxforge {

enum class Role { System, User, Assistant, Tool };

std::string to_string(Role role);
Role role_from_string(const std::string& label);

struct Message {
  Role role;
  std::string content;
};

/// Deterministic key for a message list; used by the scripted backend to
/// replay canned responses.
std::string messages_hash(const std::vector<Message>& messages);

struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Chat backend contract: ordered messages in, assistant text out. Failures
/// raise BackendError; the agent loop retries with backoff.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string complete(const std::vector<Message>& messages) = 0;
  virtual std::string name() const = 0;
};

/// Function-backed backend for scripted agents and tests.
class CallbackChatBackend final : public ChatBackend {
 public:
  using Fn = std::function<std::string(const std::vector<Message>&)>;
  explicit CallbackChatBackend(Fn fn, std::string name = "callback")
      : fn_(std::move(fn)), name_(std::move(name)) {}

  std::string complete(const std::vector<Message>& messages) override { return fn_(messages); }
  std::string name() const override { return name_; }

 private:
  Fn fn_;
  std::string name_;
};

/// Replays canned responses keyed by the hash of the incoming message list.
/// Fixture file format: JSON object mapping message-list hash -> response.
class ScriptedChatBackend final : public ChatBackend {
 public:
  ScriptedChatBackend() = default;
  explicit ScriptedChatBackend(std::map<std::string, std::string> responses)
      : responses_(std::move(responses)) {}
  static ScriptedChatBackend from_file(const std::string& path);

  void add_response(const std::vector<Message>& messages, const std::string& response);
  void add_response_for_hash(const std::string& hash, const std::string& response);

  std::string complete(const std::vector<Message>& messages) override;
  std::string name() const override { return "scripted"; }

 private:
  std::map<std::string, std::string> responses_;
};

/// Live HTTP adapter speaking the common chat-completions JSON shape.
/// The bearer token comes from the CTXFORGE_API_KEY environment variable.
class HttpChatBackend final : public ChatBackend {
 public:
  HttpChatBackend(std::string host, std::string path, std::string model);

  std::string complete(const std::vector<Message>& messages) override;
  std::string name() const override { return "http:" + model_; }

 private:
  std::string host_;
  std::string path_;
  std::string model_;
  std::string api_key_;
};

}  // namespace ctxforge

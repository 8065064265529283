// SPDX-License-Identifier: Apache-2.0
#include "ctxforge/chat_backend.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <sstream>

namespace ctxforge {

std::string to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
    case Role::Tool: return "tool";
  }
  return "user";
}

Role role_from_string(const std::string& label) {
  if (label == "system") return Role::System;
  if (label == "user") return Role::User;
  if (label == "assistant") return Role::Assistant;
  if (label == "tool") return Role::Tool;
  throw CtxError("unknown role: " + label);
}

std::string messages_hash(const std::vector<Message>& messages) {
  std::ostringstream buf;
  for (const auto& m : messages) buf << to_string(m.role) << "\x1f" << m.content << "\x1e";
  return sha256_hex(buf.str());
}

ScriptedChatBackend ScriptedChatBackend::from_file(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path));
  std::map<std::string, std::string> responses;
  for (const auto& [key, value] : j.items()) responses[key] = value.get<std::string>();
  return ScriptedChatBackend(std::move(responses));
}

void ScriptedChatBackend::add_response(const std::vector<Message>& messages,
                                       const std::string& response) {
  responses_[messages_hash(messages)] = response;
}

void ScriptedChatBackend::add_response_for_hash(const std::string& hash,
                                                const std::string& response) {
  responses_[hash] = response;
}

std::string ScriptedChatBackend::complete(const std::vector<Message>& messages) {
  auto it = responses_.find(messages_hash(messages));
  if (it == responses_.end())
    throw BackendError("no scripted response for message hash " + messages_hash(messages));
  return it->second;
}

HttpChatBackend::HttpChatBackend(std::string host, std::string path, std::string model)
    : host_(std::move(host)), path_(std::move(path)), model_(std::move(model)) {
  const char* key = std::getenv("CTXFORGE_API_KEY");
  if (!key || !*key)
    throw CtxError("live backend requires the CTXFORGE_API_KEY environment variable");
  api_key_ = key;
}

std::string HttpChatBackend::complete(const std::vector<Message>& messages) {
  nlohmann::json body;
  body["model"] = model_;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : messages)
    body["messages"].push_back({{"role", to_string(m.role)}, {"content", m.content}});

  httplib::Client client(host_);
  client.set_connection_timeout(30);
  client.set_read_timeout(120);
  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) throw BackendError("http backend: no response from " + host_);
  if (res->status != 200)
    throw BackendError("http backend: status " + std::to_string(res->status) + ": " + res->body);
  try {
    nlohmann::json j = nlohmann::json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("http backend: malformed response: ") + e.what());
  }
}

}  // namespace ctxforge

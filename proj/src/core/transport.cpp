// Copyright 2026 The Seedsmith Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/transport.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "core/errors.hpp"
#include "core/hash.hpp"

namespace seedsmith {

using nlohmann::json;

std::string ChatRequest::fingerprint() const {
  char temp_text[32];
  std::snprintf(temp_text, sizeof temp_text, "%.4f", temperature);
  uint64_t h = fnv1a64(model);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(system, h);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(user, h);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(temp_text, h);
  return to_hex(h);
}

Cassette Cassette::from_jsonl(const std::string& text) {
  Cassette cassette;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded()) throw IoError("cassette: malformed JSON line");
    std::string type = record.value("type", "");
    if (type == "header") {
      cassette.header.version = record.value("version", 1);
      cassette.header.recorded_at = record.value("recorded_at", "");
      cassette.header.model = record.value("model", "");
      cassette.header.endpoint = record.value("endpoint", "");
      have_header = true;
    } else if (type == "entry") {
      CassetteEntry e;
      e.fingerprint = record.value("fingerprint", "");
      e.response = record.value("response", "");
      e.latency_ms = record.value("latency_ms", int64_t{0});
      cassette.entries.push_back(std::move(e));
    } else {
      throw IoError("cassette: unknown record type '" + type + "'");
    }
  }
  if (!have_header) throw IoError("cassette: missing header record");
  return cassette;
}

Cassette Cassette::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open cassette " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_jsonl(buf.str());
}

std::string Cassette::to_jsonl() const {
  std::string out;
  json h = {{"type", "header"},
            {"version", header.version},
            {"recorded_at", header.recorded_at},
            {"model", header.model},
            {"endpoint", header.endpoint}};
  out += h.dump();
  out += '\n';
  for (const auto& e : entries) {
    json record = {{"type", "entry"},
                   {"fingerprint", e.fingerprint},
                   {"response", e.response},
                   {"latency_ms", e.latency_ms}};
    out += record.dump();
    out += '\n';
  }
  return out;
}

void Cassette::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write cassette " + path.string());
  out << to_jsonl();
}

Cassette redact(Cassette cassette) {
  cassette.header.endpoint.clear();
  return cassette;
}

TransportConfig TransportConfig::from_env(TransportMode mode) {
  TransportConfig config;
  config.mode = mode;
  if (const char* url = std::getenv("SEEDSMITH_API_URL")) config.endpoint = url;
  if (const char* key = std::getenv("SEEDSMITH_API_KEY")) config.api_key = key;
  return config;
}

Transport::Transport(TransportConfig config) : config_(std::move(config)) {
  if (config_.mode == TransportMode::replay) {
    if (config_.cassette_path.empty()) throw IoError("replay transport needs a cassette path");
    cassette_ = Cassette::load(config_.cassette_path);
  }
  sleeper_ = [](double seconds) {
    std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
  };
}

void Transport::set_backend(Backend backend) { backend_ = std::move(backend); }

void Transport::set_sleeper(std::function<void(double)> sleeper) { sleeper_ = std::move(sleeper); }

std::string chat_request_body(const ChatRequest& request) {
  json body = {{"model", request.model},
               {"messages", json::array()},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};
  if (!request.system.empty()) {
    body["messages"].push_back({{"role", "system"}, {"content", request.system}});
  }
  body["messages"].push_back({{"role", "user"}, {"content", request.user}});
  return body.dump();
}

std::string chat_response_content(const std::string& body) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty()) {
    throw ProviderUnavailable("malformed completion response");
  }
  const json& choice = parsed["choices"][0];
  if (!choice.contains("message") || !choice["message"].contains("content")) {
    throw ProviderUnavailable("completion response carries no content");
  }
  return choice["message"]["content"].get<std::string>();
}

std::string Transport::complete(const ChatRequest& request) {
  if (config_.mode == TransportMode::replay) {
    if (replay_pos_ >= cassette_.entries.size()) {
      throw CassetteDrift("cassette exhausted after " + std::to_string(replay_pos_) + " entries");
    }
    const CassetteEntry& entry = cassette_.entries[replay_pos_];
    if (entry.fingerprint != request.fingerprint()) {
      throw CassetteDrift("entry " + std::to_string(replay_pos_) + " fingerprint " +
                          entry.fingerprint + " does not match request " + request.fingerprint() +
                          " (prompts changed since recording?)");
    }
    ++replay_pos_;
    if (config_.simulate_latency && config_.sim_clock != nullptr) {
      config_.sim_clock->advance_ms(entry.latency_ms);
    }
    return entry.response;
  }

  int64_t latency_ms = 0;
  std::string content = live_complete(request, &latency_ms);
  if (config_.mode == TransportMode::record) {
    if (cassette_.entries.empty() && cassette_.header.model.empty()) {
      cassette_.header.model = request.model;
      cassette_.header.endpoint = config_.endpoint;
    }
    cassette_.entries.push_back({request.fingerprint(), content, latency_ms});
  }
  return content;
}

std::string Transport::live_complete(const ChatRequest& request, int64_t* latency_ms) {
  // A missing endpoint is a configuration problem, not a transient fault;
  // retrying would only burn the backoff budget.
  if (!backend_ && config_.endpoint.empty()) {
    throw ProviderUnavailable("no endpoint configured (set SEEDSMITH_API_URL)");
  }
  const std::string body = chat_request_body(request);
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt < config_.max_retries; ++attempt) {
    if (attempt > 0) {
      double delay = config_.backoff_base_s;
      for (int i = 1; i < attempt; ++i) delay *= config_.backoff_factor;
      sleeper_(delay);
    }
    try {
      ++network_calls_;
      auto start = std::chrono::steady_clock::now();
      std::string response = backend_ ? backend_(body) : http_post(body);
      auto elapsed = std::chrono::steady_clock::now() - start;
      if (config_.scripted_latency_ms >= 0) {
        *latency_ms = config_.scripted_latency_ms;
        if (config_.sim_clock != nullptr) config_.sim_clock->advance_ms(*latency_ms);
      } else {
        *latency_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
      }
      return chat_response_content(response);
    } catch (const ProviderUnavailable& e) {
      last_error = e.what();
    }
  }
  throw ProviderUnavailable("gave up after " + std::to_string(config_.max_retries) +
                            " attempts: " + last_error);
}

void Transport::save_cassette() const {
  if (config_.cassette_path.empty()) throw IoError("no cassette path configured");
  cassette_.save(config_.cassette_path);
}

std::string Transport::http_post(const std::string& body) {
  if (config_.endpoint.empty()) {
    throw ProviderUnavailable("no endpoint configured (set SEEDSMITH_API_URL)");
  }
  // Split "scheme://host[:port]/path" into the client base and request path.
  size_t scheme_end = config_.endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ProviderUnavailable("endpoint must include a scheme: " + config_.endpoint);
  }
  if (config_.endpoint.compare(0, scheme_end, "http") != 0) {
    // This build links no TLS; https endpoints need a local proxy.
    throw ProviderUnavailable("only http endpoints are supported: " + config_.endpoint);
  }
  size_t path_start = config_.endpoint.find('/', scheme_end + 3);
  std::string base = path_start == std::string::npos ? config_.endpoint
                                                     : config_.endpoint.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);

  httplib::Client client(base);
  client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_s));
  client.set_read_timeout(std::chrono::duration<double>(config_.timeout_s));
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  auto result = client.Post(path, headers, body, "application/json");
  if (!result) {
    throw ProviderUnavailable("transport error: " + httplib::to_string(result.error()));
  }
  if (result->status == 429 || result->status >= 500) {
    throw ProviderUnavailable("retryable status " + std::to_string(result->status));
  }
  if (result->status != 200) {
    throw ProviderUnavailable("status " + std::to_string(result->status) + ": " + result->body);
  }
  return result->body;
}

}  // namespace seedsmith

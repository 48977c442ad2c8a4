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
//
// Provider-agnostic chat-completion transport with retries and deterministic
// record/replay cassettes. Replay never touches the network; a replayed
// campaign is a pure function of the cassette.

#ifndef SEEDSMITH_CORE_TRANSPORT_HPP
#define SEEDSMITH_CORE_TRANSPORT_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/clock.hpp"

namespace seedsmith {

struct ChatRequest {
  std::string model;
  std::string system;
  std::string user;
  double temperature = 0.7;
  int max_tokens = 1024;

  /// Stable across platforms and runs: FNV-1a over (model, system, user,
  /// temperature). max_tokens is deliberately excluded so output-length
  /// tweaks do not invalidate recorded cassettes.
  std::string fingerprint() const;
};

struct CassetteEntry {
  std::string fingerprint;
  std::string response;
  int64_t latency_ms = 0;
};

/// An append-only recording of request/response pairs, persisted as
/// line-delimited JSON with one header record followed by one record per
/// entry. Replay consumes entries in order and insists on fingerprint match.
struct Cassette {
  struct Header {
    int version = 1;
    std::string recorded_at;  // ISO-8601, informational only
    std::string model;
    std::string endpoint;  // cleared by redact()
  };

  Header header;
  std::vector<CassetteEntry> entries;

  static Cassette load(const std::filesystem::path& path);
  static Cassette from_jsonl(const std::string& text);
  std::string to_jsonl() const;
  void save(const std::filesystem::path& path) const;
};

/// Strips anything that must not be committed (endpoint, keys). Idempotent;
/// fingerprints and responses are untouched.
Cassette redact(Cassette cassette);

enum class TransportMode { live, record, replay };

struct TransportConfig {
  TransportMode mode = TransportMode::replay;
  std::string endpoint;  // e.g. http://host:port/v1/chat/completions
  std::string api_key;
  int max_retries = 3;
  double backoff_base_s = 1.0;
  double backoff_factor = 2.0;
  double timeout_s = 60.0;
  std::string cassette_path;  // replay source, or record destination

  // When replaying with a simulated clock, recorded latencies can be charged
  // against the campaign budget instead of real time.
  bool simulate_latency = false;
  SimClock* sim_clock = nullptr;

  // Record mode: latency written into the cassette. -1 measures real time;
  // a fixed value makes recorded timelines reproducible.
  int64_t scripted_latency_ms = -1;

  /// Reads SEEDSMITH_API_URL, SEEDSMITH_API_KEY from the environment.
  static TransportConfig from_env(TransportMode mode);
};

class Transport {
 public:
  /// Maps a chat-completions JSON request body to a response body.
  /// The default backend performs an HTTP POST to config.endpoint.
  using Backend = std::function<std::string(const std::string& request_body)>;

  explicit Transport(TransportConfig config);

  /// Test seam: replaces the network with a local function. Calls through a
  /// backend still count as network calls for accounting purposes only in
  /// live/record modes.
  void set_backend(Backend backend);

  /// Sleep hook for retry backoff; tests install a no-op.
  void set_sleeper(std::function<void(double seconds)> sleeper);

  /// Contract per mode:
  ///  - replay: returns the next cassette entry; CassetteDrift on mismatch
  ///    or exhaustion; zero backend/network activity.
  ///  - live: up to max_retries attempts with exponential backoff, then
  ///    ProviderUnavailable.
  ///  - record: live behavior plus an appended cassette entry per success.
  std::string complete(const ChatRequest& request);

  int network_calls() const { return network_calls_; }
  const Cassette& cassette() const { return cassette_; }
  Cassette& mutable_cassette() { return cassette_; }
  size_t replay_position() const { return replay_pos_; }

  /// Record mode: persist the accumulated cassette.
  void save_cassette() const;

 private:
  std::string live_complete(const ChatRequest& request, int64_t* latency_ms);
  std::string http_post(const std::string& body);

  TransportConfig config_;
  Backend backend_;
  std::function<void(double)> sleeper_;
  Cassette cassette_;
  size_t replay_pos_ = 0;
  int network_calls_ = 0;
};

/// Serializes a request into the de-facto chat-completions wire format.
std::string chat_request_body(const ChatRequest& request);

/// Extracts choices[0].message.content; throws ProviderUnavailable on an
/// unparseable body.
std::string chat_response_content(const std::string& body);

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_TRANSPORT_HPP

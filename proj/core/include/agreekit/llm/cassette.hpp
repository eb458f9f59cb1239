#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "agreekit/llm/confidence.hpp"

namespace agreekit::llm {

enum class CassetteMode { record, replay };

CassetteMode cassette_mode_from_string(std::string_view text);

struct CassetteRecord {
  std::string key;
  std::string provider;
  std::string model;
  std::string prompt;
  std::string response;
  std::optional<std::vector<TokenLogprob>> token_logprobs;
  std::string timestamp;
};

// SHA-256 over the length-prefixed (provider, model, prompt) triple.
std::string cassette_key(std::string_view provider, std::string_view model, std::string_view prompt);

/// JSON-lines store of provider exchanges, keyed by cassette_key.
///
/// Replay mode requires the file to exist and never writes. Record mode
/// appends one line per new exchange. Lookups may run concurrently; appends
/// are exclusive.
class Cassette {
 public:
  Cassette(std::string path, CassetteMode mode);

  CassetteMode mode() const noexcept { return mode_; }
  const std::string& path() const noexcept { return path_; }

  std::optional<CassetteRecord> find(const std::string& key) const;
  void append(CassetteRecord record);
  std::size_t size() const;

 private:
  std::string path_;
  CassetteMode mode_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, CassetteRecord> records_;
};

}  // namespace agreekit::llm

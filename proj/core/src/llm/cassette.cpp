#include "agreekit/llm/cassette.hpp"

#include <filesystem>
#include <fstream>
#include <mutex>

#include <nlohmann/json.hpp>

#include "agreekit/errors.hpp"
#include "agreekit/hash.hpp"

namespace agreekit::llm {

CassetteMode cassette_mode_from_string(std::string_view text) {
  if (text == "record") return CassetteMode::record;
  if (text == "replay") return CassetteMode::replay;
  throw ValidationError("cassette mode must be record or replay");
}

std::string cassette_key(std::string_view provider, std::string_view model, std::string_view prompt) {
  std::string material;
  for (const auto part : {provider, model, prompt}) {
    material += std::to_string(part.size());
    material += ':';
    material += part;
  }
  return sha256_hex(material);
}

namespace {

nlohmann::json to_json(const CassetteRecord& r) {
  nlohmann::json j{{"key", r.key},           {"provider", r.provider}, {"model", r.model},
                   {"prompt", r.prompt},     {"response", r.response}, {"timestamp", r.timestamp}};
  if (r.token_logprobs) {
    auto& tokens = j["token_logprobs"] = nlohmann::json::array();
    for (const auto& t : *r.token_logprobs) tokens.push_back({{"token", t.token}, {"logprob", t.logprob}});
  } else {
    j["token_logprobs"] = nullptr;
  }
  return j;
}

CassetteRecord from_json(const nlohmann::json& j) {
  CassetteRecord r;
  r.key = j.at("key").get<std::string>();
  r.provider = j.at("provider").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.prompt = j.at("prompt").get<std::string>();
  r.response = j.at("response").get<std::string>();
  r.timestamp = j.value("timestamp", std::string());
  if (j.contains("token_logprobs") && !j.at("token_logprobs").is_null()) {
    std::vector<TokenLogprob> tokens;
    for (const auto& t : j.at("token_logprobs")) {
      tokens.push_back(TokenLogprob{t.at("token").get<std::string>(), t.at("logprob").get<double>()});
    }
    r.token_logprobs = std::move(tokens);
  }
  return r;
}

}  // namespace

Cassette::Cassette(std::string path, CassetteMode mode) : path_(std::move(path)), mode_(mode) {
  if (!std::filesystem::exists(path_)) {
    if (mode_ == CassetteMode::replay) throw ValidationError("cassette '" + path_ + "' does not exist");
    return;
  }
  std::ifstream in(path_);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto record = from_json(nlohmann::json::parse(line));
      if (record.key != cassette_key(record.provider, record.model, record.prompt)) {
        throw ParseError("cassette key does not match its provider/model/prompt", line_no, 1);
      }
      records_.insert_or_assign(record.key, std::move(record));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("cassette record: ") + e.what(), line_no, 1);
    }
  }
}

std::optional<CassetteRecord> Cassette::find(const std::string& key) const {
  std::shared_lock lock(mutex_);
  const auto it = records_.find(key);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void Cassette::append(CassetteRecord record) {
  if (mode_ == CassetteMode::replay) throw Error("cassette is in replay mode; refusing to write");
  std::unique_lock lock(mutex_);
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error("cannot append to cassette '" + path_ + "'");
  out << to_json(record).dump() << '\n';
  records_.insert_or_assign(record.key, std::move(record));
}

std::size_t Cassette::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

}  // namespace agreekit::llm

#include "cogledger/node/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cogledger::node {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("invalid number for '" + std::string(key) + "': " + std::string(value));
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  std::string s(value);
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ConfigError("invalid number for '" + std::string(key) + "': " + s);
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

NodeConfig parse_config(std::string_view text, const std::filesystem::path& base) {
  NodeConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));

    if (key == "listen") {
      auto colon = value.rfind(':');
      if (colon == std::string_view::npos) throw ConfigError("listen must be host:port");
      cfg.host = std::string(value.substr(0, colon));
      cfg.port = parse_number<int>(key, value.substr(colon + 1));
    } else if (key == "data_dir") {
      cfg.data_dir = resolve(base, value);
    } else if (key == "seal_interval") {
      cfg.seal_interval_seconds = parse_double(key, value);
      if (cfg.seal_interval_seconds < 0) throw ConfigError("seal_interval must be >= 0");
    } else if (key == "keyfile") {
      cfg.keyfile = resolve(base, value);
    } else if (key == "reward") {
      cfg.reward = parse_number<std::uint64_t>(key, value);
    } else if (key == "refine.alpha") {
      cfg.refine.alpha = parse_double(key, value);
      if (cfg.refine.alpha < 0 || cfg.refine.alpha > 1) throw ConfigError("refine.alpha must be in [0,1]");
    } else if (key == "refine.half_life_days") {
      cfg.refine.half_life_days = parse_double(key, value);
      if (cfg.refine.half_life_days <= 0) throw ConfigError("refine.half_life_days must be positive");
    } else if (key == "refine.burn_threshold") {
      cfg.refine.burn_threshold = parse_double(key, value);
    } else if (key == "codify.k") {
      cfg.codify_k = parse_number<std::size_t>(key, value);
      if (cfg.codify_k == 0) throw ConfigError("codify.k must be positive");
    } else if (key == "validator") {
      auto space = value.find_first_of(" \t");
      std::string_view hex = value.substr(0, space);
      std::uint64_t stake = 1;
      if (space != std::string_view::npos) stake = parse_number<std::uint64_t>(key, trim(value.substr(space)));
      try {
        cfg.validators.push_back({PublicKey::from_hex(hex), stake});
      } catch (const std::exception&) {
        throw ConfigError("validator key must be 64 hex characters");
      }
    } else if (key == "quiz") {
      cfg.quiz = resolve(base, value);
    } else if (key == "gazetteer") {
      cfg.gazetteer = resolve(base, value);
    } else if (key == "queue_capacity") {
      cfg.queue_capacity = parse_number<std::size_t>(key, value);
      if (cfg.queue_capacity == 0) throw ConfigError("queue_capacity must be positive");
    } else if (key == "store_capacity") {
      cfg.store_capacity = parse_number<std::uint64_t>(key, value);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

NodeConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace cogledger::node

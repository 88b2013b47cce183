#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cogledger/crypto.hpp"
#include "cogledger/learning/refine.hpp"

namespace cogledger::node {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ValidatorEntry {
  PublicKey key;
  std::uint64_t stake = 1;
};

// Node configuration file: one `key = value` per line, `#` starts a comment.
//   listen = 127.0.0.1:8787
//   data_dir = /var/lib/cogledger
//   seal_interval = 2              (seconds; 0 seals only on demand)
//   keyfile = node.key
//   reward = 10
//   refine.alpha = 0.5
//   refine.half_life_days = 30
//   refine.burn_threshold = 0.05
//   codify.k = 20
//   validator = <public key hex> <stake>   (repeatable; default: the node key)
//   quiz = quiz.json
//   gazetteer = names.txt          (one name per line)
//   queue_capacity = 1024
//   store_capacity = 1073741824    (bytes)
// Relative paths resolve against the config file's directory.
struct NodeConfig {
  std::string host = "127.0.0.1";
  int port = 8787;
  std::filesystem::path data_dir = "cogledger-data";
  double seal_interval_seconds = 2.0;
  std::filesystem::path keyfile = "node.key";
  std::uint64_t reward = 10;
  learning::RefineParams refine;
  std::size_t codify_k = 20;
  std::vector<ValidatorEntry> validators;
  std::optional<std::filesystem::path> quiz;
  std::optional<std::filesystem::path> gazetteer;
  std::size_t queue_capacity = 1024;
  std::uint64_t store_capacity = std::uint64_t{1} << 30;
};

NodeConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
NodeConfig load_config(const std::filesystem::path& path);

}  // namespace cogledger::node

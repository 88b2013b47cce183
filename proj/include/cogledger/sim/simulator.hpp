#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cogledger/core/chain.hpp"

namespace cogledger::sim {

class SimError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
  static constexpr std::string_view code() { return "InvalidScript"; }
};

struct SimValidator {
  std::string label;  // key seed = sha256(label)
  std::uint64_t stake = 1;
};

struct SimConfig {
  std::size_t node_count = 1;
  std::uint64_t seed = 0;
  std::uint64_t latency_min = 1;
  std::uint64_t latency_max = 1;
  std::uint64_t seal_interval = 10;  // nodes seal on multiples of this tick count
  std::vector<SimValidator> validators = {{"validator-0", 1}};
  // holds[node] = indices into `validators` whose keys the node holds. Empty
  // means every node holds every key.
  std::vector<std::vector<std::size_t>> holds;
  std::string owner_label = "owner";
  std::uint64_t tick_limit = 10'000'000;  // hard stop for runaway scripts

  ChainParams chain_params() const;
};

enum class MessageKind : std::uint8_t { BlockAnnounce, BlockRequest, BlockResponse };

std::string_view to_string(MessageKind kind);

struct Message {
  MessageKind kind = MessageKind::BlockAnnounce;
  std::size_t from = 0;
  std::size_t to = 0;
  std::optional<Block> block;  // announce and response
  std::uint64_t height = 0;    // request
};

struct NodeCounters {
  std::uint64_t sealed = 0;
  std::uint64_t invalid_dropped = 0;
  std::uint64_t reorgs = 0;
  std::uint64_t records_dropped = 0;  // pending records that no longer apply
};

// One node's chain view: a block tree rooted at genesis, the adopted head and
// the records waiting to be sealed.
class SimNode {
 public:
  SimNode(std::size_t id, std::size_t node_count, ChainParams params, const Block& genesis,
          std::vector<KeyPair> keys);

  std::size_t id() const { return id_; }
  const BlockHeader& head() const { return head_state().head; }
  const Hash32& head_hash() const { return head_hash_; }
  const LedgerState& head_state() const;
  std::vector<Block> main_chain() const;
  std::size_t blocks_known() const { return blocks_.size(); }
  std::size_t orphan_count() const;
  const std::vector<LedgerRecord>& pending() const { return pending_; }
  const NodeCounters& counters() const { return counters_; }

  void submit(LedgerRecord record);
  // True when pending is non-empty and this node holds the key scheduled for
  // the next height.
  bool can_seal() const;
  // Seals pending records on top of the head; returns announcements.
  std::vector<Message> seal(std::uint64_t now);
  std::vector<Message> announce_head() const;
  std::vector<Message> receive(const Message& message);

 private:
  struct Entry {
    Block block;
    std::shared_ptr<const LedgerState> state;
  };

  bool connect(const Block& block, const Hash32& hash);
  void adopt(const Hash32& new_head);
  std::vector<Message> announce_to_all(const Block& block, std::optional<std::size_t> except) const;

  std::size_t id_;
  std::size_t node_count_;
  ChainParams params_;
  std::vector<KeyPair> keys_;
  std::map<Hash32, Entry> blocks_;
  std::map<Hash32, std::vector<Block>> orphans_;  // keyed by missing parent hash
  std::set<Hash32> rejected_;
  Hash32 head_hash_;
  std::vector<Hash32> main_;  // main_[h] = hash of the main-chain block at height h
  std::vector<LedgerRecord> pending_;
  NodeCounters counters_;
};

// The message-handling state machine as a pure function.
std::pair<SimNode, std::vector<Message>> on_receive(SimNode node, const Message& message);

struct Submit {
  std::size_t node = 0;
  LedgerRecord record;
};
struct Partition {
  std::vector<std::vector<std::size_t>> groups;  // must cover every node exactly once
};
struct Heal {};
struct Stop {};

struct ScriptAction {
  std::uint64_t tick = 0;
  std::variant<Submit, Partition, Heal, Stop> action;
};

struct NodeReport {
  std::size_t id = 0;
  std::uint64_t head_height = 0;
  Hash32 head_hash;
  std::size_t blocks_known = 0;
  std::size_t orphans = 0;
  std::size_t pending = 0;
  NodeCounters counters;
};

struct SimReport {
  std::uint64_t final_tick = 0;
  bool stopped = false;  // true when a stop action ended the run
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t messages_dropped = 0;
  std::vector<NodeReport> nodes;

  bool converged() const;
  std::string to_json() const;
};

class Simulation {
 public:
  // Throws SimError on a bad config or script.
  Simulation(SimConfig config, std::vector<ScriptAction> script);

  SimReport run();
  const SimConfig& config() const { return config_; }
  const ChainParams& params() const { return params_; }
  const Block& genesis() const { return genesis_; }
  const SimNode& node(std::size_t i) const { return nodes_.at(i); }

 private:
  struct Delivery {
    Message message;
  };
  struct SealTimer {
    std::size_t node;
  };
  using Event = std::variant<ScriptAction, Delivery, SealTimer>;

  void push(std::uint64_t tick, Event event);
  void send(std::uint64_t now, std::vector<Message> messages);
  void arm_timer(std::uint64_t now, std::size_t node);
  bool separated(std::size_t a, std::size_t b) const;
  void apply_partition(const Partition& p);
  SimReport report(std::uint64_t final_tick, bool stopped) const;

  SimConfig config_;
  ChainParams params_;
  Block genesis_;
  std::vector<SimNode> nodes_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, Event> queue_;
  std::uint64_t seq_ = 0;
  std::vector<std::size_t> group_of_;  // empty when healed
  std::vector<bool> timer_armed_;
  std::mt19937_64 rng_;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
};

SimReport run(const SimConfig& config, const std::vector<ScriptAction>& script);

// Scenario files: see docs/simulation.md.
std::pair<SimConfig, std::vector<ScriptAction>> parse_scenario(std::string_view json);

}  // namespace cogledger::sim

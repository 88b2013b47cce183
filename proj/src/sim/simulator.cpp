#include "cogledger/sim/simulator.hpp"

#include <algorithm>
#include <array>
#include <json.hpp>

#include "cogledger/overloaded.hpp"

namespace cogledger::sim {

namespace {

Hash32 record_key(const LedgerRecord& r) { return sha256(canonical_encode(r)); }

bool beats(const BlockHeader& candidate, const BlockHeader& incumbent) {
  std::array<BlockHeader, 2> heads{incumbent, candidate};
  return fork_choice(heads) == candidate && !(candidate == incumbent);
}

std::vector<KeyPair> validator_keys(const SimConfig& config) {
  std::vector<KeyPair> keys;
  for (const auto& v : config.validators) keys.push_back(KeyPair::from_label(v.label));
  return keys;
}

void check_config(const SimConfig& c) {
  if (c.node_count == 0) throw SimError("node_count must be at least 1");
  if (c.latency_min > c.latency_max) throw SimError("latency min exceeds max");
  if (c.seal_interval == 0) throw SimError("seal_interval must be positive");
  if (c.validators.empty()) throw SimError("at least one validator is required");
  if (!c.holds.empty()) {
    if (c.holds.size() != c.node_count) throw SimError("holds must list every node");
    for (const auto& h : c.holds)
      for (std::size_t v : h)
        if (v >= c.validators.size()) throw SimError("holds references an unknown validator");
  }
}

}  // namespace

ChainParams SimConfig::chain_params() const {
  std::vector<Validator> vs;
  for (const auto& v : validators) vs.push_back(Validator::from_key(KeyPair::from_label(v.label).pub, v.stake));
  try {
    return ChainParams{ValidatorSet(std::move(vs)), account_of(KeyPair::from_label(owner_label).pub)};
  } catch (const ValidatorSetError& e) {
    throw SimError(std::string("bad validator set: ") + e.what());
  }
}

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::BlockAnnounce: return "BlockAnnounce";
    case MessageKind::BlockRequest: return "BlockRequest";
    case MessageKind::BlockResponse: return "BlockResponse";
  }
  return "Unknown";
}

SimNode::SimNode(std::size_t id, std::size_t node_count, ChainParams params, const Block& genesis,
                 std::vector<KeyPair> keys)
    : id_(id), node_count_(node_count), params_(std::move(params)), keys_(std::move(keys)) {
  head_hash_ = header_hash(genesis.header);
  blocks_.emplace(head_hash_, Entry{genesis, std::make_shared<const LedgerState>(genesis_state(genesis, params_))});
  main_.push_back(head_hash_);
}

const LedgerState& SimNode::head_state() const { return *blocks_.at(head_hash_).state; }

std::vector<Block> SimNode::main_chain() const {
  std::vector<Block> out;
  out.reserve(main_.size());
  for (const auto& h : main_) out.push_back(blocks_.at(h).block);
  return out;
}

std::size_t SimNode::orphan_count() const {
  std::size_t n = 0;
  for (const auto& [parent, blocks] : orphans_) n += blocks.size();
  return n;
}

void SimNode::submit(LedgerRecord record) { pending_.push_back(std::move(record)); }

bool SimNode::can_seal() const {
  if (pending_.empty()) return false;
  Hash32 scheduled = scheduled_validator(params_.validators, head().height + 1);
  return std::any_of(keys_.begin(), keys_.end(), [&](const KeyPair& k) { return key_id(k.pub) == scheduled; });
}

std::vector<Message> SimNode::seal(std::uint64_t now) {
  if (!can_seal()) return {};
  Hash32 scheduled = scheduled_validator(params_.validators, head().height + 1);
  const KeyPair& key =
      *std::find_if(keys_.begin(), keys_.end(), [&](const KeyPair& k) { return key_id(k.pub) == scheduled; });

  std::vector<LedgerRecord> batch(pending_.begin(),
                                  pending_.begin() + static_cast<std::ptrdiff_t>(std::min(pending_.size(), kMaxRecordsPerBlock)));
  std::optional<Block> block;
  while (!batch.empty() && !block) {
    try {
      block = seal_block(batch, head_state(), params_, key, now);
    } catch (const ChainError& e) {
      if (e.code() != ChainErrc::RecordInvalid || !e.record_index() || *e.record_index() >= batch.size()) throw;
      // The record no longer applies on this head (e.g. already on chain).
      auto dropped = batch.begin() + static_cast<std::ptrdiff_t>(*e.record_index());
      auto in_pending = std::find(pending_.begin(), pending_.end(), *dropped);
      if (in_pending != pending_.end()) pending_.erase(in_pending);
      batch.erase(dropped);
      ++counters_.records_dropped;
    }
  }
  if (!block) return {};

  Hash32 hash = header_hash(block->header);
  if (!connect(*block, hash)) return {};
  adopt(hash);
  ++counters_.sealed;
  return announce_to_all(*block, std::nullopt);
}

std::vector<Message> SimNode::announce_to_all(const Block& block, std::optional<std::size_t> except) const {
  std::vector<Message> out;
  for (std::size_t peer = 0; peer < node_count_; ++peer) {
    if (peer == id_ || (except && peer == *except)) continue;
    out.push_back(Message{MessageKind::BlockAnnounce, id_, peer, block, 0});
  }
  return out;
}

std::vector<Message> SimNode::announce_head() const { return announce_to_all(blocks_.at(head_hash_).block, std::nullopt); }

bool SimNode::connect(const Block& block, const Hash32& hash) {
  auto parent = blocks_.find(block.header.prev_hash);
  if (parent == blocks_.end()) return false;
  try {
    auto state = std::make_shared<const LedgerState>(next_state(*parent->second.state, block, params_));
    blocks_.emplace(hash, Entry{block, std::move(state)});
    return true;
  } catch (const ChainError&) {
    rejected_.insert(hash);
    ++counters_.invalid_dropped;
    return false;
  }
}

void SimNode::adopt(const Hash32& new_head) {
  // Walk both tips back to their common ancestor.
  std::vector<const Block*> old_branch;
  std::vector<const Block*> new_branch;
  const Block* a = &blocks_.at(head_hash_).block;
  const Block* b = &blocks_.at(new_head).block;
  while (a->header.height > b->header.height) {
    old_branch.push_back(a);
    a = &blocks_.at(a->header.prev_hash).block;
  }
  while (b->header.height > a->header.height) {
    new_branch.push_back(b);
    b = &blocks_.at(b->header.prev_hash).block;
  }
  while (!(a->header == b->header)) {
    old_branch.push_back(a);
    new_branch.push_back(b);
    a = &blocks_.at(a->header.prev_hash).block;
    b = &blocks_.at(b->header.prev_hash).block;
  }
  if (!old_branch.empty()) ++counters_.reorgs;

  std::set<Hash32> included;
  for (const Block* blk : new_branch)
    for (const auto& r : blk->records) included.insert(record_key(r));

  // Records of abandoned blocks go back to pending, ahead of newer ones.
  std::vector<LedgerRecord> next;
  std::set<Hash32> queued;
  auto enqueue = [&](const LedgerRecord& r) {
    Hash32 k = record_key(r);
    if (included.contains(k) || !queued.insert(k).second) return;
    next.push_back(r);
  };
  for (auto it = old_branch.rbegin(); it != old_branch.rend(); ++it)
    for (const auto& r : (*it)->records) enqueue(r);
  for (const auto& r : pending_) enqueue(r);
  pending_ = std::move(next);

  head_hash_ = new_head;
  main_.resize(head().height + 1);
  Hash32 h = new_head;
  for (std::uint64_t height = head().height;; --height) {
    main_[height] = h;
    if (height == 0) break;
    h = blocks_.at(h).block.header.prev_hash;
  }
}

std::vector<Message> SimNode::receive(const Message& m) {
  if (m.kind == MessageKind::BlockRequest) {
    if (m.height >= main_.size()) return {};
    return {Message{MessageKind::BlockResponse, id_, m.from, blocks_.at(main_[m.height]).block, 0}};
  }
  if (!m.block) return {};
  const Block& block = *m.block;
  const Hash32 hash = header_hash(block.header);
  if (blocks_.contains(hash) || rejected_.contains(hash)) return {};

  if (!blocks_.contains(block.header.prev_hash)) {
    if (block.header.height == 0) {
      rejected_.insert(hash);
      ++counters_.invalid_dropped;
      return {};
    }
    auto& waiting = orphans_[block.header.prev_hash];
    if (std::find(waiting.begin(), waiting.end(), block) == waiting.end()) waiting.push_back(block);
    return {Message{MessageKind::BlockRequest, id_, m.from, std::nullopt, block.header.height - 1}};
  }

  if (!connect(block, hash)) return {};
  std::optional<Hash32> best;
  BlockHeader best_header = head();
  if (beats(block.header, best_header)) {
    best = hash;
    best_header = block.header;
  }
  // Blocks that were waiting on this one can now connect too.
  std::vector<Hash32> frontier{hash};
  while (!frontier.empty()) {
    Hash32 parent = frontier.back();
    frontier.pop_back();
    auto it = orphans_.find(parent);
    if (it == orphans_.end()) continue;
    std::vector<Block> children = std::move(it->second);
    orphans_.erase(it);
    for (const auto& child : children) {
      Hash32 ch = header_hash(child.header);
      if (blocks_.contains(ch) || !connect(child, ch)) continue;
      frontier.push_back(ch);
      if (beats(child.header, best_header)) {
        best = ch;
        best_header = child.header;
      }
    }
  }
  if (!best) return {};
  adopt(*best);
  return announce_to_all(blocks_.at(*best).block, m.from);
}

std::pair<SimNode, std::vector<Message>> on_receive(SimNode node, const Message& message) {
  auto out = node.receive(message);
  return {std::move(node), std::move(out)};
}

bool SimReport::converged() const {
  return std::all_of(nodes.begin(), nodes.end(),
                     [&](const NodeReport& n) { return n.head_hash == nodes.front().head_hash; });
}

std::string SimReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["final_tick"] = final_tick;
  doc["stopped"] = stopped;
  doc["converged"] = converged();
  doc["messages"] = {{"sent", messages_sent}, {"delivered", messages_delivered}, {"dropped", messages_dropped}};
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : nodes) {
    doc["nodes"].push_back({{"id", n.id},
                            {"head_height", n.head_height},
                            {"head_hash", n.head_hash.hex()},
                            {"blocks_known", n.blocks_known},
                            {"orphans", n.orphans},
                            {"pending", n.pending},
                            {"sealed", n.counters.sealed},
                            {"invalid_dropped", n.counters.invalid_dropped},
                            {"reorgs", n.counters.reorgs},
                            {"records_dropped", n.counters.records_dropped}});
  }
  return doc.dump(2) + "\n";
}

Simulation::Simulation(SimConfig config, std::vector<ScriptAction> script)
    : config_((check_config(config), std::move(config))),
      params_(config_.chain_params()),
      rng_(config_.seed) {
  auto keys = validator_keys(config_);
  genesis_ = make_genesis(params_, keys.front());
  for (std::size_t i = 0; i < config_.node_count; ++i) {
    std::vector<KeyPair> held;
    if (config_.holds.empty()) {
      held = keys;
    } else {
      for (std::size_t v : config_.holds[i]) held.push_back(keys[v]);
    }
    nodes_.emplace_back(i, config_.node_count, params_, genesis_, std::move(held));
  }
  timer_armed_.assign(config_.node_count, false);

  std::stable_sort(script.begin(), script.end(),
                   [](const ScriptAction& a, const ScriptAction& b) { return a.tick < b.tick; });
  for (auto& action : script) {
    std::visit(Overloaded{
                   [&](const Submit& s) {
                     if (s.node >= config_.node_count) throw SimError("submit references an unknown node");
                   },
                   [&](const Partition& p) {
                     std::vector<int> seen(config_.node_count, 0);
                     for (const auto& g : p.groups) {
                       if (g.empty()) throw SimError("partition groups must not be empty");
                       for (std::size_t n : g) {
                         if (n >= config_.node_count) throw SimError("partition references an unknown node");
                         ++seen[n];
                       }
                     }
                     if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
                       throw SimError("partition groups must cover every node exactly once");
                   },
                   [](const Heal&) {},
                   [](const Stop&) {},
               },
               action.action);
    std::uint64_t tick = action.tick;
    push(tick, std::move(action));
  }
}

void Simulation::push(std::uint64_t tick, Event event) { queue_.emplace(std::make_pair(tick, seq_++), std::move(event)); }

bool Simulation::separated(std::size_t a, std::size_t b) const {
  return !group_of_.empty() && group_of_[a] != group_of_[b];
}

void Simulation::send(std::uint64_t now, std::vector<Message> messages) {
  const std::uint64_t span = config_.latency_max - config_.latency_min + 1;
  for (auto& m : messages) {
    ++sent_;
    if (separated(m.from, m.to)) {
      ++dropped_;
      continue;
    }
    std::uint64_t latency = config_.latency_min + rng_() % span;
    push(now + latency, Delivery{std::move(m)});
  }
}

void Simulation::arm_timer(std::uint64_t now, std::size_t node) {
  if (timer_armed_[node] || !nodes_[node].can_seal()) return;
  timer_armed_[node] = true;
  push((now / config_.seal_interval + 1) * config_.seal_interval, SealTimer{node});
}

void Simulation::apply_partition(const Partition& p) {
  group_of_.assign(config_.node_count, 0);
  for (std::size_t g = 0; g < p.groups.size(); ++g)
    for (std::size_t n : p.groups[g]) group_of_[n] = g;
  for (auto it = queue_.begin(); it != queue_.end();) {
    const auto* d = std::get_if<Delivery>(&it->second);
    if (d && separated(d->message.from, d->message.to)) {
      ++dropped_;
      it = queue_.erase(it);
    } else {
      ++it;
    }
  }
}

SimReport Simulation::report(std::uint64_t final_tick, bool stopped) const {
  SimReport r;
  r.final_tick = final_tick;
  r.stopped = stopped;
  r.messages_sent = sent_;
  r.messages_delivered = delivered_;
  r.messages_dropped = dropped_;
  for (const auto& n : nodes_) {
    r.nodes.push_back(NodeReport{n.id(), n.head().height, n.head_hash(), n.blocks_known(), n.orphan_count(),
                                 n.pending().size(), n.counters()});
  }
  return r;
}

SimReport Simulation::run() {
  std::uint64_t now = 0;
  while (!queue_.empty()) {
    auto it = queue_.begin();
    if (it->first.first > config_.tick_limit) return report(config_.tick_limit, true);
    now = it->first.first;
    Event event = std::move(it->second);
    queue_.erase(it);

    if (auto* action = std::get_if<ScriptAction>(&event)) {
      bool stop = false;
      std::visit(Overloaded{
                     [&](Submit& s) {
                       nodes_[s.node].submit(std::move(s.record));
                       arm_timer(now, s.node);
                     },
                     [&](const Partition& p) { apply_partition(p); },
                     [&](const Heal&) {
                       group_of_.clear();
                       for (auto& n : nodes_) send(now, n.announce_head());
                     },
                     [&](const Stop&) { stop = true; },
                 },
                 action->action);
      if (stop) return report(now, true);
    } else if (auto* d = std::get_if<Delivery>(&event)) {
      ++delivered_;
      std::size_t to = d->message.to;
      send(now, nodes_[to].receive(d->message));
      arm_timer(now, to);
    } else if (auto* t = std::get_if<SealTimer>(&event)) {
      timer_armed_[t->node] = false;
      send(now, nodes_[t->node].seal(now));
      arm_timer(now, t->node);
    }
  }
  return report(now, false);
}

SimReport run(const SimConfig& config, const std::vector<ScriptAction>& script) {
  return Simulation(config, script).run();
}

}  // namespace cogledger::sim

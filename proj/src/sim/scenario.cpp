#include <json.hpp>

#include "cogledger/memory/activity_json.hpp"
#include "cogledger/memory/pool.hpp"
#include "cogledger/sim/simulator.hpp"

namespace cogledger::sim {

namespace {

using nlohmann::json;

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : it->get<T>();
}

SimConfig parse_config(const json& c) {
  SimConfig cfg;
  cfg.node_count = get_or<std::size_t>(c, "nodes", cfg.node_count);
  cfg.seed = get_or<std::uint64_t>(c, "seed", cfg.seed);
  if (auto it = c.find("latency"); it != c.end()) {
    cfg.latency_min = it->at("min").get<std::uint64_t>();
    cfg.latency_max = it->at("max").get<std::uint64_t>();
  }
  cfg.seal_interval = get_or<std::uint64_t>(c, "seal_interval", cfg.seal_interval);
  cfg.tick_limit = get_or<std::uint64_t>(c, "tick_limit", cfg.tick_limit);
  cfg.owner_label = get_or<std::string>(c, "owner", cfg.owner_label);
  if (auto it = c.find("validators"); it != c.end()) {
    cfg.validators.clear();
    for (const auto& v : *it)
      cfg.validators.push_back({v.at("label").get<std::string>(), get_or<std::uint64_t>(v, "stake", 1)});
  }
  if (auto it = c.find("holds"); it != c.end()) cfg.holds = it->get<std::vector<std::vector<std::size_t>>>();
  return cfg;
}

}  // namespace

std::pair<SimConfig, std::vector<ScriptAction>> parse_scenario(std::string_view text) {
  try {
    json doc = json::parse(text);
    SimConfig cfg = parse_config(doc.value("config", json::object()));
    const AccountId actor = cfg.chain_params().owner;

    std::vector<ScriptAction> script;
    for (const auto& a : doc.at("actions")) {
      ScriptAction action;
      action.tick = a.at("tick").get<std::uint64_t>();
      const std::string type = a.at("type").get<std::string>();
      if (type == "submit") {
        Submit s;
        s.node = a.at("node").get<std::size_t>();
        s.record = activity_from_json(a.at("activity"), actor, Hash32{}, action.tick);
        action.action = std::move(s);
      } else if (type == "partition") {
        action.action = Partition{a.at("groups").get<std::vector<std::vector<std::size_t>>>()};
      } else if (type == "heal") {
        action.action = Heal{};
      } else if (type == "stop") {
        action.action = Stop{};
      } else {
        throw SimError("unknown action type '" + type + "'");
      }
      script.push_back(std::move(action));
    }
    return {std::move(cfg), std::move(script)};
  } catch (const json::exception& e) {
    throw SimError(std::string("malformed scenario: ") + e.what());
  } catch (const PoolError& e) {
    throw SimError(std::string("invalid activity in scenario: ") + e.what());
  }
}

}  // namespace cogledger::sim

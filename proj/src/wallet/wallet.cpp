#include "cogledger/wallet/wallet.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "cogledger/node/client.hpp"
#include "cogledger/node/keyfile.hpp"
#include "cogledger/store/content_store.hpp"

namespace cogledger::wallet {

namespace {

using nlohmann::json;
using node::HttpResult;
using node::NodeClient;

// Raised inside command handlers; carries the exit code.
struct Failure {
  int code;
  std::string message;
};

struct Options {
  std::string node_url = "http://127.0.0.1:8787";
  std::string keyfile = "node.key";
  std::string token;
  bool json_output = false;
};

std::string read_line(const WalletEnv& env) {
  std::string line;
  if (!env.in || !std::getline(*env.in, line)) throw Failure{kUsage, "no input available"};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string passphrase(const WalletEnv& env, std::ostream& err, bool confirm) {
  if (env.getenv)
    if (auto p = env.getenv("COGLEDGER_PASSPHRASE")) return *p;
  err << "Passphrase: " << std::flush;
  std::string first = read_line(env);
  if (confirm) {
    err << "Repeat passphrase: " << std::flush;
    if (read_line(env) != first) throw Failure{kUsage, "passphrases do not match"};
  }
  return first;
}

json parse_json(const HttpResult& r) {
  try {
    return json::parse(r.body);
  } catch (const json::exception&) {
    throw Failure{kNodeError, "node returned a malformed response"};
  }
}

// Maps a non-2xx response onto the wallet's exit codes.
json expect_ok(const HttpResult& r) {
  if (r.status >= 200 && r.status < 300) return parse_json(r);
  std::string message = "HTTP " + std::to_string(r.status);
  try {
    json body = json::parse(r.body);
    message = body.value("code", "Error") + ": " + body.value("message", "");
  } catch (const json::exception&) {
  }
  if (r.status == 401 || r.status == 403) throw Failure{kAuthError, message};
  throw Failure{kNodeError, message};
}

class Session {
 public:
  Session(const Options& opts, const WalletEnv& env, std::ostream& err) : client_(opts.node_url) {
    if (!opts.token.empty()) {
      client_.set_bearer(opts.token);
      return;
    }
    try {
      auto keys = node::read_keyfile(opts.keyfile, passphrase(env, err, false));
      client_.set_owner_key(keys.account);
    } catch (const node::KeyfileError& e) {
      throw Failure{kAuthError, e.what()};
    }
  }

  json get(const std::string& target) { return expect_ok(call([&] { return client_.get(target); })); }
  json post(const std::string& target, const std::string& body = "",
            const std::string& type = "application/json") {
    return expect_ok(call([&] { return client_.post(target, body, type); }));
  }

 private:
  template <class F>
  HttpResult call(F&& f) {
    try {
      return f();
    } catch (const node::ClientError& e) {
      throw Failure{kNodeError, e.what()};
    }
  }

  NodeClient client_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUsage, "cannot read " + path};
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void print_assets(const json& a, std::ostream& out) {
  out << "COG: " << a.at("cog_balance").get<std::uint64_t>() << "\n";
  const std::pair<const char*, const char*> sections[] = {
      {"badges", "Badges"}, {"knowledge", "Knowledge objects"}, {"models", "Models"}};
  for (const auto& [key, title] : sections) {
    const auto& items = a.at("groups").at(key);
    out << title << " (" << items.size() << ")\n";
    if (items.empty()) out << "  (none)\n";
    for (const auto& item : items) {
      out << "  " << item.at("token_id").get<std::string>();
      if (item.contains("trait_code")) out << "  " << item["trait_code"].get<std::string>();
      if (item.contains("weight")) out << "  weight " << item["weight"].get<std::string>();
      out << "  minted " << item.at("minted_at").get<std::uint64_t>() << "\n";
    }
  }
}

void print_knowledge(const json& k, std::ostream& out) {
  const json& p = k.at("payload");
  out << "token    " << k.at("token_id").get<std::string>() << "\n";
  out << "content  " << k.at("content_hash").get<std::string>() << " (" << k.at("content_length") << " bytes)\n";
  out << "weight   " << k.value("weight", "") << "\n";
  out << "window   " << p.at("window").at("from") << " .. " << p.at("window").at("to") << "\n";
  out << "sources  " << p.at("source_record_ids").size() << " records\n";
  std::size_t width = 4;
  for (const auto& t : p.at("vocabulary")) width = std::max(width, t.at("term").get<std::string>().size());
  out << "vocabulary\n";
  for (const auto& t : p.at("vocabulary"))
    out << "  " << std::left << std::setw(static_cast<int>(width)) << t.at("term").get<std::string>() << "  "
        << t.at("score").get<std::string>() << "\n";
  out << "mentions\n";
  for (const auto& m : p.at("mentions")) out << "  " << m.get<std::string>() << "\n";
}

void print_grants(const json& g, std::ostream& out) {
  const auto& list = g.at("grants");
  if (list.empty()) out << "no grants\n";
  for (const auto& x : list) {
    std::string scopes;
    for (const auto& s : x.at("scopes")) scopes += (scopes.empty() ? "" : ",") + s.get<std::string>();
    out << x.at("grant_id").get<std::string>() << "  " << std::left << std::setw(8)
        << x.at("status").get<std::string>() << "  " << x.at("display_name").get<std::string>() << "  [" << scopes
        << "]  autonomy " << x.at("autonomy_level") << "\n";
  }
}

}  // namespace

WalletEnv process_env() {
  WalletEnv env;
  env.in = &std::cin;
  env.getenv = [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
  return env;
}

int run_wallet(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const WalletEnv& env) {
  CLI::App app{"Owner wallet for a cognitive ledger node", "cogwallet"};
  app.require_subcommand(1);
  Options opts;
  if (env.getenv) {
    if (auto url = env.getenv("COGLEDGER_NODE")) opts.node_url = *url;
    if (auto kf = env.getenv("COGLEDGER_KEYFILE")) opts.keyfile = *kf;
  }
  app.add_option("--node", opts.node_url, "Node base URL");
  app.add_option("--keyfile", opts.keyfile, "Encrypted key file");
  app.add_option("--token", opts.token, "Act as a shell with this bearer secret instead of the owner key");
  app.add_flag("--json", opts.json_output, "Print raw JSON responses");

  bool force = false;
  auto* keygen = app.add_subcommand("keygen", "Create a new encrypted key file");
  keygen->add_flag("--force", force, "Overwrite an existing key file");

  auto* assets = app.add_subcommand("assets", "Show COG balance and NFTs by class");

  std::string token_id;
  auto* knowledge = app.add_subcommand("knowledge", "Inspect knowledge objects");
  knowledge->require_subcommand(1);
  auto* knowledge_show = knowledge->add_subcommand("show", "Show one knowledge object");
  knowledge_show->add_option("token_id", token_id)->required();

  std::string csv_path;
  auto* import = app.add_subcommand("import", "Import a browsing-history CSV");
  import->add_option("csv", csv_path)->required();

  auto* quiz = app.add_subcommand("quiz", "Take the personality quiz");

  std::string grant_id;
  bool pending_only = false;
  auto* grants = app.add_subcommand("grants", "Manage shell capability grants");
  grants->require_subcommand(1);
  auto* grants_list = grants->add_subcommand("list", "List grants");
  grants_list->add_flag("--pending", pending_only, "Only pending grants");
  auto* grants_approve = grants->add_subcommand("approve", "Approve a pending grant");
  grants_approve->add_option("grant_id", grant_id)->required();
  auto* grants_revoke = grants->add_subcommand("revoke", "Revoke a grant");
  grants_revoke->add_option("grant_id", grant_id)->required();

  std::optional<std::uint64_t> from, to;
  std::optional<std::size_t> k;
  auto* codify = app.add_subcommand("codify", "Codify uncodified activity into a knowledge object");
  codify->add_option("--from", from, "Window start (unix seconds)");
  codify->add_option("--to", to, "Window end (unix seconds)");
  codify->add_option("--k", k, "Vocabulary size");

  auto* refine = app.add_subcommand("refine", "Re-weight knowledge objects and burn stale ones");
  auto* train = app.add_subcommand("train", "Train a preference model from knowledge objects");

  auto* burn = app.add_subcommand("burn", "Burn a token");
  burn->add_option("token_id", token_id)->required();

  std::string export_path;
  auto* exp = app.add_subcommand("export", "Write a knowledge payload to a file after verifying it");
  exp->add_option("token_id", token_id)->required();
  exp->add_option("path", export_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (keygen->parsed()) {
      if (std::filesystem::exists(opts.keyfile) && !force)
        throw Failure{kUsage, opts.keyfile + " exists; pass --force to overwrite"};
      auto keys = node::KeyBundle::generate();
      node::write_keyfile(opts.keyfile, keys, passphrase(env, err, true));
      if (opts.json_output) {
        out << json{{"keyfile", opts.keyfile},
                    {"account_public_key", keys.account.pub.hex()},
                    {"validator_public_key", keys.validator.pub.hex()},
                    {"account_id", account_of(keys.account.pub).hex()}}
                   .dump(2)
            << "\n";
      } else {
        out << "wrote " << opts.keyfile << "\n";
        out << "account    " << keys.account.pub.hex() << "\n";
        out << "validator  " << keys.validator.pub.hex() << "\n";
        out << "account id " << account_of(keys.account.pub).hex() << "\n";
      }
      return kOk;
    }

    Session session(opts, env, err);
    auto emit = [&](const json& j, auto&& pretty) {
      if (opts.json_output) {
        out << j.dump(2) << "\n";
      } else {
        pretty(j);
      }
    };

    if (assets->parsed()) {
      emit(session.get("/assets"), [&](const json& j) { print_assets(j, out); });
    } else if (knowledge_show->parsed()) {
      emit(session.get("/knowledge/" + token_id), [&](const json& j) { print_knowledge(j, out); });
    } else if (import->parsed()) {
      json r = session.post("/activities/import", read_file(csv_path), "text/csv");
      emit(r, [&](const json& j) {
        out << "imported " << j.at("imported") << " records, " << j.at("duplicates") << " duplicates\n";
        for (const auto& e : j.at("errors"))
          out << "  row " << e.at("row") << ": " << e.at("reason").get<std::string>() << "\n";
      });
    } else if (quiz->parsed()) {
      json q = session.get("/quiz");
      json answers = json::object();
      for (const auto& question : q.at("questions")) {
        out << question.at("text").get<std::string>() << "\n  answer -2 (disagree) .. 2 (agree): " << std::flush;
        int value = 0;
        while (true) {
          std::string line = read_line(env);
          try {
            std::size_t used = 0;
            value = std::stoi(line, &used);
            if (used == line.size() && value >= -2 && value <= 2) break;
          } catch (const std::exception&) {
          }
          out << "  enter an integer from -2 to 2: " << std::flush;
        }
        answers[question.at("id").get<std::string>()] = value;
      }
      json r = session.post("/quiz/answers", json{{"answers", answers}}.dump());
      emit(r, [&](const json& j) {
        out << "type " << j.at("code").get<std::string>() << "\n";
        for (const auto& [axis, score] : j.at("axis_scores").items()) out << "  " << axis << " " << score << "\n";
        if (j.contains("badge_token_id")) out << "badge " << j["badge_token_id"].get<std::string>() << "\n";
      });
    } else if (grants_list->parsed()) {
      emit(session.get(pending_only ? "/grants/pending" : "/grants"), [&](const json& j) { print_grants(j, out); });
    } else if (grants_approve->parsed()) {
      json r = session.post("/grants/" + grant_id + "/approve");
      emit(r, [&](const json& j) {
        out << "approved " << j.at("grant_id").get<std::string>() << "\n";
        out << "secret (shown once) " << j.at("secret").get<std::string>() << "\n";
      });
    } else if (grants_revoke->parsed()) {
      json r = session.post("/grants/" + grant_id + "/revoke");
      emit(r, [&](const json& j) { out << "revoked " << j.at("grant_id").get<std::string>() << "\n"; });
    } else if (codify->parsed()) {
      json body = json::object();
      if (from) body["from"] = *from;
      if (to) body["to"] = *to;
      if (k) body["k"] = *k;
      json r = session.post("/admin/codify", body.dump());
      emit(r, [&](const json& j) {
        out << "knowledge object " << j.at("token_id").get<std::string>() << " from " << j.at("records")
            << " records, reward " << j.at("reward") << " COG\n";
      });
    } else if (refine->parsed()) {
      json r = session.post("/admin/refine");
      emit(r, [&](const json& j) {
        for (const auto& in : j.at("inputs"))
          out << in.at("token_id").get<std::string>() << "  hits " << in.at("hit_count") << "  "
              << in.at("old_weight").get<std::string>() << " -> " << in.at("new_weight").get<std::string>() << "\n";
        out << j.at("updates").size() << " updated, " << j.at("burns").size() << " burned\n";
      });
    } else if (train->parsed()) {
      json r = session.post("/admin/train");
      emit(r, [&](const json& j) {
        out << "model " << j.at("token_id").get<std::string>() << " over " << j.at("built_from").size()
            << " knowledge objects, " << j.at("weights").size() << " terms" << (j.at("minted") ? "" : " (unchanged)")
            << "\n";
      });
    } else if (burn->parsed()) {
      json r = session.post("/admin/burn/" + token_id);
      emit(r, [&](const json& j) { out << "burned " << j.at("token_id").get<std::string>() << "\n"; });
    } else if (exp->parsed()) {
      json k_doc = session.get("/knowledge/" + token_id);
      Bytes bytes;
      ContentAddress addr;
      try {
        bytes = from_hex(k_doc.at("payload_hex").get<std::string>());
        addr = ContentAddress{Hash32::from_hex(k_doc.at("content_hash").get<std::string>()),
                              k_doc.at("content_length").get<std::uint64_t>()};
      } catch (const std::exception&) {
        throw Failure{kNodeError, "node returned a malformed knowledge object"};
      }
      if (!verify(addr, bytes)) throw Failure{kNodeError, "payload does not match its content hash; nothing written"};
      std::ofstream file(export_path, std::ios::binary | std::ios::trunc);
      if (!file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())))
        throw Failure{kUsage, "cannot write " + export_path};
      out << "wrote " << bytes.size() << " bytes to " << export_path << "\n";
    }
    return kOk;
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const node::KeyfileError& e) {
    err << "error: " << e.what() << "\n";
    return kAuthError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNodeError;
  }
}

}  // namespace cogledger::wallet

// Runs a ledger node: loads the config and key file, then serves the HTTP API
// until SIGINT or SIGTERM.
#include <CLI11.hpp>
#include <csignal>
#include <cstdlib>
#include <iostream>

#include "cogledger/node/api_server.hpp"
#include "cogledger/node/keyfile.hpp"

using namespace cogledger::node;

int main(int argc, char** argv) {
  CLI::App app{"Cognitive ledger node"};
  std::string config_path;
  app.add_option("config", config_path, "Node configuration file")->required()->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  // Block the shutdown signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    NodeConfig config = load_config(config_path);
    std::string passphrase;
    if (const char* p = std::getenv("COGLEDGER_PASSPHRASE")) {
      passphrase = p;
    } else {
      std::cerr << "Passphrase for " << config.keyfile.string() << ": " << std::flush;
      std::getline(std::cin, passphrase);
    }
    KeyBundle keys = read_keyfile(config.keyfile, passphrase);

    NodeOptions options;
    options.config = config;
    options.key = keys.account;
    options.validator = keys.validator;
    Node node(std::move(options));
    ApiServer server(node);
    int port = server.bind(config.host, config.port);
    if (port < 0) {
      std::cerr << "cannot listen on " << config.host << ":" << config.port << "\n";
      return 1;
    }
    server.start();
    std::cerr << "listening on " << config.host << ":" << port << ", head height "
              << node.head().at("height") << "\n";

    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "shutting down\n";
    server.stop();
  } catch (const KeyfileError& e) {
    std::cerr << "key file: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

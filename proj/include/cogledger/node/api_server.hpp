#pragma once

#include <memory>
#include <string>
#include <thread>

#include "cogledger/node/node.hpp"

namespace httplib {
class Server;
}

namespace cogledger::node {

// HTTP/JSON front end for a Node. Route table: docs/api.md.
class ApiServer {
 public:
  explicit ApiServer(Node& node);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Binds without serving yet; port 0 picks a free port. Returns the port.
  int bind(const std::string& host, int port);
  // Serves on the calling thread until stop().
  void serve();
  // Serves on a background thread.
  void start();
  void stop();

 private:
  void install_routes();

  Node& node_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace cogledger::node

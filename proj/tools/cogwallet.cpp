#include <iostream>

#include "cogledger/wallet/wallet.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cogledger::wallet::run_wallet(args, std::cout, std::cerr, cogledger::wallet::process_env());
}

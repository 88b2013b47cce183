#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cogledger::wallet {

enum ExitCode : int { kOk = 0, kUsage = 1, kNodeError = 2, kAuthError = 3 };

struct WalletEnv {
  std::istream* in = nullptr;  // prompts (passphrase, quiz answers)
  std::function<std::optional<std::string>(const std::string&)> getenv;
};

WalletEnv process_env();

// `args` excludes the program name. Passphrase comes from
// COGLEDGER_PASSPHRASE when set, else a prompt on `env.in`.
int run_wallet(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const WalletEnv& env);

}  // namespace cogledger::wallet

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cogledger/crypto.hpp"

namespace cogledger {

struct Validator {
  Hash32 id;  // key_id(key)
  PublicKey key;
  std::uint64_t stake = 0;

  static Validator from_key(const PublicKey& key, std::uint64_t stake) { return {key_id(key), key, stake}; }
  bool operator==(const Validator&) const = default;
};

class ValidatorSetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-empty, duplicate-free validator list. Configuration order is kept; the
// first entry signs the genesis block.
class ValidatorSet {
 public:
  explicit ValidatorSet(std::vector<Validator> validators);

  const std::vector<Validator>& members() const { return validators_; }
  const Validator& first() const { return validators_.front(); }
  const Validator* find(const Hash32& id) const;

  bool operator==(const ValidatorSet&) const = default;

 private:
  std::vector<Validator> validators_;
};

// Stake-weighted round robin. Conceptually each validator is repeated `stake`
// times in ascending id order and the entry at height mod total stake is
// chosen; zero-stake validators are skipped unless every stake is zero, in
// which case it is plain round robin over sorted ids.
// Throws ValidatorSetError("EmptySet") on an empty span.
Hash32 scheduled_validator(std::span<const Validator> validators, std::uint64_t height);

inline Hash32 scheduled_validator(const ValidatorSet& set, std::uint64_t height) {
  return scheduled_validator(set.members(), height);
}

}  // namespace cogledger

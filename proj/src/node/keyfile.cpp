#include "cogledger/node/keyfile.hpp"

#include <sodium.h>
#include <sys/stat.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace cogledger::node {

namespace {

nlohmann::json read_doc(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KeyfileError("cannot read keyfile " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  try {
    return nlohmann::json::parse(text.str());
  } catch (const nlohmann::json::exception&) {
    throw KeyfileError("keyfile is not valid JSON");
  }
}

std::array<std::uint8_t, crypto_secretbox_KEYBYTES> derive(std::string_view passphrase, const Bytes& salt,
                                                           unsigned long long ops, std::size_t mem) {
  std::array<std::uint8_t, crypto_secretbox_KEYBYTES> key{};
  if (salt.size() != crypto_pwhash_SALTBYTES) throw KeyfileError("keyfile salt has the wrong size");
  if (crypto_pwhash(key.data(), key.size(), passphrase.data(), passphrase.size(), salt.data(), ops, mem,
                    crypto_pwhash_ALG_ARGON2ID13) != 0)
    throw KeyfileError("key derivation failed (out of memory?)");
  return key;
}

}  // namespace

void write_keyfile(const std::filesystem::path& path, const KeyBundle& keys, std::string_view passphrase) {
  crypto_init();
  Bytes salt(crypto_pwhash_SALTBYTES);
  Bytes nonce(crypto_secretbox_NONCEBYTES);
  random_bytes(salt);
  random_bytes(nonce);
  const unsigned long long ops = crypto_pwhash_OPSLIMIT_INTERACTIVE;
  const std::size_t mem = crypto_pwhash_MEMLIMIT_INTERACTIVE;
  auto box_key = derive(passphrase, salt, ops, mem);

  std::array<std::uint8_t, 64> seed{};
  auto a = keys.account.seed();
  auto v = keys.validator.seed();
  std::copy(a.begin(), a.end(), seed.begin());
  std::copy(v.begin(), v.end(), seed.begin() + 32);
  sodium_memzero(a.data(), a.size());
  sodium_memzero(v.data(), v.size());
  Bytes cipher(seed.size() + crypto_secretbox_MACBYTES);
  crypto_secretbox_easy(cipher.data(), seed.data(), seed.size(), nonce.data(), box_key.data());
  sodium_memzero(box_key.data(), box_key.size());
  sodium_memzero(seed.data(), seed.size());

  nlohmann::ordered_json doc = {{"version", 1},
                                {"kdf", "argon2id13"},
                                {"opslimit", ops},
                                {"memlimit", mem},
                                {"salt", to_hex(salt)},
                                {"nonce", to_hex(nonce)},
                                {"ciphertext", to_hex(cipher)},
                                {"account_public_key", keys.account.pub.hex()},
                                {"validator_public_key", keys.validator.pub.hex()}};
  std::string text = doc.dump(2) + "\n";

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw KeyfileError("cannot write keyfile " + path.string());
    ::chmod(tmp.c_str(), 0600);
    out << text;
    if (!out.flush()) throw KeyfileError("cannot write keyfile " + path.string());
  }
  std::filesystem::rename(tmp, path);
  ::chmod(path.c_str(), 0600);
}

KeyBundle read_keyfile(const std::filesystem::path& path, std::string_view passphrase) {
  crypto_init();
  auto doc = read_doc(path);
  try {
    if (doc.at("version").get<int>() != 1 || doc.at("kdf").get<std::string>() != "argon2id13")
      throw KeyfileError("unsupported keyfile format");
    Bytes salt = from_hex(doc.at("salt").get<std::string>());
    Bytes nonce = from_hex(doc.at("nonce").get<std::string>());
    Bytes cipher = from_hex(doc.at("ciphertext").get<std::string>());
    if (nonce.size() != crypto_secretbox_NONCEBYTES || cipher.size() != 64 + crypto_secretbox_MACBYTES)
      throw KeyfileError("keyfile fields have the wrong size");
    auto box_key = derive(passphrase, salt, doc.at("opslimit").get<unsigned long long>(),
                          doc.at("memlimit").get<std::size_t>());
    std::array<std::uint8_t, 64> seed{};
    int rc = crypto_secretbox_open_easy(seed.data(), cipher.data(), cipher.size(), nonce.data(), box_key.data());
    sodium_memzero(box_key.data(), box_key.size());
    if (rc != 0) throw KeyfileError("wrong passphrase or corrupted keyfile");
    KeyBundle keys{KeyPair::from_seed(std::span<const std::uint8_t, 32>(seed.data(), 32)),
                   KeyPair::from_seed(std::span<const std::uint8_t, 32>(seed.data() + 32, 32))};
    sodium_memzero(seed.data(), seed.size());
    if (keys.account.pub.hex() != doc.at("account_public_key").get<std::string>() ||
        keys.validator.pub.hex() != doc.at("validator_public_key").get<std::string>())
      throw KeyfileError("keyfile public keys do not match its secrets");
    return keys;
  } catch (const nlohmann::json::exception&) {
    throw KeyfileError("keyfile is missing fields");
  } catch (const std::invalid_argument&) {
    throw KeyfileError("keyfile has malformed hex");
  }
}

PublicKey keyfile_account_key(const std::filesystem::path& path) {
  auto doc = read_doc(path);
  try {
    return PublicKey::from_hex(doc.at("account_public_key").get<std::string>());
  } catch (const std::exception&) {
    throw KeyfileError("keyfile has no valid public key");
  }
}

}  // namespace cogledger::node

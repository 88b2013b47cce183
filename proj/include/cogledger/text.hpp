#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cogledger {

// Index tokenizer: ASCII letters are lowercased, tokens split on any byte that
// is not an ASCII letter or digit, and tokens shorter than 2 bytes are dropped.
// Bytes >= 0x80 are kept inside tokens so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

std::string ascii_lower(std::string_view s);

// Host part of an absolute URL ("scheme://host[:port]/..."), lowercased.
// Falls back to everything before the first '/' when there is no scheme.
std::string url_host(std::string_view url);

}  // namespace cogledger

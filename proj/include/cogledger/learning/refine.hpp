#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cogledger/fixed_point.hpp"
#include "cogledger/token/ops.hpp"

namespace cogledger::learning {

struct RefineParams {
  double alpha = 0.5;
  double half_life_days = 30.0;
  double burn_threshold = 0.05;
};

struct RefineInput {
  TokenId token_id;
  Fixed6 weight;
  std::uint64_t mint_time = 0;
  std::uint64_t hit_count = 0;
};

struct RefineOutput {
  std::vector<UpdateWeight> updates;
  std::vector<Burn> burns;  // reason = Refinery
};

// w = alpha * hits / max_hits (0 when every count is zero)
//   + (1 - alpha) * 2^(-age_days / half_life_days)
// Ages before mint_time clamp to zero.
double refined_weight(std::uint64_t hit_count, std::uint64_t max_hits, std::uint64_t mint_time,
                      std::uint64_t now, const RefineParams& params = {});

// Emits an UpdateWeight for every object whose weight moves by more than
// 1e-6 and a Burn for every object whose new weight is below the threshold.
// Output follows input order.
RefineOutput refine(std::span<const RefineInput> objects, std::uint64_t now, const RefineParams& params = {});

}  // namespace cogledger::learning

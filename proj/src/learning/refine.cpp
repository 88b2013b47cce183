#include "cogledger/learning/refine.hpp"

#include <algorithm>
#include <cmath>

namespace cogledger::learning {

double refined_weight(std::uint64_t hit_count, std::uint64_t max_hits, std::uint64_t mint_time, std::uint64_t now,
                      const RefineParams& params) {
  double usage = max_hits == 0 ? 0.0 : static_cast<double>(hit_count) / static_cast<double>(max_hits);
  double age_days = now > mint_time ? static_cast<double>(now - mint_time) / 86400.0 : 0.0;
  double recency = std::exp2(-age_days / params.half_life_days);
  return params.alpha * usage + (1.0 - params.alpha) * recency;
}

RefineOutput refine(std::span<const RefineInput> objects, std::uint64_t now, const RefineParams& params) {
  std::uint64_t max_hits = 0;
  for (const auto& o : objects) max_hits = std::max(max_hits, o.hit_count);

  RefineOutput out;
  for (const auto& o : objects) {
    double w = refined_weight(o.hit_count, max_hits, o.mint_time, now, params);
    if (std::abs(w - o.weight.to_double()) > 1e-6)
      out.updates.push_back(UpdateWeight{o.token_id, Fixed6::from_double(w)});
    if (w < params.burn_threshold)
      out.burns.push_back(Burn{o.token_id, static_cast<std::uint64_t>(BurnReason::Refinery)});
  }
  return out;
}

}  // namespace cogledger::learning

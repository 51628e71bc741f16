#pragma once

// Markov-chain encoder/decoder pairs: forward kernels p(Z_t | Z_{t-1}) with
// Z_0 = X, reverse kernels p(Z_{t-1} | Z_t), and a terminal code prior.

#include <vector>

#include "covkit/core/distribution.hpp"
#include "covkit/core/types.hpp"
#include "covkit/stochastic/kernel.hpp"

namespace covkit::stochastic {

struct MarkovChainModel {
  std::vector<ConditionalKernel> forward;
  std::vector<ConditionalKernel> reverse;
  CodeDistribution terminal;

  int length() const { return static_cast<int>(forward.size()); }

  void validate() const {
    if (forward.size() != reverse.size())
      throw DimensionError("MarkovChainModel: forward/reverse chain lengths differ");
    if (forward.empty()) throw DimensionError("MarkovChainModel: empty chain");
    for (std::size_t t = 0; t < forward.size(); ++t) {
      if (forward[t].target_dim() != reverse[t].cond_dim() ||
          forward[t].cond_dim() != reverse[t].target_dim())
        throw DimensionError("MarkovChainModel: kernel dims not chain-compatible at step " +
                             std::to_string(t + 1));
      if (t + 1 < forward.size() && forward[t].target_dim() != forward[t + 1].cond_dim())
        throw DimensionError("MarkovChainModel: forward chain dims mismatch at step " +
                             std::to_string(t + 1));
    }
    if (terminal.dim() != forward.back().target_dim())
      throw DimensionError("MarkovChainModel: terminal prior dim mismatch");
  }
};

// Draw z_1..z_T from the encoder chain started at x.
inline std::vector<Vec> sample_chain_path(const MarkovChainModel& model, const Vec& x,
                                          RngStream& rng) {
  std::vector<Vec> path;
  path.reserve(model.forward.size());
  Vec state = x;
  for (const auto& k : model.forward) {
    state = k.sample(state, rng);
    path.push_back(state);
  }
  return path;
}

}  // namespace covkit::stochastic

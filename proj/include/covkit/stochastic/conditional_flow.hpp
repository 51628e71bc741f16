#pragma once

// Conditional bijections x = g(s; c): invertible in the noise argument s for
// every conditioning value c. The Jacobian taken is with respect to s.

#include <functional>
#include <utility>
#include <vector>

#include "covkit/core/distribution.hpp"
#include "covkit/core/dual.hpp"
#include "covkit/core/map.hpp"
#include "covkit/core/types.hpp"

namespace covkit::stochastic {

class ConditionalFlow {
 public:
  ConditionalFlow() = default;

  // fwd(s, c) -> x and inv(x, c) -> s as generic callables over vectors of
  // doubles or duals.
  template <class Fwd, class Inv>
  ConditionalFlow(int target_dim, int cond_dim, Fwd fwd, Inv inv)
      : target_dim_(target_dim),
        cond_dim_(cond_dim),
        fwd64_([fwd](const std::vector<double>& s, const std::vector<double>& c) {
          return fwd(s, c);
        }),
        fwdd_([fwd](const DualVec& s, const DualVec& c) { return fwd(s, c); }),
        inv64_([inv](const std::vector<double>& x, const std::vector<double>& c) {
          return inv(x, c);
        }) {}

  int target_dim() const { return target_dim_; }
  int cond_dim() const { return cond_dim_; }
  bool valid() const { return static_cast<bool>(fwd64_); }

  Vec forward(const Vec& s, const Vec& c) const {
    require_dim(s, target_dim_, "ConditionalFlow noise");
    require_dim(c, cond_dim_, "ConditionalFlow condition");
    return detail::from_std(fwd64_(detail::to_std<double>(s), detail::to_std<double>(c)));
  }

  Vec inverse(const Vec& x, const Vec& c) const {
    require_dim(x, target_dim_, "ConditionalFlow target");
    return detail::from_std(inv64_(detail::to_std<double>(x), detail::to_std<double>(c)));
  }

  // d g / d s at (s, c), by dual numbers seeded on s only.
  Mat jacobian_noise(const Vec& s, const Vec& c) const {
    DualVec sd(static_cast<std::size_t>(target_dim_));
    for (int i = 0; i < target_dim_; ++i)
      sd[static_cast<std::size_t>(i)] = Dual::seeded(s(i), target_dim_, i);
    DualVec cd(static_cast<std::size_t>(cond_dim_));
    for (int i = 0; i < cond_dim_; ++i) cd[static_cast<std::size_t>(i)] = Dual(c(i));
    const DualVec out = fwdd_(sd, cd);
    Mat J = Mat::Zero(target_dim_, target_dim_);
    for (int r = 0; r < target_dim_; ++r)
      if (out[static_cast<std::size_t>(r)].d.size() != 0)
        J.row(r) = out[static_cast<std::size_t>(r)].d;
    return J;
  }

 private:
  int target_dim_ = 0;
  int cond_dim_ = 0;
  std::function<std::vector<double>(const std::vector<double>&, const std::vector<double>&)>
      fwd64_;
  std::function<DualVec(const DualVec&, const DualVec&)> fwdd_;
  std::function<std::vector<double>(const std::vector<double>&, const std::vector<double>&)>
      inv64_;
};

// Decoder/encoder pair of conditional flows with their outsourced-noise
// priors: x = g(s_x; z), s_x ~ p(S_x) and z = f(s_z; x), s_z ~ p(S_z).
struct ConditionalFlowPair {
  ConditionalFlow decoder;  // target X, condition Z
  ConditionalFlow encoder;  // target Z, condition X
  CodeDistribution noise_x;
  CodeDistribution noise_z;

  Vec encoder_sample(const Vec& x, RngStream& rng) const {
    return encoder.forward(noise_z.sample(rng), x);
  }
};

}  // namespace covkit::stochastic

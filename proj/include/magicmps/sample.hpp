#pragma once

#include "magicmps/mps.hpp"

namespace magicmps {

struct SampleResult {
  std::vector<std::size_t> configuration;
  double probability = 0.0;  // product of the chain of conditionals
};

/// Draws basis configurations from a normalized MPS with exact Born-rule
/// probabilities, sweeping left to right over the conditionals.
class PerfectSampler {
 public:
  explicit PerfectSampler(const MatrixProductState& psi);
  SampleResult sample(Rng& rng) const;

 private:
  MatrixProductState psi_;  // right-canonical, center 0
};

SampleResult perfect_sample(const MatrixProductState& psi, Rng& rng);

}  // namespace magicmps

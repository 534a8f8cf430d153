#include "stpca/types.hpp"

namespace stpca {

void ModelParams::validate() const {
  if (p < 2) throw ConfigError("tensor order p must be >= 2");
  if (r < 1) throw ConfigError("spike count r must be >= 1");
  if (N < r) throw ConfigError("ambient dimension N must be >= r");
  if (lambdas.size() != r)
    throw ConfigError("lambdas must have exactly r entries");
  for (int i = 0; i < r; ++i) {
    if (!(lambdas(i) >= 0.0)) throw ConfigError("SNRs must be non-negative");
    if (i > 0 && lambdas(i) > lambdas(i - 1) + 1e-15)
      throw ConfigError("SNRs must be sorted non-increasing");
  }
  if (!(sigma >= 0.0)) throw ConfigError("noise scale sigma must be >= 0");
}

}  // namespace stpca

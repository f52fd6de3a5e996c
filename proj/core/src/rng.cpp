#include "streetperc/rng.hpp"

#include <cmath>
#include <random>

#include "streetperc/errors.hpp"

namespace streetperc {

std::int64_t sample_poisson(Rng& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw ParameterError("Poisson mean must be finite and nonnegative");
  }
  if (mean == 0.0) {
    return 0;
  }
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(rng);
}

}  // namespace streetperc

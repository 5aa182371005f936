#include "fbs/corpus.hpp"

#include "fbs/errors.hpp"

namespace fbs {

std::vector<std::uint64_t> committed_seeds(int count) {
  if (count < 1 || count > static_cast<int>(kCommittedSeeds.size()))
    throw PreconditionError("committed_seeds: count out of range");
  return std::vector<std::uint64_t>(kCommittedSeeds.begin(),
                                    kCommittedSeeds.begin() + count);
}

}  // namespace fbs

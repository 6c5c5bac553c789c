#include "iprob/signature.hpp"

namespace iprob {

bool interlaces(const Signature& mu, const Signature& la) {
  if (mu.size() + 1 != la.size()) return false;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(la[i + 1] <= mu[i] && mu[i] <= la[i])) return false;
  }
  return true;
}

GTPattern::GTPattern(std::vector<Signature> rows) : rows_(std::move(rows)) {
  for (std::size_t h = 0; h < rows_.size(); ++h) {
    if (rows_[h].size() != h + 1) throw std::invalid_argument("GT row h must have h parts");
    if (h > 0 && !interlaces(rows_[h - 1], rows_[h]))
      throw std::invalid_argument("GT rows must interlace");
  }
}

}  // namespace iprob

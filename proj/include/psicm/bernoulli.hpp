#ifndef PSICM_BERNOULLI_HPP
#define PSICM_BERNOULLI_HPP

#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "psicm/errors.hpp"
#include "psicm/exact_rational.hpp"

namespace psicm {

/// Exact Bernoulli numbers B_0..B_max with B_1 = -1/2, filled lazily from
///   sum_{j=0}^{n} C(n+1, j) B_j = 0,  n >= 1.
/// Reads are concurrent; extension of the filled prefix is serialized.
class BernoulliTable {
 public:
  static constexpr unsigned kDefaultMaxIndex = 200;

  explicit BernoulliTable(unsigned max_index = kDefaultMaxIndex) : max_index_(max_index) {
    values_.reserve(max_index + 1);
    values_.emplace_back(1L);
  }

  BernoulliTable(const BernoulliTable&) = delete;
  BernoulliTable& operator=(const BernoulliTable&) = delete;

  unsigned max_index() const noexcept { return max_index_; }

  /// Number of entries computed so far.
  std::size_t filled() const {
    std::shared_lock lock(mutex_);
    return values_.size();
  }

  ExactRational get(unsigned n) const {
    if (n > max_index_) {
      throw CapacityError("Bernoulli index " + std::to_string(n) + " exceeds table maximum " +
                          std::to_string(max_index_));
    }
    {
      std::shared_lock lock(mutex_);
      if (n < values_.size()) {
        return values_[n];
      }
    }
    std::unique_lock lock(mutex_);
    extend_to(n);
    return values_[n];
  }

  /// B_n / n! exactly.
  ExactRational scaled(unsigned n) const {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return get(n) / ExactRational(mpz_class(f), mpz_class(1));
  }

 private:
  void extend_to(unsigned n) const {
    for (unsigned m = static_cast<unsigned>(values_.size()); m <= n; ++m) {
      if (m >= 3 && m % 2 == 1) {
        values_.emplace_back(0L);
        continue;
      }
      // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j; odd j >= 3 contribute nothing.
      mpq_class acc(0);
      mpz_class binom(1);
      for (unsigned j = 0; j < m; ++j) {
        if (!(j >= 3 && j % 2 == 1)) {
          acc += mpq_class(binom) * values_[j].raw();
        }
        binom = binom * (m + 1 - j) / (j + 1);
      }
      acc /= -static_cast<long>(m + 1);
      values_.push_back(ExactRational::from_mpq(std::move(acc)));
    }
  }

  unsigned max_index_;
  mutable std::shared_mutex mutex_;
  mutable std::vector<ExactRational> values_;
};

/// Process-wide table with the default capacity.
inline const BernoulliTable& default_bernoulli_table() {
  static const BernoulliTable table(BernoulliTable::kDefaultMaxIndex);
  return table;
}

/// Exact B_n. Throws CapacityError above the default table maximum (200).
inline ExactRational bernoulli_number(unsigned n) { return default_bernoulli_table().get(n); }

/// B_n as a double. Exact up to the double rounding of the rational.
inline double bernoulli_double(unsigned n) { return bernoulli_number(n).to_double(); }

}  // namespace psicm

#endif

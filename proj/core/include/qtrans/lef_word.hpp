#pragma once

#include <vector>

#include "qtrans/errors.hpp"

namespace qtrans {

/// Reduced word in the free group on r generators. Letters are signed
/// generator indices in {±1, ..., ±r}; storage is always freely reduced.
class FreeWord {
 public:
  explicit FreeWord(int rank = 1);
  FreeWord(int rank, std::vector<int> letters);  // reduces on construction

  int rank() const { return rank_; }
  const std::vector<int>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t length() const { return letters_.size(); }

  FreeWord inverse() const;
  FreeWord operator*(const FreeWord& o) const;  // concatenate + reduce
  /// Conjugate b^{-1} a b.
  FreeWord conjugated_by(const FreeWord& b) const;
  /// Same letters over a larger rank.
  FreeWord promoted(int new_rank) const;
  bool contains_generator(int g) const;

  /// Cyclic reduction followed by the lexicographically least rotation
  /// (letters compared as integers): a canonical conjugacy-class
  /// representative.
  FreeWord cyclic_class_representative() const;

  bool operator==(const FreeWord& o) const {
    return rank_ == o.rank_ && letters_ == o.letters_;
  }

  static std::vector<int> reduce(std::vector<int> letters);

 private:
  int rank_;
  std::vector<int> letters_;
};

}  // namespace qtrans

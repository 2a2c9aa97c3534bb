#include "qtrans/lef_word.hpp"

#include <algorithm>
#include <cstdlib>

namespace qtrans {

FreeWord::FreeWord(int rank) : rank_(rank) {
  if (rank < 1) throw DomainError("FreeWord: rank must be >= 1");
}

FreeWord::FreeWord(int rank, std::vector<int> letters) : rank_(rank) {
  if (rank < 1) throw DomainError("FreeWord: rank must be >= 1");
  for (int l : letters)
    if (l == 0 || std::abs(l) > rank)
      throw DomainError("FreeWord: letter out of range for rank");
  letters_ = reduce(std::move(letters));
}

std::vector<int> FreeWord::reduce(std::vector<int> letters) {
  std::vector<int> out;
  out.reserve(letters.size());
  for (int l : letters) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

FreeWord FreeWord::inverse() const {
  FreeWord w(rank_);
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(-*it);
  return w;
}

FreeWord FreeWord::operator*(const FreeWord& o) const {
  if (o.rank_ != rank_) throw DomainError("FreeWord::operator*: rank mismatch");
  std::vector<int> cat = letters_;
  cat.insert(cat.end(), o.letters_.begin(), o.letters_.end());
  FreeWord w(rank_);
  w.letters_ = reduce(std::move(cat));
  return w;
}

FreeWord FreeWord::conjugated_by(const FreeWord& b) const {
  return b.inverse() * (*this) * b;
}

FreeWord FreeWord::promoted(int new_rank) const {
  if (new_rank < rank_) throw DomainError("FreeWord::promoted: rank can only grow");
  FreeWord w(new_rank);
  w.letters_ = letters_;
  return w;
}

bool FreeWord::contains_generator(int g) const {
  for (int l : letters_)
    if (std::abs(l) == g) return true;
  return false;
}

FreeWord FreeWord::cyclic_class_representative() const {
  std::vector<int> w = letters_;
  // cyclic reduction: strip matching inverse ends
  while (w.size() >= 2 && w.front() == -w.back()) {
    w.erase(w.begin());
    w.pop_back();
  }
  if (w.empty()) return FreeWord(rank_);
  // lexicographically least rotation
  std::vector<int> best = w;
  const std::size_t m = w.size();
  for (std::size_t s = 1; s < m; ++s) {
    std::vector<int> rot(w.begin() + s, w.end());
    rot.insert(rot.end(), w.begin(), w.begin() + s);
    if (std::lexicographical_compare(rot.begin(), rot.end(), best.begin(), best.end()))
      best = rot;
  }
  FreeWord out(rank_);
  out.letters_ = std::move(best);
  return out;
}

}  // namespace qtrans

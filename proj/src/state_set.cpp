#include "epsdist/state_set.hpp"

#include <bit>

namespace epsdist {

StateSet::StateSet(std::size_t universe)
    : universe_(universe), words_((universe + 63) / 64, 0) {}

StateSet::StateSet(std::size_t universe, std::initializer_list<std::size_t> members)
    : StateSet(universe) {
  for (auto s : members) insert(s);
}

StateSet StateSet::full(std::size_t universe) {
  StateSet s(universe);
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  s.trim();
  return s;
}

StateSet StateSet::of(std::size_t universe, const std::vector<std::size_t>& members) {
  StateSet s(universe);
  for (auto m : members) s.insert(m);
  return s;
}

void StateSet::trim() {
  if (const auto tail = universe_ & 63; tail != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << tail) - 1;
  }
}

std::size_t StateSet::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool StateSet::empty() const {
  for (auto w : words_)
    if (w != 0) return false;
  return true;
}

std::vector<std::size_t> StateSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto w = words_[i];
    while (w != 0) {
      out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

StateSet StateSet::complement() const {
  StateSet c = *this;
  for (auto& w : c.words_) w = ~w;
  c.trim();
  return c;
}

bool StateSet::is_subset_of(const StateSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  return true;
}

bool StateSet::intersects(const StateSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & other.words_[i]) != 0) return true;
  return false;
}

StateSet& StateSet::operator|=(const StateSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

StateSet& StateSet::operator&=(const StateSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

StateSet& StateSet::subtract(const StateSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

std::size_t StateSet::hash() const noexcept {
  std::size_t h = universe_;
  for (auto w : words_) h = h * 0x100000001b3ULL ^ static_cast<std::size_t>(w);
  return h;
}

StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }

Relation::Relation(std::size_t rows, std::size_t cols)
    : cols_(cols), rows_(rows, StateSet(cols)) {}

Relation Relation::full(std::size_t rows, std::size_t cols) {
  Relation r(rows, cols);
  for (auto& row : r.rows_) row = StateSet::full(cols);
  return r;
}

Relation Relation::identity(std::size_t n) {
  Relation r(n, n);
  for (std::size_t i = 0; i < n; ++i) r.insert(i, i);
  return r;
}

StateSet Relation::image(const StateSet& a) const {
  StateSet out(cols_);
  for (auto x : a.members()) out |= rows_[x];
  return out;
}

StateSet Relation::preimage(const StateSet& b) const {
  StateSet out(rows_.size());
  for (std::size_t x = 0; x < rows_.size(); ++x)
    if (rows_[x].intersects(b)) out.insert(x);
  return out;
}

Relation Relation::converse() const {
  Relation c(cols_, rows_.size());
  for (std::size_t x = 0; x < rows_.size(); ++x)
    for (auto y : rows_[x].members()) c.insert(y, x);
  return c;
}

Relation Relation::complement() const {
  Relation c = *this;
  for (auto& row : c.rows_) row = row.complement();
  return c;
}

std::size_t Relation::count() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.count();
  return n;
}

bool Relation::is_subset_of(const Relation& other) const {
  for (std::size_t x = 0; x < rows_.size(); ++x)
    if (!rows_[x].is_subset_of(other.rows_[x])) return false;
  return true;
}

ValueMatrix::ValueMatrix(std::size_t rows, std::size_t cols, const Value& fill)
    : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}

Relation ValueMatrix::cut(const Value& eps) const {
  Relation r(rows_, cols_);
  for (std::size_t x = 0; x < rows_; ++x)
    for (std::size_t y = 0; y < cols_; ++y)
      if (at(x, y) <= eps) r.insert(x, y);
  return r;
}

ValueMatrix ValueMatrix::converse() const {
  ValueMatrix c(cols_, rows_);
  for (std::size_t x = 0; x < rows_; ++x)
    for (std::size_t y = 0; y < cols_; ++y) c.at(y, x) = at(x, y);
  return c;
}

}  // namespace epsdist

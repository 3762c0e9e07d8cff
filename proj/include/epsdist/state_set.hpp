#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "epsdist/values.hpp"

namespace epsdist {

/// A subset of the states {0, ..., universe-1} of one system.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe);
  StateSet(std::size_t universe, std::initializer_list<std::size_t> members);

  static StateSet full(std::size_t universe);
  static StateSet of(std::size_t universe, const std::vector<std::size_t>& members);

  std::size_t universe() const noexcept { return universe_; }
  bool contains(std::size_t s) const {
    return (words_[s >> 6] >> (s & 63)) & 1U;
  }
  void insert(std::size_t s) { words_[s >> 6] |= std::uint64_t{1} << (s & 63); }
  void erase(std::size_t s) { words_[s >> 6] &= ~(std::uint64_t{1} << (s & 63)); }

  std::size_t count() const;
  bool empty() const;
  std::vector<std::size_t> members() const;

  StateSet complement() const;
  bool is_subset_of(const StateSet& other) const;
  bool intersects(const StateSet& other) const;

  StateSet& operator|=(const StateSet& other);
  StateSet& operator&=(const StateSet& other);
  StateSet& subtract(const StateSet& other);

  friend bool operator==(const StateSet&, const StateSet&) = default;

  std::size_t hash() const noexcept;

 private:
  void trim();

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

StateSet operator|(StateSet a, const StateSet& b);
StateSet operator&(StateSet a, const StateSet& b);

/// A two-valued relation R : X -|-> Y stored as one bit row per x.
class Relation {
 public:
  Relation() = default;
  Relation(std::size_t rows, std::size_t cols);

  static Relation full(std::size_t rows, std::size_t cols);
  static Relation identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  bool contains(std::size_t x, std::size_t y) const { return rows_[x].contains(y); }
  void insert(std::size_t x, std::size_t y) { rows_[x].insert(y); }
  void erase(std::size_t x, std::size_t y) { rows_[x].erase(y); }
  const StateSet& row(std::size_t x) const { return rows_[x]; }

  /// R[A] = { y | exists x in A. x R y }
  StateSet image(const StateSet& a) const;
  /// R°[B] = { x | exists y in B. x R y }
  StateSet preimage(const StateSet& b) const;

  Relation converse() const;
  Relation complement() const;
  std::size_t count() const;
  bool is_subset_of(const Relation& other) const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<StateSet> rows_;
};

/// A [0,1]-valued relation r : X x Y -> V.
class ValueMatrix {
 public:
  ValueMatrix() = default;
  ValueMatrix(std::size_t rows, std::size_t cols, const Value& fill = Value::zero());

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  const Value& at(std::size_t x, std::size_t y) const { return cells_[x * cols_ + y]; }
  Value& at(std::size_t x, std::size_t y) { return cells_[x * cols_ + y]; }

  /// r_eps = { (x,y) | r(x,y) <= eps }
  Relation cut(const Value& eps) const;
  ValueMatrix converse() const;

  friend bool operator==(const ValueMatrix&, const ValueMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Value> cells_;
};

}  // namespace epsdist

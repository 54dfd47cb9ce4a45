#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mcwave/numerics.hpp"

namespace mcw {

/// Row-major time x subcarrier array. Row index is the symbol (time) index,
/// column index the subcarrier.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  T& at(std::size_t r, std::size_t c) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("grid index out of range");
    return (*this)(r, c);
  }
  const T& at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("grid index out of range");
    return (*this)(r, c);
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool same_shape(const Grid& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Complex QAM symbols A[k][n].
using SymbolGrid = Grid<cplx>;
/// Real symbols A'[k][n].
using RealSymbolGrid = Grid<double>;

}  // namespace mcw

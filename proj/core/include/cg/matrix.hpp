#pragma once

#include <cstddef>
#include <vector>

namespace cg {

// Dense row-major array indexed (i, j), i < rows, j < cols.
template <class T>
class Grid {
public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool operator==(const Grid&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

} // namespace cg

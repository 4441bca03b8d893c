#pragma once

#include <cstddef>
#include <vector>

namespace clubsim {

/// Dense row-major n x n matrix; used for pairwise tariffs, trade flows and
/// co-membership counters.
template <typename T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

    std::size_t size() const { return n_; }

    T& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
    const T& operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }

    bool operator==(const SquareMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

}  // namespace clubsim

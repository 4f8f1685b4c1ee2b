#pragma once

#include <bit>
#include <cstddef>
#include <functional>
#include <vector>

namespace rotree {

/*
 * Sparse table for idempotent range queries: O(m log m) build, O(1) query on
 * closed index ranges [lo, hi]. Read-only after construction.
 */
template <class T, class Pick = std::less<T>>
class SparseTable {
public:
    SparseTable() = default;
    explicit SparseTable(std::vector<T> values) {
        const std::size_t m = values.size();
        levels_.push_back(std::move(values));
        for (std::size_t w = 1; 2 * w <= m; w *= 2) {
            const auto& prev = levels_.back();
            std::vector<T> next(m - 2 * w + 1);
            for (std::size_t i = 0; i < next.size(); ++i) next[i] = best(prev[i], prev[i + w]);
            levels_.push_back(std::move(next));
        }
    }

    std::size_t size() const { return levels_.empty() ? 0 : levels_[0].size(); }
    const T& operator[](std::size_t i) const { return levels_[0][i]; }

    // requires lo <= hi < size()
    T query(std::size_t lo, std::size_t hi) const {
        const std::size_t k = std::bit_width(hi - lo + 1) - 1;
        return best(levels_[k][lo], levels_[k][hi + 1 - (std::size_t{1} << k)]);
    }

private:
    static const T& best(const T& a, const T& b) { return Pick{}(b, a) ? b : a; }
    std::vector<std::vector<T>> levels_;
};

template <class T>
using RangeMin = SparseTable<T, std::less<T>>;
template <class T>
using RangeMax = SparseTable<T, std::greater<T>>;

}  // namespace rotree

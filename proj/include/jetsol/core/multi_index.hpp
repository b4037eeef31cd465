#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetsol {

/// p ∈ N^n addressing the mixed partial derivative D^p.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t dim) : entries_(dim, 0) {}
    MultiIndex(std::initializer_list<int> entries) : entries_(entries) { check(); }
    explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) { check(); }

    static MultiIndex unit(std::size_t dim, std::size_t axis)
    {
        MultiIndex p(dim);
        p.entries_.at(axis) = 1;
        return p;
    }

    std::size_t dim() const { return entries_.size(); }
    int order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }
    int operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<int>& entries() const { return entries_; }
    bool is_zero() const { return order() == 0; }

    MultiIndex raised(std::size_t axis, int by = 1) const
    {
        MultiIndex p = *this;
        p.entries_.at(axis) += by;
        p.check();
        return p;
    }

    MultiIndex operator+(const MultiIndex& other) const
    {
        MultiIndex p = *this;
        for (std::size_t i = 0; i < dim(); ++i) p.entries_[i] += other.entries_.at(i);
        return p;
    }

    /// Componentwise q ≤ p.
    bool dominates(const MultiIndex& q) const
    {
        for (std::size_t i = 0; i < dim(); ++i)
            if (entries_[i] < q.entries_.at(i)) return false;
        return true;
    }

    /// p! = Π p_i!
    long factorial() const
    {
        long f = 1;
        for (int e : entries_)
            for (int k = 2; k <= e; ++k) f *= k;
        return f;
    }

    /// Graded lexicographic: by order, then larger leading entries first, so (2,0) < (1,1) < (0,2).
    std::strong_ordering operator<=>(const MultiIndex& other) const
    {
        if (auto c = order() <=> other.order(); c != 0) return c;
        if (auto c = dim() <=> other.dim(); c != 0) return c;
        for (std::size_t i = 0; i < dim(); ++i)
            if (entries_[i] != other.entries_[i]) return other.entries_[i] <=> entries_[i];
        return std::strong_ordering::equal;
    }
    bool operator==(const MultiIndex& other) const = default;

    /// Subscript spelling over the given axis letters, e.g. (1,2) over "xy" -> "xyy".
    std::string subscript(const std::vector<std::string>& letters) const
    {
        std::string s;
        for (std::size_t i = 0; i < dim(); ++i)
            for (int k = 0; k < entries_[i]; ++k) s += letters.at(i);
        return s;
    }

    std::string str() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < dim(); ++i) {
            if (i) s += ",";
            s += std::to_string(entries_[i]);
        }
        return s + ")";
    }

private:
    void check() const
    {
        for (int e : entries_)
            if (e < 0) throw std::invalid_argument("multi-index entries must be non-negative");
    }

    std::vector<int> entries_;
};

/// All p ∈ N^dim with |p| == order, in graded-lex order.
inline std::vector<MultiIndex> multi_indices_of_order(std::size_t dim, int order)
{
    std::vector<MultiIndex> out;
    if (dim == 0) {
        if (order == 0) out.emplace_back(0);
        return out;
    }
    std::vector<int> e(dim, 0);
    // Leading entry descends; recursion fills the remainder.
    auto rec = [&](auto&& self, std::size_t axis, int remaining) -> void {
        if (axis + 1 == dim) {
            e[axis] = remaining;
            out.emplace_back(e);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            e[axis] = v;
            self(self, axis + 1, remaining - v);
        }
    };
    rec(rec, 0, order);
    return out;
}

/// All p with |p| ≤ order, graded-lex.
inline std::vector<MultiIndex> multi_indices_up_to(std::size_t dim, int order)
{
    std::vector<MultiIndex> out;
    for (int k = 0; k <= order; ++k) {
        auto level = multi_indices_of_order(dim, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

/// C(n + m, n): number of multi-indices in N^n with |p| ≤ m.
inline long count_up_to(std::size_t dim, int order)
{
    long c = 1;
    for (long i = 1; i <= static_cast<long>(dim); ++i) c = c * (order + i) / i;
    return c;
}

}  // namespace jetsol

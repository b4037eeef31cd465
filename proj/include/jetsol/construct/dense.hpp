#pragma once

#include "jetsol/jet/pde_operator.hpp"

#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetsol {

enum class DenseScheme { dyadic, diagonal };

inline std::string to_string(DenseScheme s) { return s == DenseScheme::dyadic ? "dyadic" : "diagonal"; }

inline DenseScheme parse_dense_scheme(const std::string& s)
{
    if (s == "dyadic") return DenseScheme::dyadic;
    if (s == "diagonal") return DenseScheme::diagonal;
    throw std::invalid_argument("unknown point scheme '" + s + "' (expected dyadic or diagonal)");
}

/// Deterministic, duplicate-free enumeration of a dense set of rational points strictly
/// inside a box.
///
/// dyadic: level k = 1, 2, ... emits every point whose unit-cube coordinates are all odd
/// multiples of 2^-k, in lexicographic order. diagonal: the reduced fractions of (0,1)
/// ordered by denominator, combined across axes by walking index tuples of increasing sum.
class DensePointStream {
public:
    DensePointStream(std::vector<Interval> box, DenseScheme scheme) : box_(std::move(box)), scheme_(scheme)
    {
        if (box_.empty()) throw std::invalid_argument("empty box");
        for (const auto& iv : box_)
            if (!(iv.lo < iv.hi)) throw std::invalid_argument("degenerate box");
    }

    DenseScheme scheme() const { return scheme_; }
    const std::vector<Interval>& box() const { return box_; }

    const Point& at(std::size_t i)
    {
        while (emitted_.size() <= i) extend();
        return emitted_[i];
    }

    std::vector<Point> prefix(std::size_t count)
    {
        if (count == 0) throw std::invalid_argument("point count must be at least 1");
        at(count - 1);
        return {emitted_.begin(), emitted_.begin() + static_cast<std::ptrdiff_t>(count)};
    }

private:
    Point map_unit(const std::vector<Rational>& t) const
    {
        Point p;
        for (std::size_t i = 0; i < box_.size(); ++i) p.push_back(box_[i].lo + (box_[i].hi - box_[i].lo) * t[i]);
        return p;
    }

    void extend()
    {
        if (scheme_ == DenseScheme::dyadic)
            extend_dyadic();
        else
            extend_diagonal();
    }

    void extend_dyadic()
    {
        ++level_;
        long den = 1L << level_;
        std::size_t n = box_.size();
        std::vector<long> num(n, 1);
        for (;;) {
            std::vector<Rational> t;
            for (long v : num) t.push_back(make_rational(v, den));
            emitted_.push_back(map_unit(t));
            std::size_t axis = n;
            while (axis > 0) {
                --axis;
                if (num[axis] + 2 < den) {
                    num[axis] += 2;
                    break;
                }
                num[axis] = 1;
                if (axis == 0) return;
            }
        }
    }

    const Rational& fraction(std::size_t i)
    {
        while (fractions_.size() <= i) {
            ++frac_num_;
            if (frac_num_ >= frac_den_) {
                ++frac_den_;
                frac_num_ = 1;
            }
            if (std::gcd(frac_num_, frac_den_) == 1) fractions_.push_back(make_rational(frac_num_, frac_den_));
        }
        return fractions_[i];
    }

    void extend_diagonal()
    {
        // all index tuples with sum s, lexicographic
        std::size_t n = box_.size();
        std::size_t s = diagonal_sum_++;
        std::vector<std::size_t> idx(n, 0);
        std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t axis, std::size_t left) {
            if (axis + 1 == n) {
                idx[axis] = left;
                std::vector<Rational> t;
                for (std::size_t i : idx) t.push_back(fraction(i));
                emitted_.push_back(map_unit(t));
                return;
            }
            for (std::size_t v = 0; v <= left; ++v) {
                idx[axis] = v;
                walk(axis + 1, left - v);
            }
        };
        walk(0, s);
    }

    std::vector<Interval> box_;
    DenseScheme scheme_;
    std::vector<Point> emitted_;
    int level_ = 0;
    std::size_t diagonal_sum_ = 0;
    std::vector<Rational> fractions_;
    long frac_num_ = 0;
    long frac_den_ = 2;
};

inline std::vector<Point> enumerate_dense(const std::vector<Interval>& box, DenseScheme scheme, std::size_t count)
{
    return DensePointStream(box, scheme).prefix(count);
}

}  // namespace jetsol

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "wiener/group.hpp"

namespace wiener {

namespace detail {

// Sum in ascending order so the result does not depend on how the values were indexed.
inline double ordered_sum(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
}

} // namespace detail

/// Finitely supported nonnegative function on a group; only strictly positive values are stored.
class Envelope {
public:
    explicit Envelope(Group group) : group_(std::move(group)) {}

    const Group& group() const { return group_; }
    const std::map<GroupPoint, double>& values() const { return values_; }
    bool empty() const { return values_.empty(); }
    std::size_t size() const { return values_.size(); }

    double at(const GroupPoint& s) const
    {
        auto it = values_.find(s);
        return it == values_.end() ? 0.0 : it->second;
    }

    void set(const GroupPoint& s, double value)
    {
        group_.validate(s);
        if (!(value >= 0.0) || !std::isfinite(value))
            throw std::invalid_argument("envelope values must be finite and nonnegative");
        if (value == 0.0)
            values_.erase(s);
        else
            values_[s] = value;
    }

    /// Raises the value at s to at least `value`.
    void raise(const GroupPoint& s, double value)
    {
        if (value > at(s)) set(s, value);
    }

    double l1_norm() const
    {
        std::vector<double> v;
        v.reserve(values_.size());
        for (const auto& [s, b] : values_) v.push_back(b);
        return detail::ordered_sum(std::move(v));
    }

    double max_value() const
    {
        double m = 0.0;
        for (const auto& [s, b] : values_) m = std::max(m, b);
        return m;
    }

    /// Keeps only points with word length <= radius.
    Envelope restricted_to_ball(int radius) const
    {
        Envelope out(group_);
        for (const auto& [s, b] : values_)
            if (group_.word_length(s) <= radius) out.values_.emplace(s, b);
        return out;
    }

private:
    Group group_;
    std::map<GroupPoint, double> values_;
};

/// (a * b)(x) = sum_y a(x y^-1) b(y)
inline Envelope convolve(const Envelope& a, const Envelope& b)
{
    if (!(a.group() == b.group())) throw DimensionMismatch("envelopes over different groups");
    const Group& g = a.group();
    std::map<GroupPoint, std::vector<double>> terms;
    for (const auto& [u, av] : a.values())
        for (const auto& [y, bv] : b.values()) terms[g.multiply(u, y)].push_back(av * bv);
    Envelope out(g);
    for (auto& [x, t] : terms) out.set(x, detail::ordered_sum(std::move(t)));
    return out;
}

/// sum_s |a(s) - b(s)|
inline double l1_distance(const Envelope& a, const Envelope& b)
{
    std::vector<double> diffs;
    for (const auto& [s, v] : a.values()) diffs.push_back(std::abs(v - b.at(s)));
    for (const auto& [s, v] : b.values())
        if (!a.values().contains(s)) diffs.push_back(v);
    return detail::ordered_sum(std::move(diffs));
}

} // namespace wiener

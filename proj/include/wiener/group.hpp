/**
 * @file group.hpp
 * @brief Discrete groups used as index sets for kernels and covariance elements.
 *
 * Four families are supported: the lattices Z^d, the discrete Heisenberg group
 * H3(Z), the cyclic groups Z/n and the finite Heisenberg groups H3(Z/p).
 * Every group is discrete and unimodular, so the Haar measure is the counting
 * measure and the modular function is identically 1.
 *
 * Group descriptors serialize as short strings: "Z^2", "H3(Z)", "Z/5", "H3(Z/3)".
 */
#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wiener {

/// Raised when a point, vector or kernel does not belong to the expected group or dimension.
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An element of a discrete group, stored as an integer tuple.
struct GroupPoint {
    std::vector<std::int64_t> coords;

    GroupPoint() = default;
    GroupPoint(std::initializer_list<std::int64_t> c) : coords(c) {}
    explicit GroupPoint(std::vector<std::int64_t> c) : coords(std::move(c)) {}

    std::size_t size() const { return coords.size(); }
    std::int64_t operator[](std::size_t i) const { return coords[i]; }

    friend bool operator==(const GroupPoint&, const GroupPoint&) = default;
    friend auto operator<=>(const GroupPoint& a, const GroupPoint& b) { return a.coords <=> b.coords; }
};

inline std::ostream& operator<<(std::ostream& os, const GroupPoint& p)
{
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << ',';
        os << p[i];
    }
    return os << ')';
}

using PointPair = std::pair<GroupPoint, GroupPoint>;

enum class GroupKind { lattice, heisenberg, cyclic, heisenberg_mod_p };

namespace detail {

inline std::int64_t mod(std::int64_t a, std::int64_t n)
{
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

inline bool is_prime(std::int64_t p)
{
    if (p < 2) return false;
    for (std::int64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

// Breadth-first layers of the Cayley graph, grown on demand.
struct WordMetricCache {
    std::mutex mutex;
    std::map<GroupPoint, int> distance;
    std::vector<GroupPoint> frontier;
    int radius = -1;
    bool exhausted = false;
};

} // namespace detail

/**
 * Descriptor of a discrete group together with its standard symmetric generating set.
 *
 * Descriptors are cheap to copy. Copies share a lazily grown word-metric cache which is
 * guarded by a mutex, so all const member functions are safe to call concurrently.
 */
class Group {
public:
    static Group lattice(int dimension)
    {
        if (dimension < 1) throw std::invalid_argument("Z^d requires d >= 1");
        return Group(GroupKind::lattice, dimension);
    }
    static Group heisenberg() { return Group(GroupKind::heisenberg, 0); }
    static Group cyclic(std::int64_t n)
    {
        if (n < 1) throw std::invalid_argument("Z/n requires n >= 1");
        return Group(GroupKind::cyclic, n);
    }
    static Group heisenberg_mod(std::int64_t p)
    {
        if (!detail::is_prime(p)) throw std::invalid_argument("H3(Z/p) requires p prime");
        return Group(GroupKind::heisenberg_mod_p, p);
    }

    /// Parses "Z", "Z^d", "H3(Z)", "Z/n" or "H3(Z/p)".
    static Group parse(std::string_view text)
    {
        auto to_int = [&](std::string_view digits) -> std::int64_t {
            if (digits.empty() || digits.size() > 12 ||
                !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
                throw std::invalid_argument("bad group descriptor: " + std::string(text));
            return std::stoll(std::string(digits));
        };
        if (text == "Z") return lattice(1);
        if (text == "H3(Z)") return heisenberg();
        if (text.starts_with("Z^")) return lattice(static_cast<int>(to_int(text.substr(2))));
        if (text.starts_with("Z/")) return cyclic(to_int(text.substr(2)));
        if (text.starts_with("H3(Z/") && text.ends_with(")"))
            return heisenberg_mod(to_int(text.substr(5, text.size() - 6)));
        throw std::invalid_argument("bad group descriptor: " + std::string(text));
    }

    std::string to_string() const
    {
        switch (kind_) {
        case GroupKind::lattice: return "Z^" + std::to_string(param_);
        case GroupKind::heisenberg: return "H3(Z)";
        case GroupKind::cyclic: return "Z/" + std::to_string(param_);
        case GroupKind::heisenberg_mod_p: return "H3(Z/" + std::to_string(param_) + ")";
        }
        return {};
    }

    GroupKind kind() const { return kind_; }

    /// Length of the coordinate tuple of each element.
    std::size_t rank() const
    {
        switch (kind_) {
        case GroupKind::lattice: return static_cast<std::size_t>(param_);
        case GroupKind::cyclic: return 1;
        default: return 3;
        }
    }

    bool is_finite() const { return kind_ == GroupKind::cyclic || kind_ == GroupKind::heisenberg_mod_p; }

    std::int64_t order() const
    {
        if (kind_ == GroupKind::cyclic) return param_;
        if (kind_ == GroupKind::heisenberg_mod_p) return param_ * param_ * param_;
        throw std::domain_error("group " + to_string() + " is infinite");
    }

    const std::vector<GroupPoint>& generators() const { return generators_; }

    GroupPoint identity() const { return GroupPoint(std::vector<std::int64_t>(rank(), 0)); }

    /// Throws DimensionMismatch unless x has the right length and canonical coordinates.
    void validate(const GroupPoint& x) const
    {
        if (x.size() != rank())
            throw DimensionMismatch("point " + describe(x) + " does not belong to " + to_string());
        if (is_finite())
            for (auto c : x.coords)
                if (c < 0 || c >= param_)
                    throw DimensionMismatch("point " + describe(x) + " is not reduced modulo " +
                                            std::to_string(param_));
    }

    /// Builds an element from arbitrary integers, reducing modulo n (or p) for finite kinds.
    GroupPoint make(std::vector<std::int64_t> coords) const
    {
        if (coords.size() != rank()) throw DimensionMismatch("wrong coordinate count for " + to_string());
        if (is_finite())
            for (auto& c : coords) c = detail::mod(c, param_);
        return GroupPoint(std::move(coords));
    }

    GroupPoint multiply(const GroupPoint& x, const GroupPoint& y) const
    {
        validate(x);
        validate(y);
        std::vector<std::int64_t> r(rank());
        switch (kind_) {
        case GroupKind::lattice:
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] + y[i];
            break;
        case GroupKind::cyclic:
            r[0] = detail::mod(x[0] + y[0], param_);
            break;
        case GroupKind::heisenberg:
            r = {x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]};
            break;
        case GroupKind::heisenberg_mod_p:
            r = {detail::mod(x[0] + y[0], param_), detail::mod(x[1] + y[1], param_),
                 detail::mod(x[2] + y[2] + x[0] * y[1], param_)};
            break;
        }
        return GroupPoint(std::move(r));
    }

    GroupPoint inverse(const GroupPoint& x) const
    {
        validate(x);
        std::vector<std::int64_t> r(rank());
        switch (kind_) {
        case GroupKind::lattice:
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = -x[i];
            break;
        case GroupKind::cyclic:
            r[0] = detail::mod(-x[0], param_);
            break;
        case GroupKind::heisenberg:
            r = {-x[0], -x[1], x[0] * x[1] - x[2]};
            break;
        case GroupKind::heisenberg_mod_p:
            r = {detail::mod(-x[0], param_), detail::mod(-x[1], param_),
                 detail::mod(x[0] * x[1] - x[2], param_)};
            break;
        }
        return GroupPoint(std::move(r));
    }

    /// x y^{-1}
    GroupPoint divide(const GroupPoint& x, const GroupPoint& y) const { return multiply(x, inverse(y)); }

    /// Word length with respect to generators().
    int word_length(const GroupPoint& x) const
    {
        validate(x);
        switch (kind_) {
        case GroupKind::lattice: {
            std::int64_t sum = 0;
            for (auto c : x.coords) sum += c < 0 ? -c : c;
            return static_cast<int>(sum);
        }
        case GroupKind::cyclic:
            return static_cast<int>(std::min(x[0], param_ - x[0]));
        default:
            break;
        }
        std::lock_guard lock(cache_->mutex);
        for (;;) {
            if (auto it = cache_->distance.find(x); it != cache_->distance.end()) return it->second;
            if (cache_->exhausted) throw std::logic_error("element unreachable from generators");
            grow_locked(cache_->radius + 1);
        }
    }

    /**
     * All elements of word length <= radius, sorted by length and then lexicographically.
     * For finite groups the result is capped at the whole group.
     */
    std::vector<GroupPoint> ball(int radius) const
    {
        if (radius < 0) throw std::invalid_argument("ball radius must be nonnegative");
        std::vector<std::pair<int, GroupPoint>> tagged;
        {
            std::lock_guard lock(cache_->mutex);
            grow_locked(radius);
            for (const auto& [p, d] : cache_->distance)
                if (d <= radius) tagged.emplace_back(d, p);
        }
        std::sort(tagged.begin(), tagged.end());
        std::vector<GroupPoint> out;
        out.reserve(tagged.size());
        for (auto& [d, p] : tagged) out.push_back(std::move(p));
        return out;
    }

    /// Every element of a finite group, in lexicographic coordinate order.
    std::vector<GroupPoint> elements() const
    {
        const std::int64_t n = order();
        std::vector<GroupPoint> out;
        out.reserve(static_cast<std::size_t>(n));
        if (kind_ == GroupKind::cyclic) {
            for (std::int64_t a = 0; a < n; ++a) out.push_back(GroupPoint{a});
        } else {
            for (std::int64_t a = 0; a < param_; ++a)
                for (std::int64_t b = 0; b < param_; ++b)
                    for (std::int64_t c = 0; c < param_; ++c) out.push_back(GroupPoint{a, b, c});
        }
        return out;
    }

    friend bool operator==(const Group& a, const Group& b)
    {
        return a.kind_ == b.kind_ && a.param_ == b.param_;
    }

private:
    Group(GroupKind kind, std::int64_t param)
        : kind_(kind), param_(param), cache_(std::make_shared<detail::WordMetricCache>())
    {
        const std::size_t r = rank();
        auto unit = [&](std::size_t axis, std::int64_t sign) {
            std::vector<std::int64_t> c(r, 0);
            c[axis] = sign;
            return make(std::move(c));
        };
        std::vector<GroupPoint> gens;
        switch (kind_) {
        case GroupKind::lattice:
            for (std::size_t i = 0; i < r; ++i) {
                gens.push_back(unit(i, 1));
                gens.push_back(unit(i, -1));
            }
            break;
        case GroupKind::cyclic:
            if (param_ > 1) {
                gens.push_back(unit(0, 1));
                gens.push_back(unit(0, -1));
            }
            break;
        default:
            for (std::size_t i = 0; i < 2; ++i) {
                gens.push_back(unit(i, 1));
                gens.push_back(unit(i, -1));
            }
            break;
        }
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        generators_ = std::move(gens);
    }

    static std::string describe(const GroupPoint& x)
    {
        std::string s = "(";
        for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
        return s + ")";
    }

    // Caller holds cache_->mutex.
    void grow_locked(int radius) const
    {
        auto& c = *cache_;
        if (c.radius < 0) {
            const GroupPoint e = identity();
            c.distance.emplace(e, 0);
            c.frontier = {e};
            c.radius = 0;
        }
        while (c.radius < radius && !c.exhausted) {
            std::vector<GroupPoint> next;
            for (const auto& p : c.frontier)
                for (const auto& g : generators_) {
                    GroupPoint q = multiply(p, g);
                    if (c.distance.emplace(q, c.radius + 1).second) next.push_back(std::move(q));
                }
            ++c.radius;
            if (next.empty()) c.exhausted = true;
            c.frontier = std::move(next);
        }
    }

    GroupKind kind_;
    std::int64_t param_;
    std::vector<GroupPoint> generators_;
    std::shared_ptr<detail::WordMetricCache> cache_;
};

} // namespace wiener

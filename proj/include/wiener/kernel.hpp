/**
 * @file kernel.hpp
 * @brief Matrix-valued integral kernels with l1 envelopes over a discrete group.
 *
 * A kernel K maps (x, y) in G x G to a d x d complex matrix. It is stored in
 * convolution coordinates (s, t) = (x y^-1, y), so that the envelope of K is read
 * off directly: beta(s) = max_t |K(s t, t)|. With this storage
 *
 *   composition   (K1 * K2)(x, z) = sum_y K1(x, y) K2(y, z)
 *   involution    K*(x, y)        = K(y, x)^H
 *   action        (T_K f)(x)      = sum_y K(x, y) f(y)
 *
 * are all finite sums over stored entries. The envelope norm of a kernel is the l1
 * norm of its minimal envelope; on a discrete group the infimum over dominating
 * envelopes is attained there, so no search is ever performed.
 *
 * All maps are ordered, and every accumulation runs in the sorted order of the
 * stored supports, so results are bit-reproducible.
 */
#pragma once

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "wiener/envelope.hpp"
#include "wiener/group.hpp"
#include "wiener/linalg.hpp"

namespace wiener {

/// Finitely supported C^d-valued function on a key set (points or pairs of points).
template <class Key>
class FiniteVector {
public:
    FiniteVector(Group group, int dim) : group_(std::move(group)), dim_(dim)
    {
        if (dim < 1) throw std::invalid_argument("vector dimension must be >= 1");
    }

    const Group& group() const { return group_; }
    int dim() const { return dim_; }
    const std::map<Key, Vec>& values() const { return values_; }
    bool empty() const { return values_.empty(); }
    std::size_t size() const { return values_.size(); }

    Vec at(const Key& k) const
    {
        auto it = values_.find(k);
        return it == values_.end() ? Vec::Zero(dim_) : it->second;
    }

    const Vec* find(const Key& k) const
    {
        auto it = values_.find(k);
        return it == values_.end() ? nullptr : &it->second;
    }

    void set(const Key& k, Vec v)
    {
        check(k, v);
        values_[k] = std::move(v);
    }

    void add(const Key& k, const Vec& v)
    {
        check(k, v);
        auto [it, inserted] = values_.try_emplace(k, v);
        if (!inserted) it->second += v;
    }

    double l2_norm() const
    {
        std::vector<double> sq;
        sq.reserve(values_.size());
        for (const auto& [k, v] : values_) sq.push_back(v.squaredNorm());
        return std::sqrt(detail::ordered_sum(std::move(sq)));
    }

    FiniteVector& operator+=(const FiniteVector& o)
    {
        same_space(o);
        for (const auto& [k, v] : o.values_) add(k, v);
        return *this;
    }
    FiniteVector& operator*=(Complex c)
    {
        for (auto& [k, v] : values_) v *= c;
        return *this;
    }
    friend FiniteVector operator+(FiniteVector a, const FiniteVector& b) { return a += b; }
    friend FiniteVector operator-(FiniteVector a, FiniteVector b)
    {
        b *= -1.0;
        return a += b;
    }
    friend FiniteVector operator*(Complex c, FiniteVector a) { return a *= c; }

    void same_space(const FiniteVector& o) const
    {
        if (!(group_ == o.group_) || dim_ != o.dim_) throw DimensionMismatch("vectors live in different spaces");
    }

private:
    void check(const Key& k, const Vec& v) const
    {
        if (v.size() != dim_) throw DimensionMismatch("vector value has wrong dimension");
        if constexpr (std::is_same_v<Key, GroupPoint>) {
            group_.validate(k);
        } else {
            group_.validate(k.first);
            group_.validate(k.second);
        }
    }

    Group group_;
    int dim_;
    std::map<Key, Vec> values_;
};

/// Element of l2(G, C^d) with finite support.
using TestVector = FiniteVector<GroupPoint>;
/// Element of l2(G x G, C^d) with finite support.
using PairVector = FiniteVector<PointPair>;

/// <a, b> = sum_k a(k)^H b(k)
template <class Key>
Complex inner(const FiniteVector<Key>& a, const FiniteVector<Key>& b)
{
    a.same_space(b);
    Complex sum = 0.0;
    for (const auto& [k, v] : a.values())
        if (const Vec* w = b.find(k)) sum += v.dot(*w);
    return sum;
}

class Kernel {
public:
    using Entries = std::map<PointPair, Block>;

    Kernel(Group group, int dim) : group_(std::move(group)), dim_(dim)
    {
        if (dim < 1) throw std::invalid_argument("kernel dimension must be >= 1");
    }

    const Group& group() const { return group_; }
    int dim() const { return dim_; }
    const Entries& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    /// Entry stored at convolution coordinates (s, t), or nullptr.
    const Block* find(const GroupPoint& s, const GroupPoint& t) const
    {
        auto it = entries_.find(PointPair{s, t});
        return it == entries_.end() ? nullptr : &it->second;
    }

    void set(const GroupPoint& s, const GroupPoint& t, Block m)
    {
        check(s, t, m);
        entries_[PointPair{s, t}] = std::move(m);
    }

    void add(const GroupPoint& s, const GroupPoint& t, const Block& m)
    {
        check(s, t, m);
        auto [it, inserted] = entries_.try_emplace(PointPair{s, t}, m);
        if (!inserted) it->second += m;
    }

    /// Sets the value at (x, y) in ordinary coordinates.
    void set_at(const GroupPoint& x, const GroupPoint& y, Block m) { set(group_.divide(x, y), y, std::move(m)); }

    /// K(x, y); the zero matrix outside the support.
    Block at(const GroupPoint& x, const GroupPoint& y) const
    {
        if (const Block* b = find(group_.divide(x, y), y)) return *b;
        return zero_block(dim_);
    }

    Kernel& operator+=(const Kernel& o)
    {
        same_algebra(o);
        for (const auto& [st, m] : o.entries_) add(st.first, st.second, m);
        return *this;
    }
    Kernel& operator-=(const Kernel& o)
    {
        same_algebra(o);
        for (const auto& [st, m] : o.entries_) add(st.first, st.second, -m);
        return *this;
    }
    Kernel& operator*=(Complex c)
    {
        for (auto& [st, m] : entries_) m *= c;
        return *this;
    }
    friend Kernel operator+(Kernel a, const Kernel& b) { return a += b; }
    friend Kernel operator-(Kernel a, const Kernel& b) { return a -= b; }
    friend Kernel operator*(Complex c, Kernel a) { return a *= c; }

    void same_algebra(const Kernel& o) const
    {
        if (!(group_ == o.group_)) throw DimensionMismatch("kernels over different groups");
        if (dim_ != o.dim_) throw DimensionMismatch("kernels with different coefficient dimensions");
    }

private:
    void check(const GroupPoint& s, const GroupPoint& t, const Block& m) const
    {
        group_.validate(s);
        group_.validate(t);
        if (m.rows() != dim_ || m.cols() != dim_) throw DimensionMismatch("kernel entry has wrong size");
    }

    Group group_;
    int dim_;
    Entries entries_;
};

/// beta(s) = max_t |K(s t, t)|, the smallest envelope dominating K.
inline Envelope min_envelope(const Kernel& k)
{
    Envelope beta(k.group());
    for (const auto& [st, m] : k.entries()) beta.raise(st.first, op_norm(m));
    return beta;
}

inline double envelope_norm(const Kernel& k) { return min_envelope(k).l1_norm(); }

/// Largest |K1(x,y) - K2(x,y)| over the union of supports.
inline double max_entry_distance(const Kernel& a, const Kernel& b)
{
    a.same_algebra(b);
    double worst = 0.0;
    for (const auto& [st, m] : a.entries()) {
        const Block* o = b.find(st.first, st.second);
        worst = std::max(worst, o ? op_norm(m - *o) : op_norm(m));
    }
    for (const auto& [st, m] : b.entries())
        if (!a.find(st.first, st.second)) worst = std::max(worst, op_norm(m));
    return worst;
}

/// delta_{x=y} I for y in `window`.
inline Kernel identity_kernel(const Group& g, int dim, const std::vector<GroupPoint>& window)
{
    Kernel k(g, dim);
    const GroupPoint e = g.identity();
    for (const auto& t : window) k.set(e, t, identity_block(dim));
    return k;
}

/// c I at shift s (K(x, y) = c I when x y^-1 = s) for y in `window`.
inline Kernel translation_kernel(const Group& g, int dim, const GroupPoint& shift, Complex c,
                                 const std::vector<GroupPoint>& window)
{
    Kernel k(g, dim);
    for (const auto& t : window) k.set(shift, t, c * identity_block(dim));
    return k;
}

/// (K1 * K2)(x, z) = sum_y K1(x, y) K2(y, z), summed exactly over the supports.
inline Kernel compose(const Kernel& a, const Kernel& b)
{
    a.same_algebra(b);
    const Group& g = a.group();
    // Entries of a grouped by their column y = t.
    std::map<GroupPoint, std::vector<std::pair<const GroupPoint*, const Block*>>> by_column;
    for (const auto& [st, m] : a.entries()) by_column[st.second].emplace_back(&st.first, &m);

    Kernel out(g, a.dim());
    for (const auto& [st2, m2] : b.entries()) {
        const GroupPoint row = g.multiply(st2.first, st2.second);
        auto it = by_column.find(row);
        if (it == by_column.end()) continue;
        for (const auto& [s1, m1] : it->second) out.add(g.multiply(*s1, st2.first), st2.second, (*m1) * m2);
    }
    return out;
}

/// K*(x, y) = K(y, x)^H; the entry at (s, t) moves to (s^-1, s t).
inline Kernel involution(const Kernel& k)
{
    const Group& g = k.group();
    Kernel out(g, k.dim());
    for (const auto& [st, m] : k.entries())
        out.set(g.inverse(st.first), g.multiply(st.first, st.second), m.adjoint());
    return out;
}

/// (T_K f)(x) = sum_y K(x, y) f(y)
inline TestVector apply(const Kernel& k, const TestVector& f)
{
    if (!(k.group() == f.group()) || k.dim() != f.dim()) throw DimensionMismatch("kernel and vector do not match");
    const Group& g = k.group();
    TestVector out(g, k.dim());
    for (const auto& [st, m] : k.entries())
        if (const Vec* v = f.find(st.second)) out.add(g.multiply(st.first, st.second), m * (*v));
    return out;
}

/// ((T_K (x) id) xi)(v, u) = sum_w K(v, w) xi(w, u), the kernel acting in the first variable.
inline PairVector apply_first_variable(const Kernel& k, const PairVector& xi)
{
    if (!(k.group() == xi.group()) || k.dim() != xi.dim()) throw DimensionMismatch("kernel and vector do not match");
    const Group& g = k.group();
    std::map<GroupPoint, std::vector<std::pair<const GroupPoint*, const Vec*>>> by_first;
    for (const auto& [wu, v] : xi.values()) by_first[wu.first].emplace_back(&wu.second, &v);
    PairVector out(g, k.dim());
    for (const auto& [st, m] : k.entries()) {
        auto it = by_first.find(st.second);
        if (it == by_first.end()) continue;
        const GroupPoint x = g.multiply(st.first, st.second);
        for (const auto& [u, v] : it->second) out.add(PointPair{x, *u}, m * (*v));
    }
    return out;
}

enum class Side { left, right };

/**
 * Conjugation by a translation.
 * right: result(x, y) = K(x a, y a), i.e. rho(a) T_K rho(a)^-1 with (rho(a) f)(x) = f(x a).
 * left:  result(x, y) = K(a^-1 x, a^-1 y), i.e. lambda(a) T_K lambda(a)^-1 with (lambda(a) f)(x) = f(a^-1 x).
 */
inline Kernel conjugate_by_translation(const Kernel& k, const GroupPoint& a, Side side)
{
    const Group& g = k.group();
    g.validate(a);
    const GroupPoint a_inv = g.inverse(a);
    Kernel out(g, k.dim());
    for (const auto& [st, m] : k.entries()) {
        if (side == Side::right)
            out.set(st.first, g.multiply(st.second, a_inv), m);
        else
            out.set(g.multiply(g.multiply(a, st.first), a_inv), g.multiply(a, st.second), m);
    }
    return out;
}

/// (rho(a) f)(x) = f(x a)
inline TestVector right_translate(const TestVector& f, const GroupPoint& a)
{
    const Group& g = f.group();
    const GroupPoint a_inv = g.inverse(a);
    TestVector out(g, f.dim());
    for (const auto& [y, v] : f.values()) out.set(g.multiply(y, a_inv), v);
    return out;
}

/// (lambda(a) f)(x) = f(a^-1 x)
inline TestVector left_translate(const TestVector& f, const GroupPoint& a)
{
    const Group& g = f.group();
    TestVector out(g, f.dim());
    for (const auto& [y, v] : f.values()) out.set(g.multiply(a, y), v);
    return out;
}

/// Dense block matrix [K(x, y)] for x, y running over `window` in the given order.
inline Eigen::MatrixXcd section_matrix(const Kernel& k, const std::vector<GroupPoint>& window)
{
    const Group& g = k.group();
    const int d = k.dim();
    std::map<GroupPoint, Eigen::Index> index;
    for (std::size_t i = 0; i < window.size(); ++i) index.emplace(window[i], static_cast<Eigen::Index>(i));
    const auto n = static_cast<Eigen::Index>(window.size()) * d;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [st, b] : k.entries()) {
        auto col = index.find(st.second);
        if (col == index.end()) continue;
        auto row = index.find(g.multiply(st.first, st.second));
        if (row == index.end()) continue;
        m.block(row->second * d, col->second * d, d, d) += b;
    }
    return m;
}

/// Keeps the entries with both x and y in `window`.
inline Kernel restrict_to(const Kernel& k, const std::set<GroupPoint>& window)
{
    const Group& g = k.group();
    Kernel out(g, k.dim());
    for (const auto& [st, m] : k.entries())
        if (window.contains(st.second) && window.contains(g.multiply(st.first, st.second)))
            out.set(st.first, st.second, m);
    return out;
}

inline TestVector restrict_to(const TestVector& f, const std::set<GroupPoint>& window)
{
    TestVector out(f.group(), f.dim());
    for (const auto& [x, v] : f.values())
        if (window.contains(x)) out.set(x, v);
    return out;
}

/**
 * Power-iteration lower estimate of the norm of the compression P T_K P to `window`.
 * Every iterate gives a valid lower bound, so the largest one seen is returned.
 */
inline double section_norm_estimate(const Kernel& k, const std::vector<GroupPoint>& window, int iterations,
                                     std::uint64_t seed)
{
    const std::set<GroupPoint> w(window.begin(), window.end());
    const Kernel adj = involution(k);
    Rng rng(seed);
    TestVector v(k.group(), k.dim());
    for (const auto& x : window) v.set(x, rng.vector(k.dim()));
    double best = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double nv = v.l2_norm();
        if (nv == 0.0) break;
        v *= 1.0 / nv;
        const TestVector tv = restrict_to(apply(k, v), w);
        best = std::max(best, tv.l2_norm());
        v = restrict_to(apply(adj, tv), w);
    }
    return best;
}

} // namespace wiener

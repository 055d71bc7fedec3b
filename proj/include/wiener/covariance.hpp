/**
 * @file covariance.hpp
 * @brief The covariance algebra l1(G, l_inf(G, M_d); alpha) of a discrete group acting on
 *        bounded matrix-valued functions by left translation, (alpha_x f)(y) = f(x^-1 y).
 *
 * An element is stored as f(x, y) := (f(x))(y) with finite support in both variables.
 * The algebra is isometrically *-isomorphic to the kernel algebra through
 *
 *   (R f)(x, y)      = f(x y^-1, x)
 *   (R^-1 K)(x, y)   = K(y, x^-1 y)
 *
 * and is represented on l2(G x G, C^d) by the regular representation
 *
 *   (Pi(f) xi)(x, z) = sum_y f(y, x z) xi(y^-1 x, z),
 *
 * which the unitary (W xi)(x, z) = xi(x z, z) intertwines with T_{R f} (x) id.
 */
#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "wiener/kernel.hpp"

namespace wiener {

class CovarianceElement {
public:
    using Entries = std::map<PointPair, Block>;

    CovarianceElement(Group group, int dim) : group_(std::move(group)), dim_(dim)
    {
        if (dim < 1) throw std::invalid_argument("coefficient dimension must be >= 1");
    }

    const Group& group() const { return group_; }
    int dim() const { return dim_; }
    const Entries& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    const Block* find(const GroupPoint& x, const GroupPoint& y) const
    {
        auto it = entries_.find(PointPair{x, y});
        return it == entries_.end() ? nullptr : &it->second;
    }

    Block at(const GroupPoint& x, const GroupPoint& y) const
    {
        if (const Block* b = find(x, y)) return *b;
        return zero_block(dim_);
    }

    void set(const GroupPoint& x, const GroupPoint& y, Block m)
    {
        check(x, y, m);
        entries_[PointPair{x, y}] = std::move(m);
    }

    void add(const GroupPoint& x, const GroupPoint& y, const Block& m)
    {
        check(x, y, m);
        auto [it, inserted] = entries_.try_emplace(PointPair{x, y}, m);
        if (!inserted) it->second += m;
    }

    CovarianceElement& operator+=(const CovarianceElement& o)
    {
        same_algebra(o);
        for (const auto& [xy, m] : o.entries_) add(xy.first, xy.second, m);
        return *this;
    }
    CovarianceElement& operator*=(Complex c)
    {
        for (auto& [xy, m] : entries_) m *= c;
        return *this;
    }
    friend CovarianceElement operator+(CovarianceElement a, const CovarianceElement& b) { return a += b; }
    friend CovarianceElement operator*(Complex c, CovarianceElement a) { return a *= c; }

    void same_algebra(const CovarianceElement& o) const
    {
        if (!(group_ == o.group_)) throw DimensionMismatch("elements over different groups");
        if (dim_ != o.dim_) throw DimensionMismatch("elements with different coefficient dimensions");
    }

private:
    void check(const GroupPoint& x, const GroupPoint& y, const Block& m) const
    {
        group_.validate(x);
        group_.validate(y);
        if (m.rows() != dim_ || m.cols() != dim_) throw DimensionMismatch("entry has wrong size");
    }

    Group group_;
    int dim_;
    Entries entries_;
};

/// x -> sup_y |f(x, y)|, the pointwise norm of each fiber.
inline Envelope fiber_norms(const CovarianceElement& f)
{
    Envelope out(f.group());
    for (const auto& [xy, m] : f.entries()) out.raise(xy.first, op_norm(m));
    return out;
}

inline double l1_norm(const CovarianceElement& f) { return fiber_norms(f).l1_norm(); }

/// Largest entrywise distance over the union of supports.
inline double max_entry_distance(const CovarianceElement& a, const CovarianceElement& b)
{
    a.same_algebra(b);
    double worst = 0.0;
    for (const auto& [xy, m] : a.entries()) {
        const Block* o = b.find(xy.first, xy.second);
        worst = std::max(worst, o ? op_norm(m - *o) : op_norm(m));
    }
    for (const auto& [xy, m] : b.entries())
        if (!a.find(xy.first, xy.second)) worst = std::max(worst, op_norm(m));
    return worst;
}

/// u(x, y) = delta_{x=e} I for y in `fiber`; the unit of the algebra when `fiber` is the whole group.
inline CovarianceElement covariance_unit(const Group& g, int dim, const std::vector<GroupPoint>& fiber)
{
    CovarianceElement u(g, dim);
    const GroupPoint e = g.identity();
    for (const auto& y : fiber) u.set(e, y, identity_block(dim));
    return u;
}

/// Unit of the covariance algebra of a finite group.
inline CovarianceElement covariance_unit(const Group& g, int dim) { return covariance_unit(g, dim, g.elements()); }

/// (f * h)(x, z) = sum_y f(y, z) h(y^-1 x, y^-1 z)
inline CovarianceElement cov_product(const CovarianceElement& f, const CovarianceElement& h)
{
    f.same_algebra(h);
    const Group& g = f.group();
    std::map<GroupPoint, std::vector<std::pair<const GroupPoint*, const Block*>>> by_fiber_point;
    for (const auto& [uw, m] : h.entries()) by_fiber_point[uw.second].emplace_back(&uw.first, &m);

    CovarianceElement out(g, f.dim());
    for (const auto& [yz, fm] : f.entries()) {
        const GroupPoint& y = yz.first;
        auto it = by_fiber_point.find(g.multiply(g.inverse(y), yz.second));
        if (it == by_fiber_point.end()) continue;
        for (const auto& [u, hm] : it->second) out.add(g.multiply(y, *u), yz.second, fm * (*hm));
    }
    return out;
}

/// f*(x, y) = f(x^-1, x^-1 y)^H (unimodular form).
inline CovarianceElement cov_involution(const CovarianceElement& f)
{
    const Group& g = f.group();
    CovarianceElement out(g, f.dim());
    for (const auto& [ab, m] : f.entries()) {
        const GroupPoint a_inv = g.inverse(ab.first);
        out.set(a_inv, g.multiply(a_inv, ab.second), m.adjoint());
    }
    return out;
}

/// R f: the kernel (x, y) -> f(x y^-1, x); in convolution coordinates entry (s, t) = f(s, s t).
inline Kernel kernel_from_covariance(const CovarianceElement& f)
{
    const Group& g = f.group();
    Kernel k(g, f.dim());
    for (const auto& [ab, m] : f.entries()) k.set(ab.first, g.multiply(g.inverse(ab.first), ab.second), m);
    return k;
}

/// R^-1 K: f(x, y) = K(y, x^-1 y), i.e. f(s, s t) = entry (s, t). Total on kernels of discrete groups.
inline CovarianceElement covariance_from_kernel(const Kernel& k)
{
    const Group& g = k.group();
    CovarianceElement f(g, k.dim());
    for (const auto& [st, m] : k.entries()) f.set(st.first, g.multiply(st.first, st.second), m);
    return f;
}

/// (Pi(f) xi)(x, z) = sum_y f(y, x z) xi(y^-1 x, z)
inline PairVector regular_representation(const CovarianceElement& f, const PairVector& xi)
{
    if (!(f.group() == xi.group()) || f.dim() != xi.dim()) throw DimensionMismatch("element and vector do not match");
    const Group& g = f.group();
    std::vector<GroupPoint> shifts;
    for (const auto& [yw, m] : f.entries())
        if (shifts.empty() || !(shifts.back() == yw.first)) shifts.push_back(yw.first);

    PairVector out(g, f.dim());
    for (const auto& [vz, v] : xi.values())
        for (const auto& y : shifts) {
            const GroupPoint x = g.multiply(y, vz.first);
            if (const Block* m = f.find(y, g.multiply(x, vz.second))) out.add(PointPair{x, vz.second}, (*m) * v);
        }
    return out;
}

/// (W xi)(x, z) = xi(x z, z)
inline PairVector intertwine(const PairVector& xi)
{
    const Group& g = xi.group();
    PairVector out(g, xi.dim());
    for (const auto& [pz, v] : xi.values()) out.set(PointPair{g.divide(pz.first, pz.second), pz.second}, v);
    return out;
}

/// (W^-1 eta)(x, z) = eta(x z^-1, z)
inline PairVector intertwine_inverse(const PairVector& eta)
{
    const Group& g = eta.group();
    PairVector out(g, eta.dim());
    for (const auto& [xz, v] : eta.values()) out.set(PointPair{g.multiply(xz.first, xz.second), xz.second}, v);
    return out;
}

namespace detail {

struct FiniteIndex {
    std::vector<GroupPoint> elements;
    std::map<GroupPoint, Eigen::Index> position;

    explicit FiniteIndex(const Group& g) : elements(g.elements())
    {
        for (std::size_t i = 0; i < elements.size(); ++i) position.emplace(elements[i], static_cast<Eigen::Index>(i));
    }
    Eigen::Index operator()(const GroupPoint& p) const { return position.at(p); }
    Eigen::Index size() const { return static_cast<Eigen::Index>(elements.size()); }
};

inline void require_finite(const Group& g, const char* what)
{
    if (!g.is_finite()) throw std::domain_error(std::string(what) + " requires a finite group, got " + g.to_string());
}

} // namespace detail

/**
 * Element of the trivial-action algebra l1(G, M_{|G| d}): one |G|d x |G|d matrix per group
 * element, indexed in the order of Group::elements().
 */
struct EmbeddedElement {
    Group group;
    std::vector<Eigen::MatrixXcd> values;
};

/**
 * theta(f)(x) = pi(f(x)) V(x) for a finite group, where pi(f(x)) multiplies pointwise by
 * y -> f(x, y) and (V(x) phi)(y) = phi(x^-1 y) is left translation on l2(G, C^d).
 */
inline EmbeddedElement trivial_action_embedding(const CovarianceElement& f)
{
    const Group& g = f.group();
    detail::require_finite(g, "trivial_action_embedding");
    const detail::FiniteIndex idx(g);
    const int d = f.dim();
    const Eigen::Index n = idx.size() * d;
    EmbeddedElement out{g, std::vector<Eigen::MatrixXcd>(idx.elements.size(), Eigen::MatrixXcd::Zero(n, n))};
    for (const auto& [xy, m] : f.entries()) {
        const GroupPoint& x = xy.first;
        const GroupPoint& y = xy.second;
        // Row block y, column block x^-1 y.
        out.values[static_cast<std::size_t>(idx(x))].block(idx(y) * d, idx(g.multiply(g.inverse(x), y)) * d, d, d) = m;
    }
    return out;
}

/// (a * b)(x) = sum_y a(y) b(y^-1 x)
inline EmbeddedElement trivial_action_product(const EmbeddedElement& a, const EmbeddedElement& b)
{
    const Group& g = a.group;
    const detail::FiniteIndex idx(g);
    const auto n = a.values.front().rows();
    EmbeddedElement out{g, std::vector<Eigen::MatrixXcd>(a.values.size(), Eigen::MatrixXcd::Zero(n, n))};
    for (std::size_t xi = 0; xi < idx.elements.size(); ++xi)
        for (std::size_t yi = 0; yi < idx.elements.size(); ++yi) {
            const auto k = idx(g.multiply(g.inverse(idx.elements[yi]), idx.elements[xi]));
            out.values[xi].noalias() += a.values[yi] * b.values[static_cast<std::size_t>(k)];
        }
    return out;
}

/// a*(x) = a(x^-1)^H
inline EmbeddedElement trivial_action_involution(const EmbeddedElement& a)
{
    const detail::FiniteIndex idx(a.group);
    EmbeddedElement out{a.group, a.values};
    for (std::size_t xi = 0; xi < idx.elements.size(); ++xi)
        out.values[xi] = a.values[static_cast<std::size_t>(idx(a.group.inverse(idx.elements[xi])))].adjoint();
    return out;
}

/// sum_x |a(x)|
inline double trivial_action_norm(const EmbeddedElement& a)
{
    std::vector<double> norms;
    for (const auto& m : a.values) norms.push_back(op_norm(m));
    return detail::ordered_sum(std::move(norms));
}

/**
 * Dense matrix of left multiplication h -> f * h on the whole covariance algebra of a finite
 * group, in the basis E(u, w, i, j) ordered as ((u * n + w) * d + i) * d + j.
 * Size |G|^2 d^2; intended for small groups.
 */
inline Eigen::MatrixXcd left_multiplication_matrix(const CovarianceElement& f)
{
    const Group& g = f.group();
    detail::require_finite(g, "left_multiplication_matrix");
    const detail::FiniteIndex idx(g);
    const Eigen::Index n = idx.size();
    const Eigen::Index d = f.dim();
    auto basis = [&](Eigen::Index u, Eigen::Index w, Eigen::Index i, Eigen::Index j) {
        return ((u * n + w) * d + i) * d + j;
    };
    Eigen::MatrixXcd lm = Eigen::MatrixXcd::Zero(n * n * d * d, n * n * d * d);
    // f * E(u, w, i, j) has entry f(y, y w)(k, i) at (y u, y w, k, j) for every y.
    for (const auto& [yz, m] : f.entries()) {
        const GroupPoint& y = yz.first;
        const GroupPoint y_inv = g.inverse(y);
        const Eigen::Index w = idx(g.multiply(y_inv, yz.second));
        const Eigen::Index z = idx(yz.second);
        for (Eigen::Index u = 0; u < n; ++u) {
            const Eigen::Index x = idx(g.multiply(y, idx.elements[static_cast<std::size_t>(u)]));
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j)
                    for (Eigen::Index k = 0; k < d; ++k) lm(basis(x, z, k, j), basis(u, w, i, j)) += m(k, i);
        }
    }
    return lm;
}

namespace detail {

inline void sort_spectrum(std::vector<Complex>& ev)
{
    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
}

} // namespace detail

/**
 * Spectrum of f in the (finite-dimensional, unital) covariance algebra of a finite group,
 * i.e. the eigenvalues of left multiplication by f, with multiplicity, sorted.
 *
 * Left multiplication preserves the column index j of the coefficient and the quantity
 * c = x^-1 z of the position (x, z), so it splits into |G| d invariant blocks of size |G| d:
 *   B_c[(x, i), (x', i')] = f(x x'^-1, x c)(i, i'),
 * each repeated d times. The eigenvalues are collected block by block.
 */
inline std::vector<Complex> algebra_spectrum(const CovarianceElement& f)
{
    const Group& g = f.group();
    detail::require_finite(g, "algebra_spectrum");
    const detail::FiniteIndex idx(g);
    const Eigen::Index n = idx.size();
    const int d = f.dim();
    std::vector<Complex> spectrum;
    spectrum.reserve(static_cast<std::size_t>(n * n * d * d));
    for (const auto& c : idx.elements) {
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n * d, n * d);
        for (Eigen::Index xi = 0; xi < n; ++xi) {
            const GroupPoint& x = idx.elements[static_cast<std::size_t>(xi)];
            const GroupPoint xc = g.multiply(x, c);
            for (Eigen::Index pi = 0; pi < n; ++pi) {
                const GroupPoint& xp = idx.elements[static_cast<std::size_t>(pi)];
                if (const Block* m = f.find(g.divide(x, xp), xc)) b.block(xi * d, pi * d, d, d) = *m;
            }
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(b, false);
        if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver did not converge");
        for (int rep = 0; rep < d; ++rep)
            for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) spectrum.push_back(solver.eigenvalues()(i));
    }
    detail::sort_spectrum(spectrum);
    return spectrum;
}

/// Dense matrix of Pi(f) on l2(G x G, C^d) for a finite group, basis ((x * n + z) * d + i).
inline Eigen::MatrixXcd regular_representation_matrix(const CovarianceElement& f)
{
    const Group& g = f.group();
    detail::require_finite(g, "regular_representation_matrix");
    const detail::FiniteIndex idx(g);
    const Eigen::Index n = idx.size();
    const int d = f.dim();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n * n * d, n * n * d);
    for (Eigen::Index v = 0; v < n; ++v)
        for (Eigen::Index z = 0; z < n; ++z)
            for (int i = 0; i < d; ++i) {
                PairVector e(g, d);
                Vec unit = Vec::Zero(d);
                unit(i) = 1.0;
                e.set(PointPair{idx.elements[static_cast<std::size_t>(v)], idx.elements[static_cast<std::size_t>(z)]}, unit);
                const PairVector col = regular_representation(f, e);
                const Eigen::Index c = (v * n + z) * d + i;
                for (const auto& [xz, val] : col.values())
                    out.block((idx(xz.first) * n + idx(xz.second)) * d, c, d, 1) = val;
            }
    return out;
}

} // namespace wiener

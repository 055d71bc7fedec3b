#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wiener/covariance.hpp"
#include "wiener/kernel.hpp"

namespace wiener {

/// Target envelope profile as a function of word length.
struct Profile {
    enum class Shape { exponential, polynomial, banded };

    Shape shape = Shape::exponential;
    /// rate for exponential, power for polynomial; unused for banded.
    double parameter = 1.0;
    /// Largest word length of a stored shift (the band width for banded).
    int radius = 0;

    /// exp(-rate * len) on ball(radius)
    static Profile exponential(double rate, int radius) { return checked({Shape::exponential, rate, radius}); }
    /// (1 + len)^-power on ball(radius)
    static Profile polynomial(double power, int radius) { return checked({Shape::polynomial, power, radius}); }
    /// 1 on ball(width)
    static Profile banded(int width) { return checked({Shape::banded, 0.0, width}); }

    double value(int length) const
    {
        if (length > radius) return 0.0;
        switch (shape) {
        case Shape::exponential: return std::exp(-parameter * length);
        case Shape::polynomial: return std::pow(1.0 + length, -parameter);
        case Shape::banded: return 1.0;
        }
        return 0.0;
    }

    void validate() const
    {
        if (radius < 0) throw std::invalid_argument("profile radius must be nonnegative");
        if (shape == Shape::exponential && !(parameter >= 0.0 && std::isfinite(parameter)))
            throw std::invalid_argument("exponential rate must be finite and nonnegative");
        if (shape == Shape::polynomial && !(parameter > 0.0 && std::isfinite(parameter)))
            throw std::invalid_argument("polynomial power must be positive");
    }

private:
    static Profile checked(Profile p)
    {
        p.validate();
        return p;
    }
};

inline Envelope intended_envelope(const Group& g, const Profile& p)
{
    p.validate();
    Envelope beta(g);
    for (const auto& s : g.ball(p.radius)) beta.set(s, p.value(g.word_length(s)));
    return beta;
}

/**
 * Random kernel with shifts s in ball(profile.radius) and columns t in ball(window).
 * Each entry has independent coefficients uniform on the unit disc, rescaled to operator
 * norm profile.value(word_length(s)), so min_envelope never exceeds the intended envelope.
 */
inline Kernel generate_kernel(const Group& g, int dim, std::uint64_t seed, const Profile& p, int window)
{
    p.validate();
    if (window < 0) throw std::invalid_argument("window radius must be nonnegative");
    Rng rng(seed);
    Kernel k(g, dim);
    const auto columns = g.ball(window);
    for (const auto& s : g.ball(p.radius)) {
        const double target = p.value(g.word_length(s));
        for (const auto& t : columns) k.set(s, t, rng.block_with_norm(dim, target));
    }
    return k;
}

/// Kernel with unit-disc coefficients on ball(shift_radius) x ball(window).
inline Kernel random_kernel(const Group& g, int dim, Rng& rng, int shift_radius, int window)
{
    Kernel k(g, dim);
    const auto columns = g.ball(window);
    for (const auto& s : g.ball(shift_radius))
        for (const auto& t : columns) k.set(s, t, rng.block(dim));
    return k;
}

/// Covariance element with unit-disc coefficients on ball(shift_radius) x ball(fiber_window).
inline CovarianceElement random_covariance(const Group& g, int dim, Rng& rng, int shift_radius, int fiber_window)
{
    CovarianceElement f(g, dim);
    const auto fiber = g.ball(fiber_window);
    for (const auto& x : g.ball(shift_radius))
        for (const auto& y : fiber) f.set(x, y, rng.block(dim));
    return f;
}

/// Covariance element supported everywhere on a finite group.
inline CovarianceElement random_covariance(const Group& g, int dim, Rng& rng)
{
    CovarianceElement f(g, dim);
    const auto all = g.elements();
    for (const auto& x : all)
        for (const auto& y : all) f.set(x, y, rng.block(dim));
    return f;
}

inline TestVector random_vector(const Group& g, int dim, Rng& rng, const std::vector<GroupPoint>& support)
{
    TestVector v(g, dim);
    for (const auto& x : support) v.set(x, rng.vector(dim));
    return v;
}

inline PairVector random_pair_vector(const Group& g, int dim, Rng& rng, const std::vector<GroupPoint>& first,
                                     const std::vector<GroupPoint>& second)
{
    PairVector v(g, dim);
    for (const auto& x : first)
        for (const auto& z : second) v.set(PointPair{x, z}, rng.vector(dim));
    return v;
}

/// Hermitian part (K + K*) / 2.
inline Kernel hermitian_part(const Kernel& k) { return 0.5 * (k + involution(k)); }

} // namespace wiener

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace wiener {

using Complex = std::complex<double>;
/// A d x d coefficient matrix (element of the coefficient C*-algebra M_d(C)).
using Block = Eigen::MatrixXcd;
/// A vector of C^d.
using Vec = Eigen::VectorXcd;

/// Spectral (largest singular value) norm; the modulus for 1 x 1 blocks.
inline double op_norm(const Block& m)
{
    if (m.size() == 0) return 0.0;
    if (m.size() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Block> svd(m);
    return svd.singularValues()(0);
}

inline Block zero_block(int d) { return Block::Zero(d, d); }
inline Block identity_block(int d) { return Block::Identity(d, d); }

/**
 * Seeded random source. The mapping from the 64-bit engine output to doubles is fixed here,
 * so a given seed produces the same numbers with every standard library.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform on [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    /// Uniform on the closed complex unit disc.
    Complex unit_disc()
    {
        const double r = std::sqrt(uniform());
        const double phi = 2.0 * std::numbers::pi * uniform();
        return std::polar(r, phi);
    }

    /// d x d matrix with independent entries uniform on the unit disc.
    Block block(int d)
    {
        Block m(d, d);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) m(i, j) = unit_disc();
        return m;
    }

    Vec vector(int d)
    {
        Vec v(d);
        for (int i = 0; i < d; ++i) v(i) = unit_disc();
        return v;
    }

    /// Random block rescaled to operator norm `target`; never exceeds the target.
    Block block_with_norm(int d, double target)
    {
        if (target <= 0.0) return zero_block(d);
        Block m = block(d);
        double n = op_norm(m);
        while (n == 0.0) {
            m = block(d);
            n = op_norm(m);
        }
        m *= target / n;
        while (op_norm(m) > target) m *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
        return m;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace wiener

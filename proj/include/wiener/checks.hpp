/**
 * @file checks.hpp
 * @brief Seeded property suites over the kernel and covariance algebras.
 *
 * Each suite returns one CheckResult per identity with the worst relative error observed.
 * Relative errors are scaled by the norms of the operands (envelope norms for kernels,
 * l1 norms for covariance elements, l2 norms for vectors).
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "wiener/covariance.hpp"
#include "wiener/generate.hpp"
#include "wiener/kernel.hpp"

namespace wiener {

struct CheckResult {
    std::string name;
    double worst = 0.0;
    double tolerance = 0.0;
    bool passed() const { return worst <= tolerance; }
};

struct SuiteOptions {
    int trials = 100;
    double tolerance = 1e-12;
    /// Shifts of random kernels live in ball(shift_radius), columns in ball(window).
    int shift_radius = 2;
    int window = 2;
};

namespace detail {

inline double ratio(double err, double scale) { return scale > 0 ? err / scale : err; }

inline GroupPoint random_point(const Group& g, Rng& rng, int radius)
{
    const auto b = g.ball(radius);
    return b[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(b.size()) - 1))];
}

} // namespace detail

/**
 * The seven kernel-algebra identities: associativity, anti-multiplicative involution,
 * submultiplicativity (with pointwise domination by the convolved envelopes), isometric
 * involution, the representation property, contractivity of the representation, and
 * commutation of the left and right translation actions.
 */
inline std::vector<CheckResult> axioms_suite(const Group& g, int dim, std::uint64_t seed, const SuiteOptions& opt = {})
{
    Rng rng(seed);
    CheckResult assoc{"associativity", 0, opt.tolerance};
    CheckResult anti{"involution_antimultiplicative", 0, opt.tolerance};
    CheckResult submult{"norm_submultiplicative", 0, opt.tolerance};
    CheckResult iso{"involution_isometric", 0, opt.tolerance};
    CheckResult rep{"representation_multiplicative", 0, opt.tolerance};
    CheckResult contract{"representation_contractive", 0, 1e-9};
    CheckResult commute{"translation_actions_commute", 0, 0.0};
    const auto cover = g.ball(opt.shift_radius + opt.window);

    for (int trial = 0; trial < opt.trials; ++trial) {
        const Kernel k1 = random_kernel(g, dim, rng, opt.shift_radius, opt.window);
        const Kernel k2 = random_kernel(g, dim, rng, opt.shift_radius, opt.window);
        const Kernel k3 = random_kernel(g, dim, rng, opt.shift_radius, opt.window);
        const double n1 = envelope_norm(k1), n2 = envelope_norm(k2), n3 = envelope_norm(k3);

        const Kernel k12 = compose(k1, k2);
        assoc.worst = std::max(assoc.worst,
                               detail::ratio(envelope_norm(compose(k12, k3) - compose(k1, compose(k2, k3))), n1 * n2 * n3));
        anti.worst = std::max(anti.worst, detail::ratio(envelope_norm(involution(k12) - compose(involution(k2), involution(k1))),
                                                        n1 * n2));

        const Envelope b12 = min_envelope(k12);
        const Envelope dominating = convolve(min_envelope(k1), min_envelope(k2));
        double excess = std::max(0.0, b12.l1_norm() - n1 * n2);
        for (const auto& [s, v] : b12.values()) excess = std::max(excess, v - dominating.at(s));
        submult.worst = std::max(submult.worst, detail::ratio(excess, n1 * n2));

        iso.worst = std::max(iso.worst, detail::ratio(std::abs(envelope_norm(involution(k1)) - n1), n1));

        const TestVector f = random_vector(g, dim, rng, g.ball(opt.window + opt.shift_radius));
        const TestVector lhs = apply(k12, f);
        const TestVector rhs = apply(k1, apply(k2, f));
        rep.worst = std::max(rep.worst, detail::ratio((lhs - rhs).l2_norm(), n1 * n2 * f.l2_norm()));

        const double estimate = section_norm_estimate(k1, cover, 30, seed + static_cast<std::uint64_t>(trial));
        contract.worst = std::max(contract.worst, estimate - n1);

        const GroupPoint a = detail::random_point(g, rng, 3);
        const GroupPoint b = detail::random_point(g, rng, 3);
        const Kernel lr = conjugate_by_translation(conjugate_by_translation(k1, a, Side::left), b, Side::right);
        const Kernel rl = conjugate_by_translation(conjugate_by_translation(k1, b, Side::right), a, Side::left);
        commute.worst = std::max(commute.worst, max_entry_distance(lr, rl));
    }
    return {assoc, anti, submult, iso, rep, contract, commute};
}

/**
 * Covariance-algebra identities: R is an isometric *-homomorphism with exact inverse, the
 * regular representation is a *-representation, W is unitary and intertwines T_{R f} (x) id
 * with Pi(f). On finite groups also: the trivial-action embedding is an isometric
 * *-homomorphism, and (for small groups) the eigenvalues of Pi(f) lie in the algebra spectrum of f or at 0.
 */
inline std::vector<CheckResult> covariance_suite(const Group& g, int dim, std::uint64_t seed, const SuiteOptions& opt = {})
{
    Rng rng(seed);
    const double tol = opt.tolerance;
    CheckResult r_mult{"R_multiplicative", 0, tol};
    CheckResult r_inv{"R_involution", 0, tol};
    CheckResult r_iso{"R_isometric", 0, tol};
    CheckResult r_round{"R_round_trip", 0, 0.0};
    CheckResult pi_mult{"Pi_multiplicative", 0, tol};
    CheckResult pi_adj{"Pi_adjoint", 0, tol};
    CheckResult w_unit{"W_unitary", 0, tol};
    CheckResult w_inter{"W_intertwines", 0, tol};
    CheckResult th_mult{"theta_multiplicative", 0, tol};
    CheckResult th_iso{"theta_isometric", 0, tol};
    CheckResult th_inv{"theta_involution", 0, tol};
    CheckResult inclusion{"Pi_spectrum_in_algebra_spectrum", 0, 1e-9};
    const bool finite = g.is_finite();
    const bool small = finite && g.order() * g.order() * dim <= 128;

    for (int trial = 0; trial < opt.trials; ++trial) {
        const CovarianceElement f =
            finite ? random_covariance(g, dim, rng) : random_covariance(g, dim, rng, opt.shift_radius, opt.window);
        const CovarianceElement h =
            finite ? random_covariance(g, dim, rng) : random_covariance(g, dim, rng, opt.shift_radius, opt.window);
        const double nf = l1_norm(f), nh = l1_norm(h);
        const CovarianceElement fh = cov_product(f, h);
        const Kernel rf = kernel_from_covariance(f);

        r_mult.worst = std::max(r_mult.worst, detail::ratio(envelope_norm(kernel_from_covariance(fh) -
                                                                          compose(rf, kernel_from_covariance(h))),
                                                            nf * nh));
        r_inv.worst = std::max(r_inv.worst, detail::ratio(max_entry_distance(kernel_from_covariance(cov_involution(f)),
                                                                             involution(rf)),
                                                          nf));
        r_iso.worst = std::max(r_iso.worst, detail::ratio(std::abs(envelope_norm(rf) - nf), nf));
        r_round.worst = std::max({r_round.worst, max_entry_distance(covariance_from_kernel(rf), f),
                                  max_entry_distance(kernel_from_covariance(covariance_from_kernel(rf)), rf)});

        const auto first = finite ? g.elements() : g.ball(opt.window);
        const auto second = finite ? g.elements() : g.ball(1);
        const PairVector xi = random_pair_vector(g, dim, rng, first, second);
        const PairVector eta = random_pair_vector(g, dim, rng, first, second);
        const double nxi = xi.l2_norm(), neta = eta.l2_norm();

        pi_mult.worst = std::max(pi_mult.worst,
                                 detail::ratio((regular_representation(fh, xi) -
                                                regular_representation(f, regular_representation(h, xi)))
                                                   .l2_norm(),
                                               nf * nh * nxi));
        pi_adj.worst = std::max(pi_adj.worst, detail::ratio(std::abs(inner(regular_representation(f, xi), eta) -
                                                                     inner(xi, regular_representation(cov_involution(f), eta))),
                                                            nf * nxi * neta));
        const PairVector wxi = intertwine(xi);
        w_unit.worst = std::max({w_unit.worst, detail::ratio(std::abs(wxi.l2_norm() - nxi), nxi),
                                 detail::ratio((intertwine_inverse(wxi) - xi).l2_norm(), nxi)});
        w_inter.worst = std::max(w_inter.worst,
                                 detail::ratio((intertwine(apply_first_variable(rf, xi)) - regular_representation(f, wxi))
                                                   .l2_norm(),
                                               nf * nxi));

        if (finite) {
            const EmbeddedElement tf = trivial_action_embedding(f);
            const EmbeddedElement th = trivial_action_embedding(h);
            const EmbeddedElement tfh = trivial_action_embedding(fh);
            const EmbeddedElement prod = trivial_action_product(tf, th);
            const EmbeddedElement adj = trivial_action_involution(tf);
            const EmbeddedElement tfs = trivial_action_embedding(cov_involution(f));
            double dm = 0, di = 0;
            for (std::size_t i = 0; i < tf.values.size(); ++i) {
                dm = std::max(dm, op_norm(tfh.values[i] - prod.values[i]));
                di = std::max(di, op_norm(adj.values[i] - tfs.values[i]));
            }
            th_mult.worst = std::max(th_mult.worst, detail::ratio(dm, nf * nh));
            th_inv.worst = std::max(th_inv.worst, detail::ratio(di, nf));
            th_iso.worst = std::max(th_iso.worst, detail::ratio(std::abs(trivial_action_norm(tf) - nf), nf));
        }
        if (small && trial < 10) {
            const std::vector<Complex> algebra = algebra_spectrum(f);
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(regular_representation_matrix(f), false);
            for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
                const Complex ev = solver.eigenvalues()(i);
                double best = std::abs(ev);
                for (const Complex& a : algebra) best = std::min(best, std::abs(ev - a));
                inclusion.worst = std::max(inclusion.worst, detail::ratio(best, nf));
            }
        }
    }
    std::vector<CheckResult> out{r_mult, r_inv, r_iso, r_round, pi_mult, pi_adj, w_unit, w_inter};
    if (finite) {
        out.push_back(th_mult);
        out.push_back(th_iso);
        out.push_back(th_inv);
    }
    if (small) out.push_back(inclusion);
    return out;
}

struct SymmetryTrial {
    double min_real;
    double max_abs_imag;
};

/// Spectrum of f* * f for seeded random f on a finite group: extreme real and imaginary parts.
inline SymmetryTrial symmetry_trial(const CovarianceElement& f)
{
    const std::vector<Complex> spectrum = algebra_spectrum(cov_product(cov_involution(f), f));
    SymmetryTrial t{std::numeric_limits<double>::infinity(), 0.0};
    for (const Complex& z : spectrum) {
        t.min_real = std::min(t.min_real, z.real());
        t.max_abs_imag = std::max(t.max_abs_imag, std::abs(z.imag()));
    }
    return t;
}

inline std::vector<CheckResult> symmetry_suite(const Group& g, int dim, std::uint64_t seed, int trials,
                                               double tolerance = 1e-9)
{
    Rng rng(seed);
    CheckResult re{"min_real_part_nonnegative", 0, tolerance};
    CheckResult im{"imaginary_part_vanishes", 0, tolerance};
    for (int trial = 0; trial < trials; ++trial) {
        const SymmetryTrial t = symmetry_trial(random_covariance(g, dim, rng));
        re.worst = std::max(re.worst, -t.min_real);
        im.worst = std::max(im.worst, t.max_abs_imag);
    }
    return {re, im};
}

} // namespace wiener

// Acceptance gate: runs every criterion at its stated tolerance and prints one line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wiener/wiener.hpp"

using namespace wiener;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Criterion 1: algebra axioms on Z^2 and H3(Z/3), d = 1, 2, 3, 100 seeded triples each.
Outcome algebra_axioms()
{
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    bool ok = true;
    for (const Group& g : {Group::lattice(2), Group::heisenberg_mod(3)})
        for (int d = 1; d <= 3; ++d) {
            SuiteOptions opt;
            opt.trials = 100;
            opt.shift_radius = 2;
            opt.window = 1;
            for (const auto& r : axioms_suite(g, d, 1000 + static_cast<std::uint64_t>(d), opt)) {
                if (r.name != "associativity" && r.name != "involution_antimultiplicative" &&
                    r.name != "norm_submultiplicative" && r.name != "involution_isometric")
                    continue;
                worst = std::max(worst, r.worst);
                ok = ok && r.worst <= 1e-12;
            }
        }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {ok && secs < 30.0, fmt("worst relative error %.3g, %.2f s", worst, secs)};
}

// Criterion 2: power-iteration norm estimate never exceeds the envelope norm.
Outcome contractive_representation()
{
    double worst = -1e300;
    Rng rng(202);
    for (int i = 0; i < 50; ++i) {
        const Group g = i % 2 ? Group::heisenberg() : Group::lattice(2);
        const int d = 1 + i % 3;
        const Kernel k = random_kernel(g, d, rng, 2, 2);
        const double est = section_norm_estimate(k, g.ball(4), 40, 7000 + static_cast<std::uint64_t>(i));
        worst = std::max(worst, est - envelope_norm(k));
    }
    return {worst <= 1e-9, fmt("max(estimate - envelope norm) = %.3g", worst)};
}

CovarianceElement basis_element(const Group& g, int d, const GroupPoint& x, const GroupPoint& y, int i, int j)
{
    CovarianceElement e(g, d);
    Block m = zero_block(d);
    m(i, j) = 1.0;
    e.set(x, y, m);
    return e;
}

// Criterion 3: R on Z/5, d = 2, over the full basis of the covariance algebra.
Outcome r_isomorphism()
{
    const Group g = Group::cyclic(5);
    const int d = 2;
    std::vector<CovarianceElement> basis;
    for (const auto& x : g.elements())
        for (const auto& y : g.elements())
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) basis.push_back(basis_element(g, d, x, y, i, j));
    double prod = 0, inv = 0, norm = 0, round = 0;
    for (const auto& a : basis) {
        const Kernel ra = kernel_from_covariance(a);
        inv = std::max(inv, max_entry_distance(kernel_from_covariance(cov_involution(a)), involution(ra)));
        norm = std::max(norm, std::abs(envelope_norm(ra) - l1_norm(a)) / l1_norm(a));
        round = std::max(round, max_entry_distance(covariance_from_kernel(ra), a));
        for (const auto& b : basis)
            prod = std::max(prod, envelope_norm(kernel_from_covariance(cov_product(a, b)) - compose(ra, kernel_from_covariance(b))));
    }
    // Norm preservation on non-basis elements as well, where the fiber maximum matters.
    Rng rng(303);
    for (int t = 0; t < 20; ++t) {
        const CovarianceElement f = random_covariance(g, d, rng);
        norm = std::max(norm, std::abs(envelope_norm(kernel_from_covariance(f)) - l1_norm(f)) / l1_norm(f));
        round = std::max(round, max_entry_distance(covariance_from_kernel(kernel_from_covariance(f)), f));
    }
    const bool ok = prod <= 1e-12 && inv <= 1e-12 && norm <= 1e-12 && round == 0.0;
    return {ok, std::to_string(basis.size()) + fmt(" basis elements; product %.3g, involution %.3g, norm %.3g", prod, inv, norm) +
                    fmt(", round trip %.3g", round)};
}

// Criterion 4: W (T_{R f} x id) = Pi(f) W on Z/4, d = 2, for every basis vector.
Outcome intertwining()
{
    const Group g = Group::cyclic(4);
    const int d = 2;
    Rng rng(404);
    double worst = 0.0;
    int vectors = 0;
    for (int t = 0; t < 5; ++t) {
        const CovarianceElement f = random_covariance(g, d, rng);
        const Kernel rf = kernel_from_covariance(f);
        const double nf = l1_norm(f);
        vectors = 0;
        for (const auto& x : g.elements())
            for (const auto& z : g.elements())
                for (int i = 0; i < d; ++i) {
                    PairVector xi(g, d);
                    Vec e = Vec::Zero(d);
                    e(i) = 1.0;
                    xi.set(PointPair{x, z}, e);
                    const PairVector lhs = intertwine(apply_first_variable(rf, xi));
                    const PairVector rhs = regular_representation(f, intertwine(xi));
                    worst = std::max(worst, (lhs - rhs).l2_norm() / nf);
                    ++vectors;
                }
    }
    return {worst <= 1e-12, std::to_string(vectors) + fmt(" basis vectors x 5 elements, worst relative error %.3g", worst)};
}

// Criterion 5: trivial-action embedding on Z/3, d = 1, 2, 50 seeded pairs each.
Outcome theta_embedding()
{
    double mult = 0, iso = 0, inv = 0;
    for (int d : {1, 2}) {
        Rng rng(505 + static_cast<std::uint64_t>(d));
        const Group g = Group::cyclic(3);
        for (int t = 0; t < 50; ++t) {
            const CovarianceElement f = random_covariance(g, d, rng);
            const CovarianceElement h = random_covariance(g, d, rng);
            const double nf = l1_norm(f), nh = l1_norm(h);
            const EmbeddedElement tf = trivial_action_embedding(f);
            const EmbeddedElement prod = trivial_action_product(tf, trivial_action_embedding(h));
            const EmbeddedElement tfh = trivial_action_embedding(cov_product(f, h));
            const EmbeddedElement adj = trivial_action_involution(tf);
            const EmbeddedElement tfs = trivial_action_embedding(cov_involution(f));
            for (std::size_t i = 0; i < tf.values.size(); ++i) {
                mult = std::max(mult, op_norm(tfh.values[i] - prod.values[i]) / (nf * nh));
                inv = std::max(inv, op_norm(adj.values[i] - tfs.values[i]) / nf);
            }
            iso = std::max(iso, std::abs(trivial_action_norm(tf) - nf) / nf);
        }
    }
    return {mult <= 1e-12 && iso <= 1e-12 && inv <= 1e-12,
            fmt("homomorphism %.3g, isometry %.3g, involution %.3g", mult, iso, inv)};
}

// Criterion 6: spectrum of f* f on Z/3, Z/4, H3(Z/3), d = 2, 100 seeded f each.
Outcome symmetry()
{
    double min_re = std::numeric_limits<double>::infinity(), max_im = 0.0;
    for (const Group& g : {Group::cyclic(3), Group::cyclic(4), Group::heisenberg_mod(3)}) {
        Rng rng(606);
        for (int t = 0; t < 100; ++t) {
            const SymmetryTrial s = symmetry_trial(random_covariance(g, 2, rng));
            min_re = std::min(min_re, s.min_real);
            max_im = std::max(max_im, s.max_abs_imag);
        }
    }
    return {min_re >= -1e-9 && max_im <= 1e-9, fmt("min Re %.3g, max |Im| %.3g", min_re, max_im)};
}

// Criterion 7: (1 + 0.5 S)^-1 on Z, whose inverse kernel has envelope 0.5^n on shifts n >= 0.
Outcome wiener_witness()
{
    const auto start = std::chrono::steady_clock::now();
    const Group z = Group::lattice(1);
    const Kernel k = translation_kernel(z, 1, {1}, 0.5, z.ball(41));
    InversionConfig cfg;
    cfg.z = 1.0;
    cfg.radii = {20, 30, 40};
    const SectionInverse result = finite_section_inverse(k, cfg);
    const DecayReport& rep = result.report;
    const Envelope& beta = rep.envelope_by_radius.at(40);

    double env_err = 0.0;
    for (std::int64_t n = -2 * rep.inner_radius; n <= 2 * rep.inner_radius; ++n) {
        const double expected = n >= 0 ? std::pow(0.5, static_cast<double>(n)) : 0.0;
        env_err = std::max(env_err, std::abs(beta.at({n}) - expected));
    }
    // Partial sums approach 2 with geometrically shrinking increments.
    const auto& s = rep.l1_partial_sums;
    bool converging = s.size() > 2;
    for (std::size_t i = 2; i < s.size(); ++i)
        converging = converging && (s[i] - s[i - 1]) <= 0.5 * (s[i - 1] - s[i - 2]) * (1 + 1e-9);
    const double limit_gap = s.empty() ? 1.0 : std::abs(2.0 - s.back());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = rep.stabilized && env_err <= 1e-8 && std::abs(rep.fitted_rate - std::log(0.5)) <= 0.02 && converging &&
                    limit_gap <= 1e-8 && secs < 10.0;
    return {ok, fmt("envelope error %.3g, fitted rate %.6f, |2 - S_max| %.3g", env_err, rep.fitted_rate, limit_gap) +
                    fmt(", residual %.3g, %.2f s", rep.residual, secs)};
}

// Criterion 8: Neumann series and finite sections agree where the series converges.
Outcome oracle_equivalence()
{
    double worst_excess = -1e300;
    double worst_gap = 0.0;
    int cases = 0;
    for (int c = 0; c < 20; ++c) {
        const bool plane = c >= 10;
        const Group g = plane ? Group::lattice(2) : Group::lattice(1);
        const int d = plane ? 1 : 2;
        const std::vector<int> radii = plane ? std::vector<int>{10, 14} : std::vector<int>{20, 28};
        const Kernel k = generate_kernel(g, d, 800 + static_cast<std::uint64_t>(c), Profile::banded(1 + c % 2), radii.back() + 2);
        const double q = 0.1 + 0.01 * (c % 10);
        InversionConfig cfg;
        cfg.z = Complex(envelope_norm(k) / q, 0.0) * std::polar(1.0, 0.3 * c);
        cfg.radii = radii;
        const SectionInverse fs = finite_section_inverse(k, cfg);
        const NeumannInverse ns = neumann_inverse(k, cfg.z, 20, fs.report.inner_radius);
        const double gap = envelope_norm(ns.inverse.kernel - fs.inverse.kernel) + std::abs(ns.inverse.scalar - fs.inverse.scalar);
        worst_gap = std::max(worst_gap, gap);
        worst_excess = std::max(worst_excess, gap - (ns.error_bound + cfg.stabilization_tol));
        cases += fs.report.stabilized;
    }
    return {worst_excess <= 0.0 && cases == 20,
            std::to_string(cases) + fmt("/20 stabilized, worst gap %.3g, worst gap - bound %.3g", worst_gap, worst_excess)};
}

// Criterion 9: contour integral of the resolvent.
Outcome contour_calculus()
{
    const Group z = Group::lattice(1);
    InversionConfig cfg;
    cfg.radii = {4};
    const Kernel two = 2.0 * identity_kernel(z, 1, z.ball(4));
    const ContourInverse scalar = contour_inverse(two, 1.0, 64, cfg);
    double scalar_err = 0.0;
    for (const auto& x : z.ball(cfg.radii.back() / 2)) {
        const Complex v = scalar.inverse.scalar + scalar.inverse.kernel.at(x, x)(0, 0);
        scalar_err = std::max(scalar_err, std::abs(v - 0.5));
    }
    for (const auto& [st, m] : scalar.inverse.kernel.entries())
        if (!(st.first == z.identity())) scalar_err = std::max(scalar_err, op_norm(m));

    // 2 + 0.5 S + 0.3 S^-1 on Z/8: spectrum 2 + 0.5 w + 0.3 conj(w) stays at distance >= 1.2 from 0.
    const Group c8 = Group::cyclic(8);
    Kernel a = 2.0 * identity_kernel(c8, 2, c8.elements());
    a += translation_kernel(c8, 2, {1}, 0.5, c8.elements());
    a += translation_kernel(c8, 2, {7}, 0.3, c8.elements());
    InversionConfig cfg8;
    cfg8.radii = {4};
    const ContourInverse ring = contour_inverse(a, 0.5, 64, cfg8);
    const bool ok = scalar_err <= 1e-10 && ring.deviation_from_direct <= 1e-6;
    return {ok, fmt("scalar error %.3g, Z/8 deviation from direct inverse %.3g", scalar_err, ring.deviation_from_direct)};
}

// Criterion 10: ideal projections of the kernel with envelope 2^-|s|, |s| <= 30.
Outcome ideal_approximation()
{
    const Group z = Group::lattice(1);
    Kernel k(z, 1);
    for (const auto& s : z.ball(30))
        for (const auto& t : z.ball(2)) k.set(s, t, Block::Constant(1, 1, std::pow(2.0, -static_cast<double>(z.word_length(s)))));
    const Envelope beta = min_envelope(k);
    double worst = 0.0;
    for (int n = 2; n <= 10; ++n) {
        const IdealSubspace ideal = IdealSubspace::compact_support(n);
        const Kernel kn = ideal_project(k, ideal);
        const double measured = envelope_norm(k - kn);
        const double envelope_gap = l1_distance(beta, ideal.project(beta));
        const double shell_sum = 2.0 * (std::pow(2.0, -n) - std::pow(2.0, -30));
        worst = std::max({worst, std::abs(measured - envelope_gap), std::abs(measured - shell_sum)});
    }
    return {worst <= 1e-12, fmt("max deviation from 2(2^-n - 2^-30) for n = 2..10: %.3g", worst)};
}

// Criterion 11: translation conjugation preserves the envelope norm exactly.
Outcome symmetry_actions()
{
    Rng rng(1111);
    double norm_diff = 0.0, identity_err = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Group g = i % 2 ? Group::heisenberg() : Group::lattice(2);
        const Kernel k = random_kernel(g, 2, rng, 2, 1);
        const GroupPoint a = detail::random_point(g, rng, 4);
        const GroupPoint a_inv = g.inverse(a);
        const TestVector f = random_vector(g, 2, rng, g.ball(3));
        const double nk = envelope_norm(k);
        for (Side side : {Side::left, Side::right}) {
            const Kernel c = conjugate_by_translation(k, a, side);
            norm_diff = std::max(norm_diff, std::abs(envelope_norm(c) - nk));
            const TestVector expected = side == Side::right ? right_translate(apply(k, right_translate(f, a_inv)), a)
                                                            : left_translate(apply(k, left_translate(f, a_inv)), a);
            identity_err = std::max(identity_err, (apply(c, f) - expected).l2_norm() / (nk * f.l2_norm()));
        }
    }
    return {norm_diff == 0.0 && identity_err <= 1e-12, fmt("norm difference %.3g, conjugation identity %.3g", norm_diff, identity_err)};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"algebra axioms", algebra_axioms},
        {"contractive representation", contractive_representation},
        {"R isomorphism", r_isomorphism},
        {"intertwining", intertwining},
        {"trivial-action embedding", theta_embedding},
        {"symmetry of f* f", symmetry},
        {"decay witness", wiener_witness},
        {"Neumann vs finite section", oracle_equivalence},
        {"contour inverse", contour_calculus},
        {"ideal approximation", ideal_approximation},
        {"translation conjugation", symmetry_actions},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o{false, ""};
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d %-28s %s  %s\n", index, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed;
}

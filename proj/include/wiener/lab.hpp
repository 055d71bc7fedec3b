/**
 * @file lab.hpp
 * @brief Inverse-closedness experiments for the unitized kernel algebra C 1 + Kern(G, M_d).
 *
 * An invertible element z 1 + T_K is inverted on finite sections (balls of growing radius),
 * the inverse kernel is read off on an inner window away from the section boundary, and
 * the l1 envelope of that inverse kernel is recorded. Two independent routes cross-check
 * the result: a Neumann series built from kernel powers, and a contour integral of the
 * resolvent around 0.
 *
 * The module also provides the ideal projections K -> K_n that scale each shift class of a
 * kernel by beta_n(s) / beta(s), where beta_n <= beta belongs to an ideal of envelopes
 * (compactly supported, or truncated at a level and then cut off).
 */
#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "wiener/kernel.hpp"

namespace wiener {

struct InversionConfig {
    Complex z{1.0, 0.0};
    std::vector<int> radii{10, 20};
    double inner_ratio = 0.5;
    double stabilization_tol = 1e-8;
    double condition_cap = 1e12;

    void validate() const
    {
        if (radii.empty()) throw std::invalid_argument("at least one section radius is required");
        for (std::size_t i = 0; i < radii.size(); ++i) {
            if (radii[i] < 0) throw std::invalid_argument("section radii must be nonnegative");
            if (i && radii[i] <= radii[i - 1]) throw std::invalid_argument("section radii must be strictly increasing");
        }
        if (!(inner_ratio > 0.0 && inner_ratio <= 1.0)) throw std::invalid_argument("inner_ratio must lie in (0, 1]");
        if (!(stabilization_tol > 0.0)) throw std::invalid_argument("stabilization_tol must be positive");
        if (!(condition_cap > 0.0)) throw std::invalid_argument("condition_cap must be positive");
    }
};

/// scalar 1 + T_kernel
struct Unitized {
    Complex scalar;
    Kernel kernel;
};

/// The section matrix is singular or too ill-conditioned at this radius.
class NotInvertibleAtScale : public std::runtime_error {
public:
    NotInvertibleAtScale(int r, double cond)
        : std::runtime_error("section of radius " + std::to_string(r) +
                             " is not invertible at scale (condition number " + std::to_string(cond) + ")"),
          radius(r), condition(cond)
    {
    }
    int radius;
    double condition;
};

class ContourNodeFailure : public std::runtime_error {
public:
    ContourNodeFailure(int index, const std::string& why)
        : std::runtime_error("contour node " + std::to_string(index) + " failed: " + why), node(index)
    {
    }
    int node;
};

struct DecayReport {
    /// Envelope of the extracted inverse kernel, per section radius.
    std::map<int, Envelope> envelope_by_radius;
    /// Inner window radius used for the largest section.
    int inner_radius = 0;
    /// S_k = sum of beta(s) over word length <= k, for the largest section.
    std::vector<double> l1_partial_sums;
    bool stabilized = false;
    double stabilization_distance = std::numeric_limits<double>::infinity();
    /// max |((z 1 + K) * inverse - 1)(x, y)| over the inner window.
    double residual = 0.0;
    double fitted_rate = std::numeric_limits<double>::quiet_NaN();
    double r2 = std::numeric_limits<double>::quiet_NaN();
};

struct SectionInverse {
    Unitized inverse;
    DecayReport report;
};

/**
 * max over x, y in `window` of |((z 1 + K) * inverse - 1)(x, y)|, evaluated with kernel
 * composition. Entries of the inverse outside its stored support count as zero.
 */
inline double inverse_residual(const Kernel& k, Complex z, const Unitized& inv, const std::vector<GroupPoint>& window)
{
    const std::set<GroupPoint> w(window.begin(), window.end());
    Kernel product = compose(k, inv.kernel);
    product += z * inv.kernel;
    product += inv.scalar * k;
    product += (z * inv.scalar - 1.0) * identity_kernel(k.group(), k.dim(), window);
    const Kernel local = restrict_to(product, w);
    double worst = 0.0;
    for (const auto& [st, m] : local.entries()) worst = std::max(worst, op_norm(m));
    return worst;
}

namespace detail {

struct Section {
    int radius;
    int inner_radius;
    std::vector<GroupPoint> window;
    std::vector<GroupPoint> inner;
    Kernel full;      // inverse minus scalar part, all of window x window
    Kernel extracted; // restricted to inner x inner
    double condition;
};

inline Section invert_section(const Kernel& k, Complex z, int radius, double inner_ratio, double condition_cap)
{
    const Group& g = k.group();
    const int d = k.dim();
    Section sec{radius, 0, g.ball(radius), {}, Kernel(g, d), Kernel(g, d), 0.0};
    const bool whole_group = g.is_finite() && static_cast<std::int64_t>(sec.window.size()) == g.order();
    sec.inner_radius = whole_group ? radius : static_cast<int>(std::floor(inner_ratio * radius));
    sec.inner = whole_group ? sec.window : g.ball(sec.inner_radius);

    Eigen::MatrixXcd m = section_matrix(k, sec.window);
    m.diagonal().array() += z;
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
    sec.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    if (!(sec.condition <= condition_cap)) throw NotInvertibleAtScale(radius, sec.condition);
    const Eigen::MatrixXcd inv = m.partialPivLu().inverse();

    const Complex z_inv = z == Complex(0.0) ? Complex(0.0) : 1.0 / z;
    const std::set<GroupPoint> inner(sec.inner.begin(), sec.inner.end());
    for (std::size_t i = 0; i < sec.window.size(); ++i)
        for (std::size_t j = 0; j < sec.window.size(); ++j) {
            Block b = inv.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d);
            if (i == j) b.diagonal().array() -= z_inv;
            if (op_norm(b) == 0.0) continue;
            const GroupPoint& x = sec.window[i];
            const GroupPoint& y = sec.window[j];
            const GroupPoint s = g.divide(x, y);
            if (inner.contains(x) && inner.contains(y)) sec.extracted.set(s, y, b);
            sec.full.set(s, y, std::move(b));
        }
    return sec;
}

} // namespace detail

struct DecayFit {
    double rate;
    double r2;
    std::size_t buckets;
};

/**
 * Least-squares slope of log(max envelope per word-length bucket) against word length.
 * Only buckets of length <= inner radius are used (half the diameter of the inner window);
 * longer shifts are seen by few index pairs near the window boundary.
 */
inline DecayFit fit_decay(const DecayReport& report)
{
    if (!report.stabilized) throw std::invalid_argument("decay fit requires a stabilized report");
    if (report.envelope_by_radius.empty()) throw std::invalid_argument("decay fit requires at least one envelope");
    const Envelope& beta = report.envelope_by_radius.rbegin()->second;
    std::map<int, double> bucket;
    for (const auto& [s, v] : beta.values()) {
        const int len = beta.group().word_length(s);
        if (len <= report.inner_radius) bucket[len] = std::max(bucket[len], v);
    }
    if (bucket.size() < 5)
        throw std::invalid_argument("decay fit needs at least 5 word-length buckets, got " + std::to_string(bucket.size()));
    const double n = static_cast<double>(bucket.size());
    double sx = 0, sy = 0;
    for (const auto& [len, v] : bucket) {
        sx += len;
        sy += std::log(v);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [len, v] : bucket) {
        const double dx = len - mx, dy = std::log(v) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double rate = sxy / sxx;
    double ss_res = 0;
    for (const auto& [len, v] : bucket) {
        const double e = std::log(v) - (my + rate * (len - mx));
        ss_res += e * e;
    }
    const double r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    return {rate, r2, bucket.size()};
}

/// Envelope of the whole inverse z^-1 1 + T_J, with the scalar part counted on `window`.
inline Envelope inverse_envelope(const Kernel& j, Complex z, const std::vector<GroupPoint>& window)
{
    if (z == Complex(0.0) || window.empty()) return min_envelope(j);
    return min_envelope(j + (1.0 / z) * identity_kernel(j.group(), j.dim(), window));
}

/**
 * Inverts z 1 + T_K on the sections ball(r), r in cfg.radii.
 *
 * The result is the inverse of the largest section, written as z^-1 1 + T_J with J read off
 * on the inner window ball(inner_ratio * r) (for z = 0, the scalar part is 0 and J is the whole
 * inverse). When a section covers an entire finite group, the inner window is the group.
 * Throws NotInvertibleAtScale when a section is singular or exceeds cfg.condition_cap.
 */
inline SectionInverse finite_section_inverse(const Kernel& k, const InversionConfig& cfg)
{
    cfg.validate();
    const Group& g = k.group();
    DecayReport report;
    std::optional<detail::Section> previous;
    std::optional<detail::Section> last;
    for (int r : cfg.radii) {
        detail::Section sec = detail::invert_section(k, cfg.z, r, cfg.inner_ratio, cfg.condition_cap);
        report.envelope_by_radius.emplace(r, inverse_envelope(sec.extracted, cfg.z, sec.inner));
        previous = std::move(last);
        last = std::move(sec);
    }
    const Complex scalar = cfg.z == Complex(0.0) ? Complex(0.0) : 1.0 / cfg.z;
    report.inner_radius = last->inner_radius;

    if (previous) {
        const std::set<GroupPoint> common(previous->inner.begin(), previous->inner.end());
        report.stabilization_distance =
            l1_distance(inverse_envelope(restrict_to(previous->extracted, common), cfg.z, previous->inner),
                        inverse_envelope(restrict_to(last->extracted, common), cfg.z, previous->inner));
        report.stabilized = report.stabilization_distance < cfg.stabilization_tol;
    } else if (g.is_finite() && static_cast<std::int64_t>(last->window.size()) == g.order()) {
        report.stabilization_distance = 0.0;
        report.stabilized = true;
    }

    const Envelope& beta = report.envelope_by_radius.rbegin()->second;
    std::map<int, std::vector<double>> shells;
    int max_len = 0;
    for (const auto& [s, v] : beta.values()) {
        const int len = g.word_length(s);
        shells[len].push_back(v);
        max_len = std::max(max_len, len);
    }
    double running = 0.0;
    for (int len = 0; len <= max_len && !beta.empty(); ++len) {
        if (auto it = shells.find(len); it != shells.end()) running += detail::ordered_sum(it->second);
        report.l1_partial_sums.push_back(running);
    }

    report.residual = inverse_residual(k, cfg.z, Unitized{scalar, last->full}, last->inner);

    if (report.stabilized) {
        try {
            const DecayFit fit = fit_decay(report);
            report.fitted_rate = fit.rate;
            report.r2 = fit.r2;
        } catch (const std::invalid_argument&) {
            // Too few buckets; the report stays without a fit.
        }
    }
    return {Unitized{scalar, std::move(last->extracted)}, std::move(report)};
}

struct NeumannInverse {
    Unitized inverse;
    /// Envelope-norm bound on the distance to the exact inverse.
    double error_bound;
    /// envelope_norm(K) / |z|
    double ratio;
};

/**
 * (z 1 + K)^-1 = z^-1 sum_{n=0}^{terms} (-z^-1 K)^n, with the powers of K formed by kernel
 * composition. Refuses when envelope_norm(K) >= |z|, where the series need not converge.
 * Tail bound: |z|^-1 q^{terms+1} / (1 - q) with q = envelope_norm(K) / |z|.
 */
inline NeumannInverse neumann_inverse(const Kernel& k, Complex z, int terms)
{
    if (terms < 1) throw std::invalid_argument("neumann_inverse needs terms >= 1");
    if (z == Complex(0.0)) throw std::domain_error("neumann_inverse needs z != 0");
    const double q = envelope_norm(k) / std::abs(z);
    if (!(q < 1.0)) throw std::domain_error("Neumann series refused: envelope_norm(K) / |z| = " + std::to_string(q) + " >= 1");
    const Complex w = 1.0 / z;
    Kernel sum(k.group(), k.dim());
    Kernel power = k;
    Complex coef = -w * w;
    for (int n = 1; n <= terms && !power.empty(); ++n) {
        sum += coef * power;
        if (n < terms) {
            power = compose(k, power);
            coef *= -w;
        }
    }
    const double bound = std::abs(w) * std::pow(q, terms + 1) / (1.0 - q);
    return {Unitized{w, std::move(sum)}, bound, q};
}

/**
 * The same series evaluated exactly on ball(radius) x ball(radius). Powers only carry columns in
 * the ball, and rows that can no longer return to the ball in the remaining terms are dropped,
 * so the cost does not grow with the support of K outside the window.
 */
inline NeumannInverse neumann_inverse(const Kernel& k, Complex z, int terms, int radius)
{
    if (terms < 1) throw std::invalid_argument("neumann_inverse needs terms >= 1");
    if (radius < 0) throw std::invalid_argument("window radius must be nonnegative");
    if (z == Complex(0.0)) throw std::domain_error("neumann_inverse needs z != 0");
    const double q = envelope_norm(k) / std::abs(z);
    if (!(q < 1.0)) throw std::domain_error("Neumann series refused: envelope_norm(K) / |z| = " + std::to_string(q) + " >= 1");
    const Group& g = k.group();
    int step = 0;
    for (const auto& [st, m] : k.entries()) step = std::max(step, g.word_length(st.first));
    const auto ball = g.ball(radius);
    const std::set<GroupPoint> window(ball.begin(), ball.end());

    auto prune = [&](const Kernel& p, int remaining) {
        Kernel out(g, p.dim());
        for (const auto& [st, m] : p.entries())
            if (g.word_length(g.multiply(st.first, st.second)) <= radius + remaining * step) out.set(st.first, st.second, m);
        return out;
    };
    const Complex w = 1.0 / z;
    Kernel sum(g, k.dim());
    Kernel power(g, k.dim());
    for (const auto& [st, m] : k.entries())
        if (window.contains(st.second)) power.set(st.first, st.second, m);
    power = prune(power, terms - 1);
    Complex coef = -w * w;
    for (int n = 1; n <= terms && !power.empty(); ++n) {
        sum += coef * restrict_to(power, window);
        if (n < terms) {
            power = prune(compose(k, power), terms - n - 1);
            coef *= -w;
        }
    }
    const double bound = std::abs(w) * std::pow(q, terms + 1) / (1.0 - q);
    return {Unitized{w, std::move(sum)}, bound, q};
}

struct ContourInverse {
    Unitized inverse;
    /// envelope_norm(contour - direct) on the inner window, NaN when the direct z = 0 inversion fails.
    double deviation_from_direct;
};

/**
 * a^-1 = (1 / 2 pi i) \oint_{|alpha| = eps} alpha^-1 (alpha 1 + a)^-1 d alpha for a = T_K, evaluated with
 * the trapezoidal rule on `nodes` equally spaced points. With alpha = eps e^{i theta} the integrand
 * weight alpha^-1 d alpha / (2 pi i) is d theta / (2 pi), so the rule is the mean of the resolvents.
 * Each resolvent is a finite-section inverse at the largest radius in cfg.
 */
inline ContourInverse contour_inverse(const Kernel& k, double radius_eps, int nodes, const InversionConfig& cfg)
{
    cfg.validate();
    if (nodes < 8) throw std::invalid_argument("contour_inverse needs at least 8 nodes");
    if (!(radius_eps > 0.0)) throw std::invalid_argument("contour radius must be positive");
    const int radius = cfg.radii.back();
    Complex scalar = 0.0;
    Kernel sum(k.group(), k.dim());
    std::vector<GroupPoint> inner;
    for (int node = 0; node < nodes; ++node) {
        const Complex alpha = std::polar(radius_eps, 2.0 * std::numbers::pi * node / nodes);
        try {
            detail::Section sec = detail::invert_section(k, alpha, radius, cfg.inner_ratio, cfg.condition_cap);
            scalar += 1.0 / alpha;
            sum += sec.extracted;
            if (inner.empty()) inner = std::move(sec.inner);
        } catch (const NotInvertibleAtScale& e) {
            throw ContourNodeFailure(node, e.what());
        }
    }
    const double scale = 1.0 / nodes;
    ContourInverse out{Unitized{scalar * scale, scale * std::move(sum)}, std::numeric_limits<double>::quiet_NaN()};
    try {
        const detail::Section direct = detail::invert_section(k, 0.0, radius, cfg.inner_ratio, cfg.condition_cap);
        Kernel scalar_part = out.inverse.scalar * identity_kernel(k.group(), k.dim(), inner);
        out.deviation_from_direct = envelope_norm(out.inverse.kernel + scalar_part - direct.extracted);
    } catch (const NotInvertibleAtScale&) {
    }
    return out;
}

/**
 * A subspace of envelopes closed under the operations used for approximation:
 * compactly supported envelopes (support in a ball), optionally truncated at a level.
 */
struct IdealSubspace {
    std::optional<int> support_radius;
    std::optional<double> level;

    static IdealSubspace compact_support(int radius)
    {
        if (radius < 0) throw std::invalid_argument("support radius must be nonnegative");
        return {radius, std::nullopt};
    }
    static IdealSubspace truncation(double level, std::optional<int> radius = std::nullopt)
    {
        if (!(level >= 0.0)) throw std::invalid_argument("truncation level must be nonnegative");
        if (radius && *radius < 0) throw std::invalid_argument("support radius must be nonnegative");
        return {radius, level};
    }

    /// beta_n = min(beta, level) restricted to ball(support_radius).
    Envelope project(const Envelope& beta) const
    {
        Envelope out(beta.group());
        for (const auto& [s, v] : beta.values()) {
            if (support_radius && beta.group().word_length(s) > *support_radius) continue;
            out.set(s, level ? std::min(v, *level) : v);
        }
        return out;
    }
};

/**
 * K_n(x, y) = a_n(x y^-1) K(x, y) with a_n = beta_n / beta on the support of beta = min_envelope(K)
 * and a_n = 0 elsewhere. Then envelope_norm(K - K_n) <= |beta - beta_n|_1.
 * Rejects beta_n that exceeds beta anywhere.
 */
inline Kernel ideal_project(const Kernel& k, const Envelope& beta_n)
{
    const Envelope beta = min_envelope(k);
    for (const auto& [s, v] : beta_n.values())
        if (v > beta.at(s)) throw std::invalid_argument("ideal envelope exceeds the kernel envelope");
    Kernel out(k.group(), k.dim());
    for (const auto& [st, m] : k.entries()) {
        const double b = beta.at(st.first);
        const double bn = beta_n.at(st.first);
        if (b == 0.0 || bn == 0.0) continue;
        out.set(st.first, st.second, bn == b ? m : Block(m * (bn / b)));
    }
    return out;
}

inline Kernel ideal_project(const Kernel& k, const IdealSubspace& ideal)
{
    return ideal_project(k, ideal.project(min_envelope(k)));
}

} // namespace wiener

// wienerlab: batch runner for the property suites and inversion experiments.
//
//   wienerlab <task> [--config FILE] [--out DIR] [--seed N]
//
// Exit status: 0 all checks pass, 1 a check failed, 2 bad input or unsupported request,
// 3 numerical abort (singular section, failed contour node, solver failure).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wiener/wiener.hpp"

using namespace wiener;
using io::json;

namespace {

enum Status { ok = 0, check_failed = 1, bad_input = 2, numerical_abort = 3 };

class Config {
public:
    explicit Config(json j) : j_(std::move(j))
    {
        if (!j_.is_object()) throw ParseError("config must be a JSON object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    template <class T>
    T get(const char* key, T fallback) const
    {
        if (!j_.contains(key)) return fallback;
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ParseError(std::string("config key \"") + key + "\" has the wrong type");
        }
    }

    const json& at(const char* key) const { return j_.at(key); }

    Complex complex(const char* key, Complex fallback) const
    {
        if (!j_.contains(key)) return fallback;
        const json& v = j_.at(key);
        if (v.is_number()) return v.get<double>();
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) return {v[0].get<double>(), v[1].get<double>()};
        throw ParseError(std::string("config key \"") + key + "\" must be a number or [re, im]");
    }

private:
    json j_;
};

struct Run {
    Config cfg;
    Group group;
    int dim;
    std::uint64_t seed;
    std::filesystem::path out;
};

Run make_run(const std::string& task, const std::string& config_path, const std::string& out, std::optional<std::uint64_t> seed)
{
    Config cfg(config_path.empty() ? json::object() : io::read_json_file(config_path));
    if (cfg.has("task") && cfg.get<std::string>("task", "") != task)
        throw ParseError("config task \"" + cfg.get<std::string>("task", "") + "\" does not match subcommand \"" + task + "\"");
    Group g = Group::lattice(1);
    try {
        g = Group::parse(cfg.get<std::string>("group", "Z"));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    const int dim = cfg.get<int>("dim", 1);
    if (dim < 1) throw ParseError("dim must be >= 1");
    const auto s = seed ? *seed : cfg.get<std::uint64_t>("seed", 1);
    std::filesystem::create_directories(out);
    return {std::move(cfg), std::move(g), dim, s, out};
}

SuiteOptions suite_options(const Run& run)
{
    SuiteOptions opt;
    opt.trials = run.cfg.get<int>("trials", opt.trials);
    opt.tolerance = run.cfg.get<double>("tolerance", opt.tolerance);
    opt.shift_radius = run.cfg.get<int>("shift_radius", opt.shift_radius);
    opt.window = run.cfg.get<int>("window", opt.window);
    if (opt.trials < 1 || opt.shift_radius < 0 || opt.window < 0) throw ParseError("trials, shift_radius and window must be positive");
    return opt;
}

InversionConfig inversion_config(const Run& run)
{
    InversionConfig ic;
    ic.z = run.cfg.complex("z", ic.z);
    ic.radii = run.cfg.get<std::vector<int>>("radii", ic.radii);
    ic.inner_ratio = run.cfg.get<double>("inner_ratio", ic.inner_ratio);
    ic.stabilization_tol = run.cfg.get<double>("stabilization_tol", ic.stabilization_tol);
    ic.condition_cap = run.cfg.get<double>("condition_cap", ic.condition_cap);
    try {
        ic.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return ic;
}

Profile profile_from(const json& k)
{
    const std::string shape = k.value("profile", "exponential");
    try {
        if (shape == "exponential") return Profile::exponential(k.value("rate", 1.0), k.value("radius", 2));
        if (shape == "polynomial") return Profile::polynomial(k.value("power", 2.0), k.value("radius", 2));
        if (shape == "banded") return Profile::banded(k.value("width", 1));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    throw ParseError("unknown profile \"" + shape + "\"");
}

// The "kernel" key selects a preset shift, a generated profile or a kernel file.
// Generated kernels have columns in ball(window); `window` defaults to `default_window`.
Kernel kernel_from_config(const Run& run, int default_window)
{
    const json k = run.cfg.has("kernel") ? run.cfg.at("kernel") : json{{"preset", "shift"}};
    if (!k.is_object()) throw ParseError("\"kernel\" must be an object");
    const int window = k.value("window", default_window);
    if (k.contains("file")) {
        Kernel loaded = io::kernel_from_json(io::read_json_file(k["file"].get<std::string>()));
        if (!(loaded.group() == run.group) || loaded.dim() != run.dim)
            throw ParseError("kernel file does not match the configured group and dim");
        return loaded;
    }
    if (k.value("preset", "") == "shift") {
        std::vector<std::int64_t> e1(static_cast<std::size_t>(run.group.rank()), 0);
        e1[0] = 1;
        const GroupPoint shift = k.contains("shift") ? io::point_from_json(run.group, k["shift"]) : run.group.make(e1);
        Complex c = 0.5;
        if (k.contains("c")) {
            const json& v = k["c"];
            if (v.is_number()) c = v.get<double>();
            else if (v.is_array() && v.size() == 2) c = {v[0].get<double>(), v[1].get<double>()};
            else throw ParseError("preset coefficient \"c\" must be a number or [re, im]");
        }
        return translation_kernel(run.group, run.dim, shift, c, run.group.ball(window));
    }
    if (k.contains("profile")) return generate_kernel(run.group, run.dim, run.seed, profile_from(k), window);
    throw ParseError("\"kernel\" needs one of \"preset\", \"profile\" or \"file\"");
}

std::string fmt17(double v)
{
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

int write_checks(const Run& run, const std::vector<CheckResult>& rows, const char* file = "checks.csv")
{
    std::ostringstream csv;
    csv << "check,worst,tolerance,passed\n";
    bool all = true;
    for (const auto& r : rows) {
        csv << r.name << ',' << fmt17(r.worst) << ',' << fmt17(r.tolerance) << ',' << (r.passed() ? "true" : "false") << '\n';
        std::printf("%-36s %-5s worst %.3e  tol %.1e\n", r.name.c_str(), r.passed() ? "PASS" : "FAIL", r.worst, r.tolerance);
        all = all && r.passed();
    }
    io::write_text_file((run.out / file).string(), csv.str());
    return all ? ok : check_failed;
}

int task_axioms(const Run& run) { return write_checks(run, axioms_suite(run.group, run.dim, run.seed, suite_options(run))); }

int task_covariance(const Run& run) { return write_checks(run, covariance_suite(run.group, run.dim, run.seed, suite_options(run))); }

int task_symmetry(const Run& run)
{
    if (!run.group.is_finite()) throw std::domain_error("symmetry-check needs a finite group");
    const int trials = run.cfg.get<int>("trials", 100);
    const double tol = run.cfg.get<double>("tolerance", 1e-9);
    Rng rng(run.seed);
    std::ostringstream csv;
    csv << "trial,min_real,max_abs_imag\n";
    CheckResult re{"min_real_part_nonnegative", 0, tol};
    CheckResult im{"imaginary_part_vanishes", 0, tol};
    for (int t = 0; t < trials; ++t) {
        const SymmetryTrial s = symmetry_trial(random_covariance(run.group, run.dim, rng));
        csv << t << ',' << fmt17(s.min_real) << ',' << fmt17(s.max_abs_imag) << '\n';
        re.worst = std::max(re.worst, -s.min_real);
        im.worst = std::max(im.worst, s.max_abs_imag);
    }
    io::write_text_file((run.out / "symmetry.csv").string(), csv.str());
    return write_checks(run, {re, im});
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

// Shared by invert and decay: section inversion, report files, optional Neumann cross-check.
int inversion_study(const Run& run, bool write_inverse)
{
    const InversionConfig ic = inversion_config(run);
    const Kernel k = kernel_from_config(run, ic.radii.back() + 1);
    const SectionInverse result = finite_section_inverse(k, ic);
    const DecayReport& rep = result.report;
    const double residual_tol = run.cfg.get<double>("residual_tolerance", 1e-8);

    json summary = io::decay_summary(rep);
    summary["envelope_norm"] = envelope_norm(k);
    summary["z"] = complex_json(ic.z);
    bool pass = rep.stabilized && rep.residual <= residual_tol;

    const double q = envelope_norm(k) / std::abs(ic.z);
    if (ic.z != Complex(0.0) && q < 1.0) {
        const NeumannInverse ns = neumann_inverse(k, ic.z, run.cfg.get<int>("neumann_terms", 30), rep.inner_radius);
        const double gap = envelope_norm(ns.inverse.kernel - result.inverse.kernel);
        const bool agree = gap <= ns.error_bound + ic.stabilization_tol;
        summary["neumann"] = {{"ratio", q}, {"error_bound", ns.error_bound}, {"gap", gap}, {"agree", agree}};
        pass = pass && agree;
    }
    if (!write_inverse) {
        // Shell contributions of a summable envelope eventually shrink.
        const auto& s = rep.l1_partial_sums;
        const bool decaying = std::isfinite(rep.fitted_rate) && rep.fitted_rate < 0.0;
        summary["decaying"] = decaying;
        pass = pass && decaying && s.size() >= 2;
    }
    summary["passed"] = pass;

    io::write_text_file((run.out / "decay.csv").string(), io::decay_csv(rep));
    io::write_json_file((run.out / "summary.json").string(), summary);
    if (write_inverse) {
        json inv = io::to_json(result.inverse.kernel);
        inv["scalar"] = complex_json(result.inverse.scalar);
        io::write_json_file((run.out / "inverse.json").string(), inv);
    }
    std::printf("stabilized %s  distance %.3e  residual %.3e  fitted rate %s\n", rep.stabilized ? "yes" : "no",
                rep.stabilization_distance, rep.residual, std::isfinite(rep.fitted_rate) ? fmt17(rep.fitted_rate).c_str() : "n/a");
    return pass ? ok : check_failed;
}

int task_ideal(const Run& run)
{
    const Kernel k = kernel_from_config(run, run.cfg.get<int>("window", 0));
    const Envelope beta = min_envelope(k);
    const std::vector<int> radii = run.cfg.get<std::vector<int>>("support_radii", {0, 1, 2, 3, 4, 5});
    const std::vector<double> levels = run.cfg.get<std::vector<double>>("levels", {});
    const double tol = run.cfg.get<double>("tolerance", 1e-12);
    std::ostringstream csv;
    csv << "ideal,parameter,measured,envelope_gap,within_bound\n";
    bool pass = true;
    auto record = [&](const char* kind, double param, const IdealSubspace& ideal) {
        const double measured = envelope_norm(k - ideal_project(k, ideal));
        const double gap = l1_distance(beta, ideal.project(beta));
        const bool within = measured <= gap + tol;
        pass = pass && within;
        csv << kind << ',' << fmt17(param) << ',' << fmt17(measured) << ',' << fmt17(gap) << ',' << (within ? "true" : "false") << '\n';
        std::printf("%-12s %-6g measured %.6e  bound %.6e  %s\n", kind, param, measured, gap, within ? "PASS" : "FAIL");
    };
    try {
        for (int r : radii) record("support", r, IdealSubspace::compact_support(r));
        for (double l : levels) record("truncation", l, IdealSubspace::truncation(l));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    io::write_text_file((run.out / "ideal.csv").string(), csv.str());
    return pass ? ok : check_failed;
}

int task_contour(const Run& run)
{
    const InversionConfig ic = inversion_config(run);
    const Kernel k = kernel_from_config(run, ic.radii.back() + 1);
    const double eps = run.cfg.get<double>("epsilon", 0.5);
    const int nodes = run.cfg.get<int>("nodes", 64);
    const double tol = run.cfg.get<double>("tolerance", 1e-6);
    if (!(eps > 0.0) || nodes < 8) throw ParseError("contour needs epsilon > 0 and nodes >= 8");
    const ContourInverse c = contour_inverse(k, eps, nodes, ic);
    const bool compared = std::isfinite(c.deviation_from_direct);
    const bool pass = compared && c.deviation_from_direct <= tol;
    json summary{{"epsilon", eps},
                 {"nodes", nodes},
                 {"scalar", complex_json(c.inverse.scalar)},
                 {"deviation_from_direct", io::finite_or_null(c.deviation_from_direct)},
                 {"passed", pass}};
    io::write_json_file((run.out / "contour.json").string(), summary);
    json inv = io::to_json(c.inverse.kernel);
    inv["scalar"] = complex_json(c.inverse.scalar);
    io::write_json_file((run.out / "inverse.json").string(), inv);
    std::printf("deviation from direct inverse %s\n", compared ? fmt17(c.deviation_from_direct).c_str() : "n/a (z = 0 section singular)");
    return pass ? ok : check_failed;
}

// Reads a kernel (or generates one from the config), writes it back canonically with its envelope.
int task_kernel_io(const Run& run, const std::string& input)
{
    const Kernel k = input.empty() ? kernel_from_config(run, run.cfg.get<int>("window", 2))
                                   : io::kernel_from_json(io::read_json_file(input));
    io::write_json_file((run.out / "kernel.json").string(), io::to_json(k));
    io::write_json_file((run.out / "envelope.json").string(), io::to_json(min_envelope(k)));
    std::printf("%s d=%d entries=%zu envelope_norm=%s\n", k.group().to_string().c_str(), k.dim(), k.size(),
                fmt17(envelope_norm(k)).c_str());
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kernel-algebra property suites and inversion experiments"};
    app.require_subcommand(1);
    std::string config_path, out = ".", input;
    std::optional<std::uint64_t> seed;

    const std::vector<std::pair<std::string, std::string>> tasks{
        {"axioms", "kernel-algebra identity suite"},
        {"covariance-check", "covariance-algebra identity suite"},
        {"symmetry-check", "spectrum of f* f on a finite group"},
        {"invert", "finite-section inverse with decay report and inverse kernel"},
        {"decay", "decay study of a finite-section inverse"},
        {"ideal-approx", "ideal projections against the envelope bound"},
        {"contour", "contour-integral inverse compared with the direct inverse"},
        {"kernel-io", "read or generate a kernel and write it with its envelope"},
    };
    for (const auto& [name, help] : tasks) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "seed, overrides the config");
        if (name == "kernel-io") sub->add_option("--in", input, "kernel JSON file to read");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : bad_input;
    }

    const std::string task = app.get_subcommands().front()->get_name();
    try {
        const Run run = make_run(task, config_path, out, seed);
        if (task == "axioms") return task_axioms(run);
        if (task == "covariance-check") return task_covariance(run);
        if (task == "symmetry-check") return task_symmetry(run);
        if (task == "invert") return inversion_study(run, true);
        if (task == "decay") return inversion_study(run, false);
        if (task == "ideal-approx") return task_ideal(run);
        if (task == "contour") return task_contour(run);
        return task_kernel_io(run, input);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bad_input;
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bad_input;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bad_input;
    } catch (const std::domain_error& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return bad_input;
    } catch (const NotInvertibleAtScale& e) {
        std::cerr << "numerical abort: " << e.what() << '\n';
        return numerical_abort;
    } catch (const ContourNodeFailure& e) {
        std::cerr << "numerical abort: " << e.what() << '\n';
        return numerical_abort;
    } catch (const std::exception& e) {
        std::cerr << "numerical abort: " << e.what() << '\n';
        return numerical_abort;
    }
}

// wosqmc command line: run / fit / vrf / probe / exact.
// Failures print one "error: <code>: <detail>" line and exit nonzero.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wosqmc/domain_config.hpp"
#include "wosqmc/error.hpp"
#include "wosqmc/experiments.hpp"
#include "wosqmc/minkprobe.hpp"
#include "wosqmc/report.hpp"

using namespace wosqmc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && std::isfinite(v)) return v;
    } catch (const std::logic_error&) {
    }
    throw Error("invalid-argument", "bad " + what + " '" + s + "'");
}

Point parse_point(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() < 2 || parts.size() > 3) throw Error("invalid-argument", "--z0 needs 2 or 3 comma-separated numbers");
    std::vector<double> v;
    for (const auto& p : parts) v.push_back(parse_double(p, "--z0 coordinate"));
    return parts.size() == 2 ? Point(v[0], v[1]) : Point(v[0], v[1], v[2]);
}

// "8..12" or "8,9,10"
std::vector<unsigned> parse_m_range(const std::string& text) {
    std::vector<unsigned> out;
    auto as_uint = [&](const std::string& s) {
        const double v = parse_double(s, "--m");
        if (v < 1 || v != std::floor(v) || v > 64) throw Error("invalid-argument", "bad --m value '" + s + "'");
        return static_cast<unsigned>(v);
    };
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const unsigned a = as_uint(text.substr(0, dots));
        const unsigned b = as_uint(text.substr(dots + 2));
        if (a > b) throw Error("invalid-argument", "empty --m range '" + text + "'");
        for (unsigned m = a; m <= b; ++m) out.push_back(m);
    } else {
        for (const auto& p : split(text, ',')) out.push_back(as_uint(p));
    }
    if (out.empty()) throw Error("invalid-argument", "empty --m");
    return out;
}

json point_json(const Point& p) {
    json a = json::array();
    for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
    return a;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error("io-error", "cannot write " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

bool env_flag(const char* name) {
    const char* v = std::getenv(name);
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

struct RunArgs {
    std::string example;
    std::string methods = "mc,sobol,halton,lattice";
    std::string n = "2^7..2^15";
    std::size_t replicates = 50;
    std::optional<std::uint64_t> seed;
    std::optional<double> eps;
    std::optional<std::size_t> K;
    std::string out;
    bool unrandomized = false;
    unsigned threads = 0;
    std::string domain;
    std::string z0;
    std::vector<std::string> set_boundary;
    std::string niederreiter;
    std::uint64_t n_min = 128;
    std::string baseline = "mc";
    std::string vrf_n = "2^17";
};

int cmd_run(const RunArgs& a) {
    if (!a.seed) throw Error("missing-seed", "--seed is required");
    if (a.replicates < 2) throw Error("invalid-argument", "--replicates must be at least 2");

    // everything is validated before any compute
    ExampleSpec ex = builtin_example(a.example);
    if (!a.domain.empty()) {
        ex.domain = std::make_shared<const Domain>(load_domain_spec(a.domain));
        ex.exact = nullptr;
    }
    if (!a.set_boundary.empty()) {
        std::map<int, double> values;
        for (const auto& kv : a.set_boundary) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw Error("invalid-argument", "--set-boundary expects ID=VALUE, got '" + kv + "'");
            const double id = parse_double(kv.substr(0, eq), "component id");
            if (id < 0 || id != std::floor(id)) throw Error("invalid-argument", "bad component id in '" + kv + "'");
            values[static_cast<int>(id)] = parse_double(kv.substr(eq + 1), "boundary value");
        }
        ex = with_boundary_values(ex, values);
    }
    if (!a.z0.empty()) ex.z0 = parse_point(a.z0);
    if (ex.z0.dim() != ex.domain->dimension()) throw Error("invalid-argument", "--z0 dimension does not match the domain");
    if (a.eps) {
        if (!(*a.eps > 0.0)) throw Error("invalid-argument", "--eps must be positive");
        ex.walk.epsilon = *a.eps;
    }
    if (a.K) {
        if (*a.K == 0) throw Error("invalid-argument", "--K must be at least 1");
        ex.walk.max_steps = *a.K;
    }
    if (!(ex.domain->distance(ex.z0) >= ex.walk.epsilon)) {
        throw Error("start-in-shell", "start point lies within epsilon of the boundary");
    }
    const std::vector<std::uint64_t> grid = parse_n_grid(a.n);
    const auto names = split(a.methods, ',');
    if (names.empty()) throw Error("invalid-argument", "--methods is empty");

    MethodOptions mo;
    mo.randomize = !(a.unrandomized || env_flag("WOSQMC_UNRANDOMIZED"));
    mo.niederreiter_matrices = a.niederreiter;
    std::vector<Method> methods;
    for (const auto& m : names) methods.push_back(make_method(m, ex.row_length(), mo));

    const fs::path out = a.out;
    if (out.empty()) throw Error("invalid-argument", "--out is required");
    fs::create_directories(out);

    const StudyTable table = run_study(ex, methods, grid, {a.replicates, *a.seed, a.threads});
    const std::vector<CellStats> cells = table.cells();

    std::ostringstream est;
    write_estimates_csv(est, table);
    write_text(out / "estimates.csv", est.str());
    std::ostringstream var;
    write_variance_csv(var, cells);
    write_text(out / "variance.csv", var.str());

    // fits per method; a method whose cells cannot be fitted gets null
    std::vector<RegressionFit> fits;
    json fits_json = json::object();
    json mse_fits_json = json::object();
    for (const auto& m : names) {
        try {
            fits.push_back(fit_loglog(cells, {m}, a.n_min).at(0));
            fits_json[m] = fit_to_json(fits.back());
        } catch (const Error& e) {
            fits_json[m] = nullptr;
        }
        if (table.exact) {
            try {
                mse_fits_json[m] = fit_to_json(fit_loglog(cells, {m}, a.n_min, true).at(0));
            } catch (const Error&) {
                mse_fits_json[m] = nullptr;
            }
        }
    }
    write_text(out / "fits.json", dump(fits_document(fits)));

    json pooled = nullptr;
    std::vector<std::string> qmc;
    for (const auto& m : names) {
        if (m != "mc") qmc.push_back(m);
    }
    if (!qmc.empty()) {
        try {
            pooled = fit_to_json(fit_pooled(cells, qmc, a.n_min));
        } catch (const Error&) {
        }
    }

    const std::vector<std::uint64_t> vrf_at = parse_n_grid(a.vrf_n);
    json vrfs = json::object();
    const RegressionFit* base = nullptr;
    for (const auto& f : fits) {
        if (f.method == a.baseline) base = &f;
    }
    if (base != nullptr) {
        for (const auto& f : fits) {
            if (f.method == a.baseline) continue;
            json per_n = json::object();
            for (std::uint64_t n : vrf_at) per_n[std::to_string(n)] = vrf(f, *base, static_cast<double>(n));
            vrfs[f.method] = per_n;
        }
    }

    json config = {{"example", ex.name},
                   {"methods", names},
                   {"n", grid},
                   {"replicates", a.replicates},
                   {"seed", *a.seed},
                   {"epsilon", ex.walk.epsilon},
                   {"K", ex.walk.max_steps},
                   {"estimator", to_string(ex.kind)},
                   {"z0", point_json(ex.z0)},
                   {"randomized", mo.randomize},
                   {"domain", a.domain.empty() ? (default_data_dir() / (ex.name + ".json")).string() : a.domain},
                   {"set_boundary", a.set_boundary},
                   {"n_min", a.n_min},
                   {"baseline", a.baseline},
                   {"vrf_n", vrf_at},
                   {"threads", a.threads}};
    json summary = {{"config", config},
                    {"exact", table.exact ? json(*table.exact) : json(nullptr)},
                    {"fits", fits_document(fits)["fits"]},
                    {"fits_by_method", fits_json},
                    {"pooled_rqmc_fit", pooled},
                    {"vrf", vrfs}};
    if (table.exact) summary["mse_fits_by_method"] = mse_fits_json;
    json cell_means = json::array();
    for (const auto& c : cells) {
        cell_means.push_back({{"method", c.method}, {"n", c.n}, {"mean", c.mean}, {"variance", c.variance}});
    }
    summary["cells"] = cell_means;
    write_text(out / "summary.json", dump(summary));

    std::cout << "wrote " << table.rows.size() << " estimates to " << (out / "estimates.csv").string() << "\n";
    for (const auto& f : fits) {
        std::printf("%-13s beta %8.4f  alpha %8.4f\n", f.method.c_str(), f.beta, f.alpha);
    }
    return 0;
}

int cmd_fit(const std::string& variance, std::uint64_t n_min, bool use_mse, const std::string& out) {
    const std::vector<CellStats> cells = read_variance_csv(variance);
    std::vector<std::string> methods;
    for (const auto& c : cells) {
        if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) methods.push_back(c.method);
    }
    if (use_mse) {
        for (const auto& c : cells) {
            if (!c.mse) throw Error("invalid-argument", "--use-mse but the variance file has no mse column values");
        }
    }
    const std::vector<RegressionFit> fits = fit_loglog(cells, methods, n_min, use_mse);
    const std::string text = dump(fits_document(fits));
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text(out, text);
    }
    return 0;
}

int cmd_vrf(const std::string& fits_path, const std::string& method, const std::string& baseline,
            const std::string& n_text) {
    const std::vector<RegressionFit> fits = load_fits(fits_path);
    auto find = [&](const std::string& name) {
        for (const auto& f : fits) {
            if (f.method == name) return f;
        }
        throw Error("unknown-method", "no fit for '" + name + "' in " + fits_path);
    };
    const RegressionFit m = find(method);
    const RegressionFit b = find(baseline);
    for (std::uint64_t n : parse_n_grid(n_text)) std::printf("%.1f\n", vrf(m, b, static_cast<double>(n)));
    return 0;
}

struct ProbeArgs {
    std::string example = "disk";
    std::size_t k = 2;
    std::string m = "8..12";
    double eps = 0.05;
    std::optional<std::uint64_t> seed;
    std::string target;
    std::string z0;
    std::string out;
    unsigned threads = 0;
};

int cmd_probe(const ProbeArgs& a) {
    if (!a.seed) throw Error("missing-seed", "--seed is required");
    const ExampleSpec ex = builtin_example(a.example);
    ProbeSpec spec;
    spec.domain = ex.domain;
    spec.z0 = a.z0.empty() ? ex.z0 : parse_point(a.z0);
    spec.k = a.k;
    spec.epsilon = a.eps;
    spec.threads = a.threads;
    if (!a.target.empty()) {
        spec.target.assign(static_cast<std::size_t>(ex.domain->component_count()), 0);
        for (const auto& t : split(a.target, ',')) {
            const double id = parse_double(t, "--target id");
            if (id < 0 || id != std::floor(id) || id >= static_cast<double>(spec.target.size())) {
                throw Error("invalid-argument", "--target id '" + t + "' out of range");
            }
            spec.target[static_cast<std::size_t>(id)] = 1;
        }
    }
    const std::vector<unsigned> ms = parse_m_range(a.m);
    // argument checks before the first long count
    for (unsigned m : ms) {
        spec.m = m;
        if (spec.k < 1 || spec.k > 3 || spec.k * m > 36) {
            throw Error("invalid-argument", "need k in 1..3 and k*m <= 36");
        }
    }
    if (a.out.empty()) throw Error("invalid-argument", "--out is required");
    fs::create_directories(a.out);

    std::vector<ProbeResult> rows;
    std::vector<std::pair<unsigned, std::uint64_t>> counts;
    for (unsigned m : ms) {
        spec.m = m;
        rows.push_back(boundary_box_count(spec));
        counts.emplace_back(m, rows.back().flagged);
        std::printf("k=%zu m=%u flagged=%llu\n", spec.k, m, static_cast<unsigned long long>(rows.back().flagged));
    }
    std::ostringstream csv;
    write_probe_csv(csv, rows);
    write_text(fs::path(a.out) / "probe.csv", csv.str());

    json exponent = nullptr;
    try {
        exponent = growth_exponent(counts, spec.k);
    } catch (const Error&) {
    }
    json js = {{"config",
                {{"example", a.example},
                 {"k", spec.k},
                 {"m", ms},
                 {"epsilon", spec.epsilon},
                 {"seed", *a.seed},
                 {"z0", point_json(spec.z0)},
                 {"target", a.target}}},
               {"growth_exponent", exponent},
               {"theory_exponent", static_cast<double>(spec.k - 1) / static_cast<double>(spec.k)}};
    write_text(fs::path(a.out) / "probe.json", dump(js));
    if (exponent.is_null()) {
        std::printf("growth exponent: undetermined (fewer than 3 nonzero counts)\n");
    } else {
        std::printf("growth exponent: %.4f\n", exponent.get<double>());
    }
    return 0;
}

int cmd_exact(const std::string& example, const std::string& z0) {
    const Point z = z0.empty() ? builtin_example(example).z0 : parse_point(z0);
    std::printf("%.17g\n", exact_solution(example, z));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"walk-on-spheres with randomized quasi-Monte Carlo"};
    app.require_subcommand(1);

    RunArgs run;
    auto* r = app.add_subcommand("run", "replicate study over methods and sample sizes");
    r->add_option("--example", run.example, "gasket, disk, sector, dumbbell or ball")->required();
    r->add_option("--methods", run.methods, "comma list of mc, sobol, halton, lattice, niederreiter");
    r->add_option("--n", run.n, "2^a..2^b or a comma list");
    r->add_option("--replicates,-R", run.replicates);
    r->add_option("--seed", run.seed);
    r->add_option("--eps", run.eps, "shell width epsilon");
    r->add_option("--K", run.K, "maximum walk steps");
    r->add_option("--out", run.out, "output directory");
    r->add_flag("--debug-unrandomized", run.unrandomized, "disable scrambling and shifts");
    r->add_option("--threads", run.threads, "0 uses all cores");
    r->add_option("--domain", run.domain, "domain JSON replacing the example's");
    r->add_option("--z0", run.z0, "start point x,y[,z]");
    r->add_option("--set-boundary", run.set_boundary, "ID=VALUE constant boundary value override");
    r->add_option("--niederreiter-matrices", run.niederreiter, "raw generator column file");
    r->add_option("--n-min", run.n_min, "smallest n used in the fits");
    r->add_option("--baseline", run.baseline, "baseline method for VRFs");
    r->add_option("--vrf-n", run.vrf_n, "sample sizes at which VRFs are reported");

    std::string fit_variance;
    std::string fit_out;
    std::uint64_t fit_nmin = 128;
    bool fit_mse = false;
    auto* f = app.add_subcommand("fit", "log-log fits from a variance CSV");
    f->add_option("--variance", fit_variance)->required();
    f->add_option("--n-min", fit_nmin);
    f->add_flag("--use-mse", fit_mse);
    f->add_option("--out", fit_out, "fits JSON (stdout when omitted)");

    std::string vrf_fits;
    std::string vrf_method;
    std::string vrf_baseline = "mc";
    std::string vrf_n = "2^17";
    auto* v = app.add_subcommand("vrf", "variance reduction factor from fitted coefficients");
    v->add_option("--fits", vrf_fits)->required();
    v->add_option("--method", vrf_method)->required();
    v->add_option("--baseline", vrf_baseline);
    v->add_option("--n", vrf_n);

    ProbeArgs probe;
    auto* p = app.add_subcommand("probe", "dyadic boundary box count of the termination sets");
    p->add_option("--example", probe.example);
    p->add_option("--k", probe.k);
    p->add_option("--m", probe.m, "a..b or a comma list");
    p->add_option("--eps", probe.eps);
    p->add_option("--seed", probe.seed);
    p->add_option("--target", probe.target, "comma list of component ids (default: all)");
    p->add_option("--z0", probe.z0);
    p->add_option("--out", probe.out);
    p->add_option("--threads", probe.threads);

    std::string exact_example;
    std::string exact_z0;
    auto* e = app.add_subcommand("exact", "closed-form solution value");
    e->add_option("--example", exact_example)->required();
    e->add_option("--z0", exact_z0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        std::cerr << "error: usage: " << ex.what() << "\n";
        return 2;
    }

    try {
        if (*r) return cmd_run(run);
        if (*f) return cmd_fit(fit_variance, fit_nmin, fit_mse, fit_out);
        if (*v) return cmd_vrf(vrf_fits, vrf_method, vrf_baseline, vrf_n);
        if (*p) return cmd_probe(probe);
        if (*e) return cmd_exact(exact_example, exact_z0);
    } catch (const Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: internal: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}

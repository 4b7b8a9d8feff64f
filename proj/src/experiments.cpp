#include "wosqmc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "wosqmc/domain_config.hpp"
#include "wosqmc/error.hpp"

#ifndef WOSQMC_DEFAULT_DATA_DIR
#define WOSQMC_DEFAULT_DATA_DIR "data"
#endif

namespace wosqmc {

namespace {

constexpr const char* kSobolFile = "new-joe-kuo-6.21201";
constexpr const char* kLatticeFile = "lattice-33002-1024-1048576.9125";

std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_name(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t cell_seed(std::uint64_t seed, const std::string& method, std::uint64_t n) {
    return mix64(mix64(seed ^ hash_name(method)) ^ n);
}

struct ExampleInfo {
    const char* name;
    Point z0;
    double epsilon;
    EstimatorKind kind;
    const char* exact;  // formula id, or nullptr
};

const std::vector<ExampleInfo>& example_table() {
    static const std::vector<ExampleInfo> table = [] {
        const double r0 = 0.1244;
        const double t0 = -0.7906;
        return std::vector<ExampleInfo>{
            {"gasket", Point(0.240999, 0.3), 1e-3, EstimatorKind::harmonic, nullptr},
            {"disk", Point(0.0, 0.5), 1e-4, EstimatorKind::harmonic, "disk_log"},
            {"sector", Point(r0 * std::cos(t0), r0 * std::sin(t0)), 1e-4, EstimatorKind::source, "sector_exact"},
            {"dumbbell", Point(0.5, 0.0), 1e-4, EstimatorKind::constant_source, nullptr},
            {"ball", Point(0.2, 0.3, -0.1), 1e-4, EstimatorKind::harmonic, "ball_inverse"},
        };
    }();
    return table;
}

const ExampleInfo& example_info(const std::string& name) {
    for (const ExampleInfo& e : example_table()) {
        if (name == e.name) return e;
    }
    throw Error("unknown-example", "'" + name + "' (known: gasket, disk, sector, dumbbell, ball)");
}

std::shared_ptr<const GeneratorMatrices> sobol_matrices(const std::filesystem::path& dir, std::size_t dims) {
    // the file is large; keep the widest load per directory
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const GeneratorMatrices>> cache;
    const std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[dir.string()];
    if (!slot || slot->dimensions() < dims) {
        slot = std::make_shared<const GeneratorMatrices>(load_generator_matrices(dir / kSobolFile, dims));
    }
    return slot;
}

}  // namespace

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("WOSQMC_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return WOSQMC_DEFAULT_DATA_DIR;
}

std::vector<std::string> builtin_example_names() {
    std::vector<std::string> out;
    for (const ExampleInfo& e : example_table()) out.emplace_back(e.name);
    return out;
}

ExampleSpec builtin_example(const std::string& name, const std::filesystem::path& data_dir) {
    const ExampleInfo& info = example_info(name);
    ExampleSpec ex;
    ex.name = name;
    ex.domain = std::make_shared<const Domain>(load_domain_spec(data_dir / (name + ".json")));
    ex.z0 = info.z0;
    ex.walk.epsilon = info.epsilon;
    ex.walk.max_steps = 200;
    ex.kind = info.kind;
    ex.exact = info.exact ? find_formula(info.exact) : nullptr;
    return ex;
}

ExampleSpec with_boundary_values(const ExampleSpec& example, const std::map<int, double>& values) {
    DomainSpec spec = example.domain->spec();
    int id = 0;
    std::size_t used = 0;
    for (RegionSpec& r : spec.regions) {
        for (ComponentSpec& c : r.components) {
            if (const auto it = values.find(id); it != values.end()) {
                c.boundary = BoundaryData::value(it->second);
                ++used;
            }
            ++id;
        }
    }
    if (used != values.size()) {
        throw Error("invalid-argument", "boundary override names a component id outside 0.." + std::to_string(id - 1));
    }
    ExampleSpec out = example;
    out.domain = std::make_shared<const Domain>(std::move(spec));
    out.exact = nullptr;
    return out;
}

double exact_solution(const std::string& name, const Point& z) {
    const ExampleInfo& info = example_info(name);
    if (!info.exact) throw Error("no-exact-solution", "example '" + name + "' has no closed-form solution");
    if (z.dim() != (name == "ball" ? 3 : 2)) throw Error("invalid-argument", "point dimension does not match " + name);
    return find_formula(info.exact)(z);
}

Method make_method(const std::string& name, std::size_t dim, const MethodOptions& options) {
    Method m;
    m.name = name;
    m.sampler.dim = dim;
    m.sampler.randomize = options.randomize;
    if (name == "mc") {
        m.sampler.backend = Backend::mc;
    } else if (name == "sobol") {
        m.sampler.backend = Backend::digital_net;
        m.sampler.matrices = sobol_matrices(options.data_dir, dim);
    } else if (name == "niederreiter") {
        if (options.niederreiter_matrices.empty()) {
            throw Error("missing-data-file", "niederreiter needs a generator-column file (--niederreiter-matrices)");
        }
        m.sampler.backend = Backend::digital_net;
        m.sampler.matrices =
            std::make_shared<const GeneratorMatrices>(load_generator_columns(options.niederreiter_matrices));
    } else if (name == "halton") {
        m.sampler.backend = Backend::halton;
    } else if (name == "lattice") {
        m.sampler.backend = Backend::lattice;
        m.sampler.lattice = std::make_shared<const LatticeVector>(load_lattice_vector(options.data_dir / kLatticeFile));
    } else {
        throw Error("unknown-method", "'" + name + "' (known: mc, sobol, halton, lattice, niederreiter)");
    }
    return m;
}

std::vector<CellStats> StudyTable::cells() const {
    std::vector<CellStats> out;
    std::map<std::pair<std::string, std::uint64_t>, std::vector<double>> groups;
    for (const StudyRow& r : rows) {
        auto& g = groups[{r.method, r.n}];
        if (g.empty()) out.push_back(CellStats{r.method, r.n, 0, 0.0, 0.0, std::nullopt});
        g.push_back(r.estimate);
    }
    for (CellStats& c : out) {
        const auto& v = groups.at({c.method, c.n});
        c.replicates = v.size();
        double sum = 0.0;
        for (double x : v) sum += x;
        c.mean = sum / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - c.mean) * (x - c.mean);
        c.variance = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
        if (exact) c.mse = c.variance + (c.mean - *exact) * (c.mean - *exact);
    }
    return out;
}

StudyTable run_study(const ExampleSpec& example, const std::vector<Method>& methods,
                     const std::vector<std::uint64_t>& n_grid, const StudyOptions& options) {
    if (options.replicates == 0) throw Error("invalid-argument", "need at least one replicate");
    if (methods.empty() || n_grid.empty()) throw Error("invalid-argument", "empty method list or n grid");
    const std::size_t need = example.row_length();
    for (const Method& m : methods) {
        if (m.sampler.dim != need) {
            throw Error("sampler-dimension-mismatch", "method " + m.name + " has dimension " +
                                                          std::to_string(m.sampler.dim) + ", example needs " +
                                                          std::to_string(need));
        }
        // surface size errors before any compute
        for (std::uint64_t n : n_grid) {
            if (n == 0) throw Error("invalid-sample-size", "n must be positive");
            if (m.sampler.backend == Backend::digital_net || m.sampler.backend == Backend::lattice) {
                if ((n & (n - 1)) != 0) {
                    throw Error("invalid-sample-size", "n = " + std::to_string(n) + " is not a power of 2 (required by " +
                                                           m.name + ")");
                }
            }
        }
    }

    StudyTable table;
    table.example = example.name;
    if (example.exact) table.exact = example.exact(example.z0);
    const std::size_t R = options.replicates;
    table.rows.resize(methods.size() * n_grid.size() * R);

    // jobs run largest n first for balance; each writes only its own row
    std::vector<std::size_t> order(table.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return n_grid[(a / R) % n_grid.size()] > n_grid[(b / R) % n_grid.size()];
    });

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= order.size()) return;
            const std::size_t idx = order[k];
            const std::size_t rep = idx % R;
            const std::uint64_t n = n_grid[(idx / R) % n_grid.size()];
            const Method& m = methods[idx / (R * n_grid.size())];
            try {
                SamplerSpec s = m.sampler;
                s.seed = cell_seed(options.seed, m.name, n);
                s.replicate = static_cast<std::uint32_t>(rep);
                const Estimate e = estimate(*example.domain, example.z0, example.walk, s, n, example.kind,
                                            example.fixed_steps);
                table.rows[idx] = StudyRow{example.name, m.name, n, rep, e.mean, e.truncation_rate};
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next.store(order.size());
            }
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, order.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

RegressionFit fit_points(const std::string& method, const std::vector<std::pair<std::uint64_t, double>>& points,
                         std::uint64_t n_min) {
    std::vector<std::pair<double, double>> xy;
    std::vector<std::uint64_t> ns;
    RegressionFit fit;
    fit.method = method;
    fit.n_min = 0;
    for (const auto& [n, v] : points) {
        if (n < n_min || !(v > 0.0) || !std::isfinite(v)) continue;
        xy.emplace_back(std::log(static_cast<double>(n)), std::log(v));
        ns.push_back(n);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.size() < 3) {
        throw Error("degenerate-fit", method + ": need 3 distinct n >= " + std::to_string(n_min) +
                                          " with positive variance, have " + std::to_string(ns.size()));
    }
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : xy) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(xy.size());
    my /= static_cast<double>(xy.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    fit.beta = sxy / sxx;
    fit.alpha = my - fit.beta * mx;
    fit.n_min = ns.front();
    fit.n_max = ns.back();
    fit.points = xy.size();
    return fit;
}

namespace {

std::vector<std::pair<std::uint64_t, double>> collect(const std::vector<CellStats>& cells,
                                                      const std::vector<std::string>& methods, bool use_mse) {
    std::vector<std::pair<std::uint64_t, double>> pts;
    for (const CellStats& c : cells) {
        if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) continue;
        if (use_mse && !c.mse) throw Error("invalid-argument", "MSE requested but no exact solution");
        pts.emplace_back(c.n, use_mse ? *c.mse : c.variance);
    }
    return pts;
}

}  // namespace

std::vector<RegressionFit> fit_loglog(const std::vector<CellStats>& cells, const std::vector<std::string>& methods,
                                      std::uint64_t n_min, bool use_mse) {
    std::vector<RegressionFit> out;
    for (const std::string& m : methods) out.push_back(fit_points(m, collect(cells, {m}, use_mse), n_min));
    return out;
}

RegressionFit fit_pooled(const std::vector<CellStats>& cells, const std::vector<std::string>& methods,
                         std::uint64_t n_min, const std::string& label, bool use_mse) {
    return fit_points(label, collect(cells, methods, use_mse), n_min);
}

double vrf(const RegressionFit& method, const RegressionFit& baseline, double n) {
    const double ln = std::log(n);
    return std::exp((baseline.alpha + baseline.beta * ln) - (method.alpha + method.beta * ln));
}

namespace {

std::uint64_t parse_term(const std::string& t) {
    const auto bad = [&]() -> std::uint64_t { throw Error("invalid-argument", "cannot parse sample size '" + t + "'"); };
    if (t.empty()) return bad();
    std::size_t used = 0;
    try {
        if (t.rfind("2^", 0) == 0) {
            const unsigned long e = std::stoul(t.substr(2), &used);
            if (used != t.size() - 2 || e > 63) return bad();
            return std::uint64_t{1} << e;
        }
        const unsigned long long v = std::stoull(t, &used);
        if (used != t.size()) return bad();
        return v;
    } catch (const std::logic_error&) {
        return bad();
    }
}

}  // namespace

std::vector<std::uint64_t> parse_n_grid(const std::string& text) {
    std::vector<std::uint64_t> out;
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const std::string lo_s = text.substr(0, dots);
        const std::string hi_s = text.substr(dots + 2);
        if (lo_s.rfind("2^", 0) != 0 || hi_s.rfind("2^", 0) != 0) {
            throw Error("invalid-argument", "range must read 2^a..2^b, got '" + text + "'");
        }
        const std::uint64_t lo = parse_term(lo_s);
        const std::uint64_t hi = parse_term(hi_s);
        if (lo > hi) throw Error("invalid-argument", "empty range '" + text + "'");
        for (std::uint64_t n = lo; n <= hi && n != 0; n <<= 1) out.push_back(n);
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string term = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(parse_term(term));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace wosqmc

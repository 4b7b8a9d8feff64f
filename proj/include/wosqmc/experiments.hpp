#pragma once

// Worked examples, replicate studies over (method, n), log-log variance fits
// and variance reduction factors.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wosqmc/engine.hpp"
#include "wosqmc/geometry.hpp"
#include "wosqmc/samplers.hpp"

namespace wosqmc {

/// Data directory: $WOSQMC_DATA_DIR when set, else the repository's data/.
std::filesystem::path default_data_dir();

struct ExampleSpec {
    std::string name;
    std::shared_ptr<const Domain> domain;
    Point z0;
    WalkConfig walk;
    EstimatorKind kind = EstimatorKind::harmonic;
    std::size_t fixed_steps = 0;  // only for EstimatorKind::fixed_step
    PointFunction exact = nullptr;

    std::size_t row_length() const { return wosqmc::row_length(domain->dimension(), kind, walk, fixed_steps); }
};

/// gasket, disk, sector, dumbbell or ball, with the domain read from
/// <data_dir>/<name>.json. Throws Error("unknown-example").
ExampleSpec builtin_example(const std::string& name, const std::filesystem::path& data_dir = default_data_dir());

std::vector<std::string> builtin_example_names();

/// Copy of the example with constant boundary values on the given component
/// ids (e.g. the gasket bore temperatures). The exact solution is dropped.
ExampleSpec with_boundary_values(const ExampleSpec& example, const std::map<int, double>& values);

/// Closed-form solution for disk, sector and ball; Error("no-exact-solution")
/// for the others.
double exact_solution(const std::string& name, const Point& z);

/// A sampling method: a display name plus the sampler it configures.
struct Method {
    std::string name;
    SamplerSpec sampler;  // seed and replicate are filled per study cell
};

struct MethodOptions {
    std::filesystem::path data_dir = default_data_dir();
    std::filesystem::path niederreiter_matrices;  // raw column file; needed for "niederreiter"
    bool randomize = true;
};

/// mc, sobol, halton, lattice or niederreiter, sized for `dim` coordinates.
/// Throws Error("unknown-method"), or the loaders' errors for missing data.
Method make_method(const std::string& name, std::size_t dim, const MethodOptions& options = {});

struct StudyRow {
    std::string example;
    std::string method;
    std::uint64_t n = 0;
    std::size_t replicate = 0;
    double estimate = 0.0;
    double truncation_rate = 0.0;
};

struct CellStats {
    std::string method;
    std::uint64_t n = 0;
    std::size_t replicates = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased, across replicate estimates
    std::optional<double> mse;  // variance + bias^2 when an exact value exists
};

struct StudyTable {
    std::string example;
    std::optional<double> exact;
    std::vector<StudyRow> rows;  // ordered by method, n, replicate

    std::vector<CellStats> cells() const;
};

struct StudyOptions {
    std::size_t replicates = 50;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Runs every (method, n, replicate) cell. Each cell has its own
/// randomization keyed by (seed, method name, n, replicate), so results do not
/// depend on scheduling or on which other methods are in the list.
StudyTable run_study(const ExampleSpec& example, const std::vector<Method>& methods,
                     const std::vector<std::uint64_t>& n_grid, const StudyOptions& options);

struct RegressionFit {
    std::string method;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t n_min = 0;
    std::uint64_t n_max = 0;
    std::size_t points = 0;
};

/// Least squares of log(value) on log(n) over points with n >= n_min and
/// value > 0. Needs at least 3 distinct n, else Error("degenerate-fit").
RegressionFit fit_points(const std::string& method, const std::vector<std::pair<std::uint64_t, double>>& points,
                         std::uint64_t n_min);

/// One fit per method from the table's cell variances (or MSEs).
std::vector<RegressionFit> fit_loglog(const std::vector<CellStats>& cells, const std::vector<std::string>& methods,
                                      std::uint64_t n_min, bool use_mse = false);

/// Single fit pooling all cells of the listed methods.
RegressionFit fit_pooled(const std::vector<CellStats>& cells, const std::vector<std::string>& methods,
                         std::uint64_t n_min, const std::string& label = "pooled", bool use_mse = false);

/// Fitted-variance ratio baseline / method at n.
double vrf(const RegressionFit& method, const RegressionFit& baseline, double n);

/// Parses "2^a..2^b" into the power-of-2 grid, or a comma list of integers
/// and 2^k terms.
std::vector<std::uint64_t> parse_n_grid(const std::string& text);

}  // namespace wosqmc

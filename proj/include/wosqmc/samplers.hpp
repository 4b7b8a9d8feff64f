#pragma once

// Randomized point sets in [0,1)^dim, keyed by (seed, replicate).
//
// Backends:
//   mc           independent uniforms from a counter-based generator
//   digital_net  base-2 digital net (Sobol' or any loaded generator matrices)
//                with a random lower-triangular matrix scramble and digital shift
//   halton       Halton points with random digit permutations per digit position
//   lattice      rank-1 lattice {i z / n} with a uniform random shift
//
// Every coordinate is a multiple of 2^-53 in [0, 1). Point sets are evaluated
// lazily: coord(i, j) costs O(log n) and needs no shared mutable state.

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace wosqmc {

enum class Backend : std::uint8_t { mc = 0, digital_net = 1, halton = 2, lattice = 3 };

std::string to_string(Backend b);

/// Columns of the 32x32 binary generator matrix per dimension. Column k is a
/// 32-bit integer whose most significant bit is the first output digit.
struct GeneratorMatrices {
    std::vector<std::array<std::uint32_t, 32>> columns;
    std::size_t dimensions() const noexcept { return columns.size(); }
};

/// Parses a Joe-Kuo direction-number file ("d s a m_1 ... m_s" per line, the
/// first dimension implicit) into Sobol' generator matrices for `dims`
/// dimensions. Throws Error("parse-error") with the line number on malformed
/// input, Error("dimension-unsupported") when the file is too short.
GeneratorMatrices load_generator_matrices(const std::filesystem::path& path, std::size_t dims);

/// Parses raw generator matrices: one line per dimension holding 32 column
/// integers. This is how Niederreiter (or any other base-2) nets are supplied.
GeneratorMatrices load_generator_columns(const std::filesystem::path& path);

struct LatticeVector {
    std::vector<std::uint64_t> z;
};

/// One generating-vector component per line.
LatticeVector load_lattice_vector(const std::filesystem::path& path);

struct SamplerSpec {
    Backend backend = Backend::mc;
    std::size_t dim = 1;
    std::uint64_t seed = 0;
    std::uint32_t replicate = 0;
    /// false turns off scrambling, shifts and permutations (golden-value tests).
    bool randomize = true;
    std::shared_ptr<const GeneratorMatrices> matrices;  // digital_net
    std::shared_ptr<const LatticeVector> lattice;       // lattice
};

class PointSet {
public:
    PointSet(std::size_t dim, std::uint64_t n) : dim_(dim), n_(n) {}
    virtual ~PointSet() = default;
    PointSet(const PointSet&) = delete;
    PointSet& operator=(const PointSet&) = delete;

    /// Coordinate j of point i, for i < size(), j < dim().
    virtual double coord(std::uint64_t i, std::size_t j) const = 0;

    std::size_t dim() const noexcept { return dim_; }
    std::uint64_t size() const noexcept { return n_; }

private:
    std::size_t dim_;
    std::uint64_t n_;
};

/// Lazily evaluated row i of a point set.
class PointRow {
public:
    PointRow(const PointSet& set, std::uint64_t index) : set_(&set), index_(index) {}
    double operator[](std::size_t j) const { return set_->coord(index_, j); }
    std::size_t size() const noexcept { return set_->dim(); }

private:
    const PointSet* set_;
    std::uint64_t index_;
};

/// Validates the spec against n and builds the randomized point set.
/// Errors: "invalid-sample-size" (n == 0, or n not a power of 2 for
/// digital_net/lattice), "dimension-unsupported" (dim exceeds the data).
std::unique_ptr<const PointSet> make_point_set(const SamplerSpec& spec, std::uint64_t n);

/// Dense row-major n x dim matrix.
struct PointMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

PointMatrix generate(const SamplerSpec& spec, std::uint64_t n);

/// Halton points regardless of spec.backend; any n >= 1.
PointMatrix halton_points(const SamplerSpec& spec, std::uint64_t n);

/// The first `count` primes.
std::vector<std::uint32_t> first_primes(std::size_t count);

}  // namespace wosqmc

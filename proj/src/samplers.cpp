#include "wosqmc/samplers.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "wosqmc/error.hpp"
#include "wosqmc/philox.hpp"

namespace wosqmc {

namespace {

constexpr std::uint64_t kMaxNetPoints = std::uint64_t{1} << 32;

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line, const std::string& what) {
    throw Error("parse-error", path.string() + ":" + std::to_string(line) + ": " + what);
}

std::array<std::uint32_t, 32> van_der_corput_columns() {
    std::array<std::uint32_t, 32> v{};
    for (int k = 0; k < 32; ++k) v[k] = std::uint32_t{1} << (31 - k);
    return v;
}

void require_power_of_two(std::uint64_t n, Backend b) {
    if (!std::has_single_bit(n)) {
        throw Error("invalid-sample-size",
                    "n = " + std::to_string(n) + " is not a power of 2 (required by " + to_string(b) + ")");
    }
}

class MonteCarloSet final : public PointSet {
public:
    MonteCarloSet(const SamplerSpec& s, std::uint64_t n) : PointSet(s.dim, n), seed_(s.seed), rep_(s.replicate) {}
    double coord(std::uint64_t i, std::size_t j) const override {
        return unit_from_bits(keyed_bits(seed_, rep_, static_cast<std::uint8_t>(Backend::mc),
                                         static_cast<std::uint32_t>(j), i));
    }

private:
    std::uint64_t seed_;
    std::uint32_t rep_;
};

// Scrambled columns C_j = L_j * V_j are precomputed as 64-bit words so a
// coordinate is shift ^ (xor of the columns selected by the bits of i).
class DigitalNetSet final : public PointSet {
public:
    DigitalNetSet(const SamplerSpec& s, std::uint64_t n) : PointSet(s.dim, n), cols_(s.dim), shift_(s.dim, 0) {
        constexpr auto stream = static_cast<std::uint8_t>(Backend::digital_net);
        for (std::size_t j = 0; j < s.dim; ++j) {
            const auto jj = static_cast<std::uint32_t>(j);
            std::array<std::uint64_t, 32> scramble{};
            for (int l = 0; l < 32; ++l) {
                const std::uint64_t diag = std::uint64_t{1} << (63 - l);
                scramble[l] = s.randomize ? diag | (keyed_bits(s.seed, s.replicate, stream, jj, l) & (diag - 1))
                                          : diag;
            }
            if (s.randomize) shift_[j] = keyed_bits(s.seed, s.replicate, stream, jj, 32);
            const auto& v = s.matrices->columns[j];
            for (int b = 0; b < 32; ++b) {
                std::uint64_t out = 0;
                for (int l = 0; l < 32; ++l) {
                    if ((v[b] >> (31 - l)) & 1u) out ^= scramble[l];
                }
                cols_[j][b] = out;
            }
        }
    }

    double coord(std::uint64_t i, std::size_t j) const override {
        std::uint64_t x = shift_[j];
        const auto& c = cols_[j];
        for (int b = 0; i != 0; ++b, i >>= 1) {
            if (i & 1u) x ^= c[b];
        }
        return unit_from_bits(x);
    }

private:
    std::vector<std::array<std::uint64_t, 32>> cols_;
    std::vector<std::uint64_t> shift_;
};

class HaltonSet final : public PointSet {
public:
    HaltonSet(const SamplerSpec& s, std::uint64_t n) : PointSet(s.dim, n), bases_(first_primes(s.dim)) {
        constexpr auto stream = static_cast<std::uint8_t>(Backend::halton);
        offsets_.resize(s.dim);
        digits_.resize(s.dim);
        for (std::size_t j = 0; j < s.dim; ++j) {
            const std::uint32_t b = bases_[j];
            // enough digits that b^digits >= 2^53
            const auto digits = static_cast<int>(std::ceil(53.0 / std::log2(static_cast<double>(b))));
            digits_[j] = digits;
            offsets_[j] = perms_.size();
            for (int k = 0; k < digits; ++k) {
                const std::size_t base_index = perms_.size();
                for (std::uint32_t a = 0; a < b; ++a) perms_.push_back(a);
                if (!s.randomize) continue;
                // Fisher-Yates from keyed bits; counter = (digit, step)
                for (std::uint32_t t = b - 1; t > 0; --t) {
                    const std::uint64_t r = keyed_bits(s.seed, s.replicate, stream, static_cast<std::uint32_t>(j),
                                                       (static_cast<std::uint64_t>(k) << 32) | t);
                    const auto pick = static_cast<std::uint32_t>(
                        (static_cast<unsigned __int128>(r) * (t + 1)) >> 64);
                    std::swap(perms_[base_index + t], perms_[base_index + pick]);
                }
            }
        }
    }

    double coord(std::uint64_t i, std::size_t j) const override {
        const std::uint32_t b = bases_[j];
        const int digits = digits_[j];
        const std::uint32_t* perm = perms_.data() + offsets_[j];
        // digit k of i, k = 0 least significant; all positions up to `digits`
        // are permuted, including the leading zeros of i
        std::array<std::uint32_t, 64> a{};
        for (int k = 0; k < digits && i != 0; ++k) {
            a[k] = static_cast<std::uint32_t>(i % b);
            i /= b;
        }
        double x = 0.0;
        const double inv_b = 1.0 / static_cast<double>(b);
        for (int k = digits - 1; k >= 0; --k) {
            x = (x + static_cast<double>(perm[static_cast<std::size_t>(k) * b + a[k]])) * inv_b;
        }
        // quantize to the 2^-53 grid and stay below 1
        x = std::floor(x * 0x1.0p53) * 0x1.0p-53;
        return x < 1.0 ? x : 1.0 - 0x1.0p-53;
    }

private:
    std::vector<std::uint32_t> bases_;
    std::vector<int> digits_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> perms_;
};

class LatticeSet final : public PointSet {
public:
    LatticeSet(const SamplerSpec& s, std::uint64_t n) : PointSet(s.dim, n), z_(s.dim), shift_(s.dim, 0.0), mask_(n - 1) {
        constexpr auto stream = static_cast<std::uint8_t>(Backend::lattice);
        inv_n_ = 1.0 / static_cast<double>(n);
        for (std::size_t j = 0; j < s.dim; ++j) {
            z_[j] = s.lattice->z[j];
            if (s.randomize) {
                shift_[j] = unit_from_bits(keyed_bits(s.seed, s.replicate, stream, static_cast<std::uint32_t>(j), 0));
            }
        }
    }

    double coord(std::uint64_t i, std::size_t j) const override {
        // n is a power of 2, so arithmetic mod 2^64 then masking gives i z mod n;
        // k/n and the shift are both on the 2^-53 grid, so the sum is exact
        const double x = static_cast<double>((i * z_[j]) & mask_) * inv_n_ + shift_[j];
        return x < 1.0 ? x : x - 1.0;
    }

private:
    std::vector<std::uint64_t> z_;
    std::vector<double> shift_;
    std::uint64_t mask_;
    double inv_n_ = 1.0;
};

}  // namespace

std::string to_string(Backend b) {
    switch (b) {
        case Backend::mc:
            return "mc";
        case Backend::digital_net:
            return "digital-net";
        case Backend::halton:
            return "halton";
        case Backend::lattice:
            return "lattice";
    }
    return "?";
}

std::vector<std::uint32_t> first_primes(std::size_t count) {
    std::vector<std::uint32_t> primes;
    primes.reserve(count);
    for (std::uint32_t c = 2; primes.size() < count; ++c) {
        bool prime = true;
        for (std::uint32_t p : primes) {
            if (p * p > c) break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(c);
    }
    return primes;
}

GeneratorMatrices load_generator_matrices(const std::filesystem::path& path, std::size_t dims) {
    if (dims == 0) throw Error("invalid-argument", "requested zero dimensions");
    std::ifstream in(path);
    if (!in) throw Error("missing-data-file", "cannot open direction numbers " + path.string());

    GeneratorMatrices gm;
    gm.columns.reserve(dims);
    gm.columns.push_back(van_der_corput_columns());

    std::string line;
    std::size_t lineno = 0;
    while (gm.columns.size() < dims && std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (!std::isdigit(static_cast<unsigned char>(line[first]))) {
            if (lineno == 1) continue;  // "d s a m_i" header
            parse_error(path, lineno, "unexpected text");
        }
        std::istringstream fields(line);
        std::uint64_t d = 0, s = 0, a = 0;
        if (!(fields >> d >> s >> a)) parse_error(path, lineno, "expected 'd s a m_1 .. m_s'");
        if (s == 0 || s > 31) parse_error(path, lineno, "degree out of range");
        if (d != gm.columns.size() + 1) parse_error(path, lineno, "dimension index out of sequence");
        std::array<std::uint32_t, 33> v{};  // 1-based direction numbers v_1..v_32
        for (std::uint64_t k = 1; k <= s; ++k) {
            std::uint64_t m = 0;
            if (!(fields >> m)) parse_error(path, lineno, "missing m_" + std::to_string(k));
            if (m % 2 == 0 || m >= (std::uint64_t{1} << k)) {
                parse_error(path, lineno, "m_" + std::to_string(k) + " must be odd and below 2^" + std::to_string(k));
            }
            if (k <= 32) v[k] = static_cast<std::uint32_t>(m << (32 - k));
        }
        std::string extra;
        if (fields >> extra) parse_error(path, lineno, "trailing fields");
        for (std::uint64_t k = s + 1; k <= 32; ++k) {
            std::uint32_t x = v[k - s] ^ (v[k - s] >> s);
            for (std::uint64_t l = 1; l < s; ++l) {
                if ((a >> (s - 1 - l)) & 1u) x ^= v[k - l];
            }
            v[k] = x;
        }
        std::array<std::uint32_t, 32> cols{};
        for (int k = 0; k < 32; ++k) cols[k] = v[k + 1];
        gm.columns.push_back(cols);
    }
    if (gm.columns.size() < dims) {
        throw Error("dimension-unsupported", path.string() + " provides " + std::to_string(gm.columns.size()) +
                                                 " dimensions, " + std::to_string(dims) + " requested");
    }
    return gm;
}

GeneratorMatrices load_generator_columns(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("missing-data-file", "cannot open generator matrices " + path.string());
    GeneratorMatrices gm;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::array<std::uint32_t, 32> cols{};
        for (int k = 0; k < 32; ++k) {
            std::uint64_t c = 0;
            if (!(fields >> c) || c > 0xFFFFFFFFull) parse_error(path, lineno, "expected 32 column integers");
            if (c == 0) parse_error(path, lineno, "zero column");
            cols[k] = static_cast<std::uint32_t>(c);
        }
        std::string extra;
        if (fields >> extra) parse_error(path, lineno, "trailing fields");
        gm.columns.push_back(cols);
    }
    if (gm.columns.empty()) parse_error(path, lineno, "no dimensions");
    if (gm.columns.front() != van_der_corput_columns()) {
        parse_error(path, 1, "first dimension must be the identity (van der Corput) matrix");
    }
    return gm;
}

LatticeVector load_lattice_vector(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("missing-data-file", "cannot open lattice vector " + path.string());
    LatticeVector lv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::uint64_t z = 0;
        std::string extra;
        if (!(fields >> z) || (fields >> extra)) parse_error(path, lineno, "expected one integer");
        lv.z.push_back(z);
    }
    if (lv.z.empty()) parse_error(path, lineno, "empty generating vector");
    return lv;
}

std::unique_ptr<const PointSet> make_point_set(const SamplerSpec& spec, std::uint64_t n) {
    if (n == 0) throw Error("invalid-sample-size", "n must be positive");
    if (spec.dim == 0) throw Error("invalid-argument", "point dimension must be positive");
    switch (spec.backend) {
        case Backend::mc:
            return std::make_unique<MonteCarloSet>(spec, n);
        case Backend::digital_net:
            require_power_of_two(n, spec.backend);
            if (n > kMaxNetPoints) throw Error("invalid-sample-size", "digital nets support n <= 2^32");
            if (!spec.matrices) throw Error("missing-data-file", "digital net without generator matrices");
            if (spec.matrices->dimensions() < spec.dim) {
                throw Error("dimension-unsupported", "generator matrices cover " +
                                                         std::to_string(spec.matrices->dimensions()) +
                                                         " dimensions, " + std::to_string(spec.dim) + " requested");
            }
            return std::make_unique<DigitalNetSet>(spec, n);
        case Backend::halton:
            if (spec.dim > 100000) throw Error("dimension-unsupported", "halton supports up to 100000 dimensions");
            return std::make_unique<HaltonSet>(spec, n);
        case Backend::lattice:
            require_power_of_two(n, spec.backend);
            if (n > (std::uint64_t{1} << 53)) throw Error("invalid-sample-size", "lattice supports n <= 2^53");
            if (!spec.lattice) throw Error("missing-data-file", "lattice without a generating vector");
            if (spec.lattice->z.size() < spec.dim) {
                throw Error("dimension-unsupported", "generating vector has " + std::to_string(spec.lattice->z.size()) +
                                                         " components, " + std::to_string(spec.dim) + " requested");
            }
            return std::make_unique<LatticeSet>(spec, n);
    }
    throw Error("invalid-argument", "unknown backend");
}

PointMatrix generate(const SamplerSpec& spec, std::uint64_t n) {
    const auto set = make_point_set(spec, n);
    PointMatrix m{static_cast<std::size_t>(n), spec.dim, {}};
    m.values.resize(m.rows * m.cols);
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < spec.dim; ++j) m.values[i * m.cols + j] = set->coord(i, j);
    }
    return m;
}

PointMatrix halton_points(const SamplerSpec& spec, std::uint64_t n) {
    SamplerSpec h = spec;
    h.backend = Backend::halton;
    return generate(h, n);
}

}  // namespace wosqmc

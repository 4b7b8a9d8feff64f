#include "wosqmc/minkprobe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include "wosqmc/error.hpp"
#include "wosqmc/transforms.hpp"

namespace wosqmc {

int indicator_theta(const Domain& domain, const Point& z0, std::span<const char> target, std::size_t k, double eps,
                    std::span<const double> x) {
    if (domain.dimension() != 2) throw Error("invalid-argument", "probe needs a 2D domain");
    if (x.size() < k) throw Error("invalid-argument", "need k coordinates");
    std::vector<char> all;
    if (target.empty()) {
        all.assign(domain.component_count(), 1);
        target = all;
    }
    Point z = z0;
    for (std::size_t j = 0; j < k; ++j) {
        const auto [in, out] = domain.split_distance(z, target);
        if (j > 0 && (in < eps || out < eps)) return 0;  // stopped before step k
        const double r = std::min(in, out);
        z += r * circle_map(x[j]);
    }
    return domain.split_distance(z, target).first < eps ? 1 : 0;
}

namespace {

void check(const ProbeSpec& s) {
    if (!s.domain) throw Error("invalid-argument", "probe without a domain");
    if (s.domain->dimension() != 2) throw Error("invalid-argument", "probe needs a 2D domain");
    if (s.k < 1 || s.k > 3) throw Error("invalid-argument", "k must be 1, 2 or 3");
    if (s.m < 1 || s.k * s.m > 36) throw Error("invalid-argument", "need 1 <= m and k m <= 36");
    if (!(s.epsilon > 0.0)) throw Error("invalid-argument", "epsilon must be positive");
}

// Evaluates one box. Returns (flagged, centre value).
class BoxProbe {
public:
    explicit BoxProbe(const ProbeSpec& s) : s_(s) {
        if (s.target.empty()) {
            target_.assign(s.domain->component_count(), 1);
        } else {
            target_ = s.target;
        }
        grid_ = std::uint64_t{2} << s.m;
        for (std::size_t i = 0; i < s.k; ++i) pow3_ *= 3;
    }

    std::pair<bool, int> operator()(std::uint64_t box) const {
        std::array<std::uint64_t, 3> b{};
        for (std::size_t i = s_.k; i-- > 0;) {
            b[i] = box & ((std::uint64_t{1} << s_.m) - 1);
            box >>= s_.m;
        }
        std::array<double, 3> x{};
        auto eval = [&](unsigned code) {
            for (std::size_t i = 0; i < s_.k; ++i) {
                const std::uint64_t g = (2 * b[i] + code % 3) & (grid_ - 1);
                code /= 3;
                x[i] = static_cast<double>(g) / static_cast<double>(grid_);
            }
            return indicator_theta(*s_.domain, s_.z0, target_, s_.k, s_.epsilon, std::span<const double>(x.data(), s_.k));
        };
        const unsigned centre = (pow3_ - 1) / 2;  // all offsets 1
        const int c = eval(centre);
        for (unsigned code = 0; code < pow3_; ++code) {
            if (code != centre && eval(code) != c) return {true, c};
        }
        return {false, c};
    }

private:
    const ProbeSpec& s_;
    std::vector<char> target_;
    std::uint64_t grid_ = 0;
    unsigned pow3_ = 1;
};

unsigned thread_count(unsigned requested, std::uint64_t jobs) {
    unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::uint64_t>(t, std::max<std::uint64_t>(jobs, 1)));
}

// Splits [0, total) into contiguous chunks, one per thread.
template <class F>
void parallel_chunks(std::uint64_t total, unsigned threads, F&& body) {
    if (threads <= 1) {
        body(0u, std::uint64_t{0}, total);
        return;
    }
    std::vector<std::thread> pool;
    const std::uint64_t step = (total + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t lo = std::min(total, step * t);
        const std::uint64_t hi = std::min(total, lo + step);
        pool.emplace_back([&body, t, lo, hi] { body(t, lo, hi); });
    }
    for (std::thread& th : pool) th.join();
}

}  // namespace

ProbeResult boundary_box_count(const ProbeSpec& spec) {
    check(spec);
    const BoxProbe probe(spec);
    const std::uint64_t total = std::uint64_t{1} << (spec.k * spec.m);
    const unsigned threads = thread_count(spec.threads, total);
    std::vector<std::uint64_t> flagged(threads, 0);
    std::vector<std::uint64_t> inside(threads, 0);
    parallel_chunks(total, threads, [&](unsigned t, std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t f = 0;
        std::uint64_t c = 0;
        for (std::uint64_t box = lo; box < hi; ++box) {
            const auto [flag, centre] = probe(box);
            f += flag ? 1 : 0;
            c += static_cast<std::uint64_t>(centre);
        }
        flagged[t] = f;
        inside[t] = c;
    });
    ProbeResult r;
    r.k = spec.k;
    r.m = spec.m;
    r.total = total;
    std::uint64_t c = 0;
    for (unsigned t = 0; t < threads; ++t) {
        r.flagged += flagged[t];
        c += inside[t];
    }
    r.volume_estimate = static_cast<double>(c) / static_cast<double>(total);
    return r;
}

std::vector<char> box_flags(const ProbeSpec& spec) {
    check(spec);
    if (spec.k * spec.m > 24) throw Error("invalid-argument", "box_flags needs k m <= 24");
    const BoxProbe probe(spec);
    const std::uint64_t total = std::uint64_t{1} << (spec.k * spec.m);
    std::vector<char> out(total, 0);
    parallel_chunks(total, thread_count(spec.threads, total), [&](unsigned, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t box = lo; box < hi; ++box) out[box] = probe(box).first ? 1 : 0;
    });
    return out;
}

double growth_exponent(const std::vector<std::pair<unsigned, std::uint64_t>>& counts, std::size_t k) {
    if (k == 0) throw Error("invalid-argument", "k must be positive");
    std::vector<std::pair<double, double>> xy;
    for (const auto& [m, c] : counts) {
        if (c > 0) xy.emplace_back(static_cast<double>(m), std::log2(static_cast<double>(c)));
    }
    if (xy.size() < 3) throw Error("degenerate-fit", "need at least 3 resolutions with nonzero counts");
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
    if (sxx == 0.0) throw Error("degenerate-fit", "all counts at the same resolution");
    return sxy / sxx / static_cast<double>(k);
}

}  // namespace wosqmc

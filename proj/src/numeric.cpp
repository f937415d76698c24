#include "ntcheck/numeric.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "ntcheck/errors.hpp"

namespace ntcheck {

UnitRoots::UnitRoots(i64 c) : c_(c) {
    if (c < 1 || c > (i64{1} << 26))
        throw PreconditionError("UnitRoots: modulus out of table range");
    table_.resize(static_cast<std::size_t>(c));
    // Use the symmetry k -> c - k so both halves share the same rounding.
    for (i64 k = 0; k <= c / 2; ++k) {
        double angle = kTwoPi * static_cast<double>(k) / static_cast<double>(c);
        cplx z(std::cos(angle), std::sin(angle));
        table_[static_cast<std::size_t>(k)] = z;
        if (k != 0) table_[static_cast<std::size_t>(c - k)] = std::conj(z);
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : Rng(seed, 0) {}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL);
    for (auto& s : s_) {
        x = splitmix64(x);
        s = x;
    }
}

static inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t Rng::next() {
    std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

i64 Rng::integer(i64 lo, i64 hi) {
    if (hi < lo) throw PreconditionError("Rng::integer: empty range");
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<i64>(next());
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return lo + static_cast<i64>(x % span);
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = jobs < 1 ? 1 : static_cast<std::size_t>(jobs);
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace ntcheck

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace irs {

// SplitMix64 finalizer. Used both for seeding and for deriving stream ids.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

// Deterministic random stream keyed by (seed, stream id).  The same key
// yields the same draw sequence on every run and under any thread count;
// workers must each own their stream.  Generator is xoshiro256++ with all
// sampling algorithms implemented here, so sequences do not depend on the
// standard library.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {
        std::uint64_t x = hash_combine(mix64(seed), stream);
        for (auto& w : state_) {
            x = mix64(x);
            w = x;
        }
        // xoshiro must not start from the all-zero state
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[3] = 0x1ULL;
    }

    std::uint64_t seed_id() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    // New stream derived from this stream's identity (not its current state).
    RngStream derived(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        std::uint64_t s = hash_combine(stream_, a);
        s = hash_combine(s, b);
        s = hash_combine(s, c);
        return RngStream(seed_, s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1); never returns an exact 0 or 1.
    double uniform01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Marsaglia's polar method; the spare is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 via the boost trick.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
        if (shape < 1.0) {
            const double u = uniform01();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    double bernoulli(double p) { return uniform01() < p ? 1.0 : 0.0; }

    // Exact Binomial(n, p) sample.  Small n or small n*min(p,q) uses CDF
    // inversion; otherwise the BTPE rejection scheme of Kachitvichyanukul &
    // Schmeiser (1988).  No normal approximation anywhere.
    long binomial(long n, double p) {
        if (n < 0) throw std::invalid_argument("binomial: n must be >= 0");
        if (n == 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        const bool flip = p > 0.5;
        const double r = flip ? 1.0 - p : p;
        long y;
        if (n <= 64 || static_cast<double>(n) * r < 10.0) {
            y = binomial_inversion(n, r);
        } else {
            y = binomial_btpe(n, r);
        }
        return flip ? n - y : y;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    long binomial_inversion(long n, double p) {
        const double q = 1.0 - p;
        const double s = p / q;
        double f = std::exp(static_cast<double>(n) * std::log(q));
        double u = uniform01();
        long x = 0;
        for (;;) {
            if (u <= f || x == n) return x;
            u -= f;
            f *= s * static_cast<double>(n - x) / static_cast<double>(x + 1);
            ++x;
        }
    }

    long binomial_btpe(long n, double r) {
        const double q = 1.0 - r;
        const double nr = static_cast<double>(n) * r;
        const double npq = nr * q;
        const double fm = nr + r;
        const long m = static_cast<long>(fm);
        const double p1 = std::floor(2.195 * std::sqrt(npq) - 4.6 * q) + 0.5;
        const double xm = static_cast<double>(m) + 0.5;
        const double xl = xm - p1;
        const double xr = xm + p1;
        const double c = 0.134 + 20.5 / (15.3 + static_cast<double>(m));
        double a = (fm - xl) / (fm - xl * r);
        const double laml = a * (1.0 + 0.5 * a);
        a = (xr - fm) / (xr * q);
        const double lamr = a * (1.0 + 0.5 * a);
        const double p2 = p1 * (1.0 + 2.0 * c);
        const double p3 = p2 + c / laml;
        const double p4 = p3 + c / lamr;

        for (;;) {
            const double u = uniform01() * p4;
            double v = uniform01();
            long y;
            if (u <= p1) {
                return static_cast<long>(std::floor(xm - p1 * v + u));
            }
            if (u <= p2) {
                const double x = xl + (u - p1) / c;
                v = v * c + 1.0 - std::fabs(static_cast<double>(m) - x + 0.5) / p1;
                if (v > 1.0) continue;
                y = static_cast<long>(std::floor(x));
            } else if (u <= p3) {
                y = static_cast<long>(std::floor(xl + std::log(v) / laml));
                if (y < 0) continue;
                v = v * (u - p2) * laml;
            } else {
                y = static_cast<long>(std::floor(xr - std::log(v) / lamr));
                if (y > n) continue;
                v = v * (u - p3) * lamr;
            }

            const long k = std::labs(y - m);
            if (k <= 20 || static_cast<double>(k) >= npq / 2.0 - 1.0) {
                const double s = r / q;
                const double aa = s * static_cast<double>(n + 1);
                double f = 1.0;
                if (m < y) {
                    for (long i = m + 1; i <= y; ++i) f *= aa / static_cast<double>(i) - s;
                } else if (m > y) {
                    for (long i = y + 1; i <= m; ++i) f /= aa / static_cast<double>(i) - s;
                }
                if (v <= f) return y;
                continue;
            }

            const double kd = static_cast<double>(k);
            const double rho = (kd / npq) * ((kd * (kd / 3.0 + 0.625) + 1.0 / 6.0) / npq + 0.5);
            const double t = -kd * kd / (2.0 * npq);
            const double logv = std::log(v);
            if (logv < t - rho) return y;
            if (logv > t + rho) continue;

            const double x1 = static_cast<double>(y + 1);
            const double f1 = static_cast<double>(m + 1);
            const double z = static_cast<double>(n + 1 - m);
            const double w = static_cast<double>(n - y + 1);
            const double x2 = x1 * x1;
            const double f2 = f1 * f1;
            const double z2 = z * z;
            const double w2 = w * w;
            const double bound =
                xm * std::log(f1 / x1) + (static_cast<double>(n - m) + 0.5) * std::log(z / w) +
                static_cast<double>(y - m) * std::log(w * r / (x1 * q)) +
                (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / f2) / f2) / f2) / f2) / f1 / 166320.0 +
                (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / z2) / z2) / z2) / z2) / z / 166320.0 +
                (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / x2) / x2) / x2) / x2) / x1 / 166320.0 +
                (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / w2) / w2) / w2) / w2) / w / 166320.0;
            if (logv <= bound) return y;
        }
    }

    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace irs

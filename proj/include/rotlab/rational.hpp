#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace rotlab {

// Exact arithmetic backbone of the whole library. Every quantity that the
// circle-rotation machinery manipulates (breakpoints, masses, norms squared,
// continued-fraction data) is an integer or a rational; floating point only
// appears behind certified intervals (see interval.hpp) or as a rendering.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using json = nlohmann::json;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

/// Floor of a rational (denominator is always positive in cpp_rational).
inline Int rfloor(const Rat& r) {
    Int n = num(r), d = den(r);
    Int q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

/// Fractional part, reduced into [0, 1).
inline Rat frac1(const Rat& r) { return r - Rat(rfloor(r)); }

/// Distance to the nearest integer, |x|_T; result lies in [0, 1/2].
inline Rat circle_norm(const Rat& x) {
    Rat f = frac1(x);
    return f <= Rat(1, 2) ? f : Rat(1) - f;
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }
inline double to_double(const Int& i) { return i.convert_to<double>(); }

inline std::string rat_str(const Rat& r) {
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

/// Parses "p", "p/q"; throws std::invalid_argument on malformed input.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int p(s.substr(0, slash)), q(s.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("zero denominator");
        return Rat(p, q);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
}

// Rationals serialize as {"num": "...", "den": "..."} with decimal strings so
// arbitrary precision survives the round trip.
inline json rat_to_json(const Rat& r) {
    return json{{"num", num(r).str()}, {"den", den(r).str()}};
}

inline Rat rat_from_json(const json& j) {
    Int p(j.at("num").get<std::string>());
    Int q(j.at("den").get<std::string>());
    if (q == 0) throw std::invalid_argument("rational with zero denominator");
    return Rat(p, q);
}

// Error taxonomy shared across modules; the CLI maps these to exit codes.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct precision_error : std::runtime_error {
    int required_order;  // continued-fraction order (or bits) that would suffice; -1 if unknown
    explicit precision_error(const std::string& what, int required = -1)
        : std::runtime_error(what), required_order(required) {}
};

struct horizon_error : std::runtime_error {
    long long required_horizon;
    explicit horizon_error(const std::string& what, long long required = -1)
        : std::runtime_error(what), required_horizon(required) {}
};

// SplitMix64, the frozen PRNG of the library. Keyed per index, so streams are
// splittable and any element is O(1) random access.
inline std::uint64_t splitmix64(std::uint64_t state) {
    std::uint64_t z = state + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Unbiased draw from [0, bound) by rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("next_below(0)");
        const std::uint64_t threshold = (0ULL - bound) % bound;  // 2^64 mod bound
        for (;;) {
            std::uint64_t x = next();
            if (x >= threshold) return x % bound;
        }
    }

  private:
    std::uint64_t state_;
};

/// FNV-1a 64-bit hash; used to stamp output files with a config fingerprint.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace rotlab

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "rotlab/rational.hpp"

namespace rotlab {

/// One convergent p_n/q_n of a continued fraction [a0; a1, a2, ...].
struct Convergent {
    int n = 0;
    Int p = 0;
    Int q = 1;
    Rat value() const { return Rat(p, q); }
};

/// Description of the partial-quotient sequence of an irrational in (0, 1)
/// (a0 = 0 unless stated otherwise). Three flavors: a finite explicit list,
/// an eventually periodic word, or seeded random quotients drawn uniformly
/// from [A, d*A].
///
/// Random quotients are frozen for reproducibility: quotient n is produced by
/// a SplitMix64 stream keyed with `seed + n * 0x9E3779B97F4A7C15`, sampling
/// the range by unbiased rejection. Identical spec => identical sequence,
/// and any index is O(1) random access.
class QuotientSpec {
  public:
    enum class Kind { Explicit, Periodic, Ead };

    static QuotientSpec explicit_list(std::vector<Int> a, Int a0 = 0) {
        QuotientSpec s;
        s.kind_ = Kind::Explicit;
        s.a0_ = std::move(a0);
        for (const Int& x : a)
            if (x < 1) throw usage_error("partial quotients must be >= 1");
        s.a_ = std::move(a);
        return s;
    }

    static QuotientSpec periodic(std::vector<Int> pre, std::vector<Int> period, Int a0 = 0) {
        QuotientSpec s;
        s.kind_ = Kind::Periodic;
        s.a0_ = std::move(a0);
        if (period.empty()) throw usage_error("periodic spec needs a nonempty period");
        for (const Int& x : pre)
            if (x < 1) throw usage_error("partial quotients must be >= 1");
        for (const Int& x : period)
            if (x < 1) throw usage_error("partial quotients must be >= 1");
        s.pre_ = std::move(pre);
        s.period_ = std::move(period);
        return s;
    }

    /// [0; 1, 1, 1, ...] = (sqrt(5)-1)/2, the golden rotation number.
    static QuotientSpec golden() { return periodic({}, {Int(1)}); }

    static QuotientSpec ead(std::uint64_t A, std::uint64_t d, std::uint64_t seed) {
        if (A < 1 || d < 1) throw usage_error("E(A,d) requires A >= 1 and d >= 1");
        if (A > (std::uint64_t(1) << 31) || d > (std::uint64_t(1) << 31))
            throw usage_error("E(A,d) parameters out of supported range");
        QuotientSpec s;
        s.kind_ = Kind::Ead;
        s.a0_ = 0;
        s.A_ = A;
        s.d_ = d;
        s.seed_ = seed;
        return s;
    }

    Kind kind() const { return kind_; }
    const Int& a0() const { return a0_; }
    bool is_random() const { return kind_ == Kind::Ead; }
    std::uint64_t ead_A() const { return A_; }
    std::uint64_t ead_d() const { return d_; }
    std::uint64_t ead_seed() const { return seed_; }

    /// Largest defined quotient index (LLONG_MAX when the sequence is infinite).
    long long max_index() const {
        return kind_ == Kind::Explicit ? static_cast<long long>(a_.size())
                                       : std::numeric_limits<long long>::max();
    }

    /// a_n for n >= 1.
    Int quotient(int n) const {
        if (n < 1) throw usage_error("quotient index must be >= 1");
        switch (kind_) {
            case Kind::Explicit:
                if (static_cast<std::size_t>(n) > a_.size())
                    throw usage_error("explicit quotient list has only " +
                                      std::to_string(a_.size()) + " entries, index " +
                                      std::to_string(n) + " requested");
                return a_[n - 1];
            case Kind::Periodic:
                if (static_cast<std::size_t>(n) <= pre_.size()) return pre_[n - 1];
                return period_[(n - 1 - pre_.size()) % period_.size()];
            case Kind::Ead: {
                const std::uint64_t range = A_ * (d_ - 1) + 1;  // |[A, dA]|
                SplitMix64 g(seed_ + static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ULL);
                return Int(A_ + g.next_below(range));
            }
        }
        throw std::logic_error("unreachable");
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::Explicit: {
                std::string s = "[" + a0_.str() + ";";
                for (std::size_t i = 0; i < a_.size(); ++i)
                    s += (i ? "," : " ") + a_[i].str();
                return s + "]";
            }
            case Kind::Periodic: {
                std::string s = "[" + a0_.str() + "; ";
                for (const auto& x : pre_) s += x.str() + ",";
                s += "(";
                for (std::size_t i = 0; i < period_.size(); ++i)
                    s += (i ? "," : "") + period_[i].str();
                return s + ")*]";
            }
            case Kind::Ead:
                return "E(" + std::to_string(A_) + "," + std::to_string(d_) +
                       "; seed=" + std::to_string(seed_) + ")";
        }
        return {};
    }

    json to_json() const {
        json j;
        j["a0"] = a0_.str();
        switch (kind_) {
            case Kind::Explicit: {
                j["kind"] = "explicit";
                json arr = json::array();
                for (const auto& x : a_) arr.push_back(x.str());
                j["a"] = arr;
                break;
            }
            case Kind::Periodic: {
                j["kind"] = "periodic";
                json pre = json::array(), per = json::array();
                for (const auto& x : pre_) pre.push_back(x.str());
                for (const auto& x : period_) per.push_back(x.str());
                j["pre"] = pre;
                j["period"] = per;
                break;
            }
            case Kind::Ead:
                j["kind"] = "ead";
                j["A"] = A_;
                j["d"] = d_;
                j["seed"] = seed_;
                break;
        }
        return j;
    }

    static QuotientSpec from_json(const json& j) {
        const std::string kind = j.at("kind").get<std::string>();
        Int a0 = j.contains("a0") ? Int(j["a0"].get<std::string>()) : Int(0);
        auto ints = [](const json& arr) {
            std::vector<Int> v;
            for (const auto& x : arr) v.emplace_back(x.get<std::string>());
            return v;
        };
        if (kind == "explicit") return explicit_list(ints(j.at("a")), a0);
        if (kind == "periodic")
            return periodic(j.contains("pre") ? ints(j["pre"]) : std::vector<Int>{},
                            ints(j.at("period")), a0);
        if (kind == "ead")
            return ead(j.at("A").get<std::uint64_t>(), j.at("d").get<std::uint64_t>(),
                       j.at("seed").get<std::uint64_t>());
        throw usage_error("unknown alpha spec kind: " + kind);
    }

    bool operator==(const QuotientSpec&) const = default;

  private:
    QuotientSpec() = default;

    Kind kind_ = Kind::Periodic;
    Int a0_ = 0;
    std::vector<Int> a_;        // explicit
    std::vector<Int> pre_, period_;  // periodic
    std::uint64_t A_ = 0, d_ = 0, seed_ = 0;  // ead
};

/// Convergents 0..N via the standard recurrence.
inline std::vector<Convergent> convergents(const QuotientSpec& spec, int N) {
    if (N < 0) throw usage_error("convergents: N must be >= 0");
    std::vector<Convergent> out;
    out.reserve(N + 1);
    Int p_prev = 1, p_cur = spec.a0();
    Int q_prev = 0, q_cur = 1;
    out.push_back({0, p_cur, q_cur});
    for (int n = 1; n <= N; ++n) {
        Int a = spec.quotient(n);
        Int p = a * p_cur + p_prev;
        Int q = a * q_cur + q_prev;
        p_prev = std::move(p_cur);
        q_prev = std::move(q_cur);
        p_cur = std::move(p);
        q_cur = std::move(q);
        out.push_back({n, p_cur, q_cur});
    }
    return out;
}

/// Exact rational interval (lo, hi) containing alpha: the two consecutive
/// convergents of the given order straddle alpha strictly.
inline std::pair<Rat, Rat> alpha_enclosure(const QuotientSpec& spec, int order) {
    if (order < 0) throw usage_error("alpha_enclosure: order must be >= 0");
    auto cs = convergents(spec, order + 1);
    Rat a = cs[order].value(), b = cs[order + 1].value();
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

/// beta = q_n^2 |alpha - p_n/q_n| enclosed by exact rationals, with the
/// certified comparison against 1/2 (the refined Denjoy-Koksma eligibility).
struct ApproxQuality {
    int n = 0;
    Int q;
    Rat beta_lo, beta_hi;
    bool below_half = false;
};

inline ApproxQuality approx_quality(const QuotientSpec& spec, int n, int precision_order) {
    if (precision_order <= n + 2)
        throw usage_error("approx_quality: precision_order must exceed n + 2");
    auto cs = convergents(spec, precision_order + 1);
    Rat lo = cs[precision_order].value(), hi = cs[precision_order + 1].value();
    if (lo > hi) std::swap(lo, hi);
    Rat c = cs[n].value();
    Rat dlo, dhi;
    if (c <= lo) {
        dlo = lo - c;
        dhi = hi - c;
    } else if (c >= hi) {
        dlo = c - hi;
        dhi = c - lo;
    } else {
        throw std::logic_error("convergent fell inside the alpha enclosure");
    }
    Rat qq(cs[n].q * cs[n].q);
    ApproxQuality out{n, cs[n].q, qq * dlo, qq * dhi, false};
    const Rat half(1, 2);
    if (out.beta_hi < half) {
        out.below_half = true;
    } else if (out.beta_lo >= half) {
        out.below_half = false;
    } else {
        // enclosure straddles 1/2: find an order that settles it
        for (int ord = precision_order + 2; ord <= precision_order + 256; ord += 2) {
            auto probe = convergents(spec, ord + 1);
            Rat plo = probe[ord].value(), phi = probe[ord + 1].value();
            if (plo > phi) std::swap(plo, phi);
            Rat blo = qq * (c <= plo ? plo - c : c - phi);
            Rat bhi = qq * (c <= plo ? phi - c : c - plo);
            if (bhi < half || blo >= half)
                throw precision_error("insufficient precision to compare beta with 1/2 at order " +
                                          std::to_string(precision_order) + "; order " +
                                          std::to_string(ord) + " suffices",
                                      ord);
        }
        throw precision_error("unable to certify beta vs 1/2 within 256 extra orders");
    }
    return out;
}

/// Auto-raising variant: decides beta < 1/2 by bumping the order on demand.
inline bool certified_below_half(const QuotientSpec& spec, int n, int start_order = -1) {
    int ord = std::max(start_order, n + 3);
    for (int attempt = 0; attempt < 16; ++attempt, ord += 4) {
        try {
            return approx_quality(spec, n, ord).below_half;
        } catch (const precision_error& e) {
            if (e.required_order > ord) ord = e.required_order - 4;
        }
    }
    throw precision_error("beta vs 1/2 undecidable for convergent " + std::to_string(n));
}

/// All convergents of index <= N with odd denominator and certified
/// beta < 1/2. By the convergent-parity lemma every window of four
/// consecutive indices contains at least one such convergent.
inline std::vector<Convergent> odd_good_convergents(const QuotientSpec& spec, int N,
                                                    int precision_order) {
    if (N < 4) throw usage_error("odd_good_convergents: N must be >= 4");
    if (precision_order <= N + 2)
        throw usage_error("odd_good_convergents: precision_order must exceed N + 2");
    auto cs = convergents(spec, N);
    std::vector<Convergent> out;
    for (int n = 0; n <= N; ++n) {
        if (cs[n].q % 2 == 0) continue;
        if (approx_quality(spec, n, precision_order).below_half) out.push_back(cs[n]);
    }
    return out;
}

/// Certified lower-bound witness for the constant-type constant C(alpha):
/// min over 1 <= k <= N of k*|k alpha|_T, reported from below.
struct ConstantTypeBound {
    Rat lower;       // certified: k*|k alpha|_T >= lower for every k <= N
    Int witness_k;   // k attaining the minimum of the lower bounds
};

inline ConstantTypeBound constant_type_bound(const QuotientSpec& spec, int N,
                                             int precision_order) {
    if (N < 1) throw usage_error("constant_type_bound: N must be >= 1");
    auto [alo, ahi] = alpha_enclosure(spec, precision_order);
    ConstantTypeBound out;
    bool first = true;
    for (int k = 1; k <= N; ++k) {
        Rat x = k * alo, y = k * ahi;
        // an integer inside [x, y] would force the lower bound to 0
        if (rfloor(y) >= -rfloor(-x))
            throw precision_error(
                "constant_type_bound: enclosure too wide at k=" + std::to_string(k) +
                    "; raise precision_order above " + std::to_string(precision_order),
                precision_order + 8);
        Rat lower_k = std::min(circle_norm(x), circle_norm(y)) * k;
        if (first || lower_k < out.lower) {
            out.lower = lower_k;
            out.witness_k = k;
            first = false;
        }
    }
    return out;
}

/// A convergent P/Q of alpha certified to stand in for alpha over a declared
/// horizon of iterates: within the horizon, every orbit/breakpoint ordering
/// and every plateau decision computed with P/Q agrees with true alpha.
///
/// Certification: margin = min_{1<=k<=N} dist(k P/Q, U)  -  N * eps, where
/// eps bounds |alpha - P/Q| and U is the breakpoint set of the observable
/// closed under pairwise differences and negation. margin > 0 implies that
/// the coherent drift k*(alpha - P/Q) can never flip an ordering or move a
/// point across a breakpoint.
struct ShadowRational {
    Int P, Q;
    int order = 0;          // convergent index used
    long long horizon = 0;  // certified iterate count
    Rat margin;             // certified, > 0
    Rat eps;                // certified upper bound on |alpha - P/Q|
};

namespace detail {

// min over 1<=k<=N of the cyclic grid distance from k*step to the marks,
// all on Z/G. Returns numerator of the distance (denominator G).
inline Int min_orbit_distance(const Int& step, const Int& G, const std::vector<Int>& marks,
                              long long N) {
    const bool fast = G < (Int(1) << 62) && N > 0;
    if (fast) {
        const std::int64_t g = G.convert_to<std::int64_t>();
        const std::int64_t st = (step % G).convert_to<std::int64_t>();
        std::vector<std::int64_t> ms;
        ms.reserve(marks.size());
        for (const auto& m : marks) ms.push_back(m.convert_to<std::int64_t>());
        std::int64_t pos = 0;
        std::int64_t best = g;
        for (long long k = 1; k <= N; ++k) {
            pos += st;
            if (pos >= g) pos -= g;
            for (std::int64_t m : ms) {
                std::int64_t diff = pos >= m ? pos - m : m - pos;
                if (diff > g - diff) diff = g - diff;
                if (diff < best) best = diff;
            }
            if (best == 0) return Int(0);
        }
        return Int(best);
    }
    Int pos = 0, best = G;
    Int st = step % G;
    for (long long k = 1; k <= N; ++k) {
        pos += st;
        if (pos >= G) pos -= G;
        for (const auto& m : marks) {
            Int diff = pos >= m ? pos - m : m - pos;
            Int wrap = G - diff;
            if (wrap < diff) diff = wrap;
            if (diff < best) best = diff;
        }
        if (best == 0) return Int(0);
    }
    return best;
}

}  // namespace detail

/// Builds the shadow for `spec` at `horizon`, scanning breakpoints `bps`
/// (default loaded by the caller with the observable's breakpoints).
/// Policy: the smallest convergent order with Q > max(horizon^2, min_den)
/// whose margin certifies; the order is raised automatically on failure.
inline ShadowRational make_shadow(const QuotientSpec& spec, long long horizon,
                                  const std::vector<Rat>& bps = {Rat(0), Rat(1, 2)},
                                  const Int& min_den = 0) {
    if (horizon < 1) throw usage_error("make_shadow: horizon must be >= 1");
    Int need = Int(horizon) * Int(horizon);
    if (min_den > need) need = min_den;

    // close the breakpoint set under difference and negation
    std::vector<Rat> marks_r;
    for (const Rat& b : bps) {
        marks_r.push_back(frac1(b));
        marks_r.push_back(frac1(-b));
        for (const Rat& c : bps) marks_r.push_back(frac1(b - c));
    }
    std::sort(marks_r.begin(), marks_r.end());
    marks_r.erase(std::unique(marks_r.begin(), marks_r.end()), marks_r.end());

    Int L = 1;
    for (const Rat& m : marks_r) L = boost::multiprecision::lcm(L, den(m));

    int order = 1;
    {
        // advance to the first order with Q > need
        Int p_prev = 1, p_cur = spec.a0(), q_prev = 0, q_cur = 1;
        int n = 0;
        while (q_cur <= need) {
            ++n;
            Int a = spec.quotient(n);
            Int p = a * p_cur + p_prev, q = a * q_cur + q_prev;
            p_prev = std::move(p_cur);
            q_prev = std::move(q_cur);
            p_cur = std::move(p);
            q_cur = std::move(q);
        }
        order = n;
    }

    for (int attempt = 0; attempt < 64; ++attempt) {
        auto cs = convergents(spec, order + 1);
        const Int& P = cs[order].p;
        const Int& Q = cs[order].q;
        const Int& q_next = cs[order + 1].q;
        Rat eps(Int(1), Q * q_next);  // |alpha - P/Q| < 1/(Q q_next), strict
        Int G = Q * L;
        std::vector<Int> marks;
        marks.reserve(marks_r.size());
        for (const Rat& m : marks_r) marks.push_back(num(m) * (G / den(m)));
        Int step = (P * L) % G;
        Int dmin = detail::min_orbit_distance(step, G, marks, horizon);
        Rat margin = Rat(dmin, G) - Rat(horizon) * eps;
        if (dmin > 0 && margin > 0) {
            ShadowRational s;
            s.P = P;
            s.Q = Q;
            s.order = order;
            s.horizon = horizon;
            s.margin = std::move(margin);
            s.eps = std::move(eps);
            return s;
        }
        ++order;
    }
    throw precision_error("make_shadow: no certifiable convergent found (64 attempts)");
}

/// frac(k * P/Q) as an exact rational.
inline Rat shadow_frac(const ShadowRational& s, const Int& k) {
    Int r = (k * s.P) % s.Q;
    if (r < 0) r += s.Q;
    return Rat(r, s.Q);
}

}  // namespace rotlab

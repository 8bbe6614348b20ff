#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "rotlab/contfrac.hpp"
#include "rotlab/interval.hpp"
#include "rotlab/stepfun.hpp"

namespace rotlab {

/// The square-wave observable: +1 on [0, 1/2), -1 on [1/2, 1).
inline StepFunction psi_star() {
    return StepFunction({Rat(0), Rat(1, 2)}, {Rat(1), Rat(-1)});
}

inline bool is_psi_star(const StepFunction& f) { return f == psi_star(); }

/// A rotation-with-observable workspace: the observable psi (zero mean), the
/// rotation number as a quotient spec, and the certified shadow rational that
/// stands in for alpha up to the declared horizon. All Birkhoff-side
/// quantities are computed exactly for the shadow rotation; the shadow's
/// margin certificate makes orderings, plateau values, sup norms and parities
/// agree with the true irrational rotation within the horizon.
struct BirkhoffConfig {
    StepFunction psi;
    QuotientSpec alpha;
    ShadowRational shadow;
};

/// Builds a config. Shadow policy: smallest convergent order with
/// Q > max(horizon^2, min_den) and a positive separation margin.
inline BirkhoffConfig make_config(const QuotientSpec& alpha, long long horizon,
                                  StepFunction psi = psi_star(), const Int& min_den = 0) {
    if (psi.integral() != 0) throw usage_error("observable must have zero mean");
    ShadowRational shadow = make_shadow(alpha, horizon, psi.breakpoints(), min_den);
    return BirkhoffConfig{std::move(psi), alpha, std::move(shadow)};
}

inline void check_horizon(const BirkhoffConfig& cfg, long long n) {
    if (n < 0) throw usage_error("iterate count must be >= 0");
    if (n > cfg.shadow.horizon)
        throw horizon_error("shadow not certified for " + std::to_string(n) +
                                " iterates (horizon " + std::to_string(cfg.shadow.horizon) +
                                "); rebuild the config with horizon >= " + std::to_string(n),
                            n);
}

/// Exact summary of a Birkhoff window sum, cheap even when materializing the
/// step function would not be.
struct Profile {
    long long count = 0;
    Rat mean, l2_sq, l4_qd, sup, variation;
    std::vector<Atom> atoms;  // exact law

    ValueDistribution distribution() const { return ValueDistribution(atoms); }
};

namespace detail {

inline Int int128_to_int(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
    Int hi = static_cast<std::uint64_t>(u >> 64);
    Int out = (hi << 64) + static_cast<std::uint64_t>(u);
    return neg ? -out : out;
}

// int64 grid engine for psi = psi_star. Window sum over k in [n0, n0+count):
// jump +2 at frac(-k P/Q), jump -2 at frac(1/2 - k P/Q); all positions live on
// the grid Z/(2Q), and the minus positions are the plus positions offset by Q.
// The sweep visits pieces in cyclic order: visit(value, grid_length).
struct GridSweep {
    std::int64_t D;                     // 2Q
    std::vector<std::int64_t> plus;     // sorted plus-jump positions
    std::int64_t first_event;           // smallest jump position overall
    std::int64_t value_at_first;        // window value on the piece starting there

    // The minus positions are plus positions offset by Q on the 2Q grid, so
    // their sorted order is the two halves of `plus` re-stitched.
    std::size_t split() const {
        return static_cast<std::size_t>(
            std::lower_bound(plus.begin(), plus.end(), D / 2) - plus.begin());
    }

    template <class Visitor>
    void run(Visitor&& visit) const {
        const std::int64_t Q = D / 2;
        const std::size_t n = plus.size();
        const std::size_t sp = split();
        const std::size_t upper = n - sp;  // plus entries >= Q, mapped down by Q
        auto minus_at = [&](std::size_t i) -> std::int64_t {
            return i < upper ? plus[sp + i] - Q : plus[i - upper] + Q;
        };
        std::size_t a = 0, b = 0;
        std::int64_t v = value_at_first;
        std::int64_t prev_pos = first_event;
        bool first = true;
        while (a < n || b < n) {
            std::int64_t pos;
            std::int64_t delta;
            if (b == n || (a < n && plus[a] < minus_at(b))) {
                pos = plus[a++];
                delta = 2;
            } else {
                pos = minus_at(b++);
                delta = -2;
            }
            if (!first) {
                visit(v, pos - prev_pos);
                v += delta;
            }
            first = false;
            prev_pos = pos;
        }
        visit(v, first_event + D - prev_pos);  // wrap piece
    }
};

inline GridSweep make_grid_sweep(const ShadowRational& shadow, long long n0, long long count) {
    GridSweep g;
    const Int D_big = shadow.Q * 2;
    g.D = D_big.convert_to<std::int64_t>();
    const std::int64_t Q = g.D / 2;
    const std::int64_t step = ((shadow.P * 2) % D_big).convert_to<std::int64_t>();

    g.plus.resize(static_cast<std::size_t>(count));
    Int e0_big = (-(Int(n0)) * 2 * shadow.P) % D_big;
    if (e0_big < 0) e0_big += D_big;
    std::int64_t e = e0_big.convert_to<std::int64_t>();
    for (long long j = 0; j < count; ++j) {
        g.plus[static_cast<std::size_t>(j)] = e;
        e -= step;
        if (e < 0) e += g.D;
    }
    std::sort(g.plus.begin(), g.plus.end());
    for (std::size_t i = 1; i < g.plus.size(); ++i)
        if (g.plus[i] == g.plus[i - 1])
            throw std::logic_error("orbit collision despite shadow margin");

    const std::size_t sp = g.split();
    const std::int64_t minus_min = sp < g.plus.size() ? g.plus[sp] - Q : g.plus[0] + Q;
    g.first_event = std::min(g.plus[0], minus_min);

    // window value on the piece holding the first event, by direct counting
    {
        Int x0 = (Int(g.first_event) + Int(n0) * 2 * shadow.P) % D_big;
        if (x0 < 0) x0 += D_big;
        std::int64_t t = x0.convert_to<std::int64_t>();
        std::int64_t cnt = 0;
        for (long long j = 0; j < count; ++j) {
            if (t < Q) ++cnt;
            t += step;
            if (t >= g.D) t -= g.D;
        }
        g.value_at_first = 2 * cnt - count;
    }
    return g;
}

inline bool grid_engine_applies(const BirkhoffConfig& cfg) {
    return is_psi_star(cfg.psi) && cfg.shadow.Q * 2 < (Int(1) << 62);
}

}  // namespace detail

/// Exact profile (norms, sup, law) of the window sum
/// Sum_{k=n0}^{n0+count-1} psi(x + k P/Q).
inline Profile profile_window(const BirkhoffConfig& cfg, long long n0, long long count) {
    check_horizon(cfg, n0 + count);
    Profile out;
    out.count = count;
    if (count == 0) {
        out.mean = out.l2_sq = out.l4_qd = out.sup = out.variation = 0;
        out.atoms = {{Rat(0), Rat(1)}};
        return out;
    }
    if (detail::grid_engine_applies(cfg)) {
        auto sweep = detail::make_grid_sweep(cfg.shadow, n0, count);
        __int128 mean = 0, l2 = 0, l4 = 0;
        std::int64_t var = 0;
        std::int64_t sup = 0;
        std::int64_t prev_v = 0;
        bool have_prev = false;
        std::int64_t first_v = 0;
        std::map<std::int64_t, __int128> mass;
        sweep.run([&](std::int64_t v, std::int64_t len) {
            if (std::llabs(v) > 100000) throw std::logic_error("window value out of range");
            const __int128 vv = static_cast<__int128>(v) * v;
            mean += static_cast<__int128>(v) * len;
            l2 += vv * len;
            l4 += vv * vv * len;  // |v| <= 1e5 keeps v^4 * len inside __int128
            sup = std::max<std::int64_t>(sup, std::llabs(v));
            mass[v] += len;
            if (have_prev) var += std::llabs(v - prev_v);
            else first_v = v;
            prev_v = v;
            have_prev = true;
        });
        var += std::llabs(first_v - prev_v);  // wrap jump
        const Int D(sweep.D);
        out.mean = Rat(detail::int128_to_int(mean), D);
        out.l2_sq = Rat(detail::int128_to_int(l2), D);
        out.l4_qd = Rat(detail::int128_to_int(l4), D);
        out.sup = Rat(Int(sup));
        out.variation = Rat(Int(var));
        for (const auto& [v, m] : mass) out.atoms.push_back({Rat(Int(v)), Rat(detail::int128_to_int(m), D)});
        return out;
    }
    // generic exact path
    std::vector<Rat> shifts;
    shifts.reserve(static_cast<std::size_t>(count));
    for (long long j = 0; j < count; ++j) shifts.push_back(shadow_frac(cfg.shadow, Int(n0 + j)));
    StepFunction f = sum_rotated_copies(cfg.psi, shifts);
    Norms n = f.norms();
    out.mean = n.mean;
    out.l2_sq = n.l2_sq;
    out.l4_qd = n.l4_qd;
    out.sup = n.sup;
    out.variation = f.variation();
    out.atoms = f.distribution().atoms();
    return out;
}

inline Profile birkhoff_profile(const BirkhoffConfig& cfg, long long n) {
    return profile_window(cfg, 0, n);
}

/// Visits the pieces of the psi_star window sum in cyclic order starting at
/// the first jump: visit(position_num, length_num, value) on the grid Z/(2Q).
template <class Visitor>
void for_each_grid_piece(const BirkhoffConfig& cfg, long long n0, long long count,
                         Visitor&& visit) {
    check_horizon(cfg, n0 + count);
    if (!detail::grid_engine_applies(cfg))
        throw usage_error("grid piece walk requires psi_star and an int64-sized shadow grid");
    if (count == 0) return;
    auto sweep = detail::make_grid_sweep(cfg.shadow, n0, count);
    std::int64_t pos = sweep.first_event;
    sweep.run([&](std::int64_t v, std::int64_t len) {
        visit(pos, len, v);
        pos += len;
        if (pos >= sweep.D) pos -= sweep.D;
    });
}

/// The exact Birkhoff sum y_n(x) = Sum_{k<n} psi(x + k P/Q) as a step function.
inline StepFunction birkhoff_sum(const BirkhoffConfig& cfg, long long n) {
    check_horizon(cfg, n);
    if (n == 0) return StepFunction();
    std::vector<Rat> shifts;
    shifts.reserve(static_cast<std::size_t>(n));
    for (long long k = 0; k < n; ++k) shifts.push_back(shadow_frac(cfg.shadow, Int(k)));
    return sum_rotated_copies(cfg.psi, shifts);
}

/// Streaming evaluation of y_n at a single point: O(n) time, O(1) memory.
inline Rat birkhoff_value(const BirkhoffConfig& cfg, const Rat& x, long long n) {
    check_horizon(cfg, n);
    if (n == 0) return Rat(0);
    const auto& bps = cfg.psi.breakpoints();
    const auto& vals = cfg.psi.values();
    const std::size_t m = bps.size();

    Int L = cfg.shadow.Q;
    L = boost::multiprecision::lcm(L, den(frac1(x)));
    for (const auto& b : bps) L = boost::multiprecision::lcm(L, den(b));

    std::vector<long long> counts(m, 0);
    if (L < (Int(1) << 62)) {
        const std::int64_t Lg = L.convert_to<std::int64_t>();
        std::vector<std::int64_t> grid(m);
        for (std::size_t j = 0; j < m; ++j)
            grid[j] = (num(bps[j]) * (L / den(bps[j]))).convert_to<std::int64_t>();
        Rat xf = frac1(x);
        std::int64_t pos = (num(xf) * (L / den(xf))).convert_to<std::int64_t>();
        const std::int64_t step = ((cfg.shadow.P * (L / cfg.shadow.Q)) % L).convert_to<std::int64_t>();
        for (long long k = 0; k < n; ++k) {
            auto it = std::upper_bound(grid.begin(), grid.end(), pos);
            std::size_t idx =
                it == grid.begin() ? m - 1 : static_cast<std::size_t>(it - grid.begin()) - 1;
            ++counts[idx];
            pos += step;
            if (pos >= Lg) pos -= Lg;
        }
    } else {
        std::vector<Int> grid(m);
        for (std::size_t j = 0; j < m; ++j) grid[j] = num(bps[j]) * (L / den(bps[j]));
        Rat xf = frac1(x);
        Int pos = num(xf) * (L / den(xf));
        const Int step = (cfg.shadow.P * (L / cfg.shadow.Q)) % L;
        for (long long k = 0; k < n; ++k) {
            auto it = std::upper_bound(grid.begin(), grid.end(), pos);
            std::size_t idx =
                it == grid.begin() ? m - 1 : static_cast<std::size_t>(it - grid.begin()) - 1;
            ++counts[idx];
            pos += step;
            if (pos >= L) pos -= L;
        }
    }
    Rat out = 0;
    for (std::size_t j = 0; j < m; ++j)
        if (counts[j]) out += Rat(counts[j]) * vals[j];
    return out;
}

/// Fourier coefficient of a step function: for k != 0,
///   psi_hat(k) = (1/(2 pi i k)) * Sum_j J_j e^{-2 pi i k b_j},
/// where J_j is the jump at breakpoint b_j. Exact rational trig arguments;
/// dyadic breakpoints (e.g. psi_star) give exact vanishing where they must.
inline CComplex fourier_psi(const StepFunction& psi, long long k,
                            mpfr_prec_t prec = kPrecDefault) {
    if (k == 0) return {CReal::from_rat(psi.integral(), prec), CReal::from_long(0, prec)};
    const auto& bps = psi.breakpoints();
    const auto& vals = psi.values();
    const std::size_t m = bps.size();
    CComplex s(prec);
    for (std::size_t j = 0; j < m; ++j) {
        Rat jump = vals[j] - vals[j == 0 ? m - 1 : j - 1];
        if (jump == 0) continue;
        CComplex e = e2pi(frac1(Rat(-k) * bps[j]), prec);
        CReal J = CReal::from_rat(jump, prec);
        s.re = s.re + J * e.re;
        s.im = s.im + J * e.im;
    }
    CReal denom = CReal::pi(prec) * CReal::from_long(2 * k, prec);
    return {s.im / denom, -(s.re / denom)};
}

/// Certified enclosure of y_n's k-th Fourier coefficient via the geometric
/// identity y_n_hat(k) = (1 - e^{2 pi i n k a})/(1 - e^{2 pi i k a}) psi_hat(k)
/// with a = P/Q. If target_width > 0 the working precision doubles until the
/// enclosure is tight enough.
inline CComplex fourier_y(const BirkhoffConfig& cfg, long long n, long long k,
                          mpfr_prec_t prec = kPrecDefault, double target_width = 0.0) {
    if (n < 1) throw usage_error("fourier_y: n must be >= 1");
    if (k == 0) throw usage_error("fourier_y: k must be nonzero");
    check_horizon(cfg, n);
    if (Int(k >= 0 ? k : -k) >= cfg.shadow.Q)
        throw precision_error("fourier_y: |k| must be below the shadow denominator " +
                              cfg.shadow.Q.str());
    const Rat t_num = shadow_frac(cfg.shadow, Int(n) * Int(k));
    const Rat t_den = shadow_frac(cfg.shadow, Int(k));
    for (mpfr_prec_t p = prec; p <= kPrecMax; p *= 2) {
        try {
            CComplex one{CReal::from_long(1, p), CReal::from_long(0, p)};
            CComplex numer = one - e2pi(t_num, p);
            CComplex denom = one - e2pi(t_den, p);
            CComplex out = (numer / denom) * fourier_psi(cfg.psi, k, p);
            if (target_width > 0 && out.width() > target_width) continue;
            return out;
        } catch (const precision_error&) {
            continue;  // denominator enclosure touched zero; retry tighter
        }
    }
    throw precision_error("fourier_y: requested enclosure width unachievable at precision cap");
}

/// Wire format for a Fourier enclosure: {k, re_lo, re_hi, im_lo, im_hi}.
inline json fourier_to_json(long long k, const CComplex& c) {
    return json{{"k", k},
                {"re_lo", c.re.lo_d()},
                {"re_hi", c.re.hi_d()},
                {"im_lo", c.im.lo_d()},
                {"im_hi", c.im.hi_d()}};
}

/// Certified interval for ||y_n||_2^2 from a truncated Parseval sum plus the
/// tail bound  2 sum_{k>K} (n Var(psi) / (2 pi k))^2 <= (n Var(psi))^2/(2 pi^2 K).
struct ParsevalInterval {
    Rat lo, hi;
    Rat tail_hi;
    double partial_width;

    bool contains(const Rat& v) const { return lo <= v && v <= hi; }
};

inline ParsevalInterval l2_via_parseval(const BirkhoffConfig& cfg, long long n, long long K,
                                        mpfr_prec_t prec = kPrecDefault) {
    if (K < 1) throw usage_error("l2_via_parseval: K must be >= 1");
    CReal sum(prec);
    sum = CReal::from_long(0, prec);
    const CReal two = CReal::from_long(2, prec);
    for (long long k = 1; k <= K; ++k) {
        CComplex psik = fourier_psi(cfg.psi, k, prec);
        if (psik.is_exact_zero()) continue;
        CComplex yk = fourier_y(cfg, n, k, prec);
        sum = sum + two * yk.modulus_sq();
    }
    Rat nvar = Rat(n) * cfg.psi.variation();
    CReal tail = CReal::from_rat(nvar * nvar / Rat(K), prec) /
                 (two * CReal::pi(prec) * CReal::pi(prec));
    ParsevalInterval out;
    out.lo = sum.lo_rat();
    out.hi = sum.hi_rat() + tail.hi_rat();
    out.tail_hi = tail.hi_rat();
    out.partial_width = sum.width();
    return out;
}

}  // namespace rotlab

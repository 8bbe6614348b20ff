#pragma once

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <string>
#include <utility>

#include "rotlab/rational.hpp"

namespace rotlab {

inline constexpr mpfr_prec_t kPrecDefault = 128;
inline constexpr mpfr_prec_t kPrecMax = 4096;

namespace detail {

// Minimal RAII wrapper for a single mpfr number.
struct MF {
    mpfr_t v;
    explicit MF(mpfr_prec_t prec) { mpfr_init2(v, prec); mpfr_set_zero(v, 1); }
    MF(const MF& o) { mpfr_init2(v, mpfr_get_prec(o.v)); mpfr_set(v, o.v, MPFR_RNDN); }
    MF(MF&& o) noexcept { mpfr_init2(v, mpfr_get_prec(o.v)); mpfr_swap(v, o.v); }
    MF& operator=(const MF& o) {
        if (this != &o) { mpfr_set_prec(v, mpfr_get_prec(o.v)); mpfr_set(v, o.v, MPFR_RNDN); }
        return *this;
    }
    MF& operator=(MF&& o) noexcept { mpfr_swap(v, o.v); return *this; }
    ~MF() { mpfr_clear(v); }
};

inline bool fits_long(const Int& x) {
    static const Int lo = Int(std::numeric_limits<long>::min()) + 1;
    static const Int hi = Int(std::numeric_limits<long>::max()) - 1;
    return x >= lo && x <= hi;
}

// Directed assignment of a big integer.
inline void set_int(mpfr_t out, const Int& x, mpfr_rnd_t rnd) {
    if (fits_long(x)) {
        mpfr_set_si(out, x.convert_to<long>(), rnd);
    } else {
        mpfr_set_str(out, x.str().c_str(), 10, rnd);
    }
}

// Directed assignment of a rational: out is a bound of num/den in direction rnd.
inline void set_rat(mpfr_t out, const Rat& r, mpfr_rnd_t rnd) {
    const Int n = num(r), d = den(r);  // d > 0
    if (d == 1) { set_int(out, n, rnd); return; }
    if (fits_long(n) && fits_long(d)) {
        mpfr_set_si(out, n.convert_to<long>(), rnd);
        mpfr_div_si(out, out, d.convert_to<long>(), rnd);
        return;
    }
    // Round numerator and denominator in the directions that push the
    // quotient toward rnd (denominator is positive).
    MF dd(mpfr_get_prec(out));
    const bool down = (rnd == MPFR_RNDD);
    const bool n_nonneg = n >= 0;
    // down & n>=0: n down / d up;  down & n<0: n down / d down
    // up   & n>=0: n up   / d down; up  & n<0: n up   / d up
    mpfr_rnd_t rn = down ? MPFR_RNDD : MPFR_RNDU;
    mpfr_rnd_t rd = (down == n_nonneg) ? MPFR_RNDU : MPFR_RNDD;
    set_int(out, n, rn);
    set_int(dd.v, d, rd);
    mpfr_div(out, out, dd.v, rnd);
}

// Exact conversion of an mpfr value (a dyadic rational) to Rat.
inline Rat mpfr_to_rat(const mpfr_t x) {
    if (mpfr_zero_p(x)) return Rat(0);
    if (!mpfr_number_p(x)) throw std::runtime_error("non-finite interval endpoint");
    mpz_t z;
    mpz_init(z);
    mpfr_exp_t e = mpfr_get_z_2exp(z, x);
    char* s = mpz_get_str(nullptr, 10, z);
    Int m(s);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(s, std::strlen(s) + 1);
    mpz_clear(z);
    Rat r(m);
    if (e >= 0) {
        r *= Rat(Int(1) << static_cast<unsigned>(e));
    } else {
        r /= Rat(Int(1) << static_cast<unsigned>(-e));
    }
    return r;
}

}  // namespace detail

/// Certified real: a closed interval [lo, hi] with mpfr endpoints. Every
/// operation rounds outward, so the true value is always contained.
class CReal {
  public:
    explicit CReal(mpfr_prec_t prec = kPrecDefault) : lo_(prec), hi_(prec), prec_(prec) {}

    static CReal from_long(long v, mpfr_prec_t prec = kPrecDefault) {
        CReal r(prec);
        mpfr_set_si(r.lo_.v, v, MPFR_RNDD);
        mpfr_set_si(r.hi_.v, v, MPFR_RNDU);
        return r;
    }

    static CReal from_rat(const Rat& v, mpfr_prec_t prec = kPrecDefault) {
        CReal r(prec);
        detail::set_rat(r.lo_.v, v, MPFR_RNDD);
        detail::set_rat(r.hi_.v, v, MPFR_RNDU);
        return r;
    }

    static CReal from_endpoints(const Rat& lo, const Rat& hi, mpfr_prec_t prec = kPrecDefault) {
        CReal r(prec);
        detail::set_rat(r.lo_.v, lo, MPFR_RNDD);
        detail::set_rat(r.hi_.v, hi, MPFR_RNDU);
        return r;
    }

    static CReal pi(mpfr_prec_t prec = kPrecDefault) {
        CReal r(prec);
        mpfr_const_pi(r.lo_.v, MPFR_RNDD);
        mpfr_const_pi(r.hi_.v, MPFR_RNDU);
        return r;
    }

    mpfr_prec_t prec() const { return prec_; }

    CReal operator-() const {
        CReal r(prec_);
        mpfr_neg(r.lo_.v, hi_.v, MPFR_RNDD);
        mpfr_neg(r.hi_.v, lo_.v, MPFR_RNDU);
        return r;
    }

    CReal operator+(const CReal& o) const {
        CReal r(std::max(prec_, o.prec_));
        mpfr_add(r.lo_.v, lo_.v, o.lo_.v, MPFR_RNDD);
        mpfr_add(r.hi_.v, hi_.v, o.hi_.v, MPFR_RNDU);
        return r;
    }

    CReal operator-(const CReal& o) const { return *this + (-o); }

    CReal operator*(const CReal& o) const {
        CReal r(std::max(prec_, o.prec_));
        detail::MF t(r.prec_);
        bool first = true;
        const mpfr_srcptr as[2] = {lo_.v, hi_.v};
        const mpfr_srcptr bs[2] = {o.lo_.v, o.hi_.v};
        for (auto a : as)
            for (auto b : bs) {
                mpfr_mul(t.v, a, b, MPFR_RNDD);
                if (first || mpfr_cmp(t.v, r.lo_.v) < 0) mpfr_set(r.lo_.v, t.v, MPFR_RNDD);
                mpfr_mul(t.v, a, b, MPFR_RNDU);
                if (first || mpfr_cmp(t.v, r.hi_.v) > 0) mpfr_set(r.hi_.v, t.v, MPFR_RNDU);
                first = false;
            }
        return r;
    }

    CReal operator/(const CReal& o) const {
        if (o.contains_zero())
            throw precision_error("interval division by an enclosure containing zero");
        CReal r(std::max(prec_, o.prec_));
        detail::MF t(r.prec_);
        bool first = true;
        const mpfr_srcptr as[2] = {lo_.v, hi_.v};
        const mpfr_srcptr bs[2] = {o.lo_.v, o.hi_.v};
        for (auto a : as)
            for (auto b : bs) {
                mpfr_div(t.v, a, b, MPFR_RNDD);
                if (first || mpfr_cmp(t.v, r.lo_.v) < 0) mpfr_set(r.lo_.v, t.v, MPFR_RNDD);
                mpfr_div(t.v, a, b, MPFR_RNDU);
                if (first || mpfr_cmp(t.v, r.hi_.v) > 0) mpfr_set(r.hi_.v, t.v, MPFR_RNDU);
                first = false;
            }
        return r;
    }

    CReal abs() const {
        CReal r(prec_);
        if (mpfr_sgn(lo_.v) >= 0) return *this;
        if (mpfr_sgn(hi_.v) <= 0) return -*this;
        mpfr_set_zero(r.lo_.v, 1);
        detail::MF t(prec_);
        mpfr_neg(t.v, lo_.v, MPFR_RNDU);
        if (mpfr_cmp(t.v, hi_.v) > 0) mpfr_set(r.hi_.v, t.v, MPFR_RNDU);
        else mpfr_set(r.hi_.v, hi_.v, MPFR_RNDU);
        return r;
    }

    /// Tight enclosure of x^2 (tighter than *this * *this across zero).
    CReal square() const { CReal a = abs(); CReal r(prec_);
        mpfr_sqr(r.lo_.v, a.lo_.v, MPFR_RNDD);
        mpfr_sqr(r.hi_.v, a.hi_.v, MPFR_RNDU);
        return r;
    }

    CReal sqrt() const {
        CReal r(prec_);
        if (mpfr_sgn(hi_.v) < 0) throw std::domain_error("sqrt of a negative enclosure");
        if (mpfr_sgn(lo_.v) < 0) mpfr_set_zero(r.lo_.v, 1);
        else mpfr_sqrt(r.lo_.v, lo_.v, MPFR_RNDD);
        mpfr_sqrt(r.hi_.v, hi_.v, MPFR_RNDU);
        return r;
    }

    CReal exp() const {
        CReal r(prec_);
        mpfr_exp(r.lo_.v, lo_.v, MPFR_RNDD);
        mpfr_exp(r.hi_.v, hi_.v, MPFR_RNDU);
        return r;
    }

    CReal erf() const {
        CReal r(prec_);
        mpfr_erf(r.lo_.v, lo_.v, MPFR_RNDD);
        mpfr_erf(r.hi_.v, hi_.v, MPFR_RNDU);
        return r;
    }

    CReal log() const {
        if (mpfr_sgn(lo_.v) <= 0) throw std::domain_error("log of an enclosure reaching 0");
        CReal r(prec_);
        mpfr_log(r.lo_.v, lo_.v, MPFR_RNDD);
        mpfr_log(r.hi_.v, hi_.v, MPFR_RNDU);
        return r;
    }

    /// sin over a (typically tiny) enclosure in radians; sound for any
    /// argument via 1-Lipschitz widening by the interval width.
    CReal sin_rad() const { return lipschitz_trig(/*is_sin=*/true); }
    CReal cos_rad() const { return lipschitz_trig(/*is_sin=*/false); }

    /// Hull of two intervals (pointwise max of upper, min of lower).
    CReal hull(const CReal& o) const {
        CReal r(std::max(prec_, o.prec_));
        mpfr_set(r.lo_.v, mpfr_cmp(lo_.v, o.lo_.v) < 0 ? lo_.v : o.lo_.v, MPFR_RNDD);
        mpfr_set(r.hi_.v, mpfr_cmp(hi_.v, o.hi_.v) > 0 ? hi_.v : o.hi_.v, MPFR_RNDU);
        return r;
    }

    /// Enclosure of max(x, y) where x ∈ this, y ∈ o.
    CReal max_with(const CReal& o) const {
        CReal r(std::max(prec_, o.prec_));
        mpfr_set(r.lo_.v, mpfr_cmp(lo_.v, o.lo_.v) > 0 ? lo_.v : o.lo_.v, MPFR_RNDD);
        mpfr_set(r.hi_.v, mpfr_cmp(hi_.v, o.hi_.v) > 0 ? hi_.v : o.hi_.v, MPFR_RNDU);
        return r;
    }

    bool contains_zero() const { return mpfr_sgn(lo_.v) <= 0 && mpfr_sgn(hi_.v) >= 0; }
    bool is_exact_zero() const { return mpfr_zero_p(lo_.v) && mpfr_zero_p(hi_.v); }

    bool certainly_lt(const CReal& o) const { return mpfr_cmp(hi_.v, o.lo_.v) < 0; }
    bool certainly_le(const CReal& o) const { return mpfr_cmp(hi_.v, o.lo_.v) <= 0; }
    bool certainly_positive() const { return mpfr_sgn(lo_.v) > 0; }

    // Exact comparisons against rationals via exact dyadic endpoints.
    bool certainly_le(const Rat& r) const { return hi_rat() <= r; }
    bool certainly_lt(const Rat& r) const { return hi_rat() < r; }
    bool certainly_ge(const Rat& r) const { return lo_rat() >= r; }
    bool contains(const Rat& r) const { return lo_rat() <= r && r <= hi_rat(); }

    Rat lo_rat() const { return detail::mpfr_to_rat(lo_.v); }
    Rat hi_rat() const { return detail::mpfr_to_rat(hi_.v); }

    double lo_d() const { return mpfr_get_d(lo_.v, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_.v, MPFR_RNDU); }
    double mid() const { return (lo_d() + hi_d()) / 2; }

    double width() const {
        detail::MF t(prec_);
        mpfr_sub(t.v, hi_.v, lo_.v, MPFR_RNDU);
        return mpfr_get_d(t.v, MPFR_RNDU);
    }

    /// Decimal rendering of the midpoint; `digits` after the decimal point.
    std::string decimal(int digits = 10) const {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.*f", digits, mid());
        return buf;
    }

    friend CReal widen(const CReal& x, const CReal& by);

  private:
    CReal lipschitz_trig(bool is_sin) const {
        CReal r(prec_);
        detail::MF a(prec_), b(prec_), w(prec_);
        auto f_lo = is_sin ? mpfr_sin : mpfr_cos;
        f_lo(a.v, lo_.v, MPFR_RNDD);
        f_lo(b.v, hi_.v, MPFR_RNDD);
        mpfr_min(r.lo_.v, a.v, b.v, MPFR_RNDD);
        f_lo(a.v, lo_.v, MPFR_RNDU);
        f_lo(b.v, hi_.v, MPFR_RNDU);
        mpfr_max(r.hi_.v, a.v, b.v, MPFR_RNDU);
        mpfr_sub(w.v, hi_.v, lo_.v, MPFR_RNDU);
        mpfr_sub(r.lo_.v, r.lo_.v, w.v, MPFR_RNDD);
        mpfr_add(r.hi_.v, r.hi_.v, w.v, MPFR_RNDU);
        // clamp to [-1, 1]
        if (mpfr_cmp_si(r.lo_.v, -1) < 0) mpfr_set_si(r.lo_.v, -1, MPFR_RNDD);
        if (mpfr_cmp_si(r.hi_.v, 1) > 0) mpfr_set_si(r.hi_.v, 1, MPFR_RNDU);
        return r;
    }

    friend CReal sin2pi(const Rat&, mpfr_prec_t);
    friend CReal cos2pi(const Rat&, mpfr_prec_t);

    detail::MF lo_, hi_;
    mpfr_prec_t prec_;
};

inline CReal widen(const CReal& x, const CReal& by) {
    CReal r(x.prec_);
    mpfr_sub(r.lo_.v, x.lo_.v, by.hi_.v, MPFR_RNDD);
    mpfr_add(r.hi_.v, x.hi_.v, by.hi_.v, MPFR_RNDU);
    return r;
}

namespace detail {

// sin(2*pi*r) for exact rational r in [0, 1/4], assuming the quadrant has
// already been peeled off. sin is increasing on [0, pi/2]; the only hazard is
// an upper evaluation point that may land past the true pi/2, which is fenced
// by comparing against a lower bound of pi/2.
inline void sin_quarter(mpfr_t out_lo, mpfr_t out_hi, const Rat& r, mpfr_prec_t prec) {
    if (r == 0) { mpfr_set_zero(out_lo, 1); mpfr_set_zero(out_hi, 1); return; }
    MF pi_lo(prec), pi_hi(prec), th_lo(prec), th_hi(prec), half_pi_lo(prec);
    mpfr_const_pi(pi_lo.v, MPFR_RNDD);
    mpfr_const_pi(pi_hi.v, MPFR_RNDU);
    MF r_lo(prec), r_hi(prec);
    set_rat(r_lo.v, r, MPFR_RNDD);
    set_rat(r_hi.v, r, MPFR_RNDU);
    mpfr_mul(th_lo.v, pi_lo.v, r_lo.v, MPFR_RNDD);
    mpfr_mul_2ui(th_lo.v, th_lo.v, 1, MPFR_RNDD);
    mpfr_mul(th_hi.v, pi_hi.v, r_hi.v, MPFR_RNDU);
    mpfr_mul_2ui(th_hi.v, th_hi.v, 1, MPFR_RNDU);
    mpfr_sin(out_lo, th_lo.v, MPFR_RNDD);
    mpfr_div_2ui(half_pi_lo.v, pi_lo.v, 1, MPFR_RNDD);
    if (mpfr_cmp(th_hi.v, half_pi_lo.v) < 0) {
        mpfr_sin(out_hi, th_hi.v, MPFR_RNDU);
    } else {
        mpfr_set_si(out_hi, 1, MPFR_RNDU);  // peak may sit inside the enclosure
    }
}

// cos(2*pi*r) for exact rational r in [0, 1/4]: decreasing on all of [0, pi],
// so directed endpoint evaluation is sound without a fence.
inline void cos_quarter(mpfr_t out_lo, mpfr_t out_hi, const Rat& r, mpfr_prec_t prec) {
    if (r == 0) { mpfr_set_si(out_lo, 1, MPFR_RNDD); mpfr_set_si(out_hi, 1, MPFR_RNDU); return; }
    MF pi_lo(prec), pi_hi(prec), th_lo(prec), th_hi(prec);
    mpfr_const_pi(pi_lo.v, MPFR_RNDD);
    mpfr_const_pi(pi_hi.v, MPFR_RNDU);
    MF r_lo(prec), r_hi(prec);
    set_rat(r_lo.v, r, MPFR_RNDD);
    set_rat(r_hi.v, r, MPFR_RNDU);
    mpfr_mul(th_lo.v, pi_lo.v, r_lo.v, MPFR_RNDD);
    mpfr_mul_2ui(th_lo.v, th_lo.v, 1, MPFR_RNDD);
    mpfr_mul(th_hi.v, pi_hi.v, r_hi.v, MPFR_RNDU);
    mpfr_mul_2ui(th_hi.v, th_hi.v, 1, MPFR_RNDU);
    mpfr_cos(out_lo, th_hi.v, MPFR_RNDD);
    mpfr_cos(out_hi, th_lo.v, MPFR_RNDU);
}

}  // namespace detail

/// sin(2*pi*t) for exact rational t, via exact quadrant reduction. Quadrant
/// boundaries (t multiple of 1/4) give exact zero-width results.
inline CReal sin2pi(const Rat& t, mpfr_prec_t prec = kPrecDefault) {
    Rat f = frac1(t);
    Int q4 = rfloor(f * 4);
    int q = q4.convert_to<int>();
    Rat r = f - Rat(q4, 4);
    CReal out(prec);
    detail::MF a(prec), b(prec);
    switch (q) {
        case 0: detail::sin_quarter(out.lo_.v, out.hi_.v, r, prec); break;
        case 1: detail::cos_quarter(out.lo_.v, out.hi_.v, r, prec); break;
        case 2:
            detail::sin_quarter(a.v, b.v, r, prec);
            mpfr_neg(out.lo_.v, b.v, MPFR_RNDD);
            mpfr_neg(out.hi_.v, a.v, MPFR_RNDU);
            break;
        default:
            detail::cos_quarter(a.v, b.v, r, prec);
            mpfr_neg(out.lo_.v, b.v, MPFR_RNDD);
            mpfr_neg(out.hi_.v, a.v, MPFR_RNDU);
            break;
    }
    return out;
}

/// cos(2*pi*t) for exact rational t.
inline CReal cos2pi(const Rat& t, mpfr_prec_t prec = kPrecDefault) {
    Rat f = frac1(t);
    Int q4 = rfloor(f * 4);
    int q = q4.convert_to<int>();
    Rat r = f - Rat(q4, 4);
    CReal out(prec);
    detail::MF a(prec), b(prec);
    switch (q) {
        case 0: detail::cos_quarter(out.lo_.v, out.hi_.v, r, prec); break;
        case 1:
            detail::sin_quarter(a.v, b.v, r, prec);
            mpfr_neg(out.lo_.v, b.v, MPFR_RNDD);
            mpfr_neg(out.hi_.v, a.v, MPFR_RNDU);
            break;
        case 2:
            detail::cos_quarter(a.v, b.v, r, prec);
            mpfr_neg(out.lo_.v, b.v, MPFR_RNDD);
            mpfr_neg(out.hi_.v, a.v, MPFR_RNDU);
            break;
        default: detail::sin_quarter(out.lo_.v, out.hi_.v, r, prec); break;
    }
    return out;
}

/// Certified complex number (rectangular interval).
struct CComplex {
    CReal re, im;

    explicit CComplex(mpfr_prec_t prec = kPrecDefault) : re(prec), im(prec) {}
    CComplex(CReal r, CReal i) : re(std::move(r)), im(std::move(i)) {}

    CComplex operator+(const CComplex& o) const { return {re + o.re, im + o.im}; }
    CComplex operator-(const CComplex& o) const { return {re - o.re, im - o.im}; }
    CComplex operator-() const { return {-re, -im}; }

    CComplex operator*(const CComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }

    CComplex operator/(const CComplex& o) const {
        CReal d = o.re.square() + o.im.square();
        CComplex n = *this * CComplex{o.re, -o.im};
        return {n.re / d, n.im / d};
    }

    CComplex conj() const { return {re, -im}; }
    CReal modulus_sq() const { return re.square() + im.square(); }
    CReal modulus() const { return modulus_sq().sqrt(); }
    bool is_exact_zero() const { return re.is_exact_zero() && im.is_exact_zero(); }
    double width() const { return std::max(re.width(), im.width()); }
};

/// e^{2*pi*i*t} for exact rational t.
inline CComplex e2pi(const Rat& t, mpfr_prec_t prec = kPrecDefault) {
    return {cos2pi(t, prec), sin2pi(t, prec)};
}

/// Standard normal CDF via erf, certified.
inline CReal gaussian_cdf(const CReal& x, mpfr_prec_t prec = kPrecDefault) {
    CReal sqrt2 = CReal::from_long(2, prec).sqrt();
    CReal one = CReal::from_long(1, prec);
    CReal half = CReal::from_rat(Rat(1, 2), prec);
    return (one + (x / sqrt2).erf()) * half;
}

}  // namespace rotlab

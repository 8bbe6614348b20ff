#pragma once

#include <vector>

#include "rotlab/interval.hpp"
#include "rotlab/stepfun.hpp"

namespace rotlab {

/// Centered Gaussian reference law g(sigma).
struct GaussianRef {
    CReal sigma;

    explicit GaussianRef(CReal s) : sigma(std::move(s)) {
        if (!sigma.certainly_positive())
            throw usage_error("gaussian reference needs a certainly positive sigma");
    }
    static GaussianRef from_rat(const Rat& s, mpfr_prec_t prec = kPrecDefault) {
        return GaussianRef(CReal::from_rat(s, prec));
    }
};

/// Kolmogorov-Smirnov distance between an exact atomic law and g(sigma):
/// the sup of |CDF_law - CDF_gauss| is attained at a one-sided limit of some
/// atom, so it is a finite maximum of certified quantities.
inline CReal ks_distance(const ValueDistribution& law, const GaussianRef& ref,
                         mpfr_prec_t prec = kPrecDefault) {
    CReal best = CReal::from_long(0, prec);
    Rat cum = 0;
    for (const auto& a : law.atoms()) {
        CReal phi = gaussian_cdf(CReal::from_rat(a.value, prec) / ref.sigma, prec);
        CReal below = (phi - CReal::from_rat(cum, prec)).abs();
        cum += a.mass;
        CReal above = (CReal::from_rat(cum, prec) - phi).abs();
        best = best.max_with(below).max_with(above);
    }
    return best;
}

/// Exact raw moments m_1..m_max of an atomic law.
inline std::vector<Rat> moments(const ValueDistribution& law, int max_order) {
    if (max_order < 1) throw usage_error("moments: max_order must be >= 1");
    std::vector<Rat> out(static_cast<std::size_t>(max_order), Rat(0));
    for (const auto& a : law.atoms()) {
        Rat p = 1;
        for (int m = 1; m <= max_order; ++m) {
            p *= a.value;
            out[static_cast<std::size_t>(m - 1)] += p * a.mass;
        }
    }
    return out;
}

/// Characteristic function Sum mass * e^{i lambda v} as a certified complex
/// enclosure; lambda may itself be certified (e.g. 1/sqrt(n)).
inline CComplex char_fn(const ValueDistribution& law, const CReal& lambda,
                        mpfr_prec_t prec = kPrecDefault) {
    CComplex s(prec);
    s.re = CReal::from_long(0, prec);
    s.im = CReal::from_long(0, prec);
    for (const auto& a : law.atoms()) {
        CReal theta = lambda * CReal::from_rat(a.value, prec);
        CReal mass = CReal::from_rat(a.mass, prec);
        s.re = s.re + mass * theta.cos_rad();
        s.im = s.im + mass * theta.sin_rad();
    }
    return s;
}

inline CComplex char_fn(const ValueDistribution& law, const Rat& lambda,
                        mpfr_prec_t prec = kPrecDefault) {
    return char_fn(law, CReal::from_rat(lambda, prec), prec);
}

/// |char_fn(lambda) - e^{-lambda^2 sigma^2 / 2}|, the finite-stage gap against
/// the Gaussian characteristic function.
inline CReal char_gap(const ValueDistribution& law, const CReal& lambda, const CReal& sigma,
                      mpfr_prec_t prec = kPrecDefault) {
    CComplex c = char_fn(law, lambda, prec);
    CReal half = CReal::from_rat(Rat(1, 2), prec);
    CReal target = (-(lambda.square() * sigma.square() * half)).exp();
    CComplex diff{c.re - target, c.im};
    return diff.modulus();
}

}  // namespace rotlab

#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_n) with an emphasis on the
// real subfield (elements fixed by zeta -> zeta^-1).  Elements are coefficient
// vectors of length phi(n) over Q, reduced modulo the n-th cyclotomic
// polynomial.  Signs of real elements are decided rigorously: an exact zero
// test on the canonical form, otherwise a rational interval enclosure built
// from directed-rounded cos values (MPFR), refined until zero is excluded.

#include <mpfr.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pingpong/rational.hpp"

namespace pingpong {

// ---------------------------------------------------------------------------
// RatInterval: closed interval with exact rational endpoints.

struct RatInterval {
    Rat lo, hi;

    RatInterval() = default;
    RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::logic_error("RatInterval: lo > hi");
    }

    bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
    Rat width() const { return hi - lo; }

    RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }

    // Scale by an exact rational (endpoint swap on negative scalars).
    RatInterval scaled(const Rat& c) const {
        if (sgn(c) >= 0) return {lo * c, hi * c};
        return {hi * c, lo * c};
    }
};

namespace detail {

// Dense integer polynomials, used only to compute cyclotomic polynomials.
using ZPoly = std::vector<Int>;  // coeff[i] * x^i, no trailing zeros

inline void zp_trim(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division q = a / b (remainder must vanish).
inline ZPoly zp_div_exact(const ZPoly& a, const ZPoly& b) {
    ZPoly r = a, q(a.size(), Int(0));
    while (r.size() >= b.size()) {
        // b is monic for all inputs we use (x^d - 1 and cyclotomics)
        Int c = r.back() / b.back();
        size_t shift = r.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
        zp_trim(r);
        if (r.empty()) break;
    }
    if (!r.empty()) throw std::logic_error("zp_div_exact: nonzero remainder");
    zp_trim(q);
    return q;
}

// n-th cyclotomic polynomial: divide x^n - 1 by Phi_d for all proper d | n.
inline ZPoly cyclotomic_poly(unsigned n) {
    ZPoly p(n + 1, Int(0));
    p[0] = -1;
    p[n] = 1;
    for (unsigned d = 1; d < n; ++d)
        if (n % d == 0) p = zp_div_exact(p, cyclotomic_poly(d));
    return p;
}

inline unsigned euler_phi(unsigned n) {
    unsigned result = n;
    for (unsigned p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    if (n > 1) result -= result / n;
    return result;
}

inline Rat mpfr_to_rat(const mpfr_t x) {
    mpq_t q;
    mpq_init(q);
    mpfr_get_q(q, x);
    Rat r(q);
    mpq_clear(q);
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CycloField: shared immutable data for one conductor.

class CycloField {
  public:
    explicit CycloField(unsigned conductor) : n_(conductor) {
        if (n_ < 1) throw std::domain_error("conductor must be positive");
        phi_ = detail::euler_phi(n_);
        auto cp = detail::cyclotomic_poly(n_);
        // reduction rows: x^e mod Phi_n for e in [0, 2n)
        // (covers products of reduced elements and Galois images alike)
        std::vector<std::vector<Rat>> rows(2 * n_, std::vector<Rat>(phi_, Rat(0)));
        for (unsigned e = 0; e < phi_; ++e) rows[e][e] = 1;
        for (unsigned e = phi_; e < 2 * n_; ++e) {
            // x^e = x * x^(e-1); multiply previous row by x and reduce once
            std::vector<Rat> prev = rows[e - 1];
            std::vector<Rat> cur(phi_, Rat(0));
            Rat top = prev[phi_ - 1];
            for (unsigned i = phi_ - 1; i > 0; --i) cur[i] = prev[i - 1];
            cur[0] = 0;
            if (sgn(top) != 0) {
                // x^phi = -(cp[0] + cp[1] x + ... ) / cp[phi]; cp is monic
                for (unsigned i = 0; i < phi_; ++i) cur[i] -= top * Rat(cp[i]);
            }
            rows[e] = std::move(cur);
        }
        power_rows_ = std::move(rows);
    }

    unsigned conductor() const { return n_; }
    unsigned degree() const { return phi_; }

    // Coefficient vector of x^e mod Phi_n, e in [0, 2n).
    const std::vector<Rat>& power_row(unsigned e) const { return power_rows_.at(e); }

    // Directed-rounded enclosure of cos(2*pi*j/n) with ~bits fractional bits.
    RatInterval cos_enclosure(unsigned j, unsigned bits) const {
        j %= n_;
        if (j > n_ / 2) j = n_ - j;  // cos(2pi j/n) = cos(2pi (n-j)/n), angle now in [0, pi]
        {
            std::lock_guard<std::mutex> lk(cache_mutex_);
            auto it = cos_cache_.find({j, bits});
            if (it != cos_cache_.end()) return it->second;
        }
        RatInterval enc = compute_cos_enclosure(j, bits);
        std::lock_guard<std::mutex> lk(cache_mutex_);
        cos_cache_.emplace(std::make_pair(j, bits), enc);
        return enc;
    }

    static std::shared_ptr<const CycloField> get(unsigned conductor) {
        static std::mutex m;
        static std::map<unsigned, std::shared_ptr<const CycloField>> cache;
        std::lock_guard<std::mutex> lk(m);
        auto it = cache.find(conductor);
        if (it != cache.end()) return it->second;
        auto f = std::make_shared<const CycloField>(conductor);
        cache.emplace(conductor, f);
        return f;
    }

  private:
    RatInterval compute_cos_enclosure(unsigned j, unsigned bits) const {
        // angle = 2*pi*j/n in [0, pi]; cos is decreasing there, so the
        // enclosure is [cos_down(angle_up), cos_up(angle_down)].
        mpfr_prec_t prec = bits + 32;
        mpfr_t pi_lo, pi_hi, ang_lo, ang_hi, c_lo, c_hi;
        mpfr_inits2(prec, pi_lo, pi_hi, ang_lo, ang_hi, c_lo, c_hi, (mpfr_ptr) nullptr);
        mpfr_const_pi(pi_lo, MPFR_RNDD);
        mpfr_const_pi(pi_hi, MPFR_RNDU);
        mpfr_mul_ui(ang_lo, pi_lo, 2 * j, MPFR_RNDD);
        mpfr_div_ui(ang_lo, ang_lo, n_, MPFR_RNDD);
        mpfr_mul_ui(ang_hi, pi_hi, 2 * j, MPFR_RNDU);
        mpfr_div_ui(ang_hi, ang_hi, n_, MPFR_RNDU);
        mpfr_cos(c_lo, ang_hi, MPFR_RNDD);
        mpfr_cos(c_hi, ang_lo, MPFR_RNDU);
        RatInterval out(detail::mpfr_to_rat(c_lo), detail::mpfr_to_rat(c_hi));
        mpfr_clears(pi_lo, pi_hi, ang_lo, ang_hi, c_lo, c_hi, (mpfr_ptr) nullptr);
        return out;
    }

    unsigned n_ = 0;
    unsigned phi_ = 0;
    std::vector<std::vector<Rat>> power_rows_;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<unsigned, unsigned>, RatInterval> cos_cache_;
};

// ---------------------------------------------------------------------------
// CycloReal

enum class SignBackend { Exact, IntervalFirst };

class CycloReal {
  public:
    CycloReal() = default;

    explicit CycloReal(std::shared_ptr<const CycloField> field)
        : field_(std::move(field)), coeffs_(field_->degree(), Rat(0)) {}

    CycloReal(std::shared_ptr<const CycloField> field, std::vector<Rat> coeffs)
        : field_(std::move(field)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != field_->degree())
            throw std::invalid_argument("CycloReal: coefficient count != phi(n)");
    }

    static CycloReal constant(std::shared_ptr<const CycloField> field, const Rat& value) {
        CycloReal r(std::move(field));
        r.coeffs_[0] = value;
        return r;
    }

    static CycloReal zeta_power(std::shared_ptr<const CycloField> field, long e) {
        unsigned n = field->conductor();
        long m = e % static_cast<long>(n);
        if (m < 0) m += n;
        CycloReal r(field);
        r.coeffs_ = field->power_row(static_cast<unsigned>(m));
        return r;
    }

    const std::shared_ptr<const CycloField>& field() const { return field_; }
    unsigned conductor() const { return field_->conductor(); }
    const std::vector<Rat>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (sgn(c) != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (size_t i = 1; i < coeffs_.size(); ++i)
            if (sgn(coeffs_[i]) != 0) return false;
        return true;
    }

    // Galois image under zeta -> zeta^-1 (complex conjugation on the standard
    // embedding).
    CycloReal conj() const {
        unsigned n = field_->conductor();
        CycloReal out(field_);
        for (unsigned i = 0; i < coeffs_.size(); ++i) {
            if (sgn(coeffs_[i]) == 0) continue;
            const auto& row = field_->power_row((n - i) % n);
            for (unsigned j = 0; j < coeffs_.size(); ++j) out.coeffs_[j] += coeffs_[i] * row[j];
        }
        return out;
    }

    bool is_real() const { return conj() == *this; }

    CycloReal operator-() const {
        CycloReal out = *this;
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }

    CycloReal& operator+=(const CycloReal& o) {
        require_same_field(o);
        for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    CycloReal& operator-=(const CycloReal& o) {
        require_same_field(o);
        for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }

    friend CycloReal operator+(CycloReal a, const CycloReal& b) { return a += b; }
    friend CycloReal operator-(CycloReal a, const CycloReal& b) { return a -= b; }

    friend CycloReal operator*(const CycloReal& a, const CycloReal& b) {
        a.require_same_field(b);
        unsigned phi = a.field_->degree();
        std::vector<Rat> conv(2 * phi - 1, Rat(0));
        for (unsigned i = 0; i < phi; ++i) {
            if (sgn(a.coeffs_[i]) == 0) continue;
            for (unsigned j = 0; j < phi; ++j) {
                if (sgn(b.coeffs_[j]) == 0) continue;
                conv[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        CycloReal out(a.field_);
        for (unsigned e = 0; e < conv.size(); ++e) {
            if (sgn(conv[e]) == 0) continue;
            if (e < phi) {
                out.coeffs_[e] += conv[e];
            } else {
                const auto& row = a.field_->power_row(e);
                for (unsigned j = 0; j < phi; ++j) out.coeffs_[j] += conv[e] * row[j];
            }
        }
        return out;
    }

    CycloReal& operator*=(const CycloReal& o) { return *this = *this * o; }

    CycloReal inverse() const {
        if (is_zero()) throw std::domain_error("CycloReal: division by zero");
        if (is_rational()) {
            CycloReal out(field_);
            out.coeffs_[0] = Rat(1) / coeffs_[0];
            return out;
        }
        // extended euclid in Q[x] against Phi_n (reconstructed from power rows)
        unsigned phi = field_->degree();
        std::vector<Rat> phi_poly(phi + 1, Rat(0));
        phi_poly[phi] = 1;
        const auto& row = field_->power_row(phi);  // x^phi == row (mod Phi)
        for (unsigned j = 0; j < phi; ++j) phi_poly[j] = -row[j];

        using QP = std::vector<Rat>;
        auto deg = [](const QP& p) -> int {
            for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
                if (sgn(p[i]) != 0) return i;
            return -1;
        };
        QP r0 = phi_poly, r1(coeffs_.begin(), coeffs_.end());
        QP s0{Rat(0)}, s1{Rat(1)};  // coefficients of *this in the Bezout identity
        while (deg(r1) > 0) {
            int d0 = deg(r0), d1 = deg(r1);
            QP q(static_cast<size_t>(d0 - d1 + 1), Rat(0));
            QP rem = r0;
            while (deg(rem) >= d1) {
                int dr = deg(rem);
                Rat c = rem[dr] / r1[d1];
                q[dr - d1] = c;
                for (int i = 0; i <= d1; ++i) rem[dr - d1 + i] -= c * r1[i];
            }
            // (r0, r1) <- (r1, rem); (s0, s1) <- (s1, s0 - q*s1)
            QP s2(std::max(s0.size(), q.size() + s1.size()), Rat(0));
            for (size_t i = 0; i < s0.size(); ++i) s2[i] = s0[i];
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        int d = deg(r1);
        if (d != 0) throw std::logic_error("CycloReal::inverse: gcd with Phi_n not constant");
        Rat scale = Rat(1) / r1[0];
        CycloReal out(field_);
        for (size_t i = 0; i < s1.size() && i < 2 * field_->conductor(); ++i) {
            if (sgn(s1[i]) == 0) continue;
            if (i < phi) {
                out.coeffs_[i] += s1[i] * scale;
            } else {
                const auto& rr = field_->power_row(static_cast<unsigned>(i));
                for (unsigned j = 0; j < phi; ++j) out.coeffs_[j] += s1[i] * scale * rr[j];
            }
        }
        return out;
    }

    friend CycloReal operator/(const CycloReal& a, const CycloReal& b) { return a * b.inverse(); }
    CycloReal& operator/=(const CycloReal& o) { return *this = *this / o; }

    friend bool operator==(const CycloReal& a, const CycloReal& b) {
        a.require_same_field(b);
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const CycloReal& a, const CycloReal& b) { return !(a == b); }

    // Rational interval enclosure of the standard real embedding
    // (valid for real elements; for non-real ones it encloses the real part).
    RatInterval enclosure(unsigned bits) const {
        RatInterval acc(Rat(0), Rat(0));
        unsigned n = field_->conductor();
        for (unsigned j = 0; j < coeffs_.size(); ++j) {
            if (sgn(coeffs_[j]) == 0) continue;
            acc = acc + field_->cos_enclosure(j % n, bits).scaled(coeffs_[j]);
        }
        return acc;
    }

    // Exact sign of a real element.  Total: terminates for every input.
    int sign(SignBackend backend = SignBackend::Exact) const {
        if (backend == SignBackend::IntervalFirst) {
            RatInterval enc = enclosure(kStartBits);
            if (sgn(enc.lo) > 0) return 1;
            if (sgn(enc.hi) < 0) return -1;
        }
        if (is_zero()) return 0;
        if (!is_real()) throw std::domain_error("CycloReal::sign: element is not real");
        for (unsigned bits = kStartBits; bits <= kMaxBits; bits *= 2) {
            RatInterval enc = enclosure(bits);
            if (sgn(enc.lo) > 0) return 1;
            if (sgn(enc.hi) < 0) return -1;
        }
        // Unreached for nonzero elements at the conductors this library uses;
        // the exact zero test above already handled zero.
        throw std::logic_error("CycloReal::sign: enclosure refinement exhausted");
    }

    double to_double() const {
        RatInterval enc = enclosure(128);
        return rat_to_double((enc.lo + enc.hi) / 2);
    }

    static constexpr unsigned kStartBits = 64;
    static constexpr unsigned kMaxBits = 4096;

  private:
    void require_same_field(const CycloReal& o) const {
        if (!field_ || !o.field_ || field_->conductor() != o.field_->conductor())
            throw std::domain_error("CycloReal: conductor mismatch");
    }

    std::shared_ptr<const CycloField> field_;
    std::vector<Rat> coeffs_;
};

// ---------------------------------------------------------------------------
// Exact cos(k*pi/d), sin(k*pi/d) in Q(zeta_conductor).
//
// Requires 2d | conductor (and 4 | conductor for the sine).  With
// zeta = exp(2*pi*i/n):  cos(k*pi/d) = (zeta^m + zeta^-m)/2 for m = k*n/(2d),
// and sin(k*pi/d) = (zeta^(m+3n/4) - zeta^(3n/4-m))/2  since 1/i = zeta^(3n/4).

inline std::pair<CycloReal, CycloReal> cos_sin_pi_multiple(long k, unsigned d, unsigned conductor) {
    if (d == 0) throw std::domain_error("cos_sin_pi_multiple: d must be positive");
    auto field = CycloField::get(conductor);
    unsigned n = conductor;
    if (n % (2 * d) != 0)
        throw std::domain_error("cos_sin_pi_multiple: 2d does not divide the conductor");
    if (n % 4 != 0) throw std::domain_error("cos_sin_pi_multiple: conductor must be divisible by 4");
    long m = k * static_cast<long>(n / (2 * d));
    CycloReal half = CycloReal::constant(field, rat(1, 2));
    CycloReal cosv = (CycloReal::zeta_power(field, m) + CycloReal::zeta_power(field, -m)) * half;
    long q = static_cast<long>(3 * (n / 4));
    CycloReal sinv =
        (CycloReal::zeta_power(field, m + q) - CycloReal::zeta_power(field, q - m)) * half;
    return {cosv, sinv};
}

inline CycloReal cos_pi_multiple(long k, unsigned d, unsigned conductor) {
    return cos_sin_pi_multiple(k, d, conductor).first;
}
inline CycloReal sin_pi_multiple(long k, unsigned d, unsigned conductor) {
    return cos_sin_pi_multiple(k, d, conductor).second;
}

}  // namespace pingpong

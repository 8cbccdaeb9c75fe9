#pragma once

// Small exact linear algebra over CycloReal (4x4 / 4-vectors) plus the
// double-precision mirrors used on rendering paths.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pingpong/cyclotomic.hpp"

namespace pingpong {

struct Vec4 {
    std::array<CycloReal, 4> v;

    const CycloReal& operator[](int i) const { return v[i]; }
    CycloReal& operator[](int i) { return v[i]; }

    bool is_zero() const {
        for (const auto& c : v)
            if (!c.is_zero()) return false;
        return true;
    }

    friend Vec4 operator+(const Vec4& a, const Vec4& b) {
        return {{a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}};
    }
    friend Vec4 operator-(const Vec4& a, const Vec4& b) {
        return {{a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}};
    }
    friend Vec4 operator*(const CycloReal& c, const Vec4& a) {
        return {{c * a[0], c * a[1], c * a[2], c * a[3]}};
    }
    Vec4 operator-() const { return {{-v[0], -v[1], -v[2], -v[3]}}; }
    friend bool operator==(const Vec4& a, const Vec4& b) { return a.v == b.v; }
};

struct Mat4 {
    // row-major
    std::array<CycloReal, 16> m;

    const CycloReal& operator()(int r, int c) const { return m[4 * r + c]; }
    CycloReal& operator()(int r, int c) { return m[4 * r + c]; }

    static Mat4 identity(const std::shared_ptr<const CycloField>& f) {
        Mat4 out = zero(f);
        for (int i = 0; i < 4; ++i) out(i, i) = CycloReal::constant(f, 1);
        return out;
    }
    static Mat4 zero(const std::shared_ptr<const CycloField>& f) {
        Mat4 out;
        for (auto& e : out.m) e = CycloReal(f);
        return out;
    }
    static Mat4 from_columns(const Vec4& c0, const Vec4& c1, const Vec4& c2, const Vec4& c3) {
        Mat4 out;
        const Vec4* cols[4] = {&c0, &c1, &c2, &c3};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) out(r, c) = (*cols[c])[r];
        return out;
    }

    Vec4 column(int c) const { return {{(*this)(0, c), (*this)(1, c), (*this)(2, c), (*this)(3, c)}}; }
    Vec4 row(int r) const { return {{(*this)(r, 0), (*this)(r, 1), (*this)(r, 2), (*this)(r, 3)}}; }

    Mat4 transpose() const {
        Mat4 out;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) out(r, c) = (*this)(c, r);
        return out;
    }

    bool is_zero() const {
        for (const auto& e : m)
            if (!e.is_zero()) return false;
        return true;
    }

    friend Mat4 operator+(const Mat4& a, const Mat4& b) {
        Mat4 out;
        for (int i = 0; i < 16; ++i) out.m[i] = a.m[i] + b.m[i];
        return out;
    }
    friend Mat4 operator-(const Mat4& a, const Mat4& b) {
        Mat4 out;
        for (int i = 0; i < 16; ++i) out.m[i] = a.m[i] - b.m[i];
        return out;
    }
    friend Mat4 operator*(const CycloReal& c, const Mat4& a) {
        Mat4 out;
        for (int i = 0; i < 16; ++i) out.m[i] = c * a.m[i];
        return out;
    }
    Mat4 operator-() const {
        Mat4 out;
        for (int i = 0; i < 16; ++i) out.m[i] = -m[i];
        return out;
    }
    friend Mat4 operator*(const Mat4& a, const Mat4& b) {
        Mat4 out;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                CycloReal acc = a(r, 0) * b(0, c);
                for (int k = 1; k < 4; ++k) acc += a(r, k) * b(k, c);
                out(r, c) = acc;
            }
        return out;
    }
    friend Vec4 operator*(const Mat4& a, const Vec4& x) {
        Vec4 out;
        for (int r = 0; r < 4; ++r) {
            CycloReal acc = a(r, 0) * x[0];
            for (int k = 1; k < 4; ++k) acc += a(r, k) * x[k];
            out[r] = acc;
        }
        return out;
    }
    friend bool operator==(const Mat4& a, const Mat4& b) { return a.m == b.m; }
};

inline Mat4 mat_pow(Mat4 base, unsigned e) {
    Mat4 acc = Mat4::identity(base.m[0].field());
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

inline CycloReal det(const Mat4& a) {
    auto m2 = [&](int r0, int r1, int c0, int c1) {
        return a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
    };
    // Laplace over the first two rows
    CycloReal d = m2(0, 1, 0, 1) * m2(2, 3, 2, 3) - m2(0, 1, 0, 2) * m2(2, 3, 1, 3) +
                  m2(0, 1, 0, 3) * m2(2, 3, 1, 2) + m2(0, 1, 1, 2) * m2(2, 3, 0, 3) -
                  m2(0, 1, 1, 3) * m2(2, 3, 0, 2) + m2(0, 1, 2, 3) * m2(2, 3, 0, 1);
    return d;
}

inline int rank(const Mat4& a) {
    std::array<std::array<CycloReal, 4>, 4> w;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) w[r][c] = a(r, c);
    int rk = 0;
    for (int col = 0; col < 4 && rk < 4; ++col) {
        int piv = -1;
        for (int r = rk; r < 4; ++r)
            if (!w[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(w[piv], w[rk]);
        CycloReal inv = w[rk][col].inverse();
        for (int c = col; c < 4; ++c) w[rk][c] = inv * w[rk][c];
        for (int r = 0; r < 4; ++r) {
            if (r == rk || w[r][col].is_zero()) continue;
            CycloReal f = w[r][col];
            for (int c = col; c < 4; ++c) w[r][c] -= f * w[rk][c];
        }
        ++rk;
    }
    return rk;
}

inline Mat4 inverse(const Mat4& a) {
    CycloReal d = det(a);
    if (d.is_zero()) throw std::domain_error("Mat4::inverse: singular matrix");
    auto f = a.m[0].field();
    // adjugate via 3x3 cofactors
    auto cof = [&](int r, int c) {
        int rr[3], cc[3], ri = 0, ci = 0;
        for (int i = 0; i < 4; ++i)
            if (i != r) rr[ri++] = i;
        for (int i = 0; i < 4; ++i)
            if (i != c) cc[ci++] = i;
        CycloReal m3 = a(rr[0], cc[0]) * (a(rr[1], cc[1]) * a(rr[2], cc[2]) - a(rr[1], cc[2]) * a(rr[2], cc[1])) -
                       a(rr[0], cc[1]) * (a(rr[1], cc[0]) * a(rr[2], cc[2]) - a(rr[1], cc[2]) * a(rr[2], cc[0])) +
                       a(rr[0], cc[2]) * (a(rr[1], cc[0]) * a(rr[2], cc[1]) - a(rr[1], cc[1]) * a(rr[2], cc[0]));
        if ((r + c) % 2 == 1) m3 = -m3;
        return m3;
    };
    Mat4 out = Mat4::zero(f);
    CycloReal dinv = d.inverse();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out(r, c) = dinv * cof(c, r);
    return out;
}

// Characteristic polynomial coefficients [c0, c1, c2, c3, c4] of det(tI - A),
// c4 = 1, by Faddeev-LeVerrier: p(t) = t^4 - a1 t^3 - a2 t^2 - a3 t - a4.
inline std::array<CycloReal, 5> char_poly(const Mat4& a) {
    auto f = a.m[0].field();
    auto trace = [&](const Mat4& x) { return x(0, 0) + x(1, 1) + x(2, 2) + x(3, 3); };
    Mat4 mk = a;
    std::array<CycloReal, 4> ak;
    ak[0] = trace(mk);
    for (int k = 2; k <= 4; ++k) {
        Mat4 shifted = mk;
        for (int i = 0; i < 4; ++i) shifted(i, i) = shifted(i, i) - ak[k - 2];
        mk = a * shifted;
        ak[k - 1] = CycloReal::constant(f, rat(1, k)) * trace(mk);
    }
    return {-ak[3], -ak[2], -ak[1], -ak[0], CycloReal::constant(f, 1)};
}

// Exact nullspace basis of a 4xN column collection (here: intersection of two
// 2-planes).  Returns vectors (s0,s1,t0,t1) with s0*u0+s1*u1+t0*w0+t1*w1 = 0.
inline std::vector<std::array<CycloReal, 4>> nullspace4(const std::array<Vec4, 4>& cols) {
    auto f = cols[0][0].field();
    // Gaussian elimination on the 4x4 matrix whose columns are cols
    std::array<std::array<CycloReal, 4>, 4> w;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) w[r][c] = cols[c][r];
    std::array<int, 4> pivot_col{-1, -1, -1, -1};
    int rk = 0;
    for (int col = 0; col < 4 && rk < 4; ++col) {
        int piv = -1;
        for (int r = rk; r < 4; ++r)
            if (!w[r][col].is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(w[piv], w[rk]);
        CycloReal inv = w[rk][col].inverse();
        for (int c = 0; c < 4; ++c) w[rk][c] = inv * w[rk][c];
        for (int r = 0; r < 4; ++r) {
            if (r == rk || w[r][col].is_zero()) continue;
            CycloReal fr = w[r][col];
            for (int c = 0; c < 4; ++c) w[r][c] -= fr * w[rk][c];
        }
        pivot_col[rk] = col;
        ++rk;
    }
    std::vector<std::array<CycloReal, 4>> basis;
    for (int col = 0; col < 4; ++col) {
        bool is_pivot = false;
        for (int r = 0; r < rk; ++r) is_pivot |= (pivot_col[r] == col);
        if (is_pivot) continue;
        std::array<CycloReal, 4> vec{CycloReal(f), CycloReal(f), CycloReal(f), CycloReal(f)};
        vec[col] = CycloReal::constant(f, 1);
        for (int r = 0; r < rk; ++r) vec[pivot_col[r]] = -w[r][col];
        basis.push_back(vec);
    }
    return basis;
}

// --------------------------- double mirrors --------------------------------

struct Vec4d {
    std::array<double, 4> v{};
    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
};

struct Mat4d {
    std::array<double, 16> m{};
    double& operator()(int r, int c) { return m[4 * r + c]; }
    double operator()(int r, int c) const { return m[4 * r + c]; }

    static Mat4d identity() {
        Mat4d out;
        for (int i = 0; i < 4; ++i) out(i, i) = 1.0;
        return out;
    }
    friend Mat4d operator*(const Mat4d& a, const Mat4d& b) {
        Mat4d out;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                double acc = 0;
                for (int k = 0; k < 4; ++k) acc += a(r, k) * b(k, c);
                out(r, c) = acc;
            }
        return out;
    }
    friend Vec4d operator*(const Mat4d& a, const Vec4d& x) {
        Vec4d out;
        for (int r = 0; r < 4; ++r) {
            double acc = 0;
            for (int k = 0; k < 4; ++k) acc += a(r, k) * x[k];
            out[r] = acc;
        }
        return out;
    }
};

inline Mat4d to_double(const Mat4& a) {
    Mat4d out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out(r, c) = a(r, c).to_double();
    return out;
}

inline Vec4d to_double(const Vec4& a) {
    Vec4d out;
    for (int i = 0; i < 4; ++i) out[i] = a[i].to_double();
    return out;
}

inline double norm(const Vec4d& a) {
    return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
}

// Unit normalization with the first nonzero coordinate made positive.
inline Vec4d normalize_projective(Vec4d a, double zero_tol = 0.0) {
    double n = norm(a);
    if (n == 0) return a;
    for (int i = 0; i < 4; ++i) a[i] /= n;
    for (int i = 0; i < 4; ++i) {
        if (std::abs(a[i]) > zero_tol) {
            if (a[i] < 0)
                for (int j = 0; j < 4; ++j) a[j] = -a[j];
            break;
        }
    }
    return a;
}

// Projective angular distance, accurate near zero (chord + asin rather than
// acos of the dot product, which cannot resolve angles below ~1e-8).
inline double angular_distance(const Vec4d& a, const Vec4d& b) {
    double na = norm(a), nb = norm(b);
    if (na == 0 || nb == 0) return 0;
    double dot = 0;
    for (int i = 0; i < 4; ++i) dot += (a[i] / na) * (b[i] / nb);
    double sign = dot < 0 ? -1.0 : 1.0;
    double chord2 = 0;
    for (int i = 0; i < 4; ++i) {
        double d = a[i] / na - sign * b[i] / nb;
        chord2 += d * d;
    }
    double half = std::sqrt(chord2) / 2;
    return 2 * std::asin(std::min(1.0, half));
}

}  // namespace pingpong

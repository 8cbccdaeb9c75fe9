#pragma once

// The fundamental cone C0 = [v0|v1|v2|v3], its symplectic self-duality, the
// membership matrix M and contraction matrix MA, and the full ping-pong
// certificate: MA (-R)^k v has nonnegative entries, with a strictly positive
// entry in each of the row pairs {1,3} and {2,4}, for k = 1..N-1 and
// v in {v0, v1, v2, v3, B v1}, plus the endpoint (-R)^N v3.

#include <atomic>
#include <chrono>
#include <optional>
#include <thread>

#include "pingpong/group.hpp"

namespace pingpong {

struct Cone4 {
    Mat4 gens;                // columns span the cone
    Mat4 faces;               // face functionals; faces * gens = (a/a') * antidiag(1,1,1,1)
    CycloReal duality_scalar; // a > 0: |v_i^t J v_{3-i}| common value
};

class ConeConstructionError : public std::runtime_error {
  public:
    explicit ConeConstructionError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void check_cone(bool ok, const std::string& what) {
    if (!ok) throw ConeConstructionError("cone invariant failed: " + what);
}

}  // namespace detail

// The cone C0 of the ping-pong argument, with every structural identity
// verified exactly at construction time.
inline Cone4 fundamental_cone(const GroupData& g) {
    auto f = g.field;
    CycloReal one = g.scalar(1), two = g.scalar(2);
    const CycloReal &cc1 = g.cc1, &cc2 = g.cc2, &s1 = g.s1, &s2 = g.s2, &L1 = g.L1, &L2 = g.L2;

    Vec4 v0{{g.scalar(0), -L1 * cc1 / s1, g.scalar(0), L2 * cc2 / s2}};
    Vec4 v1{{-L2 * cc1, -cc1 * cc1 / s1, L1 * cc2, cc2 * cc2 / s2}};
    Vec4 v2{{g.scalar(0), -cc1 / s1, g.scalar(0), cc2 / s2}};
    Vec4 v3{{cc1, -cc1 * cc1 / s1, -cc2, cc2 * cc2 / s2}};
    Mat4 gens = Mat4::from_columns(v0, v1, v2, v3);

    // self-duality: gens^t J gens antidiagonal with entries (a,-a,a,-a)
    // reading rows top to bottom, a > 0
    CycloReal alpha = two * (L1 - L2) / (cc1 - cc2) * cc1 * cc1 * cc2 * cc2 / (s1 * s2);
    detail::check_cone(alpha.sign() > 0, "duality scalar a > 0");
    Mat4 pairing = gens.transpose() * g.J * gens;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            if (c == 3 - r) {
                CycloReal expect = (r % 2 == 0) ? alpha : -alpha;
                detail::check_cone(pairing(r, c) == expect, "antidiagonal pairing entry");
            } else {
                detail::check_cone(pairing(r, c).is_zero(), "off-antidiagonal pairing vanishes");
            }
        }

    // columns are eigenvectors of A with eigenvalues (+1,-1,+1,-1)
    for (int i = 0; i < 4; ++i) {
        Vec4 av = g.A * gens.column(i);
        Vec4 expect = (i % 2 == 0) ? gens.column(i) : -gens.column(i);
        detail::check_cone(av == expect, "cone columns are A-eigenvectors (+,-,+,-)");
    }

    // M = (1/a') S' gens^t J with S' = diag(1,-1,1,-1)
    CycloReal alpha_prime = two / (cc2 - cc1) * cc1 * cc1 * cc2 * cc2 / (s1 * s2);
    detail::check_cone(alpha_prime.sign() > 0, "a' > 0");
    Mat4 faces = gens.transpose() * g.J;
    CycloReal apinv = alpha_prime.inverse();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            faces(r, c) = apinv * faces(r, c);
            if (r % 2 == 1) faces(r, c) = -faces(r, c);
        }

    // M matches its closed form
    CycloReal z = g.scalar(0);
    Mat4 m_expect = Mat4::zero(f);
    m_expect(0, 0) = -L1 / cc1;  m_expect(0, 2) = -L2 / cc2;
    m_expect(1, 0) = one;  m_expect(1, 1) = -L2 * s1 / cc1;  m_expect(1, 2) = one;  m_expect(1, 3) = -L1 * s2 / cc2;
    m_expect(2, 0) = -one / cc1;  m_expect(2, 2) = -one / cc2;
    m_expect(3, 0) = one;  m_expect(3, 1) = s1 / cc1;  m_expect(3, 2) = one;  m_expect(3, 3) = s2 / cc2;
    detail::check_cone(faces == m_expect, "M matches closed form");

    // MA matches its closed form: rows 2,4 of M unchanged, rows 1,3 negated
    Mat4 ma = faces * g.A;
    for (int c = 0; c < 4; ++c) {
        detail::check_cone(ma(0, c) == -faces(0, c) && ma(2, c) == -faces(2, c),
                           "MA rows 1,3 are negated M rows");
        detail::check_cone(ma(1, c) == faces(1, c) && ma(3, c) == faces(3, c),
                           "MA rows 2,4 equal M rows");
    }
    // the derivation uses 1 = (L1 cc2 - L2 cc1)/(cc1 - cc2)
    detail::check_cone((L1 * cc2 - L2 * cc1) == (cc1 - cc2), "L1 cc2 - L2 cc1 = cc1 - cc2");
    (void)z;

    return Cone4{gens, faces, alpha};
}

// --------------------------------------------------------------------------
// Membership

enum class MembershipKind { Inside, Boundary, OutsideProjective, OutsideHalf };

struct MembershipVerdict {
    MembershipKind kind;
    std::array<int, 4> signs;       // exact signs of faces * v
    int positive_index = -1;        // OutsideProjective: witnesses of opposite signs
    int negative_index = -1;
};

inline MembershipVerdict membership(const Cone4& cone, const Vec4& v,
                                    SignBackend backend = SignBackend::Exact) {
    if (v.is_zero()) throw std::domain_error("membership: zero vector");
    Vec4 mv = cone.faces * v;
    MembershipVerdict out{};
    int pos = -1, neg = -1, zeros = 0;
    for (int i = 0; i < 4; ++i) {
        out.signs[i] = mv[i].sign(backend);
        if (out.signs[i] > 0 && pos < 0) pos = i;
        if (out.signs[i] < 0 && neg < 0) neg = i;
        if (out.signs[i] == 0) ++zeros;
    }
    if (pos >= 0 && neg >= 0) {
        out.kind = MembershipKind::OutsideProjective;
        out.positive_index = pos;
        out.negative_index = neg;
    } else if (neg >= 0) {
        out.kind = MembershipKind::OutsideHalf;
    } else if (zeros > 0) {
        out.kind = MembershipKind::Boundary;
    } else {
        out.kind = MembershipKind::Inside;
    }
    return out;
}

// --------------------------------------------------------------------------
// Rotated and reflected cones: C_k = R^k C0, C'_k = R^k [v0 | Bv1 | v2 | (-R)v3]

inline Cone4 rotated_cone(const GroupData& g, const Cone4& base, unsigned k, bool primed) {
    if (k >= g.N) throw std::domain_error("rotated_cone: k out of range [0, N)");
    Mat4 gens = base.gens;
    Mat4 faces = base.faces;
    if (primed) {
        // columns v0, B v1, v2, (-R) v3; equals B * gens columnwise
        Vec4 bv1 = g.B * base.gens.column(1);
        Vec4 mrv3 = -(g.R * base.gens.column(3));
        gens = Mat4::from_columns(base.gens.column(0), bv1, base.gens.column(2), mrv3);
        faces = faces * g.B;  // B^-1 = B
    }
    Mat4 rk = mat_pow(g.R, k);
    Mat4 rk_inv = mat_pow(g.R, 2 * g.N - k);  // R^(2N) = Id
    gens = rk * gens;
    faces = faces * rk_inv;
    return Cone4{gens, faces, base.duality_scalar};
}

// --------------------------------------------------------------------------
// Ping-pong certificate

struct CertificateCheck {
    unsigned k = 0;
    std::string vector_id;            // "v0","v1","v2","v3","Bv1"
    std::array<int, 4> entry_signs{}; // exact signs of MA (-R)^k v
    bool ok = false;
    std::optional<std::array<CycloReal, 4>> witnesses;
};

struct PingPongCertificate {
    unsigned N = 0;
    SignBackend backend = SignBackend::Exact;
    std::vector<CertificateCheck> checks;  // (k,v) lexicographic, endpoint last
    bool passed = false;
    long wall_time_ms = 0;
};

inline const std::array<const char*, 5>& certificate_vector_ids() {
    static const std::array<const char*, 5> ids = {"v0", "v1", "v2", "v3", "Bv1"};
    return ids;
}

inline PingPongCertificate verify_ping_pong(const GroupData& g,
                                            SignBackend backend = SignBackend::Exact,
                                            unsigned jobs = 1, bool with_witnesses = false) {
    auto t0 = std::chrono::steady_clock::now();
    Cone4 cone = fundamental_cone(g);
    Mat4 ma = cone.faces * g.A;
    Mat4 mr = -g.R;

    std::array<Vec4, 5> vs = {cone.gens.column(0), cone.gens.column(1), cone.gens.column(2),
                              cone.gens.column(3), g.B * cone.gens.column(1)};

    // (-R)^k for k = 0..N, built once
    std::vector<Mat4> pw;
    pw.reserve(g.N + 1);
    pw.push_back(Mat4::identity(g.field));
    for (unsigned k = 1; k <= g.N; ++k) pw.push_back(pw.back() * mr);

    const unsigned rows = g.N - 1;
    std::vector<CertificateCheck> checks(rows * 5 + 1);

    auto run_check = [&](unsigned k, unsigned vi) {
        CertificateCheck c;
        c.k = k;
        c.vector_id = certificate_vector_ids()[vi];
        Vec4 w = ma * (pw[k] * vs[vi]);
        for (int i = 0; i < 4; ++i) c.entry_signs[i] = w[i].sign(backend);
        bool nonneg = true;
        for (int i = 0; i < 4; ++i) nonneg &= (c.entry_signs[i] >= 0);
        bool pair13 = (c.entry_signs[0] > 0) || (c.entry_signs[2] > 0);
        bool pair24 = (c.entry_signs[1] > 0) || (c.entry_signs[3] > 0);
        c.ok = nonneg && pair13 && pair24;
        if (with_witnesses) c.witnesses = {w[0], w[1], w[2], w[3]};
        checks[(k - 1) * 5 + vi] = std::move(c);
    };

    if (jobs <= 1) {
        for (unsigned k = 1; k <= rows; ++k)
            for (unsigned vi = 0; vi < 5; ++vi) run_check(k, vi);
    } else {
        std::vector<std::thread> pool;
        std::atomic<unsigned> next{1};
        unsigned workers = std::min(jobs, rows);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (unsigned k = next.fetch_add(1); k <= rows; k = next.fetch_add(1))
                    for (unsigned vi = 0; vi < 5; ++vi) run_check(k, vi);
            });
        for (auto& t : pool) t.join();
    }

    // endpoint: k = N for v3; (-R)^N = -Id and A v3 = -v3 make this M v3
    {
        CertificateCheck c;
        c.k = g.N;
        c.vector_id = "v3";
        Vec4 w = ma * (pw[g.N] * vs[3]);
        bool nonneg = true, some_pos = false;
        for (int i = 0; i < 4; ++i) {
            c.entry_signs[i] = w[i].sign(backend);
            nonneg &= (c.entry_signs[i] >= 0);
            some_pos |= (c.entry_signs[i] > 0);
        }
        c.ok = nonneg && some_pos;
        if (with_witnesses) c.witnesses = {w[0], w[1], w[2], w[3]};
        checks.back() = std::move(c);
    }

    PingPongCertificate cert;
    cert.N = g.N;
    cert.backend = backend;
    cert.checks = std::move(checks);
    cert.passed = true;
    for (const auto& c : cert.checks) cert.passed &= c.ok;
    cert.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return cert;
}

}  // namespace pingpong

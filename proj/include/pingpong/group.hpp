#pragma once

// Construction of the reflection matrices A, B, C, the symplectic pairing J,
// the rotation R = BC and the unipotent T = AB for the hypergeometric family
// with alpha = ((N-3)/2N, (N-1)/2N, (N+1)/2N, (N+3)/2N), beta = (1,1,1,1),
// together with exact verification of the conjugacy-class data.

#include <chrono>
#include <string>
#include <vector>

#include "pingpong/linalg.hpp"

namespace pingpong {

struct Condition {
    std::string id;
    bool pass = false;
    std::string witness;  // optional human-readable detail
};

struct Report {
    unsigned N = 0;
    std::vector<Condition> conditions;
    long wall_time_ms = 0;

    bool passed() const {
        for (const auto& c : conditions)
            if (!c.pass) return false;
        return true;
    }
    void add(std::string id, bool pass, std::string witness = {}) {
        conditions.push_back({std::move(id), pass, std::move(witness)});
    }
};

class GroupConstructionError : public std::runtime_error {
  public:
    explicit GroupConstructionError(const std::string& what) : std::runtime_error(what) {}
};

struct HypergeoParams {
    std::array<Rat, 4> alpha;
    std::array<Rat, 4> beta;

    static HypergeoParams for_order(unsigned N) {
        HypergeoParams p;
        long n = static_cast<long>(N);
        p.alpha = {rat(n - 3, 2 * n), rat(n - 1, 2 * n), rat(n + 1, 2 * n), rat(n + 3, 2 * n)};
        p.beta = {rat(1), rat(1), rat(1), rat(1)};
        return p;
    }
};

struct GroupData {
    unsigned N = 0;
    HypergeoParams params;
    std::shared_ptr<const CycloField> field;  // conductor 4N

    // theta = pi/N, mu1 = pi(N-3)/N, mu2 = pi(N-1)/N as rational multiples of pi
    Rat theta_over_pi, mu1_over_pi, mu2_over_pi;

    CycloReal c1, c2, s1, s2;    // cos/sin of mu1, mu2
    CycloReal cc1, cc2;          // 1 - c_i
    CycloReal r1, r2;            // reflection shear coefficients
    CycloReal L1, L2;            // cone constants
    Mat4 A, B, C, J, R, T;       // R = BC, T = AB

    CycloReal scalar(long num, long den = 1) const {
        return CycloReal::constant(field, rat(num, den));
    }
    // cos/sin(k*pi/d) in this group's field
    CycloReal cospi(long k, unsigned d) const { return cos_pi_multiple(k, d, field->conductor()); }
    CycloReal sinpi(long k, unsigned d) const { return sin_pi_multiple(k, d, field->conductor()); }
};

namespace detail {

inline void check_construction(bool ok, const std::string& what) {
    if (!ok) throw GroupConstructionError("group construction invariant failed: " + what);
}

}  // namespace detail

inline GroupData build_group(unsigned N) {
    if (N < 4) throw std::domain_error("build_group: N must be >= 4 (N=3 degenerates, mu1 = 0)");
    GroupData g;
    g.N = N;
    g.params = HypergeoParams::for_order(N);
    unsigned n = 4 * N;
    g.field = CycloField::get(n);
    long Nl = static_cast<long>(N);
    g.theta_over_pi = rat(1, Nl);
    g.mu1_over_pi = rat(Nl - 3, Nl);
    g.mu2_over_pi = rat(Nl - 1, Nl);

    auto [c1, s1] = cos_sin_pi_multiple(Nl - 3, N, n);
    auto [c2, s2] = cos_sin_pi_multiple(Nl - 1, N, n);
    g.c1 = c1;
    g.s1 = s1;
    g.c2 = c2;
    g.s2 = s2;

    CycloReal one = g.scalar(1);
    CycloReal two = g.scalar(2);
    CycloReal three = g.scalar(3);
    g.cc1 = one - c1;
    g.cc2 = one - c2;
    g.r1 = two * (c1 - one) * (c1 - one) / (s1 * (c1 - c2));
    g.r2 = two * (c2 - one) * (c2 - one) / (s2 * (c2 - c1));

    CycloReal denom = three * (g.cc1 + g.cc2) - g.cc1 * g.cc2;
    g.L1 = (g.cc1 * g.cc2 - three * (g.cc2 - g.cc1)) / denom;
    g.L2 = (g.cc1 * g.cc2 + three * (g.cc2 - g.cc1)) / denom;

    CycloReal zero = g.scalar(0);
    g.A = Mat4::zero(g.field);
    g.A(0, 0) = -one;
    g.A(1, 0) = -g.r1;
    g.A(1, 1) = one;
    g.A(1, 2) = -g.r1;
    g.A(2, 2) = -one;
    g.A(3, 0) = -g.r2;
    g.A(3, 2) = -g.r2;
    g.A(3, 3) = one;

    g.B = Mat4::zero(g.field);
    g.B(0, 0) = -one;
    g.B(1, 1) = one;
    g.B(2, 2) = -one;
    g.B(3, 3) = one;

    g.C = Mat4::zero(g.field);
    g.C(0, 0) = -c1;
    g.C(0, 1) = s1;
    g.C(1, 0) = s1;
    g.C(1, 1) = c1;
    g.C(2, 2) = -c2;
    g.C(2, 3) = s2;
    g.C(3, 2) = s2;
    g.C(3, 3) = c2;

    g.J = Mat4::zero(g.field);
    g.J(0, 1) = g.r2;
    g.J(1, 0) = -g.r2;
    g.J(2, 3) = g.r1;
    g.J(3, 2) = -g.r1;

    g.R = g.B * g.C;
    g.T = g.A * g.B;

    // Construction-time invariants (all exact).
    Mat4 id = Mat4::identity(g.field);
    detail::check_construction((g.A * g.A) == id, "A^2 = Id");
    detail::check_construction((g.B * g.B) == id, "B^2 = Id");
    detail::check_construction((g.C * g.C) == id, "C^2 = Id");
    for (auto [m, nm] : {std::pair{&g.A, "A"}, {&g.B, "B"}, {&g.C, "C"}})
        detail::check_construction((m->transpose() * g.J * *m) == -g.J,
                                   std::string(nm) + "^t J " + nm + " = -J");

    detail::check_construction(three * (g.L1 + g.L2) == (g.L1 + one) * g.cc2,
                               "3(L1+L2) = (L1+1)cc2");
    detail::check_construction((g.L1 + one) * g.cc2 == (g.L2 + one) * g.cc1,
                               "(L1+1)cc2 = (L2+1)cc1");
    detail::check_construction((g.scalar(1, 2) - g.L1).sign() > 0, "L1 < 1/2");
    detail::check_construction((one - g.L1 - g.L2).sign() > 0, "L1 + L2 < 1");
    detail::check_construction(g.cc1.sign() > 0, "cc1 > 0");
    detail::check_construction((g.cc2 - g.cc1).sign() > 0, "cc2 > cc1");
    detail::check_construction((g.L2 - g.L1).sign() > 0, "L2 > L1");
    (void)zero;
    return g;
}

enum class OrderOfR { NWithRNId, TwoNWithRNMinusId };

inline OrderOfR order_of_R(const GroupData& g) {
    Mat4 rn = mat_pow(g.R, g.N);
    Mat4 id = Mat4::identity(g.field);
    if (rn == id) {
        if (g.N % 2 == 0)
            throw std::logic_error("order_of_R: R^N = Id for even N contradicts parity law");
        return OrderOfR::NWithRNId;
    }
    if (rn == -id) {
        if (g.N % 2 == 1)
            throw std::logic_error("order_of_R: R^N = -Id for odd N contradicts parity law");
        return OrderOfR::TwoNWithRNMinusId;
    }
    throw std::logic_error("order_of_R: R^N is not +-Id");
}

// Conjugacy-class data of the monodromy triple, checked exactly:
//   char(R)  = (t^2 - 2 c1 t + 1)(t^2 - 2 c2 t + 1)
//   rank(T - Id) = 1 and det(T) = 1
//   (CA - Id)^4 = 0, (CA - Id)^3 != 0, char(CA) = (t-1)^4
inline Report verify_conjugacy(const GroupData& g) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.N = g.N;
    auto f = g.field;
    CycloReal one = g.scalar(1);
    CycloReal two = g.scalar(2);

    {
        auto cp = char_poly(g.R);
        // (t^2 - 2c1 t + 1)(t^2 - 2c2 t + 1)
        CycloReal b1 = -two * g.c1, b2 = -two * g.c2;
        std::array<CycloReal, 5> expect = {one, b1 + b2, two + b1 * b2, b1 + b2, one};
        bool ok = true;
        for (int i = 0; i < 5; ++i) ok &= (cp[i] == expect[i]);
        rep.add("charpoly_R", ok);
    }
    {
        Mat4 tm = g.T - Mat4::identity(f);
        rep.add("rank_T_minus_id_is_1", rank(tm) == 1);
        rep.add("det_T_is_1", det(g.T) == one);
    }
    {
        Mat4 ca = g.C * g.A;
        Mat4 nil = ca - Mat4::identity(f);
        Mat4 nil2 = nil * nil;
        Mat4 nil3 = nil2 * nil;
        Mat4 nil4 = nil3 * nil;
        rep.add("CA_maximally_unipotent", nil4.is_zero() && !nil3.is_zero());
        auto cp = char_poly(ca);
        CycloReal four = g.scalar(4), six = g.scalar(6);
        bool ok = cp[0] == one && cp[1] == -four && cp[2] == six && cp[3] == -four && cp[4] == one;
        rep.add("charpoly_CA_is_t_minus_1_pow4", ok);
    }
    rep.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    return rep;
}

}  // namespace pingpong

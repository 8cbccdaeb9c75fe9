#pragma once

// Exact verification of the trigonometric identity bank behind the rotated
// vector estimates: angle tripling, cosine/sine differences, the half-angle
// ratio formulas for cc_i/s_i, the sine-power ratio combinations with their
// sign facts, and the two shifted-angle proposition formula families.
//
// Every identity is evaluated as an exact difference in Q(zeta_4N); signs are
// decided by the rigorous sign oracle.  theta = pi/N throughout, and for a
// rotation power k:  cp1 = cos(3k theta), sp1 = -sin(3k theta),
// cp2 = cos(k theta), sp2 = -sin(k theta).

#include "pingpong/group.hpp"

namespace pingpong {

namespace detail {

struct BankContext {
    const GroupData& g;
    long k;
    CycloReal cp1, sp1, cp2, sp2;
    long N;

    explicit BankContext(const GroupData& gd, long kk) : g(gd), k(kk), N(gd.N) {
        auto [c3k, s3k] = cos_sin_pi_multiple(3 * k, gd.N, gd.field->conductor());
        auto [ck, sk] = cos_sin_pi_multiple(k, gd.N, gd.field->conductor());
        cp1 = c3k;
        sp1 = -s3k;
        cp2 = ck;
        sp2 = -sk;
    }
    // cos/sin of (m/2) * theta, i.e. m * pi / (2N)
    CycloReal cos_half(long m) const { return g.cospi(m, 2 * g.N); }
    CycloReal sin_half(long m) const { return g.sinpi(m, 2 * g.N); }
};

}  // namespace detail

// Bank of plain identities, checked for one (N, k).
inline Report check_identity_bank(const GroupData& g, long k) {
    if (k < 1 || k > static_cast<long>(g.N) - 1)
        throw std::domain_error("check_identity_bank: k must be in [1, N-1]");
    Report rep;
    rep.N = g.N;
    detail::BankContext cx(g, k);
    const CycloReal &s1 = g.s1, &s2 = g.s2, &cc1 = g.cc1, &cc2 = g.cc2;
    CycloReal one = g.scalar(1), two = g.scalar(2), three = g.scalar(3), four = g.scalar(4);
    long N = cx.N;

    // tripling and difference formulas at x = k*theta
    {
        CycloReal sx = g.sinpi(k, N), cx1 = g.cospi(k, N);
        CycloReal s3x = g.sinpi(3 * k, N), c3x = g.cospi(3 * k, N);
        CycloReal s2x = g.sinpi(2 * k, N), c2x = g.cospi(2 * k, N);
        rep.add("tripling_sine_form1", s3x == sx * (three - four * sx * sx));
        rep.add("tripling_sine_form2", s3x == sx * (two * c2x + one));
        rep.add("tripling_cosine_form1", c3x == cx1 * (four * cx1 * cx1 - three));
        rep.add("tripling_cosine_form2", c3x == cx1 * (two * c2x - one));
        rep.add("difference_cosines_form1", c3x - cx1 == two * cx1 * (c2x - one));
        rep.add("difference_cosines_form2", c3x - cx1 == -four * cx1 * sx * sx);
        rep.add("difference_cosines_form3", c3x - cx1 == -two * sx * s2x);
        rep.add("difference_sines", s3x - sx == two * sx * c2x);
    }

    // half-angle expressions for cc_i / s_i
    rep.add("cc1_over_s1_half_angle", cc1 / s1 == cx.cos_half(3) / cx.sin_half(3));
    rep.add("cc2_over_s2_half_angle", cc2 / s2 == cx.cos_half(1) / cx.sin_half(1));
    {
        CycloReal lhs = cc2 / s2 - cc1 / s1;
        rep.add("ratio_difference", lhs == two * cx.cos_half(1) / cx.sin_half(3));
        rep.add("ratio_difference_positive", lhs.sign() > 0);
    }

    // sine-power ratio combinations
    {
        CycloReal lhs = cx.sp1 / s1 - cx.sp2 / s2;
        CycloReal rhs =
            two * (g.sinpi(k, N) / g.sinpi(3, N)) * (g.cospi(2, N) - g.cospi(2 * k, N));
        rep.add("ratio_sine_powers_difference", lhs == rhs);
        int s = lhs.sign();
        rep.add("ratio_sine_powers_difference_nonneg", s >= 0);
        bool boundary = (k == 1 || k == N - 1);
        rep.add("ratio_sine_powers_difference_vanishing", (s == 0) == boundary);
    }
    {
        CycloReal lhs = cx.sp1 / s1 + cx.sp2 / s2;
        CycloReal rhs = -two * (g.sinpi(k, N) / g.sinpi(3, N)) *
                        (g.cospi(2 * k, N) + g.cospi(2, N) + one);
        rep.add("ratio_sine_powers_sum", lhs == rhs);
        rep.add("ratio_sine_powers_sum_nonpos", lhs.sign() <= 0);
    }

    // half-angle combinations  (cc1/s1) sp1 +- (cc2/s2) sp2
    {
        CycloReal lhs = cc1 / s1 * cx.sp1 - cc2 / s2 * cx.sp2;
        CycloReal rhs = two * g.sinpi(k, N) / cx.sin_half(3) *
                        (cx.cos_half(1) - g.cospi(2 * k, N) * cx.cos_half(3));
        rep.add("half_angle_difference", lhs == rhs);
        rep.add("half_angle_difference_nonneg", lhs.sign() >= 0);
    }
    {
        CycloReal lhs = cc1 / s1 * cx.sp1 + cc2 / s2 * cx.sp2;
        CycloReal rhs = -(two * g.sinpi(k, N) / cx.sin_half(3)) *
                        (g.cospi(2 * k, N) * cx.cos_half(3) + two * g.cospi(1, N) * cx.cos_half(1));
        rep.add("half_angle_sum", lhs == rhs);
        rep.add("half_angle_sum_nonpos", lhs.sign() <= 0);
    }
    return rep;
}

// The two families of shifted-angle formulas (both sign branches of each of
// the six displayed identities).  Valid for any integer k; the theorem range
// is 1 <= k <= N-1 but k = 0 is algebraically fine and useful as a sanity
// case.
inline Report check_prop_formulas(const GroupData& g, long k) {
    Report rep;
    rep.N = g.N;
    detail::BankContext cx(g, k);
    const CycloReal &s1 = g.s1, &s2 = g.s2, &cc1 = g.cc1, &cc2 = g.cc2;
    CycloReal four = g.scalar(4);
    long N = cx.N;

    for (int sg : {+1, -1}) {
        CycloReal sgn_c = g.scalar(sg);
        std::string tag = (sg > 0) ? "_plus" : "_minus";
        // sg*cp1 - (cc1/s1) sp1 = sin(3(k + sg/2) theta) / sin(3 theta / 2)
        {
            CycloReal lhs = sgn_c * cx.cp1 - cc1 / s1 * cx.sp1;
            CycloReal rhs = cx.sin_half(3 * (2 * k + sg)) / cx.sin_half(3);
            rep.add("shifted_sine_triple" + tag, lhs == rhs);
        }
        {
            CycloReal lhs = sgn_c * cx.cp2 - cc2 / s2 * cx.sp2;
            CycloReal rhs = cx.sin_half(2 * k + sg) / cx.sin_half(1);
            rep.add("shifted_sine_single" + tag, lhs == rhs);
        }
        {
            CycloReal lhs = sgn_c * (cx.cp1 - cx.cp2) - cc1 / s1 * cx.sp1 + cc2 / s2 * cx.sp2;
            CycloReal rhs = -four * (cx.sin_half(2 * k + sg) / cx.sin_half(3)) * g.sinpi(k, N) *
                            g.sinpi(k + sg, N);
            rep.add("shifted_sine_combined" + tag, lhs == rhs);
        }
        // cp1 + sg*(s1/cc1) sp1 = cos(3(k + sg/2) theta) / cos(3 theta / 2)
        {
            CycloReal lhs = cx.cp1 + sgn_c * (s1 / cc1) * cx.sp1;
            CycloReal rhs = cx.cos_half(3 * (2 * k + sg)) / cx.cos_half(3);
            rep.add("shifted_cosine_triple" + tag, lhs == rhs);
        }
        {
            CycloReal lhs = cx.cp2 + sgn_c * (s2 / cc2) * cx.sp2;
            CycloReal rhs = cx.cos_half(2 * k + sg) / cx.cos_half(1);
            rep.add("shifted_cosine_single" + tag, lhs == rhs);
        }
        {
            CycloReal lhs =
                (cx.cp1 - cx.cp2) + sgn_c * ((s1 / cc1) * cx.sp1 - (s2 / cc2) * cx.sp2);
            CycloReal rhs = -four * (cx.cos_half(2 * k + sg) / cx.cos_half(3)) * g.sinpi(k, N) *
                            g.sinpi(k + sg, N);
            rep.add("shifted_cosine_combined" + tag, lhs == rhs);
        }
    }
    return rep;
}

// Convenience: the whole bank over k = 1..N-1, merged into one report.
inline Report check_identities_all_k(const GroupData& g) {
    auto t0 = std::chrono::steady_clock::now();
    Report all;
    all.N = g.N;
    for (long k = 1; k <= static_cast<long>(g.N) - 1; ++k) {
        Report bank = check_identity_bank(g, k);
        Report props = check_prop_formulas(g, k);
        for (auto& c : bank.conditions)
            all.add("k" + std::to_string(k) + "." + c.id, c.pass, c.witness);
        for (auto& c : props.conditions)
            all.add("k" + std::to_string(k) + "." + c.id, c.pass, c.witness);
    }
    all.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    return all;
}

}  // namespace pingpong

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pingpong/einstein.hpp"

using namespace pingpong;

namespace {

struct StdFrame {
    std::shared_ptr<const CycloField> f;
    Mat4 J;
    Vec4 e1, f1, e2, f2;
    CrookedFrame fr;

    StdFrame()
        : f(CycloField::get(8)),
          J(Mat4::zero(f)),
          e1(vec(1, 0, 0, 0)),
          f1(vec(0, 1, 0, 0)),
          e2(vec(0, 0, 1, 0)),
          f2(vec(0, 0, 0, 1)),
          fr(make()) {}

    CycloReal c(long n, long d = 1) const { return CycloReal::constant(f, rat(n, d)); }
    Vec4 vec(long a, long b, long cc, long d) const { return Vec4{{c(a), c(b), c(cc), c(d)}}; }

  private:
    CrookedFrame make() {
        J(0, 1) = c(1);
        J(1, 0) = c(-1);
        J(2, 3) = c(1);
        J(3, 2) = c(-1);
        return CrookedFrame::from_vectors(e1, f1, e2, f2, J);
    }
};

}  // namespace

TEST_CASE("frame validation") {
    StdFrame s;
    // broken pairing rejected
    REQUIRE_THROWS_AS(CrookedFrame::from_vectors(s.e1, s.e2, s.f1, s.f2, s.J), std::domain_error);
    // involution is anti-symplectic, squares to the identity, fixes e's,
    // negates f's
    Mat4 inv = s.fr.involution();
    REQUIRE(inv * inv == Mat4::identity(s.f));
    REQUIRE(inv.transpose() * s.J * inv == -s.J);
    REQUIRE(inv * s.e1 == s.e1);
    REQUIRE(inv * s.f2 == -s.f2);
}

TEST_CASE("pluecker points lie on the null quadric") {
    StdFrame s;
    auto L = make_lagrangian(s.fr, s.e1 + s.f1, s.e2 - s.f2);
    REQUIRE(L.plucker.has_value());
    REQUIRE(q_form(*L.plucker).is_zero());
    // cache agrees with recomputation
    auto p2 = plucker_point(s.fr, L.u, L.v);
    REQUIRE(L.plucker->w == p2.w);
    // non-isotropic span rejected
    REQUIRE_THROWS_AS(make_lagrangian(s.fr, s.e1, s.f1), std::domain_error);
}

TEST_CASE("photons") {
    StdFrame s;
    auto ph = photon(s.J, s.e1);
    // every pencil member is a Lagrangian through e1 on the null quadric
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b) {
            if (a == 0 && b == 0) continue;
            auto [u, v] = ph.at(s.c(a), s.c(b));
            auto L = make_lagrangian(s.fr, u, v);
            REQUIRE(q_form(*L.plucker).is_zero());
            REQUIRE(detail::plane_intersection(u, v, s.e1, s.e1 + u).has_value());
        }
    // L_{e1 e2} and L_{e1 f2} are members: e2 and f2 lie in e1-perp, so both
    // corner Lagrangians appear in the pencil P(e1 ^ e1-perp)
    REQUIRE(s.fr.pair(s.e1, s.e2).is_zero());
    REQUIRE(s.fr.pair(s.e1, s.f2).is_zero());
    Vec4 zero = s.vec(0, 0, 0, 0);
    REQUIRE_THROWS_AS(photon(s.J, zero), std::domain_error);
}

TEST_CASE("photons over the e-edge are preserved by the involution") {
    StdFrame s;
    // A fixes every point of span(e1, e2), hence each photon over the edge
    Mat4 inv = s.fr.involution();
    Vec4 v = s.e1 + s.e2;
    REQUIRE(inv * v == v);
    // and therefore permutes each photon phi(v) within itself
    auto ph = photon(s.J, v);
    auto [u1, w1] = ph.at(s.c(1), s.c(2));
    Vec4 au = inv * u1, aw = inv * w1;
    // the image span still contains v
    REQUIRE(detail::plane_intersection(au, aw, v, v + au).has_value());
    REQUIRE(s.fr.pair(au, aw).is_zero());
}

TEST_CASE("maslov indices") {
    StdFrame s;
    auto idx = [&](const Vec4& u, const Vec4& v) {
        return maslov_index(s.fr, make_lagrangian(s.fr, u, v));
    };
    auto sp = idx(s.e1 + s.f1, s.e2 - s.f2);
    REQUIRE(sp.index == 2);
    REQUIRE_FALSE(sp.degenerate);
    auto sm = idx(s.e1 - s.f1, s.e2 + s.f2);
    REQUIRE(sm.index == -2);
    REQUIRE_FALSE(sm.degenerate);
    auto ze = idx(s.e1, s.e2);
    REQUIRE(ze.index == 0);
    REQUIRE(ze.degenerate);
    // meets L_{e1 f2} nontrivially: degenerate, quotient signature +-1
    auto dg = idx(s.e1, s.f2 + s.e2);
    REQUIRE(dg.degenerate);
    REQUIRE(std::abs(dg.index) <= 1);
}

TEST_CASE("classification of positions") {
    StdFrame s;
    auto cls = [&](const Vec4& u, const Vec4& v) {
        return classify_lagrangian(s.fr, make_lagrangian(s.fr, u, v));
    };
    REQUIRE(cls(s.e1, s.e2) == LagrangianPosition::WingE);
    REQUIRE(cls(s.f1, s.f2) == LagrangianPosition::WingF);
    REQUIRE(cls(s.e1 + s.f1, s.e2 - s.f2) == LagrangianPosition::StemPlus);
    REQUIRE(cls(s.e1 - s.f1, s.e2 + s.f2) == LagrangianPosition::StemMinus);
    // the corner Lagrangian L_{e1 f2} sits on the closed e-wing
    REQUIRE(cls(s.e1, s.f2) == LagrangianPosition::WingE);
    // interior point with an isotropic completion: small component
    REQUIRE(cls(s.vec(1, 1, 1, 1), s.vec(1, 1, -1, -1)) == LagrangianPosition::SmallComponent);
    // its involution image: big component
    Mat4 inv = s.fr.involution();
    REQUIRE(cls(inv * s.vec(1, 1, 1, 1), inv * s.vec(1, 1, -1, -1)) ==
            LagrangianPosition::BigComponent);
    // a span meeting the e-edge only through a nontrivial intersection with
    // span(e1,e2): still a wing member (it contains e2)
    REQUIRE(cls(s.vec(1, 1, 1, 0), s.vec(1, 1, -1, 0)) == LagrangianPosition::WingE);
}

TEST_CASE("involution swaps stem components and complement components") {
    StdFrame s;
    Mat4 inv = s.fr.involution();
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> coef(-4, 4);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 40; ++trial) {
        Vec4 u = s.vec(coef(rng), coef(rng), coef(rng), coef(rng));
        Vec4 w = s.vec(coef(rng), coef(rng), coef(rng), coef(rng));
        if (u.is_zero() || w.is_zero()) continue;
        // project w to the symplectic complement of u: w' = w - (I(u,w)/I(u,z)) z
        CycloReal c = s.fr.pair(u, w);
        if (!c.is_zero()) {
            Vec4 z = s.vec(1, 2, 3, 4);
            CycloReal d = s.fr.pair(u, z);
            if (d.is_zero()) continue;
            w = w - (c / d) * z;
        }
        if (w.is_zero()) continue;
        Lagrangian L{u, w, std::nullopt};
        try {
            L = make_lagrangian(s.fr, u, w);
        } catch (const std::exception&) {
            continue;
        }
        auto pos = classify_lagrangian(s.fr, L);
        auto posA = classify_lagrangian(s.fr, make_lagrangian(s.fr, inv * u, inv * w));
        ++checked;
        switch (pos) {
            case LagrangianPosition::SmallComponent:
                REQUIRE(posA == LagrangianPosition::BigComponent);
                break;
            case LagrangianPosition::BigComponent:
                REQUIRE(posA == LagrangianPosition::SmallComponent);
                break;
            case LagrangianPosition::StemPlus:
                REQUIRE(posA == LagrangianPosition::StemMinus);
                break;
            case LagrangianPosition::StemMinus:
                REQUIRE(posA == LagrangianPosition::StemPlus);
                break;
            case LagrangianPosition::WingE:
                REQUIRE(posA == LagrangianPosition::WingE);
                break;
            case LagrangianPosition::WingF:
                REQUIRE(posA == LagrangianPosition::WingF);
                break;
        }
    }
    REQUIRE(checked >= 30);
}

TEST_CASE("photon disjointness and the cone formulation agree") {
    StdFrame s;
    REQUIRE(photon_disjoint_from_surface(s.fr, s.vec(1, 1, 1, 1)));
    REQUIRE_FALSE(photon_disjoint_from_surface(s.fr, s.e1));
    REQUIRE(photon_disjoint_from_surface(s.fr, s.vec(1, -1, 1, -1)));  // in A int C
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> coef(-9, 9);
    int agree = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Vec4 v = s.vec(coef(rng), coef(rng), coef(rng), coef(rng));
        if (v.is_zero()) continue;
        REQUIRE(photon_disjoint_from_surface(s.fr, v) == vector_in_open_cone_union(s.fr, v));
        ++agree;
    }
    REQUIRE(agree > 900);
}

TEST_CASE("explicit photon-tangency frame") {
    StdFrame s;
    Vec4 f1p = s.f1;
    Vec4 e2p = s.e2 + s.f1;
    Vec4 f2p = s.f2 + s.e2 + s.c(1, 2) * s.f1;
    Vec4 e1p = s.e1 + s.f2 + s.c(1, 2) * s.e2 + s.c(1, 6) * s.f1;
    auto g = CrookedFrame::from_vectors(e1p, f1p, e2p, f2p, s.J);
    auto verdict = surfaces_relation(s.fr, g);
    REQUIRE(verdict.relation == SurfaceRelation::PhotonTangent);
    REQUIRE(verdict.shared_photon_base.has_value());
    int sgn_out;
    REQUIRE(detail::proportional(*verdict.shared_photon_base, s.f1, sgn_out));

    // the constructing matrix is symplectic and maximally unipotent
    Mat4 U = Mat4::from_columns(e1p, f1p, e2p, f2p);
    REQUIRE(U.transpose() * s.J * U == s.J);
    Mat4 nil = U - Mat4::identity(s.f);
    Mat4 n2 = nil * nil;
    Mat4 n3 = n2 * nil;
    REQUIRE((n3 * nil).is_zero());
    REQUIRE_FALSE(n3.is_zero());
}

TEST_CASE("wing-tangency instance from a rank-1 symplectic unipotent") {
    StdFrame s;
    // image of the frame under U: f1 -> f1 + e1 + e2, f2 -> f2 + e1 + e2
    Vec4 wf1 = s.f1 + s.e1 + s.e2, wf2 = s.f2 + s.e1 + s.e2;
    Mat4 U = Mat4::from_columns(s.e1, wf1, s.e2, wf2);
    REQUIRE(U.transpose() * s.J * U == s.J);
    Mat4 nil = U - Mat4::identity(s.f);
    REQUIRE((nil * nil).is_zero());
    REQUIRE(rank(nil) == 1);
    auto g = CrookedFrame::from_vectors(s.e1, wf1, s.e2, wf2, s.J);
    auto verdict = surfaces_relation(s.fr, g);
    REQUIRE(verdict.relation == SurfaceRelation::WingTangent);
    REQUIRE(verdict.shared_wing.has_value());
}

TEST_CASE("group cones: disjointness and tangency of crooked surfaces") {
    auto g = build_group(4);
    auto cone = fundamental_cone(g);
    auto fr = frame_of_cone(g, cone);
    // the frame involution is the reflection A itself
    REQUIRE(fr.involution() == g.A);

    // N = 4: the surface of C2 is disjoint from that of C0
    auto fr2 = fr.transformed(mat_pow(g.R, 2), +1);
    REQUIRE(surfaces_relation(fr, fr2).relation == SurfaceRelation::Disjoint);

    // rank-1 translate: wing tangency; MUM translate: photon tangency at f1
    Mat4 U = (g.A * g.B) * (g.A * g.B);
    REQUIRE(surfaces_relation(fr, fr.transformed(U, +1)).relation ==
            SurfaceRelation::WingTangent);
    Mat4 V = (g.A * g.C) * (g.A * g.C);
    auto verdict = surfaces_relation(fr, fr.transformed(V, +1));
    REQUIRE(verdict.relation == SurfaceRelation::PhotonTangent);
    int sgn_out;
    REQUIRE(detail::proportional(*verdict.shared_photon_base, fr.f1, sgn_out));
    // the shared photon is the MUM fixed line v3
    REQUIRE(detail::proportional(*verdict.shared_photon_base, cone.gens.column(3), sgn_out));

    // adjacent pair shares its wing
    auto frB = fr.transformed(g.B, -1);
    auto wverdict = surfaces_relation(fr, frB);
    REQUIRE(wverdict.relation == SurfaceRelation::WingTangent);
    REQUIRE(wverdict.shared_wing.has_value());
}

TEST_CASE("crooked survey matches the expected relation table") {
    for (unsigned N : {4u, 5u}) {
        auto g = build_group(N);
        auto rep = crooked_survey(g);
        CAPTURE(N);
        for (const auto& c : rep.conditions) {
            CAPTURE(c.id, c.witness);
            REQUIRE(c.pass);
        }
    }
}

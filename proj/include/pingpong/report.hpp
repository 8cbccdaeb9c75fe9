#pragma once

// JSON views of reports, certificates and samples (schema "pingpong-sp4/v1").

#include <json.hpp>

#include "pingpong/cones.hpp"
#include "pingpong/limitset.hpp"

namespace pingpong {

using json = nlohmann::json;

inline json to_json(const CycloReal& x) {
    json coeffs = json::array();
    for (const auto& c : x.coeffs()) coeffs.push_back(rat_to_string(c));
    return json{{"conductor", x.conductor()}, {"coeffs", coeffs}};
}

inline json to_json(const Report& r) {
    json conds = json::array();
    for (const auto& c : r.conditions) {
        json jc{{"id", c.id}, {"status", c.pass ? "pass" : "fail"}};
        if (!c.witness.empty()) jc["witness"] = c.witness;
        conds.push_back(jc);
    }
    return json{{"schema", "pingpong-sp4/v1"},
                {"N", r.N},
                {"conditions", conds},
                {"passed", r.passed()},
                {"wall_time_ms", r.wall_time_ms}};
}

inline json to_json(const PingPongCertificate& cert) {
    json checks = json::array();
    for (const auto& c : cert.checks) {
        json jc{{"k", c.k},
                {"vector_id", c.vector_id},
                {"entry_signs", c.entry_signs},
                {"status", c.ok ? "pass" : "fail"}};
        if (c.witnesses) {
            json w = json::array();
            for (const auto& x : *c.witnesses) w.push_back(to_json(x));
            jc["witnesses"] = w;
        }
        checks.push_back(jc);
    }
    return json{{"schema", "pingpong-sp4/v1"},
                {"N", cert.N},
                {"backend", cert.backend == SignBackend::Exact ? "exact" : "interval-first"},
                {"checks", checks},
                {"passed", cert.passed},
                {"wall_time_ms", cert.wall_time_ms}};
}

// Certificate content that must agree across sign backends (no timings).
inline json certificate_content(const PingPongCertificate& cert) {
    json checks = json::array();
    for (const auto& c : cert.checks)
        checks.push_back(json{{"k", c.k},
                              {"vector_id", c.vector_id},
                              {"entry_signs", c.entry_signs},
                              {"status", c.ok ? "pass" : "fail"}});
    return json{{"N", cert.N}, {"checks", checks}, {"passed", cert.passed}};
}

inline json group_info(const GroupData& g) {
    json alpha = json::array();
    for (const auto& a : g.params.alpha) alpha.push_back(rat_to_string(a));
    auto approx = [](const CycloReal& x) { return x.to_double(); };
    return json{{"schema", "pingpong-sp4/v1"},
                {"N", g.N},
                {"conductor", g.field->conductor()},
                {"field_degree", g.field->degree()},
                {"alpha", alpha},
                {"order_of_R", order_of_R(g) == OrderOfR::NWithRNId ? "N" : "2N"},
                {"R_pow_N", order_of_R(g) == OrderOfR::NWithRNId ? "Id" : "-Id"},
                {"constants",
                 json{{"c1", approx(g.c1)},
                      {"c2", approx(g.c2)},
                      {"s1", approx(g.s1)},
                      {"s2", approx(g.s2)},
                      {"cc1", approx(g.cc1)},
                      {"cc2", approx(g.cc2)},
                      {"r1", approx(g.r1)},
                      {"r2", approx(g.r2)},
                      {"L1", approx(g.L1)},
                      {"L2", approx(g.L2)}}},
                {"certificate_checks", (g.N - 1) * 5 + 1}};
}

}  // namespace pingpong

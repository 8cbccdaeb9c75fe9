// Command-line front end: exact verification of the ping-pong certificates,
// the identity bank and the crooked-surface relations, plus limit-set
// exports.
//
//   pingpong info N
//   pingpong verify N [--backend exact|interval-first] [--jobs J] [--witnesses]
//   pingpong identities N
//   pingpong crooked N
//   pingpong limit-curve N --depth D [--format csv|ply|json] [--out PATH]
//   pingpong limit-surface N --depth D --density M [--chart ff|ee|ef|fe] ...
//   pingpong batch --from A --to B [--backend ...] [--jobs J]
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or domain error.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "pingpong/identities.hpp"
#include "pingpong/report.hpp"

namespace {

using namespace pingpong;

unsigned default_jobs() {
    if (const char* env = std::getenv("PINGPONG_JOBS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

SignBackend parse_backend(const std::string& s) {
    if (s == "exact") return SignBackend::Exact;
    if (s == "interval-first") return SignBackend::IntervalFirst;
    throw CLI::ValidationError("--backend", "must be 'exact' or 'interval-first'");
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << j.dump(2) << "\n";
}

ExportFormat parse_format(const std::string& s) {
    if (s == "csv") return ExportFormat::Csv;
    if (s == "ply") return ExportFormat::Ply;
    if (s == "json") return ExportFormat::Json;
    throw CLI::ValidationError("--format", "must be csv, ply or json");
}

ChartCorner parse_corner(const std::string& s) {
    if (s == "ff") return ChartCorner::FF;
    if (s == "ee") return ChartCorner::EE;
    if (s == "ef") return ChartCorner::EF;
    if (s == "fe") return ChartCorner::FE;
    throw CLI::ValidationError("--chart", "must be ff, ee, ef or fe");
}

json verify_one(unsigned N, SignBackend backend, unsigned jobs, bool witnesses) {
    GroupData g = build_group(N);
    Report conj = verify_conjugacy(g);
    PingPongCertificate cert = verify_ping_pong(g, backend, jobs, witnesses);
    json j{{"schema", "pingpong-sp4/v1"},
           {"N", N},
           {"conjugacy", to_json(conj)},
           {"certificate", to_json(cert)},
           {"passed", conj.passed() && cert.passed}};
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact ping-pong certificates for symplectic hypergeometric reflection groups"};
    app.require_subcommand(1);

    unsigned N = 4;
    std::string backend_str = "exact";
    std::string out_path;
    std::string format_str = "csv";
    std::string chart_str;
    unsigned jobs = default_jobs();
    unsigned depth = 3;
    unsigned density = 8;
    bool witnesses = false;
    unsigned from = 4, to = 12;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "write the JSON report to this path");
        cmd->add_option("--jobs,-j", jobs, "worker threads (env PINGPONG_JOBS)");
    };

    auto* cmd_info = app.add_subcommand("info", "summary of the group data for one N");
    cmd_info->add_option("N", N, "group parameter, N >= 4")->required();
    add_common(cmd_info);

    auto* cmd_verify =
        app.add_subcommand("verify", "conjugacy data and the full ping-pong certificate");
    cmd_verify->add_option("N", N)->required();
    cmd_verify->add_option("--backend", backend_str, "exact | interval-first");
    cmd_verify->add_flag("--witnesses", witnesses, "attach exact entry values to every check");
    add_common(cmd_verify);

    auto* cmd_idents = app.add_subcommand("identities", "exact identity bank for all k");
    cmd_idents->add_option("N", N)->required();
    add_common(cmd_idents);

    auto* cmd_crooked =
        app.add_subcommand("crooked", "pairwise crooked-surface relations and tangencies");
    cmd_crooked->add_option("N", N)->required();
    add_common(cmd_crooked);

    auto* cmd_curve = app.add_subcommand("limit-curve", "limit curve samples in P(R^4)");
    cmd_curve->add_option("N", N)->required();
    cmd_curve->add_option("--depth", depth, "maximum word length");
    cmd_curve->add_option("--format", format_str, "csv | ply | json");
    add_common(cmd_curve);

    auto* cmd_surface = app.add_subcommand("limit-surface", "limit surface samples in LGr");
    cmd_surface->add_option("N", N)->required();
    cmd_surface->add_option("--depth", depth, "transport word length");
    cmd_surface->add_option("--density", density, "grid density per wing/stem parameter");
    cmd_surface->add_option("--chart", chart_str, "project to a Minkowski chart: ff|ee|ef|fe");
    cmd_surface->add_option("--format", format_str, "csv | ply | json");
    add_common(cmd_surface);

    auto* cmd_batch = app.add_subcommand("batch", "verify a range of N");
    cmd_batch->add_option("--from", from, "first N")->required();
    cmd_batch->add_option("--to", to, "last N")->required();
    cmd_batch->add_option("--backend", backend_str, "exact | interval-first");
    add_common(cmd_batch);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_info->parsed()) {
            emit(group_info(build_group(N)), out_path);
            return 0;
        }
        if (cmd_verify->parsed()) {
            json j = verify_one(N, parse_backend(backend_str), jobs, witnesses);
            emit(j, out_path);
            return j["passed"].get<bool>() ? 0 : 1;
        }
        if (cmd_idents->parsed()) {
            GroupData g = build_group(N);
            Report rep = check_identities_all_k(g);
            emit(to_json(rep), out_path);
            return rep.passed() ? 0 : 1;
        }
        if (cmd_crooked->parsed()) {
            GroupData g = build_group(N);
            Report rep = crooked_survey(g);
            emit(to_json(rep), out_path);
            return rep.passed() ? 0 : 1;
        }
        if (cmd_curve->parsed()) {
            GroupData g = build_group(N);
            auto samples = limit_curve_samples(g, depth);
            if (out_path.empty()) out_path = "limit-curve.N" + std::to_string(N) + "." + format_str;
            export_point_cloud(samples, out_path, parse_format(format_str), "limit-curve");
            std::cout << "wrote " << samples.size() << " samples to " << out_path << "\n";
            return 0;
        }
        if (cmd_surface->parsed()) {
            GroupData g = build_group(N);
            auto samples = limit_surface_samples(g, depth, density);
            if (!chart_str.empty()) {
                ChartCorner corner = parse_corner(chart_str);
                std::vector<LimitSample> charted;
                for (const auto& s : samples) {
                    std::array<double, 5> w5;
                    std::copy(s.point.begin(), s.point.end(), w5.begin());
                    auto c = minkowski_chart(corner, w5);
                    if (!c) continue;
                    LimitSample cs = s;
                    cs.point.assign(c->begin(), c->end());
                    charted.push_back(std::move(cs));
                }
                samples = std::move(charted);
            }
            if (out_path.empty())
                out_path = "limit-surface.N" + std::to_string(N) + "." + format_str;
            export_point_cloud(samples, out_path, parse_format(format_str), "limit-surface");
            std::cout << "wrote " << samples.size() << " samples to " << out_path << "\n";
            return 0;
        }
        if (cmd_batch->parsed()) {
            if (from < 4 || to < from) throw std::domain_error("batch: need 4 <= from <= to");
            SignBackend backend = parse_backend(backend_str);
            json reports = json::array();
            bool all = true;
            for (unsigned n = from; n <= to; ++n) {
                json j = verify_one(n, backend, jobs, false);
                all &= j["passed"].get<bool>();
                reports.push_back(std::move(j));
            }
            emit(json{{"schema", "pingpong-sp4/v1"}, {"reports", reports}, {"passed", all}},
                 out_path);
            return all ? 0 : 1;
        }
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

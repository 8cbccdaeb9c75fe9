#pragma once

// Finite approximations of the limit set: orbit of the two unipotent fixed
// lines under words in the 2N cone reflections (limit curve in P(R^4)), and
// word-transported crooked surfaces sampled into the null quadric (limit
// surface in LGr).  Rendering paths run in double precision; shallow-depth
// agreement with the exact transport is part of the test contract.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "pingpong/einstein.hpp"

namespace pingpong {

class ResourceLimitError : public std::runtime_error {
  public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Words over the index set I = {0, 0', 1, 1', ..., N-1, (N-1)'}.
// Letter encoding: 2k = cone C_k, 2k+1 = cone C'_k.

using Word = std::vector<uint8_t>;

inline std::string word_to_string(const Word& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(w[i] / 2);
        if (w[i] % 2) s += '\'';
    }
    return s;
}

// Number of adjacent-distinct words of exactly this length.
inline unsigned long long word_count(unsigned N, unsigned length) {
    if (length == 0) return 1;
    unsigned long long c = 2 * N;
    for (unsigned i = 1; i < length; ++i) c *= 2 * N - 1;
    return c;
}

// All words of length min_len..depth with no adjacent repeats, in
// (length, lex) order.
inline void for_each_word(unsigned N, unsigned depth, unsigned min_len,
                          const std::function<void(const Word&)>& fn) {
    unsigned letters = 2 * N;
    for (unsigned len = min_len; len <= depth; ++len) {
        Word w(len, 0);
        if (len == 0) {
            fn(w);
            continue;
        }
        // odometer with adjacency constraint
        for (unsigned i = 1; i < len; ++i) w[i] = (w[i - 1] == 0) ? 1 : 0;
        while (true) {
            fn(w);
            int pos = static_cast<int>(len) - 1;
            while (pos >= 0) {
                unsigned next = w[pos] + 1;
                while (next < letters && pos > 0 && next == w[pos - 1]) ++next;
                if (next < letters) {
                    w[pos] = static_cast<uint8_t>(next);
                    bool ok = true;
                    for (int i = pos + 1; i < static_cast<int>(len); ++i) {
                        unsigned c = (w[i - 1] == 0) ? 1 : 0;
                        w[i] = static_cast<uint8_t>(c);
                        ok &= true;
                    }
                    (void)ok;
                    break;
                }
                --pos;
            }
            if (pos < 0) break;
        }
    }
}

inline std::vector<Word> enumerate_words(unsigned N, unsigned depth,
                                         unsigned long long cap = 5'000'000ULL) {
    unsigned long long total = 0;
    for (unsigned len = 1; len <= depth; ++len) {
        total += word_count(N, len);
        if (total > cap)
            throw ResourceLimitError("enumerate_words: word count exceeds cap of " +
                                     std::to_string(cap));
    }
    std::vector<Word> out;
    out.reserve(static_cast<size_t>(total));
    for_each_word(N, depth, 1, [&](const Word& w) { out.push_back(w); });
    return out;
}

// ---------------------------------------------------------------------------
// Reflections associated to the cones, exact and double versions.
// A_{2k} = R^k A R^-k ; A_{2k+1} = R^k (B A B) R^-k.

inline std::vector<Mat4> cone_reflections(const GroupData& g) {
    std::vector<Mat4> out;
    out.reserve(2 * g.N);
    Mat4 bab = g.B * g.A * g.B;
    for (unsigned k = 0; k < g.N; ++k) {
        Mat4 rk = mat_pow(g.R, k);
        Mat4 rk_inv = mat_pow(g.R, 2 * g.N - k);
        out.push_back(rk * g.A * rk_inv);
        out.push_back(rk * bab * rk_inv);
    }
    return out;
}

inline std::vector<Mat4d> cone_reflections_double(const GroupData& g) {
    std::vector<Mat4d> out;
    for (const auto& m : cone_reflections(g)) out.push_back(to_double(m));
    return out;
}

// Exact word transport: A_{w_1} ... A_{w_m}.
inline Mat4 word_matrix(const std::vector<Mat4>& refl, const Word& w,
                        const std::shared_ptr<const CycloField>& field) {
    Mat4 m = Mat4::identity(field);
    for (uint8_t l : w) m = m * refl[l];
    return m;
}

inline Mat4d word_matrix_double(const std::vector<Mat4d>& refl, const Word& w) {
    Mat4d m = Mat4d::identity();
    for (uint8_t l : w) m = m * refl[l];
    return m;
}

// ---------------------------------------------------------------------------
// Samples

struct LimitSample {
    std::vector<double> point;  // 4 coords (P(R^4)) or 5 coords (LGr)
    Word word;
    unsigned depth = 0;
    uint32_t flags = 0;
};

enum SampleFlags : uint32_t {
    kFlagWingE = 1,
    kFlagWingF = 2,
    kFlagStemPlus = 4,
    kFlagStemMinus = 8,
    kFlagAttractorPhoton = 16,
    kFlagAttractorWingOffPhoton = 32,  // wing of the rank-1 attractor, photon removed
};

// Seeds for the limit curve: the fixed line of the maximally unipotent CA
// (which is the cone vertex v3) and the image line of AB - Id.
struct CurveSeeds {
    Vec4 mum_fixed;    // ker(CA - Id)
    Vec4 rank1_fixed;  // im(AB - Id)
};

inline CurveSeeds curve_seeds(const GroupData& g) {
    Cone4 cone = fundamental_cone(g);
    Vec4 v3 = cone.gens.column(3);
    {
        Vec4 cav3 = (g.C * g.A) * v3;
        if (!(cav3 == v3)) throw std::logic_error("curve_seeds: CA does not fix v3");
    }
    Vec4 u{{g.scalar(0), g.r1, g.scalar(0), g.r2}};
    {
        // u spans im(AB - Id): (AB - Id) e2 must be proportional to u
        Mat4 tm = g.T - Mat4::identity(g.field);
        Vec4 e2{{g.scalar(0), g.scalar(1), g.scalar(0), g.scalar(0)}};
        Vec4 img = tm * e2;
        bool prop = (img[0] * u[1] - img[1] * u[0]).is_zero() &&
                    (img[1] * u[3] - img[3] * u[1]).is_zero() && (img[2].is_zero());
        if (!prop) throw std::logic_error("curve_seeds: im(AB - Id) mismatch");
    }
    return {v3, u};
}

namespace detail {

// Deduplication of projectively normalized unit vectors within an angular
// tolerance, via tolerance-sized grid cells plus neighbor-cell probing.
class VecDedup {
  public:
    explicit VecDedup(double tol) : tol_(tol), cell_(tol) {}

    bool insert(const Vec4d& v) {
        std::array<long long, 4> key;
        for (int i = 0; i < 4; ++i) key[i] = static_cast<long long>(std::floor(v[i] / cell_));
        std::array<long long, 4> probe;
        for (int d0 = -1; d0 <= 1; ++d0)
            for (int d1 = -1; d1 <= 1; ++d1)
                for (int d2 = -1; d2 <= 1; ++d2)
                    for (int d3 = -1; d3 <= 1; ++d3) {
                        probe = {key[0] + d0, key[1] + d1, key[2] + d2, key[3] + d3};
                        auto it = cells_.find(hash(probe));
                        if (it == cells_.end()) continue;
                        for (size_t idx : it->second)
                            if (angular_distance(points_[idx], v) <= tol_) return false;
                    }
        points_.push_back(v);
        cells_[hash(key)].push_back(points_.size() - 1);
        return true;
    }

  private:
    static uint64_t hash(const std::array<long long, 4>& k) {
        uint64_t h = 1469598103934665603ULL;
        for (long long x : k) {
            h ^= static_cast<uint64_t>(x);
            h *= 1099511628211ULL;
        }
        return h;
    }
    double tol_, cell_;
    std::vector<Vec4d> points_;
    std::unordered_map<uint64_t, std::vector<size_t>> cells_;
};

}  // namespace detail

inline std::vector<LimitSample> limit_curve_samples(const GroupData& g, unsigned depth,
                                                    unsigned long long cap = 2'000'000ULL) {
    unsigned long long total = 2;
    for (unsigned len = 1; len <= depth; ++len) total += 2 * word_count(g.N, len);
    if (total > cap)
        throw ResourceLimitError("limit_curve_samples: sample count " + std::to_string(total) +
                                 " exceeds cap " + std::to_string(cap));
    CurveSeeds seeds = curve_seeds(g);
    std::array<Vec4d, 2> seed_d = {normalize_projective(to_double(seeds.mum_fixed)),
                                   normalize_projective(to_double(seeds.rank1_fixed))};
    auto refl = cone_reflections_double(g);
    std::vector<LimitSample> out;
    detail::VecDedup dedup(1e-10);
    for_each_word(g.N, depth, 0, [&](const Word& w) {
        // apply letters right-to-left, renormalizing after each multiply
        for (const Vec4d& s : seed_d) {
            Vec4d p = s;
            for (auto it = w.rbegin(); it != w.rend(); ++it)
                p = normalize_projective(refl[*it] * p);
            p = normalize_projective(p);
            if (!dedup.insert(p)) continue;
            LimitSample ls;
            ls.point.assign(p.v.begin(), p.v.end());
            ls.word = w;
            ls.depth = static_cast<unsigned>(w.size());
            out.push_back(std::move(ls));
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Crooked frames of the 2N cones, and their transported surface samples.

struct FrameD {
    Vec4d e1, f1, e2, f2;
    Vec4d attractor;  // base of the rank-1 attractor photon
    bool labels_swapped = false;  // anti-symplectic transports swap e/f roles
};

inline CrookedFrame initial_frame_exact(const GroupData& g, const Cone4& cone, unsigned letter) {
    CrookedFrame base = frame_of_cone(g, cone);
    unsigned k = letter / 2;
    Mat4 rk = mat_pow(g.R, k);
    if (letter % 2 == 0) return base.transformed(rk, +1);
    return base.transformed(rk * g.B, -1);
}

inline std::vector<FrameD> initial_frames_double(const GroupData& g, const Cone4& cone) {
    std::vector<FrameD> out;
    Vec4 u0{{g.scalar(0), g.r1, g.scalar(0), g.r2}};
    for (unsigned letter = 0; letter < 2 * g.N; ++letter) {
        CrookedFrame fr = initial_frame_exact(g, cone, letter);
        unsigned k = letter / 2;
        Mat4 rk = mat_pow(g.R, k);
        Vec4 attract = rk * u0;  // B fixes u0, so primed frames share the rotated attractor
        FrameD fd;
        fd.e1 = to_double(fr.e1);
        fd.f1 = to_double(fr.f1);
        fd.e2 = to_double(fr.e2);
        fd.f2 = to_double(fr.f2);
        fd.attractor = normalize_projective(to_double(attract));
        fd.labels_swapped = (letter % 2 == 1);
        out.push_back(fd);
    }
    return out;
}

namespace detail {

inline std::array<double, 5> plucker_double(const Mat4d& jd, const FrameD& fr, const Vec4d& u,
                                            const Vec4d& v) {
    auto pair = [&](const Vec4d& x, const Vec4d& y) {
        Vec4d jy = jd * y;
        return x[0] * jy[0] + x[1] * jy[1] + x[2] * jy[2] + x[3] * jy[3];
    };
    auto coords = [&](const Vec4d& x) {
        return std::array<double, 4>{pair(x, fr.f1), pair(fr.e1, x), pair(x, fr.f2),
                                     pair(fr.e2, x)};
    };
    auto a = coords(u), b = coords(v);
    return {a[0] * b[2] - a[2] * b[0], a[0] * b[3] - a[3] * b[0], a[0] * b[1] - a[1] * b[0],
            a[1] * b[2] - a[2] * b[1], a[1] * b[3] - a[3] * b[1]};
}

inline std::array<double, 5> normalize5(std::array<double, 5> w) {
    double n = 0;
    for (double x : w) n += x * x;
    n = std::sqrt(n);
    if (n == 0) return w;
    for (double& x : w) x /= n;
    for (double x : w)
        if (std::abs(x) > 0) {
            if (x < 0)
                for (double& y : w) y = -y;
            break;
        }
    return w;
}

inline double q_double(const std::array<double, 5>& w) {
    return w[1] * w[3] - w[0] * w[4] - w[2] * w[2];
}

}  // namespace detail

// Transported crooked surfaces sampled into the null quadric.  A word
// (j_1 ... j_m) means: transport the surface of frame j_m by the product
// A_{j_1} ... A_{j_(m-1)}; depth counts the transport letters, so depth 0
// samples exactly the 2N initial surfaces.  Pluecker coordinates are taken in
// a fixed reference frame (that of the fundamental cone).
inline std::vector<LimitSample> limit_surface_samples(const GroupData& g, unsigned depth,
                                                      unsigned photons_per_surface,
                                                      unsigned long long cap = 2'000'000ULL) {
    unsigned m = photons_per_surface;
    if (m == 0) throw std::domain_error("limit_surface_samples: density must be positive");
    unsigned long long nsurf = 0;
    for (unsigned len = 1; len <= depth + 1; ++len) nsurf += word_count(g.N, len);
    unsigned long long total = nsurf * (2ULL * m * m + 2ULL * m * m);
    if (total > cap)
        throw ResourceLimitError("limit_surface_samples: sample count " + std::to_string(total) +
                                 " exceeds cap " + std::to_string(cap));

    Cone4 cone = fundamental_cone(g);
    CrookedFrame ref = frame_of_cone(g, cone);
    FrameD refd;
    refd.e1 = to_double(ref.e1);
    refd.f1 = to_double(ref.f1);
    refd.e2 = to_double(ref.e2);
    refd.f2 = to_double(ref.f2);
    Mat4d jd = to_double(g.J);
    auto frames = initial_frames_double(g, cone);
    auto refl = cone_reflections_double(g);

    std::vector<LimitSample> out;
    out.reserve(static_cast<size_t>(total));

    auto emit = [&](const Word& w, const Vec4d& u, const Vec4d& v, uint32_t flags) {
        auto p5 = detail::normalize5(detail::plucker_double(jd, refd, u, v));
        LimitSample ls;
        ls.point.assign(p5.begin(), p5.end());
        ls.word = w;
        ls.depth = static_cast<unsigned>(w.size()) - 1;
        ls.flags = flags;
        out.push_back(std::move(ls));
    };

    for_each_word(g.N, depth + 1, 1, [&](const Word& w) {
        const FrameD& base = frames[w.back()];
        Mat4d tr = Mat4d::identity();
        for (size_t i = 0; i + 1 < w.size(); ++i) tr = tr * refl[w[i]];
        Vec4d e1 = tr * base.e1, f1 = tr * base.f1, e2 = tr * base.e2, f2 = tr * base.f2;
        Vec4d attract = normalize_projective(tr * base.attractor);
        // which wing carries the rank-1 attractor photon (e-wing unless the
        // base frame's labels were produced by an anti-symplectic transport)
        bool attractor_on_e = !base.labels_swapped;

        auto lerp = [](const Vec4d& a, const Vec4d& b, double t) {
            Vec4d o;
            for (int i = 0; i < 4; ++i) o[i] = (1 - t) * a[i] + t * b[i];
            return o;
        };
        auto comb = [](const Vec4d& a, const Vec4d& b, double ca, double cb) {
            Vec4d o;
            for (int i = 0; i < 4; ++i) o[i] = ca * a[i] + cb * b[i];
            return o;
        };
        // wings: photon pencils over the cone edges
        for (int wing = 0; wing < 2; ++wing) {
            const Vec4d &x1 = wing == 0 ? e1 : f1, &x2 = wing == 0 ? e2 : f2;
            const Vec4d &y1 = wing == 0 ? f1 : e1, &y2 = wing == 0 ? f2 : e2;
            uint32_t base_flag = wing == 0 ? kFlagWingE : kFlagWingF;
            bool attractor_wing = (wing == 0) == attractor_on_e;
            for (unsigned p = 0; p < m; ++p) {
                double t = (p + 0.5) / m;
                Vec4d basept = lerp(x1, x2, t);
                bool on_attractor =
                    attractor_wing &&
                    angular_distance(normalize_projective(basept), attract) <= 1e-10;
                uint32_t flags = base_flag;
                if (on_attractor) flags |= kFlagAttractorPhoton;
                if (attractor_wing && !on_attractor) flags |= kFlagAttractorWingOffPhoton;
                // pencil through basept: span(basept, cos(phi) u1 + sin(phi) u2)
                Vec4d u1 = comb(x1, x2, t, -(1 - t));       // in the wing edge, transverse
                Vec4d u2 = comb(y1, y2, t, -(1 - t));       // dual-edge combination
                for (unsigned q = 0; q < m; ++q) {
                    double phi = M_PI * (q + 0.5) / m;
                    Vec4d wv = comb(u1, u2, std::cos(phi), std::sin(phi));
                    emit(w, basept, wv, flags);
                }
            }
        }
        // stem: two-angle parametrization, Maslov +2 and -2 squares
        for (int sgn_part = 0; sgn_part < 2; ++sgn_part) {
            uint32_t flags = sgn_part == 0 ? kFlagStemPlus : kFlagStemMinus;
            for (unsigned p = 0; p < m; ++p) {
                double phi1 = (M_PI / 2) * (p + 0.5) / m;           // (0, pi/2)
                if (sgn_part == 1) phi1 = M_PI / 2 + phi1;          // (pi/2, pi)
                Vec4d w1 = comb(e1, f1, std::cos(phi1), std::sin(phi1));
                for (unsigned q = 0; q < m; ++q) {
                    double phi2 = M_PI / 2 + (M_PI / 2) * (q + 0.5) / m;  // (pi/2, pi)
                    if (sgn_part == 1) phi2 -= M_PI / 2;                   // (0, pi/2)
                    Vec4d w2 = comb(e2, f2, std::cos(phi2), std::sin(phi2));
                    emit(w, w1, w2, flags);
                }
            }
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Minkowski chart: complement of the null cone of a corner Lagrangian of the
// reference frame, conformally identified with R^{2,1}.

enum class ChartCorner { FF, EE, EF, FE };

inline std::optional<std::array<double, 3>> minkowski_chart(ChartCorner corner,
                                                            const std::array<double, 5>& p,
                                                            double miss_tol = 1e-12) {
    double denom;
    std::array<double, 3> uvw;  // (a, b, c) with q = ac - b^2 on the residual space
    switch (corner) {
        case ChartCorner::FF: denom = p[0]; uvw = {p[1], p[2], p[3]}; break;
        case ChartCorner::EE: denom = p[4]; uvw = {p[1], p[2], p[3]}; break;
        case ChartCorner::EF: denom = p[3]; uvw = {p[0], p[2], p[4]}; break;
        case ChartCorner::FE: denom = p[1]; uvw = {p[0], p[2], p[4]}; break;
        default: return std::nullopt;
    }
    double scale = 0;
    for (double x : p) scale = std::max(scale, std::abs(x));
    if (std::abs(denom) <= miss_tol * std::max(1.0, scale)) return std::nullopt;
    double a = uvw[0] / denom, b = uvw[1] / denom, c = uvw[2] / denom;
    // q(a,b,c) = +-(ac) - b^2 up to corner; (t,x,y) diagonalizes to t^2-x^2-y^2
    if (corner == ChartCorner::FF || corner == ChartCorner::EE)
        return std::array<double, 3>{(a + c) / 2, (a - c) / 2, b};
    return std::array<double, 3>{(a - c) / 2, (a + c) / 2, b};
}

// ---------------------------------------------------------------------------
// Exports: CSV, PLY (ascii 1.0), JSON-ready rows.  Output is byte-stable for
// fixed inputs: fixed sample order and fixed "%.17g" formatting.

enum class ExportFormat { Csv, Ply, Json };

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline void export_point_cloud(const std::vector<LimitSample>& samples, const std::string& path,
                               ExportFormat format, const std::string& schema_kind) {
    std::ostringstream os;
    const bool lgr = !samples.empty() && samples.front().point.size() == 5;
    if (format == ExportFormat::Csv) {
        os << "depth,word";
        size_t ncoord = samples.empty() ? 4 : samples.front().point.size();
        for (size_t i = 0; i < ncoord; ++i) os << "," << (ncoord == 5 ? "w" : "x") << i;
        os << ",flags\n";
        for (const auto& s : samples) {
            os << s.depth << "," << word_to_string(s.word);
            for (double x : s.point) os << "," << format_double(x);
            os << "," << s.flags << "\n";
        }
    } else if (format == ExportFormat::Ply) {
        // 3-d projections: LGr samples through the FF-corner Minkowski chart
        // (misses skipped), curve samples by dropping the last coordinate.
        std::vector<std::array<double, 3>> pts;
        size_t misses = 0;
        for (const auto& s : samples) {
            if (lgr) {
                std::array<double, 5> w5;
                std::copy(s.point.begin(), s.point.end(), w5.begin());
                auto c = minkowski_chart(ChartCorner::FF, w5);
                if (!c) {
                    ++misses;
                    continue;
                }
                pts.push_back(*c);
            } else {
                pts.push_back({s.point[0], s.point[1], s.point[2]});
            }
        }
        os << "ply\nformat ascii 1.0\n";
        os << "comment " << schema_kind << "\n";
        if (misses) os << "comment skipped " << misses << " chart misses\n";
        os << "element vertex " << pts.size() << "\n";
        os << "property double x\nproperty double y\nproperty double z\n";
        os << "element face 0\nproperty list uchar int vertex_index\n";
        os << "end_header\n";
        for (const auto& p : pts)
            os << format_double(p[0]) << " " << format_double(p[1]) << " " << format_double(p[2])
               << "\n";
    } else {
        os << "{\n  \"schema\": \"pingpong-sp4/v1\",\n  \"kind\": \"" << schema_kind << "\",\n";
        os << "  \"samples\": [\n";
        for (size_t i = 0; i < samples.size(); ++i) {
            const auto& s = samples[i];
            os << "    {\"depth\": " << s.depth << ", \"word\": \"" << word_to_string(s.word)
               << "\", \"point\": [";
            for (size_t j = 0; j < s.point.size(); ++j) {
                if (j) os << ", ";
                os << format_double(s.point[j]);
            }
            os << "], \"flags\": " << s.flags << "}";
            os << (i + 1 < samples.size() ? ",\n" : "\n");
        }
        os << "  ]\n}\n";
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("export_point_cloud: cannot open " + path);
    f << os.str();
    if (!f) throw std::runtime_error("export_point_cloud: write failed for " + path);
}

// ---------------------------------------------------------------------------
// Suffix membership in the depth-n approximation: peel the word from the left
// and require each partial image to lie (projectively, within tol) in the
// closed cone of the corresponding letter.

class SuffixMembershipTester {
  public:
    explicit SuffixMembershipTester(const GroupData& g) : refl_(cone_reflections_double(g)) {
        Cone4 cone = fundamental_cone(g);
        for (unsigned letter = 0; letter < 2 * g.N; ++letter) {
            Cone4 ck = rotated_cone(g, cone, letter / 2, letter % 2 == 1);
            faces_.push_back(to_double(ck.faces));
        }
    }

    bool check(const Word& w, Vec4d p, double tol) const {
        for (uint8_t l : w) {
            Vec4d mv = faces_[l] * p;
            double lo = 1e300, hi = -1e300;
            for (int i = 0; i < 4; ++i) {
                lo = std::min(lo, mv[i]);
                hi = std::max(hi, mv[i]);
            }
            if (!(lo >= -tol || hi <= tol)) return false;  // neither >=0 nor <=0 within tol
            p = normalize_projective(refl_[l] * p);
        }
        return true;
    }

  private:
    std::vector<Mat4d> faces_;
    std::vector<Mat4d> refl_;
};

}  // namespace pingpong

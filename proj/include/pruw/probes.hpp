#pragma once

// Privacy and security probes. At desk scale the noise space is enumerated
// exhaustively and the conditioned distributions must coincide exactly
// (total-variation distance identically zero, as integer count equality).
// Larger configurations fall back to a sampled chi-square homogeneity test.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pruw/constants.hpp"
#include "pruw/errors.hpp"
#include "pruw/field.hpp"
#include "pruw/geometry.hpp"
#include "pruw/protocol.hpp"
#include "pruw/rational.hpp"
#include "pruw/rng.hpp"

namespace pruw {

enum class ProbeMode { Index, Update, Security };

inline const char* probe_name(ProbeMode m) {
    switch (m) {
        case ProbeMode::Index:    return "index";
        case ProbeMode::Update:   return "update";
        case ProbeMode::Security: return "security";
    }
    return "?";
}

struct ProbeOptions {
    std::uint64_t enumeration_budget = 1'000'000;  // max noise-space points
    std::size_t samples = 100'000;                 // per condition, sampling mode
    bool allow_sampling = true;
    std::uint64_t seed = 1;
};

struct ProbeReport {
    ProbeMode mode = ProbeMode::Index;
    bool enumerated = false;
    Rat max_tv;              // enumeration: exact max TV distance across dbs/pairs
    bool uniform = true;     // security probe: stored share uniform over its range
    double min_p_value = 1;  // sampling: smallest chi-square p-value seen
    bool pass = false;
    std::string detail;
};

namespace detail {

// Regularized upper incomplete gamma Q(s, x), series + continued fraction.
inline double gamma_q(double s, double x) {
    if (x < 0 || s <= 0) return 1.0;
    if (x == 0) return 1.0;
    if (x < s + 1.0) {
        // series for P(s,x), return 1 - P
        double sum = 1.0 / s, term = sum, a = s;
        for (int i = 0; i < 10000; ++i) {
            a += 1.0;
            term *= x / a;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
        }
        double p = sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
        return 1.0 - p;
    }
    // Lentz continued fraction for Q(s,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -double(i) * (double(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

inline double chi_square_p(double stat, double dof) {
    if (dof <= 0) return 1.0;
    return gamma_q(dof / 2.0, stat / 2.0);
}

// Two-sample homogeneity chi-square over observation maps.
inline double homogeneity_p(const std::map<std::uint64_t, std::uint64_t>& a,
                            const std::map<std::uint64_t, std::uint64_t>& b) {
    std::map<std::uint64_t, std::pair<double, double>> cells;
    double na = 0, nb = 0;
    for (auto& [k, v] : a) { cells[k].first += double(v); na += double(v); }
    for (auto& [k, v] : b) { cells[k].second += double(v); nb += double(v); }
    if (cells.size() < 2) return 1.0;
    double stat = 0;
    for (auto& [k, o] : cells) {
        const double row = o.first + o.second;
        const double ea = row * na / (na + nb), eb = row * nb / (na + nb);
        if (ea > 0) stat += (o.first - ea) * (o.first - ea) / ea;
        if (eb > 0) stat += (o.second - eb) * (o.second - eb) / eb;
    }
    return chi_square_p(stat, double(cells.size() - 1));
}

inline double uniformity_p(const std::map<std::uint64_t, std::uint64_t>& counts,
                           double n_cells_total) {
    double n = 0;
    for (auto& [k, v] : counts) n += double(v);
    const double e = n / n_cells_total;
    double stat = 0;
    std::uint64_t seen = 0;
    for (auto& [k, v] : counts) {
        stat += (double(v) - e) * (double(v) - e) / e;
        ++seen;
    }
    stat += (n_cells_total - double(seen)) * e;  // unseen cells observed 0 times
    return chi_square_p(stat, n_cells_total - 1);
}

// Exact TV distance between two equal-total count maps.
inline Rat tv_distance(const std::map<std::uint64_t, std::uint64_t>& a,
                       const std::map<std::uint64_t, std::uint64_t>& b,
                       std::uint64_t total) {
    Int diff = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            diff += Int(ia->second);
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            diff += Int(ib->second);
            ++ib;
        } else {
            diff += boost::multiprecision::abs(Int(ia->second) - Int(ib->second));
            ++ia;
            ++ib;
        }
    }
    return Rat(diff, Int(2) * Int(total));
}

// Iterates all assignments of `digits` base-q values; calls fn per point.
template <typename Fn>
void enumerate_space(std::size_t digits, Fe q, Fn&& fn) {
    FeVec point(digits, 0);
    for (;;) {
        fn(point);
        std::size_t pos = 0;
        while (pos < digits) {
            if (++point[pos] < q) break;
            point[pos] = 0;
            ++pos;
        }
        if (pos == digits) return;
    }
}

inline std::uint64_t pack_key(const FeVec& symbols, Fe q) {
    std::uint64_t key = 0;
    for (Fe s : symbols) key = key * q + s;
    return key;
}

// q^digits if it fits the budget comparison, else UINT64_MAX.
inline std::uint64_t space_size(Fe q, std::size_t digits) {
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < digits; ++i) {
        if (size > UINT64_MAX / q) return UINT64_MAX;
        size *= q;
    }
    return size;
}

} // namespace detail

// Each probe compares per-database observable distributions across two
// secret conditions.
//   index:    query vectors under theta = 0 vs theta = 1 (needs M >= 2)
//   update:   combined updates under delta = 0 vs delta = all-threes
//   security: stored shares under W = 0 vs random W (plus uniformity)
inline ProbeReport privacy_probe(ProbeMode mode, Fe modulus, std::size_t n_models, std::size_t K,
                                 std::size_t R, const ProbeOptions& opts = {}) {
    FieldCtx ctx(modulus);
    ClassGeometry geom(K, R);
    const std::size_t M = n_models;
    Rng rng(opts.seed);
    ConstantsPool pool = gen_constants(ctx, R, {{geom.y, K}}, rng);

    std::vector<std::size_t> all_dbs(R);
    for (std::size_t n = 0; n < R; ++n) all_dbs[n] = n;

    std::size_t noise_digits = 0;
    switch (mode) {
        case ProbeMode::Index:    noise_digits = geom.y * K * M; break;
        case ProbeMode::Update:   noise_digits = K; break;
        case ProbeMode::Security: noise_digits = geom.y * (geom.y + 1) * M; break;
    }
    if (mode == ProbeMode::Index && M < 2)
        fail(Errc::ProtocolViolation, "index probe needs at least two submodels");

    std::size_t observable_digits = 0;
    switch (mode) {
        case ProbeMode::Index:    observable_digits = K * geom.y * M; break;
        case ProbeMode::Update:   observable_digits = K; break;
        case ProbeMode::Security: observable_digits = geom.y * M; break;
    }
    if (detail::space_size(ctx.q, observable_digits) == UINT64_MAX)
        fail(Errc::BudgetExceeded, "probe observable too wide to histogram");

    ProbeReport report;
    report.mode = mode;
    const std::uint64_t space = detail::space_size(ctx.q, noise_digits);
    report.enumerated = space <= opts.enumeration_budget;
    if (!report.enumerated && !opts.allow_sampling)
        fail(Errc::BudgetExceeded, "noise space too large to enumerate and sampling disabled");

    // Observable generator for one database under condition `cond`, given the
    // noise point (enumeration) or rng (sampling).
    SubpacketPlain w_zero(M, geom.y, K), w_rand(M, geom.y, K);
    for (auto& v : w_rand.w) v = ctx.random(rng);
    FeMat delta_zero(geom.y, FeVec(K, 0)), delta_alt(geom.y, FeVec(K, 3 % ctx.q));

    auto observe = [&](std::size_t db, int cond, const FeVec& noise_point) -> FeVec {
        switch (mode) {
            case ProbeMode::Index: {
                QueryNoise qn{M, geom.y, K, noise_point};
                ReadQuerySet qs = gen_read_queries(cond == 0 ? 0 : 1, M, qn, pool, 0, {db});
                FeVec flat;
                for (std::size_t l = 0; l < K; ++l)
                    flat.insert(flat.end(), qs.q[0][l].begin(), qs.q[0][l].end());
                return flat;
            }
            case ProbeMode::Update: {
                WriteNoise wn{noise_point};
                return gen_write_updates(cond == 0 ? delta_zero : delta_alt, wn, pool, 0, geom,
                                         db);
            }
            case ProbeMode::Security: {
                StorageNoise sn{M, geom.y, noise_point};
                return encode_subpacket(cond == 0 ? w_zero : w_rand, sn, pool, 0, db);
            }
        }
        return {};
    };

    if (report.enumerated) {
        report.max_tv = Rat(0);
        for (std::size_t db = 0; db < R; ++db) {
            std::map<std::uint64_t, std::uint64_t> hist[2];
            detail::enumerate_space(noise_digits, ctx.q, [&](const FeVec& point) {
                for (int cond = 0; cond < 2; ++cond)
                    hist[cond][detail::pack_key(observe(db, cond, point), ctx.q)] += 1;
            });
            report.max_tv = rat_max(report.max_tv, detail::tv_distance(hist[0], hist[1], space));
            if (mode == ProbeMode::Security) {
                const std::uint64_t range = detail::space_size(ctx.q, geom.y * M);
                if (hist[0].size() != range) report.uniform = false;
                for (auto& [k, v] : hist[0])
                    if (Int(v) * Int(range) != Int(space)) report.uniform = false;
            }
        }
        report.pass = report.max_tv == Rat(0) && (mode != ProbeMode::Security || report.uniform);
        report.detail = "enumerated " + std::to_string(space) + " noise points per condition";
    } else {
        report.min_p_value = 1.0;
        Rng sample_rng = rng.fork(0x5A);
        for (std::size_t db = 0; db < R; ++db) {
            std::map<std::uint64_t, std::uint64_t> hist[2];
            FeVec point(noise_digits);
            for (std::size_t s = 0; s < opts.samples; ++s) {
                for (int cond = 0; cond < 2; ++cond) {
                    for (auto& v : point) v = ctx.random(sample_rng);
                    hist[cond][detail::pack_key(observe(db, cond, point), ctx.q)] += 1;
                }
            }
            report.min_p_value = std::min(report.min_p_value, detail::homogeneity_p(hist[0], hist[1]));
            if (mode == ProbeMode::Security) {
                const double range = double(detail::space_size(ctx.q, geom.y * M));
                report.min_p_value =
                    std::min(report.min_p_value, detail::uniformity_p(hist[0], range));
            }
        }
        report.pass = report.min_p_value > 0.001;
        report.detail = std::to_string(opts.samples) + " samples per condition";
    }
    return report;
}

} // namespace pruw

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "rmrpa/bitword.hpp"
#include "rmrpa/channels.hpp"
#include "rmrpa/list_concat.hpp"
#include "rmrpa/rm_code.hpp"
#include "rmrpa/rpa.hpp"

namespace rmrpa {

enum class DecoderKind { reed, rpa_bsc, rpa, rpa_list, rpa_list_concat };

inline const char* to_string(DecoderKind k) {
    switch (k) {
        case DecoderKind::reed: return "reed";
        case DecoderKind::rpa_bsc: return "rpa-bsc";
        case DecoderKind::rpa: return "rpa";
        case DecoderKind::rpa_list: return "rpa-list";
        case DecoderKind::rpa_list_concat: return "rpa-list-concat";
    }
    throw std::invalid_argument("to_string: bad DecoderKind");
}

inline DecoderKind decoder_kind_from(const std::string& s) {
    if (s == "reed") return DecoderKind::reed;
    if (s == "rpa-bsc") return DecoderKind::rpa_bsc;
    if (s == "rpa") return DecoderKind::rpa;
    if (s == "rpa-list") return DecoderKind::rpa_list;
    if (s == "rpa-list-concat") return DecoderKind::rpa_list_concat;
    throw std::invalid_argument("unknown decoder: " + s);
}

inline const char* to_string(ChannelModel::Kind k) {
    return k == ChannelModel::Kind::bsc ? "bsc" : "awgn";
}

inline ChannelModel::Kind channel_kind_from(const std::string& s) {
    if (s == "bsc") return ChannelModel::Kind::bsc;
    if (s == "awgn") return ChannelModel::Kind::awgn;
    throw std::invalid_argument("unknown channel: " + s);
}

// One Monte Carlo experiment: a code, a decoder, a channel family and a
// grid of channel parameters (BSC crossover, or Eb/N0 in dB for AWGN).
struct SweepSpec {
    int m = 4;
    int r = 2;
    DecoderKind decoder = DecoderKind::rpa;
    ChannelModel::Kind channel = ChannelModel::Kind::bsc;
    std::vector<double> grid;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    DecoderConfig dcfg;
    ListConfig lcfg;
    std::uint64_t outer_seed = 1; // concatenated decoder only
    int outer_q = 1;              // concatenated decoder only
    int threads = 1;
};

struct PointSummary {
    int m = 0;
    int r = 0;
    DecoderKind decoder = DecoderKind::rpa;
    ChannelModel::Kind channel = ChannelModel::Kind::bsc;
    double param = 0;
    std::uint64_t trials = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t failures = 0;
    std::uint64_t ml_lb_errors = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0;
};

namespace detail {

inline ChannelModel point_channel(const SweepSpec& spec, double param) {
    if (spec.channel == ChannelModel::Kind::bsc) return ChannelModel::bsc(param);
    std::size_t n = std::size_t(1) << spec.m;
    std::size_t k = rm_dimension(spec.m, spec.r);
    std::size_t info = spec.decoder == DecoderKind::rpa_list_concat ? k - std::size_t(spec.outer_q) : k;
    return ChannelModel::awgn_ebn0_db(param, double(info) / double(n));
}

inline void validate_combo(const SweepSpec& spec) {
    if (spec.decoder == DecoderKind::rpa_bsc && spec.channel != ChannelModel::Kind::bsc)
        throw std::invalid_argument("run_point: rpa-bsc decodes hard words and needs the bsc channel");
}

struct TrialCounters {
    std::uint64_t block = 0;
    std::uint64_t bits = 0;
    std::uint64_t fail = 0;
    std::uint64_t mllb = 0;

    void operator+=(const TrialCounters& o) {
        block += o.block;
        bits += o.bits;
        fail += o.fail;
        mllb += o.mllb;
    }
};

} // namespace detail

// Simulate one grid point. The transmitted word is always the all-zero
// codeword; for the symmetric channels here every decoder in this header
// has a transmission-invariant error indicator (see invariance_audit for
// the runtime check), so this loses no generality. Every trial derives its
// own generator from (seed, grid_index, trial), which makes the counters
// independent of the thread count.
//
// ml_lb_errors counts the block errors whose decoded word correlates
// strictly better with the received LLRs than the transmitted word does;
// those trials would defeat even a maximum-likelihood decoder, so the count
// lower-bounds ML block errors.
inline PointSummary run_point(const SweepSpec& spec, std::size_t grid_index) {
    if (grid_index >= spec.grid.size()) throw std::invalid_argument("run_point: grid index out of range");
    detail::validate_combo(spec);
    double param = spec.grid[grid_index];
    auto t0 = std::chrono::steady_clock::now();

    const RmCode code = build_code(spec.m, spec.r);
    const ChannelModel ch = detail::point_channel(spec, param);
    DecoderConfig dcfg = spec.dcfg;
    dcfg.threads = 1; // trials parallelize; nested decoder threads would oversubscribe

    std::optional<RpaDecoder> rpa;
    if (spec.decoder != DecoderKind::reed) rpa.emplace(spec.m, spec.r, dcfg);
    OuterCode outer;
    if (spec.decoder == DecoderKind::rpa_list_concat)
        outer = OuterCode::make(code.k, spec.outer_q, spec.outer_seed);

    const BitWord zero_cw(code.n);
    auto run_trial = [&](std::uint64_t trial, detail::TrialCounters& acc) {
        std::uint64_t ts = trial_seed(spec.seed, grid_index, trial);
        Received rx = transmit(ch, zero_cw, ts);
        LlrWord L = llr(ch, rx);
        BitWord decoded;
        switch (spec.decoder) {
            case DecoderKind::reed: {
                BitWord hard = ch.kind == ChannelModel::Kind::bsc ? rx.bits : hard_decide(L);
                decoded = reed_decode(code, hard).second;
                break;
            }
            case DecoderKind::rpa_bsc:
                decoded = rpa->decode_bsc(rx.bits).word;
                break;
            case DecoderKind::rpa:
                decoded = rpa->decode(L).word;
                break;
            case DecoderKind::rpa_list:
                decoded = rpa_list_decode_full(L, code, *rpa, spec.lcfg).codeword;
                break;
            case DecoderKind::rpa_list_concat: {
                ListDecodeResult res = rpa_list_decode_full(L, code, *rpa, spec.lcfg, &outer);
                if (res.failure) acc.fail += 1;
                decoded = std::move(res.codeword);
                break;
            }
        }
        acc.bits += decoded.weight();
        if (decoded != zero_cw) {
            acc.block += 1;
            if (ml_score(decoded, L) > ml_score(zero_cw, L)) acc.mllb += 1;
        }
    };

    int nt = std::max(1, spec.threads);
    std::uint64_t total = spec.trials;
    auto parts = std::vector<detail::TrialCounters>(std::size_t(nt));
    if (nt == 1 || total < 2) {
        for (std::uint64_t t = 0; t < total; ++t) run_trial(t, parts[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(nt));
        for (int w = 0; w < nt; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t t = std::uint64_t(w); t < total; t += std::uint64_t(nt))
                    run_trial(t, parts[std::size_t(w)]);
            });
        for (auto& th : pool) th.join();
    }
    detail::TrialCounters sum;
    for (const auto& p : parts) sum += p;

    PointSummary out;
    out.m = spec.m;
    out.r = spec.r;
    out.decoder = spec.decoder;
    out.channel = spec.channel;
    out.param = param;
    out.trials = spec.trials;
    out.block_errors = sum.block;
    out.bit_errors = sum.bits;
    out.failures = sum.fail;
    out.ml_lb_errors = sum.mllb;
    out.seed = spec.seed;
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

inline std::vector<PointSummary> run_sweep(const SweepSpec& spec) {
    std::vector<PointSummary> out;
    out.reserve(spec.grid.size());
    for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) out.push_back(run_point(spec, gi));
    return out;
}

inline constexpr const char* csv_header =
    "m,r,decoder,channel,param,trials,block_errors,bit_errors,failures,ml_lb_errors,seed,wall_ms";

// Fixed-schema CSV, one row per grid point, floats at six significant
// digits. No extra lines: an empty sweep serializes to the header alone.
inline std::string emit_csv(const std::vector<PointSummary>& rows) {
    std::string out = csv_header;
    out.push_back('\n');
    char buf[256];
    for (const PointSummary& p : rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%s,%s,%.6g,%llu,%llu,%llu,%llu,%llu,%llu,%.6g\n",
                      p.m, p.r, to_string(p.decoder), to_string(p.channel), p.param,
                      (unsigned long long)p.trials, (unsigned long long)p.block_errors,
                      (unsigned long long)p.bit_errors, (unsigned long long)p.failures,
                      (unsigned long long)p.ml_lb_errors, (unsigned long long)p.seed, p.wall_ms);
        out += buf;
    }
    return out;
}

inline std::vector<PointSummary> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool saw_header = false;
    std::vector<PointSummary> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != csv_header) throw std::invalid_argument("parse_csv: unexpected header: " + line);
            saw_header = true;
            continue;
        }
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) {
                f.push_back(line.substr(start));
                break;
            }
            f.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (f.size() != 12) throw std::invalid_argument("parse_csv: expected 12 fields: " + line);
        PointSummary p;
        p.m = std::stoi(f[0]);
        p.r = std::stoi(f[1]);
        p.decoder = decoder_kind_from(f[2]);
        p.channel = channel_kind_from(f[3]);
        p.param = std::stod(f[4]);
        p.trials = std::stoull(f[5]);
        p.block_errors = std::stoull(f[6]);
        p.bit_errors = std::stoull(f[7]);
        p.failures = std::stoull(f[8]);
        p.ml_lb_errors = std::stoull(f[9]);
        p.seed = std::stoull(f[10]);
        p.wall_ms = std::stod(f[11]);
        rows.push_back(p);
    }
    if (!saw_header) throw std::invalid_argument("parse_csv: missing header");
    return rows;
}

struct CurvePoint {
    double param = 0;
    double pe = 0;
    double weight = 1.0; // typically the trial count behind the estimate
};

namespace detail {

// weighted pool-adjacent-violators fit, nondecreasing; returns fitted values
inline std::vector<double> pav_nondecreasing(const std::vector<CurvePoint>& pts, double* sse) {
    struct Block {
        double wy, w;
        std::size_t count;
    };
    std::vector<Block> stack;
    for (const CurvePoint& p : pts) {
        Block b{p.pe * p.weight, p.weight, 1};
        stack.push_back(b);
        while (stack.size() > 1) {
            Block& top = stack[stack.size() - 1];
            Block& prev = stack[stack.size() - 2];
            if (prev.wy * top.w <= top.wy * prev.w) break; // prev mean <= top mean
            prev.wy += top.wy;
            prev.w += top.w;
            prev.count += top.count;
            stack.pop_back();
        }
    }
    std::vector<double> fit;
    fit.reserve(pts.size());
    for (const Block& b : stack) {
        double mean = b.wy / b.w;
        for (std::size_t i = 0; i < b.count; ++i) fit.push_back(mean);
    }
    if (sse) {
        *sse = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double d = pts[i].pe - fit[i];
            *sse += pts[i].weight * d * d;
        }
    }
    return fit;
}

inline double crossing(const std::vector<double>& x, const std::vector<double>& y, double level) {
    if (level < y.front() || level > y.back())
        throw std::out_of_range("transition_width: level not bracketed by the curve");
    std::size_t j = 0;
    while (y[j] < level) ++j;
    if (j == 0) return x[0];
    return x[j - 1] + (level - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1]);
}

} // namespace detail

// Width of the error-probability transition: the distance in channel
// parameter between the delta and 1-delta crossings of the isotonic
// regression of the empirical curve, with linear interpolation between
// grid points. Decreasing curves (error rate falling as the parameter
// grows, e.g. over Eb/N0) are fitted in the reversed orientation; the
// returned width is positive either way. Levels outside the fitted range
// raise std::out_of_range.
inline double transition_width(std::vector<CurvePoint> curve, double delta) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("transition_width: delta must lie in (0, 0.5)");
    if (curve.size() < 2)
        throw std::invalid_argument("transition_width: need at least two points");
    std::sort(curve.begin(), curve.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.param < b.param; });
    // merge duplicate parameters (weighted mean) so interpolation is well posed
    std::vector<CurvePoint> pts;
    for (const CurvePoint& p : curve) {
        if (!pts.empty() && pts.back().param == p.param) {
            double w = pts.back().weight + p.weight;
            pts.back().pe = (pts.back().pe * pts.back().weight + p.pe * p.weight) / w;
            pts.back().weight = w;
        } else {
            pts.push_back(p);
        }
    }
    if (pts.size() < 2)
        throw std::invalid_argument("transition_width: need at least two distinct parameters");

    double sse_inc = 0, sse_dec = 0;
    std::vector<double> fit_inc = detail::pav_nondecreasing(pts, &sse_inc);
    std::vector<CurvePoint> rev(pts.rbegin(), pts.rend());
    std::vector<double> fit_dec = detail::pav_nondecreasing(rev, &sse_dec);

    std::vector<double> x, y;
    x.reserve(pts.size());
    y.reserve(pts.size());
    if (sse_inc <= sse_dec) {
        for (std::size_t i = 0; i < pts.size(); ++i) x.push_back(pts[i].param);
        y = fit_inc;
    } else {
        // reversed orientation: walk the curve from the largest parameter down
        for (std::size_t i = 0; i < rev.size(); ++i) x.push_back(rev[i].param);
        y = fit_dec;
    }
    double lo = detail::crossing(x, y, delta);
    double hi = detail::crossing(x, y, 1.0 - delta);
    return hi >= lo ? hi - lo : lo - hi;
}

struct InvarianceReport {
    std::uint64_t trials = 0;
    // trials where the block-error indicator differed between the all-zero
    // transmission and the matched random-codeword transmission
    std::uint64_t indicator_mismatches = 0;
    // trials where the decoded words differed by anything other than the
    // transmitted codeword (strictly stronger check)
    std::uint64_t word_mismatches = 0;
};

// Paired-transmission audit of decoding symmetry: trial i decodes a noise
// realization around the all-zero word, then re-decodes the same noise
// mapped onto a random codeword c0 (signs flipped where c0 is 1 for soft
// input, XOR for hard input) and compares outcomes.
inline InvarianceReport invariance_audit(const SweepSpec& spec, std::size_t grid_index) {
    if (grid_index >= spec.grid.size())
        throw std::invalid_argument("invariance_audit: grid index out of range");
    detail::validate_combo(spec);
    const RmCode code = build_code(spec.m, spec.r);
    const ChannelModel ch = detail::point_channel(spec, spec.grid[grid_index]);
    std::optional<RpaDecoder> rpa;
    if (spec.decoder != DecoderKind::reed) rpa.emplace(spec.m, spec.r, spec.dcfg);
    OuterCode outer;
    if (spec.decoder == DecoderKind::rpa_list_concat)
        outer = OuterCode::make(code.k, spec.outer_q, spec.outer_seed);

    const BitWord zero_cw(code.n);
    InvarianceReport rep;
    rep.trials = spec.trials;
    for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
        std::uint64_t ts = trial_seed(spec.seed, grid_index, trial);
        Received rx = transmit(ch, zero_cw, ts);
        LlrWord L1 = llr(ch, rx);

        // random transmitted codeword for the paired run
        std::mt19937_64 gen(mix_seed(ts, 0x70617274ull));
        std::bernoulli_distribution coin(0.5);
        BitWord msg(code.k);
        if (spec.decoder == DecoderKind::rpa_list_concat) {
            BitWord free_bits(code.k - std::size_t(outer.q));
            for (std::size_t i = 0; i < free_bits.size(); ++i) free_bits.set(i, coin(gen));
            msg = outer.complete(free_bits);
        } else {
            for (std::size_t i = 0; i < code.k; ++i) msg.set(i, coin(gen));
        }
        BitWord c0 = encode(code, msg);

        // each decode yields a word plus a detected-failure flag (the
        // concatenated decoder's all-zero placeholder is a report, not a
        // decision, so it is compared by flag rather than by word)
        auto decode_soft = [&](const LlrWord& L) -> std::pair<BitWord, bool> {
            switch (spec.decoder) {
                case DecoderKind::reed: return {reed_decode(code, hard_decide(L)).second, false};
                case DecoderKind::rpa: return {rpa->decode(L).word, false};
                case DecoderKind::rpa_list:
                    return {rpa_list_decode_full(L, code, *rpa, spec.lcfg).codeword, false};
                case DecoderKind::rpa_list_concat: {
                    ListDecodeResult res = rpa_list_decode_full(L, code, *rpa, spec.lcfg, &outer);
                    return {std::move(res.codeword), res.failure};
                }
                default: throw std::logic_error("invariance_audit: unreachable");
            }
        };

        BitWord d1, d2;
        bool fail1 = false, fail2 = false;
        if (spec.decoder == DecoderKind::rpa_bsc) {
            BitWord y2 = rx.bits;
            y2 ^= c0;
            d1 = rpa->decode_bsc(rx.bits).word;
            d2 = rpa->decode_bsc(y2).word;
        } else if (ch.kind == ChannelModel::Kind::bsc && spec.decoder == DecoderKind::reed) {
            BitWord y2 = rx.bits;
            y2 ^= c0;
            d1 = reed_decode(code, rx.bits).second;
            d2 = reed_decode(code, y2).second;
        } else {
            LlrWord L2 = L1;
            for (std::size_t z = 0; z < L2.size(); ++z)
                if (c0.get(z)) L2[z] = -L2[z];
            std::tie(d1, fail1) = decode_soft(L1);
            std::tie(d2, fail2) = decode_soft(L2);
        }
        bool err1 = fail1 || d1 != zero_cw;
        bool err2 = fail2 || d2 != c0;
        if (err1 != err2) rep.indicator_mismatches += 1;
        if (fail1 || fail2) {
            // a detected failure must be detected in both runs
            if (fail1 != fail2) rep.word_mismatches += 1;
        } else {
            BitWord shifted = d1;
            shifted ^= c0;
            if (shifted != d2) rep.word_mismatches += 1;
        }
    }
    return rep;
}

} // namespace rmrpa

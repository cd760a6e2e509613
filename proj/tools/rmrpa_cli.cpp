// Command-line front end: encoding, single-word decoding, Monte Carlo
// simulation, parameter sweeps, transition-width evaluation and the paired
// transmission-invariance audit.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "rmrpa/list_concat.hpp"
#include "rmrpa/rm_code.hpp"
#include "rmrpa/rpa.hpp"
#include "rmrpa/sim.hpp"
#include "rmrpa/wordio.hpp"

namespace {

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t pos = csv.find(',', start);
        std::string item = csv.substr(start, pos == std::string::npos ? pos : pos - start);
        item = rmrpa::strip_ws(item);
        if (!item.empty()) out.push_back(std::stod(item));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (out.empty()) throw CLI::ValidationError("empty parameter grid");
    return out;
}

struct CommonOpts {
    int m = 4;
    int r = 2;
    std::string decoder = "rpa";
    std::string channel = "bsc";
    std::string p_grid;
    std::string ebn0_grid;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    int nmax = 0;
    double theta = 0.05;
    int list_t = 4;
    int lmax_mult = 2;
    int parities = 2;
    std::uint64_t outer_seed = 1;
    std::size_t voting_set_size = 0;
    std::uint64_t voting_seed = 1;
    int threads = 1;
    std::string out_path;
};

void add_code_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--m", o.m, "log2 of the code length")->required();
    cmd->add_option("--r", o.r, "code order")->required();
}

void add_decoder_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--decoder", o.decoder, "reed | rpa-bsc | rpa | rpa-list | rpa-list-concat");
    cmd->add_option("--nmax", o.nmax, "iteration cap per recursion level (0: ceil(m/2))");
    cmd->add_option("--theta", o.theta, "relative LLR stability threshold");
    cmd->add_option("--list-t", o.list_t, "saturated least-reliable coordinates (2^t candidates)");
    cmd->add_option("--lmax-mult", o.lmax_mult, "saturation magnitude multiplier")->check(CLI::IsMember({1, 2}));
    cmd->add_option("--parities", o.parities, "outer parity checks")->check(CLI::IsMember({1, 2}));
    cmd->add_option("--outer-seed", o.outer_seed, "seed for the outer parity matrix");
    cmd->add_option("--voting-set-size", o.voting_set_size, "subspaces aggregated per level (0: all)");
    cmd->add_option("--voting-seed", o.voting_seed, "seed for voting-set sampling");
    cmd->add_option("--threads", o.threads, "worker threads");
}

void add_channel_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--channel", o.channel, "bsc | awgn");
    cmd->add_option("--p", o.p_grid, "BSC crossover(s), comma separated");
    cmd->add_option("--ebn0-db", o.ebn0_grid, "AWGN Eb/N0 in dB, comma separated");
}

rmrpa::SweepSpec make_spec(const CommonOpts& o) {
    rmrpa::SweepSpec spec;
    spec.m = o.m;
    spec.r = o.r;
    spec.decoder = rmrpa::decoder_kind_from(o.decoder);
    spec.channel = rmrpa::channel_kind_from(o.channel);
    spec.trials = o.trials;
    spec.seed = o.seed;
    spec.threads = o.threads;
    spec.dcfg.n_max = o.nmax;
    spec.dcfg.theta = o.theta;
    spec.dcfg.voting_set_size = o.voting_set_size;
    spec.dcfg.voting_seed = o.voting_seed;
    spec.lcfg.t = o.list_t;
    spec.lcfg.l_max_rule = o.lmax_mult;
    spec.outer_q = o.parities;
    spec.outer_seed = o.outer_seed;
    if (spec.channel == rmrpa::ChannelModel::Kind::bsc) {
        if (o.p_grid.empty()) throw CLI::ValidationError("--p is required for the bsc channel");
        spec.grid = parse_grid(o.p_grid);
    } else {
        if (o.ebn0_grid.empty()) throw CLI::ValidationError("--ebn0-db is required for the awgn channel");
        spec.grid = parse_grid(o.ebn0_grid);
    }
    if (spec.channel == rmrpa::ChannelModel::Kind::bsc) {
        // hard-input decoding benefits from the true crossover for its
        // surrogate LLR magnitude (the decision is scale-invariant either way)
        spec.dcfg.bsc_p = spec.grid.front();
    }
    return spec;
}

std::string csv_comment(const rmrpa::SweepSpec& spec) {
    if (spec.channel == rmrpa::ChannelModel::Kind::awgn)
        return "# param is Eb/N0 in dB; BPSK 0->+1, 1->-1; sigma^2 = 1/(2*rate*10^(param/10)), "
               "rate = information bits / code length\n";
    return "# param is the BSC crossover probability\n";
}

void emit_point_lines(const std::vector<rmrpa::PointSummary>& rows) {
    for (const auto& p : rows) {
        double pe = p.trials ? double(p.block_errors) / double(p.trials) : 0.0;
        std::printf("param=%-8g trials=%llu block_errors=%llu pe=%.4g failures=%llu ml_lb=%llu wall_ms=%.6g\n",
                    p.param, (unsigned long long)p.trials, (unsigned long long)p.block_errors, pe,
                    (unsigned long long)p.failures, (unsigned long long)p.ml_lb_errors, p.wall_ms);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reed-Muller encoding and recursive projection-aggregation decoding"};
    app.require_subcommand(1);

    CommonOpts enc_o, dec_o, sim_o, sweep_o, audit_o;
    std::string enc_in, enc_out, dec_in, dec_out;
    std::string width_in;
    double width_delta = 0.1;
    double dec_p = 0.0;

    CLI::App* enc = app.add_subcommand("encode", "encode a hex message word");
    add_code_opts(enc, enc_o);
    enc->add_option("--in", enc_in, "message file, hex, k bits")->required();
    enc->add_option("--out", enc_out, "codeword file, hex, 2^m bits")->required();

    CLI::App* dec = app.add_subcommand("decode", "decode one received word from a file");
    add_code_opts(dec, dec_o);
    add_decoder_opts(dec, dec_o);
    dec->add_option("--p", dec_p, "BSC crossover backing hard-input LLR magnitudes");
    dec->add_option("--in", dec_in,
                    "received word: hex for reed/rpa-bsc, one LLR per line otherwise")
        ->required();
    dec->add_option("--out", dec_out, "decoded codeword file, hex");

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo at a single channel parameter");
    add_code_opts(sim, sim_o);
    add_decoder_opts(sim, sim_o);
    add_channel_opts(sim, sim_o);
    sim->add_option("--trials", sim_o.trials, "number of trials");
    sim->add_option("--seed", sim_o.seed, "master seed");
    sim->add_option("--out", sim_o.out_path, "also write the CSV here");

    CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo over a parameter grid");
    add_code_opts(sweep, sweep_o);
    add_decoder_opts(sweep, sweep_o);
    add_channel_opts(sweep, sweep_o);
    sweep->add_option("--trials", sweep_o.trials, "trials per grid point");
    sweep->add_option("--seed", sweep_o.seed, "master seed");
    sweep->add_option("--out", sweep_o.out_path, "CSV output path")->required();

    CLI::App* width = app.add_subcommand("width", "transition width of a swept error curve");
    width->add_option("--in", width_in, "sweep CSV")->required();
    width->add_option("--delta", width_delta, "crossing levels delta and 1-delta");

    CLI::App* audit = app.add_subcommand("invariance-audit",
                                         "paired all-zero vs random-codeword transmissions");
    add_code_opts(audit, audit_o);
    add_decoder_opts(audit, audit_o);
    add_channel_opts(audit, audit_o);
    audit->add_option("--trials", audit_o.trials, "number of paired trials");
    audit->add_option("--seed", audit_o.seed, "master seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*enc) {
            rmrpa::RmCode code = rmrpa::build_code(enc_o.m, enc_o.r);
            rmrpa::BitWord msg = rmrpa::read_hex_word(enc_in, code.k);
            rmrpa::write_text_file(enc_out, rmrpa::to_hex(rmrpa::encode(code, msg)) + "\n");
            std::printf("encoded k=%zu message into n=%zu codeword\n", code.k, code.n);
        } else if (*dec) {
            rmrpa::RmCode code = rmrpa::build_code(dec_o.m, dec_o.r);
            rmrpa::DecoderConfig dcfg;
            dcfg.n_max = dec_o.nmax;
            dcfg.theta = dec_o.theta;
            dcfg.voting_set_size = dec_o.voting_set_size;
            dcfg.voting_seed = dec_o.voting_seed;
            dcfg.threads = dec_o.threads;
            if (dec_p > 0.0) dcfg.bsc_p = dec_p;
            rmrpa::ListConfig lcfg{dec_o.list_t, dec_o.lmax_mult};
            rmrpa::DecoderKind kind = rmrpa::decoder_kind_from(dec_o.decoder);
            rmrpa::BitWord decoded;
            bool failure = false;
            std::string message_hex;
            switch (kind) {
                case rmrpa::DecoderKind::reed: {
                    auto [msg, cw] = rmrpa::reed_decode(code, rmrpa::read_hex_word(dec_in, code.n));
                    decoded = cw;
                    message_hex = rmrpa::to_hex(msg);
                    break;
                }
                case rmrpa::DecoderKind::rpa_bsc:
                    decoded = rmrpa::rpa_decode_bsc(rmrpa::read_hex_word(dec_in, code.n), dec_o.m,
                                                    dec_o.r, dcfg);
                    break;
                case rmrpa::DecoderKind::rpa:
                    decoded = rmrpa::rpa_decode(rmrpa::read_llr_word(dec_in, code.n), dec_o.m,
                                                dec_o.r, dcfg);
                    break;
                case rmrpa::DecoderKind::rpa_list: {
                    auto res = rmrpa::rpa_list_decode_full(rmrpa::read_llr_word(dec_in, code.n),
                                                           code, dcfg, lcfg);
                    decoded = res.codeword;
                    message_hex = rmrpa::to_hex(res.message);
                    break;
                }
                case rmrpa::DecoderKind::rpa_list_concat: {
                    rmrpa::OuterCode outer =
                        rmrpa::OuterCode::make(code.k, dec_o.parities, dec_o.outer_seed);
                    auto res = rmrpa::rpa_list_concat_decode(rmrpa::read_llr_word(dec_in, code.n),
                                                             code, dcfg, lcfg, outer);
                    decoded = res.codeword;
                    failure = res.failure;
                    message_hex = rmrpa::to_hex(res.message);
                    break;
                }
            }
            std::string hex = rmrpa::to_hex(decoded);
            if (!dec_out.empty())
                rmrpa::write_text_file(dec_out, hex + "\n");
            else
                std::printf("codeword=%s\n", hex.c_str());
            if (!message_hex.empty()) std::printf("message=%s\n", message_hex.c_str());
            std::printf("status=%s\n", failure ? "failure" : "ok");
            if (failure) return 2;
        } else if (*sim || *sweep) {
            CommonOpts& o = *sim ? sim_o : sweep_o;
            rmrpa::SweepSpec spec = make_spec(o);
            if (*sim && spec.grid.size() != 1)
                throw CLI::ValidationError("simulate takes a single channel parameter; use sweep for grids");
            std::vector<rmrpa::PointSummary> rows = rmrpa::run_sweep(spec);
            emit_point_lines(rows);
            if (!o.out_path.empty())
                rmrpa::write_text_file(o.out_path, csv_comment(spec) + rmrpa::emit_csv(rows));
            else if (*sweep)
                std::fputs((csv_comment(spec) + rmrpa::emit_csv(rows)).c_str(), stdout);
        } else if (*width) {
            std::vector<rmrpa::PointSummary> rows = rmrpa::parse_csv(rmrpa::read_text_file(width_in));
            std::vector<rmrpa::CurvePoint> curve;
            for (const auto& p : rows) {
                if (p.trials == 0) continue;
                curve.push_back({p.param, double(p.block_errors) / double(p.trials), double(p.trials)});
            }
            std::printf("w(%g) = %.6g\n", width_delta, rmrpa::transition_width(curve, width_delta));
        } else if (*audit) {
            rmrpa::SweepSpec spec = make_spec(audit_o);
            if (spec.grid.size() != 1)
                throw CLI::ValidationError("invariance-audit takes a single channel parameter");
            rmrpa::InvarianceReport rep = rmrpa::invariance_audit(spec, 0);
            std::printf("trials=%llu indicator_mismatches=%llu word_mismatches=%llu\n",
                        (unsigned long long)rep.trials, (unsigned long long)rep.indicator_mismatches,
                        (unsigned long long)rep.word_mismatches);
            if (rep.indicator_mismatches > 0) return 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}

#pragma once

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stabkit/reduction.hpp"
#include "stabkit/shor.hpp"

namespace stabkit {

namespace cli_detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Limits limits_from_env() {
    Limits lims;
    if (const char* v = std::getenv("STABKIT_MAX_ENUM")) {
        int bits = std::atoi(v);
        if (bits > 0) {
            lims.max_group_bits = bits;
            lims.max_qmld_bits = bits;
            lims.max_codeword_bits = bits;
        }
    }
    return lims;
}

inline BitVector parse_bits(const std::string& s) { return BitVector::from_string(s); }

// label text is "xbits|zbits"
inline LogicalLabel parse_label(const std::string& s, std::size_t k) {
    std::size_t bar = s.find('|');
    if (bar == std::string::npos) throw ParseError("label must look like x_bits|z_bits");
    LogicalLabel label{BitVector::from_string(s.substr(0, bar)),
                       BitVector::from_string(s.substr(bar + 1))};
    if (label.x_part.size() != k || label.z_part.size() != k)
        throw ParseError("label parts must have k bits each");
    return label;
}

inline std::string csv_row(const std::vector<Integer>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += xs[i].get_str();
    }
    return out;
}

inline std::vector<Rational> parse_grid(const std::string& s) {
    std::vector<Rational> grid;
    std::string cur;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            if (!cur.empty()) grid.push_back(parse_rational(cur));
            cur.clear();
        } else {
            cur += s[i];
        }
    }
    if (grid.empty()) throw ParseError("empty grid");
    return grid;
}

}  // namespace cli_detail

// All subcommands are deterministic given their inputs; outputs are
// byte-stable. Exit codes: 0 success, 2 usage, 3 failed post-check or
// oracle mismatch.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact stabilizer-code decoding and weight-enumerator extraction"};
    app.require_subcommand(1);
    unsigned long seed = 0;
    app.add_option("--seed", seed, "seed for randomized subcommands (unused by deterministic ones)");

    std::string code_path, trace_path, channel_spec, syndrome_bits, label_text, grid_text;
    std::string method = "dqmld", format = "table", kind = "xz";
    bool verify = false;
    std::size_t n1 = 0, n2 = 0, ell = 0;
    std::string p_text;

    CLI::App* we_extract = app.add_subcommand("we-extract", "weight enumerator via DQMLD oracle");
    we_extract->add_option("--code", code_path, "generator matrix file")->required();
    we_extract->add_option("--trace", trace_path, "write transcript JSON here");
    we_extract->add_flag("--verify", verify, "cross-check against brute force");

    CLI::App* we_brute = app.add_subcommand("we-brute", "weight enumerator by enumeration");
    we_brute->add_option("--code", code_path, "generator matrix file")->required();

    CLI::App* decode = app.add_subcommand("decode", "run QMLD or DQMLD on one syndrome");
    decode->add_option("--code", code_path, "stabilizer code file")->required();
    decode->add_option("--channel", channel_spec, "channel spec or JSON file")->required();
    decode->add_option("--syndrome", syndrome_bits, "syndrome bits")->required();
    decode->add_option("--method", method)->check(CLI::IsMember({"dqmld", "qmld"}));
    decode->add_option("--format", format)->check(CLI::IsMember({"table", "json", "csv"}));

    CLI::App* enumerate = app.add_subcommand("enumerate", "coset weight enumerator dump");
    enumerate->add_option("--code", code_path, "stabilizer code file")->required();
    enumerate->add_option("--syndrome", syndrome_bits, "syndrome bits")->required();
    enumerate->add_option("--label", label_text, "logical label x_bits|z_bits")->required();

    CLI::App* compare = app.add_subcommand("compare", "QMLD vs DQMLD disagreement scan");
    compare->add_option("--code", code_path, "stabilizer code file")->required();
    compare->add_option("--kind", kind, "channel family")
        ->check(CLI::IsMember({"xz", "depol", "yfree"}));
    compare->add_option("--p-grid", grid_text, "comma-separated rational rates")->required();

    CLI::App* shor = app.add_subcommand("shor-validate", "lattice-code channel simulation checks");
    shor->add_option("--n1", n1, "rows")->required();
    shor->add_option("--n2", n2, "columns")->required();
    shor->add_option("--p", p_text, "noise rate")->required();
    shor->add_option("--ell", ell, "chain length")->required();

    try {
        args.insert(args.begin(), "stabkit");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }
    (void)seed;

    Limits lims = cli_detail::limits_from_env();
    try {
        if (we_extract->parsed() || we_brute->parsed()) {
            ClassicalCode code = make_classical_code(parse_matrix_text(cli_detail::read_file(code_path)));
            if (we_brute->parsed()) {
                out << cli_detail::csv_row(brute_force_we(code, lims)) << "\n";
                return 0;
            }
            ReductionResult res = run_reduction(code, lims);
            if (!trace_path.empty()) {
                std::ofstream tf(trace_path);
                if (!tf) throw ParseError("cannot write trace file: " + trace_path);
                tf << transcript_to_json(res.transcript).dump(2) << "\n";
            }
            out << cli_detail::csv_row(res.we) << "\n";
            if (verify && res.we != brute_force_we(code, lims)) {
                err << "oracle-extracted enumerator disagrees with brute force\n";
                return 3;
            }
            return 0;
        }

        if (decode->parsed()) {
            StabilizerCode code = parse_code_text(cli_detail::read_file(code_path));
            std::string spec = channel_spec;
            if (spec.empty()) throw ParseError("empty channel spec");
            if (spec.find(':') == std::string::npos && spec != "free" && spec.front() != '{')
                spec = cli_detail::read_file(channel_spec);
            PauliChannel ch = parse_channel_spec(spec, code.n);
            Syndrome s(cli_detail::parse_bits(syndrome_bits));
            if (s.size() != code.n - code.k) throw ParseError("syndrome must have n-k bits");
            if (method == "qmld") {
                PauliOperator e = qmld(code, ch, s, lims);
                if (format == "json") {
                    nlohmann::json j{{"error", e.to_string()},
                                     {"class", decompose(code, e).label.to_string()}};
                    out << j.dump() << "\n";
                } else {
                    out << "error " << e.to_string() << "\n"
                        << "class " << decompose(code, e).label.to_string() << "\n";
                }
                return 0;
            }
            DecodeResult res = dqmld(code, ch, s, lims);
            if (format == "json") {
                nlohmann::json classes = nlohmann::json::array();
                for (const auto& [label, prob] : res.class_probs)
                    classes.push_back({{"label", label.to_string()},
                                       {"prob", to_fraction_string(prob)}});
                nlohmann::json j{{"winner", res.winner.to_string()},
                                 {"achieved_gap", to_fraction_string(res.achieved_gap)},
                                 {"classes", classes}};
                out << j.dump() << "\n";
            } else if (format == "csv") {
                out << "label,prob\n";
                for (const auto& [label, prob] : res.class_probs)
                    out << label.to_string() << "," << to_fraction_string(prob) << "\n";
            } else {
                out << "winner " << res.winner.to_string() << "\n"
                    << "achieved_gap " << to_fraction_string(res.achieved_gap) << "\n";
                for (const auto& [label, prob] : res.class_probs)
                    out << label.to_string() << " " << to_fraction_string(prob) << "\n";
            }
            return 0;
        }

        if (enumerate->parsed()) {
            StabilizerCode code = parse_code_text(cli_detail::read_file(code_path));
            Syndrome s(cli_detail::parse_bits(syndrome_bits));
            if (s.size() != code.n - code.k) throw ParseError("syndrome must have n-k bits");
            LogicalLabel label = cli_detail::parse_label(label_text, code.k);
            CosetEnumerator en = coset_enumerator(code, s, label, lims);
            std::string row;
            for (std::size_t i = 0; i < en.counts.size(); ++i) {
                if (i) row += ",";
                row += std::to_string(en.counts[i]);
            }
            out << row << "\n";
            return 0;
        }

        if (compare->parsed()) {
            StabilizerCode code = parse_code_text(cli_detail::read_file(code_path));
            std::vector<Rational> grid = cli_detail::parse_grid(grid_text);
            out << "p,syndrome,dqmld,qmld_class,agree\n";
            std::size_t disagreements = 0;
            std::uint64_t nsynd = std::uint64_t(1) << (code.n - code.k);
            for (const auto& p : grid) {
                PauliChannel ch = kind == "xz"      ? independent_xz(code.n, p)
                                  : kind == "depol" ? depolarizing(code.n, p)
                                                    : repeat(y_free(p), code.n);
                for (std::uint64_t m = 0; m < nsynd; ++m) {
                    BitVector bits(code.n - code.k);
                    for (std::size_t b = 0; b < code.n - code.k; ++b)
                        bits.set(b, (m >> (code.n - code.k - 1 - b)) & 1);
                    Syndrome s(bits);
                    LogicalLabel dq = dqmld(code, ch, s, lims).winner;
                    LogicalLabel qc = decompose(code, qmld(code, ch, s, lims)).label;
                    bool agree = dq == qc;
                    if (!agree) ++disagreements;
                    out << to_fraction_string(p) << "," << s.bits.to_string() << ","
                        << dq.to_string() << "," << qc.to_string() << ","
                        << (agree ? "yes" : "no") << "\n";
                }
            }
            out << "disagreements," << disagreements << "\n";
            return 0;
        }

        if (shor->parsed()) {
            Rational p = parse_rational(p_text);
            ShorClassProbs formula = class_probs_formula(n1, n2, p, ell);
            out << "P_I " << to_fraction_string(formula.identity) << "\n"
                << "P_X " << to_fraction_string(formula.logical_x) << "\n"
                << "P_Z " << to_fraction_string(formula.logical_z) << "\n"
                << "P_Y " << to_fraction_string(formula.logical_y) << "\n";

            ShorLattice lat = build_shor(n1, n2);
            PauliOperator chain = row_chain(lat, ell);
            Syndrome s = syndrome_of(lat.code, chain);
            LogicalLabel base = decompose(lat.code, chain).label;
            auto rel_label = [&](const LogicalLabel& delta) {
                return LogicalLabel{base.x_part ^ delta.x_part, base.z_part ^ delta.z_part};
            };
            LogicalLabel lx = decompose(lat.code, lat.code.logical_x[0]).label;
            LogicalLabel lz = decompose(lat.code, lat.code.logical_z[0]).label;
            LogicalLabel ly{lx.x_part ^ lz.x_part, lx.z_part ^ lz.z_part};
            Rational p_base = class_probability(lat.code, independent_xz(lat.code.n, p), s, base, lims);
            Rational p_x = class_probability(lat.code, independent_xz(lat.code.n, p), s, rel_label(lx), lims);
            Rational p_z = class_probability(lat.code, independent_xz(lat.code.n, p), s, rel_label(lz), lims);
            Rational p_y = class_probability(lat.code, independent_xz(lat.code.n, p), s, rel_label(ly), lims);
            Rational total = p_base + p_x + p_z + p_y;
            bool match = formula.identity == p_base / total && formula.logical_x == p_x / total &&
                         formula.logical_z == p_z / total && formula.logical_y == p_y / total;
            out << "brute_force_match " << (match ? "yes" : "no") << "\n";

            if (n2 >= 2) {
                LeakageReport leak = leakage_bound_check(n1, n2, p);
                out << "leakage " << to_fraction_string(leak.leakage) << "\n";
                if (leak.series_valid)
                    out << "leakage_bound " << to_fraction_string(leak.bound) << " holds "
                        << (leak.holds ? "yes" : "no") << "\n";
                else
                    out << "leakage_bound invalid (geometric series diverges)\n";
            }
            return match ? 0 : 3;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const OutOfRange& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace stabkit

// cli.hpp: command-line front end: compile, simulate, feasibility, fig2, sweep.
//
// Exit codes: 0 success, 1 unexpected failure, 2 parse error,
// 3 physics/domain error, 4 target phase unreachable without idle steps.

#pragma once

#include "sqcav/compiler.hpp"
#include "sqcav/config.hpp"
#include "sqcav/errors.hpp"
#include "sqcav/io.hpp"
#include "sqcav/lindblad.hpp"
#include "sqcav/physics.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace sqcav::cli {

enum ExitCode : int { ok = 0, failure = 1, parse_error = 2, domain_error = 3, unreachable = 4 };

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(sqcav::detail::trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Reads a real number with an optional leading sign; advances `s`.
inline std::optional<double> take_real(std::string_view& s) {
    bool negative = false;
    std::string_view t = s;
    if (!t.empty() && (t.front() == '+' || t.front() == '-')) {
        negative = t.front() == '-';
        t.remove_prefix(1);
    }
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{}) return std::nullopt;
    s = t.substr(static_cast<std::size_t>(res.ptr - t.data()));
    return negative ? -v : v;
}

} // namespace detail

// `a`, `bj`, `a+bj`, `a-bj`
inline Complex parse_complex(std::string_view text) {
    const std::string_view original = text;
    auto fail = [&]() -> Complex { throw ParseError("bad complex literal '" + std::string(original) + "'"); };
    text = sqcav::detail::trim(text);
    const auto first = detail::take_real(text);
    if (!first) return fail();
    if (text.empty()) return {*first, 0.0};
    if (text == "j") return {0.0, *first};
    const auto second = detail::take_real(text);
    if (!second || text != "j") return fail();
    return {*first, *second};
}

struct TargetSpec {
    enum class Kind { Fock, Binary, Coeffs } kind = Kind::Fock;
    int fock = 0;
    std::vector<Complex> coefficients;
};

inline TargetSpec parse_target(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("target must be fock:m, binary:a1,a2 or coeffs:c0,c1,...");
    const auto head = text.substr(0, colon);
    const auto body = text.substr(colon + 1);
    TargetSpec t;
    if (head == "fock") {
        t.kind = TargetSpec::Kind::Fock;
        const auto b = sqcav::detail::trim(body);
        const auto res = std::from_chars(b.data(), b.data() + b.size(), t.fock);
        if (res.ec != std::errc{} || res.ptr != b.data() + b.size() || t.fock < 0) {
            throw ParseError("fock target needs a non-negative integer, got '" + std::string(body) + "'");
        }
        return t;
    }
    if (head == "binary") t.kind = TargetSpec::Kind::Binary;
    else if (head == "coeffs") t.kind = TargetSpec::Kind::Coeffs;
    else throw ParseError("unknown target kind '" + std::string(head) + "'");
    for (const auto part : detail::split(body, ',')) t.coefficients.push_back(parse_complex(part));
    if (t.kind == TargetSpec::Kind::Binary && t.coefficients.size() != 2) {
        throw ParseError("binary target needs exactly two amplitudes");
    }
    return t;
}

inline PulseSequence compile_target(const TargetSpec& spec, const RabiRates& r, bool allow_idle,
                                    std::optional<int> n_max, TargetState& resolved) {
    switch (spec.kind) {
    case TargetSpec::Kind::Fock:
        resolved = TargetState::fock(spec.fock);
        return fock_sequence(spec.fock, r, n_max);
    case TargetSpec::Kind::Binary:
        resolved = TargetState::normalized(spec.coefficients);
        if (!allow_idle) {
            const auto& c = resolved.coefficients();
            return binary_superposition(c[0], c[1], r, n_max);
        }
        return synthesize(resolved, r, {true, n_max});
    case TargetSpec::Kind::Coeffs:
        resolved = TargetState::normalized(spec.coefficients);
        return synthesize(resolved, r, {allow_idle, n_max});
    }
    throw InvalidTarget("unknown target kind");
}

inline lindblad::DecayChannels channels_for(const RunConfig& c) {
    return lindblad::DecayChannels::from_times(physics::photon_lifetime(c.cavity.Q, c.cavity.lambda), c.device.T1,
                                               c.device.T2);
}

inline void print_amplitudes(std::ostream& os, const Ket& k) {
    os << "state,magnitude,phase\n";
    for (Eigen::Index i = 0; i < k.dim(); ++i) {
        const Complex z = k[i];
        const double mag = std::abs(z);
        const double phase = mag > 1e-15 ? std::arg(z) : 0.0;
        os << basis_label(i, k.n_max()) << ',' << io::format_double(mag) << ',' << io::format_double(phase) << '\n';
    }
}

inline void print_populations(std::ostream& os, const lindblad::DensityMatrix& rho) {
    os << "state,population\n";
    const auto d = dimension(rho.n_max());
    for (Eigen::Index i = 0; i < d; ++i) {
        os << basis_label(i, rho.n_max()) << ',' << io::format_double(rho.entries()(i, i).real()) << '\n';
    }
}

inline std::string sweep_header() {
    return "value,tau_e_s,tau_c0_s,tau_p_s,n_th,ratio_at_target,single_photon_ok,fock_ok,superposition_ok,"
           "max_fock\n";
}

inline std::string sweep_row(std::string_view value, const physics::FeasibilityReport& rep) {
    std::ostringstream os;
    auto b = [](bool v) { return v ? "true" : "false"; };
    os << value << ',' << io::format_double(rep.tau_e) << ',' << io::format_double(rep.tau_c.front()) << ','
       << io::format_double(rep.tau_p) << ',' << io::format_double(rep.n_th) << ','
       << io::format_double(rep.ratio_at_target) << ',' << b(rep.single_photon_ok) << ',' << b(rep.fock_ok) << ','
       << b(rep.superposition_ok) << ',' << rep.max_fock << '\n';
    return os.str();
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"SQUID charge qubit in a microcavity: Fock-state pulse compiler and feasibility estimator", "sqcav"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_path, "key = value configuration file");
    app.add_option("--set", overrides, "override one config key, e.g. --set cavity.Q=1e6");

    auto* compile = app.add_subcommand("compile", "compile a target state into a pulse sequence");
    std::string target_text;
    bool allow_idle = false;
    std::string compile_out;
    std::optional<int> compile_n_max;
    compile->add_option("target", target_text, "fock:m | binary:a1,a2 | coeffs:c0,c1,...")->required();
    compile->add_flag("--allow-idle", allow_idle, "permit free-evolution steps to set relative phases");
    compile->add_option("-o,--output", compile_out, "write the sequence document here instead of stdout");
    compile->add_option("--n-max", compile_n_max, "truncation of the emitted sequence");

    auto* simulate = app.add_subcommand("simulate", "run a sequence document from |g,0>");
    std::string sequence_path;
    bool dissipative = false;
    simulate->add_option("sequence", sequence_path, "sequence document")->required();
    simulate->add_flag("--dissipative", dissipative, "integrate the master equation with the configured losses");

    auto* feasibility = app.add_subcommand("feasibility", "timescale report for a target Fock level");
    int target_n = 1;
    std::optional<double> margin;
    std::string report_out;
    feasibility->add_option("--target-n", target_n, "target photon number")->check(CLI::NonNegativeNumber);
    feasibility->add_option("--margin", margin, "required ratio for 'much longer than'");
    feasibility->add_option("-o,--output", report_out, "write the report here instead of stdout");

    auto* fig2 = app.add_subcommand("fig2", "Fock lifetime / transfer time ratio versus n as CSV");
    int n_min = 1;
    int n_max_curve = 100;
    std::vector<double> q_list;
    std::string fig2_out;
    fig2->add_option("--n-min", n_min, "first photon number");
    fig2->add_option("--n-max", n_max_curve, "last photon number");
    fig2->add_option("--q-list", q_list, "quality factors, one CSV each")->delimiter(',');
    fig2->add_option("-o,--output", fig2_out, "output file, or file prefix with --q-list");

    auto* sweep = app.add_subcommand("sweep", "feasibility summary over values of one config key");
    std::string sweep_key;
    std::vector<std::string> sweep_values;
    int sweep_target = 1;
    sweep->add_option("--param", sweep_key, "config key to vary")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")->required()->delimiter(',');
    sweep->add_option("--target-n", sweep_target, "target photon number")->check(CLI::NonNegativeNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return parse_error;
    }

    try {
        RunConfig cfg = config_path.empty() ? default_config() : parse_config(io::read_file(config_path));
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ParseError("--set expects key=value, got '" + kv + "'");
            set_config_value(cfg, sqcav::detail::trim(std::string_view(kv).substr(0, eq)),
                             sqcav::detail::trim(std::string_view(kv).substr(eq + 1)));
        }
        cfg.validate();

        if (*compile) {
            const auto spec = parse_target(target_text);
            const RabiRates rates = physics::derive(cfg.device, cfg.cavity).rates;
            TargetState resolved = TargetState::fock(0);
            const auto seq = compile_target(spec, rates, allow_idle, compile_n_max ? compile_n_max : cfg.n_max,
                                            resolved);
            const Ket reached = simulate_sequence(seq, Ket::ground_vacuum(seq.n_max));
            const double f = fidelity(reached, resolved.as_ket(seq.n_max));
            const std::string doc = io::dump_sequence(seq);
            const std::string path = compile_out.empty() ? cfg.output_path : compile_out;
            const std::string line = "fidelity " + io::format_double(f) + "\n";
            if (path.empty()) {
                out << doc;
                err << line;
            } else {
                io::write_file(path, doc);
                out << line;
            }
        } else if (*simulate) {
            const auto seq = io::parse_sequence(io::read_file(sequence_path));
            if (dissipative) {
                print_populations(out, lindblad::evolve_sequence(seq, channels_for(cfg)));
            } else {
                print_amplitudes(out, simulate_sequence(seq, Ket::ground_vacuum(seq.n_max)));
            }
        } else if (*feasibility) {
            const auto rep = physics::feasibility_report(cfg.device, cfg.cavity, target_n,
                                                         {margin ? *margin : cfg.margin});
            const std::string doc = io::report_json(rep, cfg.device, cfg.cavity).dump(2) + "\n";
            const std::string path = report_out.empty() ? cfg.output_path : report_out;
            if (path.empty()) out << doc;
            else io::write_file(path, doc);
        } else if (*fig2) {
            const auto derived = physics::derive(cfg.device, cfg.cavity);
            const std::string path = fig2_out.empty() ? cfg.output_path : fig2_out;
            if (q_list.empty()) {
                std::ostringstream csv;
                io::write_ratio_csv(csv, physics::fock_ratio_curve(derived, cfg.cavity, n_min, n_max_curve));
                if (path.empty()) out << csv.str();
                else io::write_file(path, csv.str());
            } else {
                const std::string prefix = path.empty() ? "fig2" : path;
                for (double q : q_list) {
                    auto cav = cfg.cavity;
                    cav.Q = q;
                    cav.validate();
                    std::ostringstream csv;
                    io::write_ratio_csv(csv, physics::fock_ratio_curve(derived, cav, n_min, n_max_curve));
                    const std::string file = prefix + "_Q" + io::format_double(q) + ".csv";
                    io::write_file(file, csv.str());
                    out << file << '\n';
                }
            }
        } else if (*sweep) {
            std::vector<std::future<std::string>> jobs;
            jobs.reserve(sweep_values.size());
            for (const auto& v : sweep_values) {
                jobs.push_back(std::async(std::launch::async, [&cfg, &sweep_key, v, sweep_target] {
                    RunConfig point = cfg;
                    set_config_value(point, sweep_key, v);
                    point.validate();
                    return sweep_row(v, physics::feasibility_report(point.device, point.cavity, sweep_target,
                                                                    {point.margin}));
                }));
            }
            std::string table = sweep_header();
            for (auto& j : jobs) table += j.get();
            out << table;
        }
        return ok;
    } catch (const PhaseUnreachable& e) {
        err << "error: " << e.what() << " (level " << e.level()
            << "); pass --allow-idle to insert free-evolution phase steps\n";
        return unreachable;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return parse_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return domain_error;
    } catch (const std::exception& e) {
        err << "unexpected failure: " << e.what() << '\n';
        return failure;
    }
}

} // namespace sqcav::cli

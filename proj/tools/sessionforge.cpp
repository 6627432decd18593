// sessionforge: command-line front end.
// Exit codes: 0 success, 1 negative verdict, 2 usage / parse / IO error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sessionforge/derivation_io.hpp"
#include "sessionforge/dynamics.hpp"
#include "sessionforge/harness.hpp"
#include "sessionforge/syntax.hpp"
#include "sessionforge/transform.hpp"

using namespace sf;
using nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool looks_like_json(const std::string& text) {
    auto i = text.find_first_not_of(" \t\r\n");
    return i != std::string::npos && text[i] == '{';
}

System system_arg(const std::string& s) {
    auto sys = parse_system(s);
    if (!sys) throw UsageError("unknown system '" + s + "' (expected ull, ullm, ill or cll)");
    return *sys;
}

Extension extension_of(bool mix) { return mix ? Extension::Mix : Extension::None; }

void retag_tree(Derivation& d, System s) {
    d.conclusion.system = s;
    for (auto& p : d.premises) retag_tree(p, s);
}

void emit(bool json, const ordered_json& j, const std::string& text) {
    if (json) std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

struct Options {
    bool json = false;
    bool mix = false;
};

int cmd_check(const Options& o, const std::string& system, const std::string& file) {
    std::string text = slurp(file);
    CheckerConfig cc = set_extension(extension_of(o.mix));
    if (looks_like_json(text)) {
        Derivation d = parse_derivation(text);
        if (!system.empty() && system_arg(system) != d.system())
            throw UsageError("derivation is a " + system_name(d.system()) + " derivation, not " + system);
        auto r = check_derivation(d, cc);
        ordered_json j{{"valid", r.ok}, {"judgment", print_judgment(d.conclusion)}};
        if (!r.ok) j["error"] = r.message();
        emit(o.json, j, r.ok ? "valid: " + print_judgment(d.conclusion) + "\n" : "invalid: " + r.message() + "\n");
        return r.ok ? 0 : 1;
    }
    Judgment g = parse_judgment(text, file);
    if (!system.empty()) g.system = system_arg(system);
    auto r = infer(g, {}, cc);
    bool ok = std::holds_alternative<Derivation>(r);
    ordered_json j{{"typable", ok}, {"judgment", print_judgment(g)}};
    std::string msg = ok ? "typable: " + print_judgment(g) + "\n" : "not typable: " + print_judgment(g) + "\n";
    if (auto* nf = std::get_if<NotFound>(&r)) {
        j["reason"] = nf->reason;
        msg += "  " + nf->reason + "\n";
    } else if (auto* ar = std::get_if<AnnotationRequired>(&r)) {
        j["reason"] = "annotation required on " + ar->restriction;
        msg += "  annotation required on " + ar->restriction + "\n";
    }
    emit(o.json, j, msg);
    return ok ? 0 : 1;
}

int cmd_infer(const Options& o, const std::string& system, const std::string& file, int max_depth, long max_steps,
              const std::string& universe, bool all) {
    Judgment g = parse_judgment(slurp(file), file);
    if (!system.empty()) g.system = system_arg(system);
    InferenceBudget b;
    b.max_depth = max_depth;
    b.max_steps = max_steps;
    if (!universe.empty()) {
        std::stringstream ss(universe);
        for (std::string t; std::getline(ss, t, ';');)
            if (t.find_first_not_of(' ') != std::string::npos) b.universe.push_back(parse_type(t, "--universe"));
    }
    CheckerConfig cc = set_extension(extension_of(o.mix));
    if (all) {
        auto ds = infer_every(g, b, cc);
        ordered_json arr = ordered_json::array();
        std::string text;
        for (const auto& d : ds) {
            arr.push_back(ordered_json::parse(print_derivation(d)));
            text += render_tree(d) + "\n";
        }
        emit(o.json, ordered_json{{"count", ds.size()}, {"derivations", arr}},
             std::to_string(ds.size()) + " derivation(s)\n" + text);
        return ds.empty() ? 1 : 0;
    }
    auto r = infer(g, b, cc);
    if (auto* d = std::get_if<Derivation>(&r)) {
        if (o.json) std::cout << print_derivation(*d);
        else std::cout << render_tree(*d);
        return 0;
    }
    if (auto* ar = std::get_if<AnnotationRequired>(&r)) {
        emit(o.json, ordered_json{{"error", "AnnotationRequired"}, {"restriction", ar->restriction}},
             "annotation required on restriction " + ar->restriction + "\n");
        return 1;
    }
    const auto& nf = std::get<NotFound>(r);
    emit(o.json,
         ordered_json{{"error", "NotFound"}, {"reason", nf.reason}, {"frontier", nf.frontier},
                      {"budget_exhausted", nf.budget_exhausted}},
         "no derivation: " + nf.reason + "\n  deepest goal: " + nf.frontier + "\n");
    return 1;
}

ordered_json step_json(const Step& s) {
    ordered_json pos = ordered_json::array();
    for (int i : s.label.position) pos.push_back(i);
    return {{"rule", step_rule_name(s.label.rule)},
            {"position", pos},
            {"preamble", s.label.preamble},
            {"result", print_process(s.result)}};
}

int cmd_reduce(const Options& o, const std::string& file, int steps, bool all_redexes) {
    Process p = parse_process(slurp(file), file);
    if (all_redexes) {
        auto ss = step(p, o.mix);
        ordered_json arr = ordered_json::array();
        std::string text;
        for (const auto& s : ss) {
            arr.push_back(step_json(s));
            text += step_rule_name(s.label.rule) + " @" + print_path(s.label.position) + ": " + print_process(s.result) + "\n";
        }
        emit(o.json, ordered_json{{"process", print_process(p)}, {"reducts", arr}},
             ss.empty() ? "irreducible\n" : text);
        return 0;
    }
    ordered_json trace = ordered_json::array();
    std::string text;
    int taken = 0;
    for (; taken < steps; ++taken) {
        auto ss = step(p, o.mix);
        if (ss.empty()) break;
        trace.push_back(step_json(ss[0]));
        text += step_rule_name(ss[0].label.rule) + ": " + print_process(ss[0].result) + "\n";
        p = ss[0].result;
    }
    emit(o.json, ordered_json{{"steps", taken}, {"trace", trace}, {"final", print_process(p)}},
         text + "final: " + print_process(p) + "\n");
    return 0;
}

int cmd_run(const Options& o, const std::string& file, int fuel, const std::string& trace_path) {
    Derivation d = parse_derivation(slurp(file));
    auto write_trace = [&](const std::string& jsonl) {
        if (trace_path.empty()) return;
        std::ofstream out(trace_path);
        if (!out) throw UsageError("cannot write " + trace_path);
        out << jsonl;
    };
    try {
        RunResult r = run_closed(d, fuel);
        write_trace(trace_jsonl(r));
        emit(o.json, ordered_json{{"terminal", print_process(r.terminal)}, {"steps", r.trace.size()}},
             "terminal: " + print_process(r.terminal) + " after " + std::to_string(r.trace.size()) + " step(s)\n");
        return 0;
    } catch (const FuelExhausted& e) {
        RunResult partial;
        partial.trace = e.trace;
        write_trace(trace_jsonl(partial));
        emit(o.json, ordered_json{{"error", "FuelExhausted"}, {"message", e.what()}}, std::string(e.what()) + "\n");
        return 1;
    } catch (const TypePreservationFailure& e) {
        emit(o.json, ordered_json{{"error", "TypePreservationFailure"}, {"message", e.what()}},
             std::string(e.what()) + "\n");
        return 1;
    }
}

int cmd_translate(const Options& o, const std::string& from, const std::string& to, const std::string& file) {
    System f = system_arg(from), t = system_arg(to);
    Derivation d = parse_derivation(slurp(file));
    if (d.system() != f)
        throw UsageError("derivation is a " + system_name(d.system()) + " derivation, not " + from);
    Derivation out;
    try {
        if (f == System::ULL && t == System::ULLM) {
            out = eliminate_nonstar(d);
        } else if (f == System::ULLM && t == System::ULL) {
            out = eliminate_moves(d);
        } else if (f == System::ULL && t == System::CLL) {
            out = to_classical(d);
        } else if (f == System::CLL && t == System::ULL) {
            out = to_united(d);
        } else if (f == System::ULL && t == System::ILL) {
            auto r = to_intuitionistic(d);
            if (auto* nf = std::get_if<NotInFragment>(&r)) {
                if (o.json) std::cout << report_json(nf->report);
                else std::cout << "not in the intuitionistic fragment: " << nf->report.reason << " at node "
                               << print_path(*nf->report.witness) << "\n";
                return 1;
            }
            out = std::get<Derivation>(r);
        } else {
            throw UsageError("unsupported translation " + from + " -> " + to +
                             " (supported: ull->ullm, ullm->ull, ull->cll, cll->ull, ull->ill)");
        }
    } catch (const MoveNotEliminable& e) {
        ordered_json names = ordered_json::array();
        for (const auto& n : e.endpoints) names.push_back(n);
        emit(o.json, ordered_json{{"error", "MoveNotEliminable"}, {"message", e.what()}, {"endpoints", names}},
             std::string("move not eliminable: ") + e.what() + "\n");
        return 1;
    }
    if (o.json) std::cout << print_derivation(out);
    else std::cout << render_tree(out);
    return 0;
}

int cmd_classify(const Options& o, const std::string& file) {
    Derivation d = parse_derivation(slurp(file));
    FragmentReport r = fragment_report(d);
    if (o.json) {
        std::cout << report_json(r);
    } else {
        std::cout << "max r-degree: " << r.max_r_degree << "\n";
        std::cout << "ILL member: " << (r.ill_member ? "yes" : "no") << "\n";
        if (r.witness) std::cout << "witness: node " << print_path(*r.witness) << " (" << r.reason << ")\n";
    }
    return r.ill_member ? 0 : 1;
}

int cmd_diagnose(const Options& o, const std::string& file) {
    Process p = parse_process(slurp(file), file);
    auto ds = locality_diagnose(p);
    ordered_json arr = ordered_json::array();
    std::string text;
    for (const auto& d : ds) {
        arr.push_back({{"kind", diagnostic_kind_name(d.kind)}, {"name", d.name}, {"message", d.message}});
        text += diagnostic_kind_name(d.kind) + " on " + d.name + ": " + d.message + "\n";
    }
    emit(o.json, ordered_json{{"diagnostics", arr}}, ds.empty() ? "no locality diagnostics\n" : text);
    return ds.empty() ? 0 : 1;
}

int cmd_fuzz(const Options& o, const std::string& suite, std::size_t cases, std::uint64_t seed, int depth,
             int type_depth, const std::string& system, std::size_t coverage) {
    if (const char* env = std::getenv("SESSIONFORGE_SEED")) {
        try {
            seed = std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("SESSIONFORGE_SEED is not an integer: ") + env);
        }
    }
    GenConfig cfg;
    cfg.seed = seed;
    cfg.max_depth = depth;
    cfg.type_depth = type_depth;
    cfg.mix = o.mix;
    if (!system.empty()) cfg.system = system_arg(system);
    std::vector<std::string> suites;
    if (suite == "all") {
        suites = property_names();
    } else {
        const auto& names = property_names();
        if (std::find(names.begin(), names.end(), suite) == names.end())
            throw UsageError("unknown suite '" + suite + "'");
        suites = {suite};
    }
    bool ok = true;
    ordered_json arr = ordered_json::array();
    for (const auto& s : suites) {
        PropertyReport r = run_property(s, cfg, cases);
        ok = ok && r.ok();
        if (o.json) {
            arr.push_back(ordered_json::parse(r.json()));
        } else {
            std::cout << (r.ok() ? "PASS " : "FAIL ") << s << ": " << r.cases << " cases, " << r.failures.size()
                      << " failure(s), " << static_cast<long>(r.wall_ms) << " ms\n";
            for (std::size_t i = 0; i < r.failures.size() && i < 3; ++i)
                std::cout << "  seed " << r.failures[i].seed << ": " << r.failures[i].message << "\n"
                          << r.failures[i].counterexample << "\n";
        }
        std::cerr << "[fuzz] " << s << " seed=" << seed << " done\n";
    }
    std::vector<std::string> holes;
    if (coverage > 0) {
        holes = coverage_holes(cfg, coverage);
        ok = ok && holes.empty();
        if (!o.json) {
            std::cout << (holes.empty() ? "PASS" : "FAIL") << " coverage: " << coverage << " samples of "
                      << system_name(cfg.system);
            for (const auto& h : holes) std::cout << (h == holes.front() ? ", missing " : " ") << h;
            std::cout << "\n";
        }
    }
    if (o.json) {
        ordered_json j{{"seed", seed}, {"reports", arr}};
        if (coverage > 0) j["coverage_holes"] = holes;
        std::cout << j.dump(2) << "\n";
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sessionforge: session-typed pi-calculus toolkit (ULL, ULLM, ILL, CLL)"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json", o.json, "machine-readable output on stdout");
    app.add_flag("--mix", o.mix, "enable the mix / empty extension");

    std::string system, file, from, to, trace_path, universe, suite = "all";
    int steps = 1, fuel = 1000, max_depth = 64, depth = 4, type_depth = 2;
    long max_steps = 200000;
    bool all_redexes = false, all = false;
    std::size_t cases = 100, coverage = 10000;
    std::uint64_t seed = 1;

    auto* check = app.add_subcommand("check", "validate a derivation, or type a judgment by inference");
    check->add_option("--system", system, "ull | ullm | ill | cll");
    check->add_option("file", file, "derivation (deriv-v1 JSON) or judgment file")->required();

    auto* inf = app.add_subcommand("infer", "search for a derivation of a judgment");
    inf->add_option("--system", system, "ull | ullm | ill | cll");
    inf->add_option("--max-depth", max_depth, "search depth bound");
    inf->add_option("--max-steps", max_steps, "search node budget");
    inf->add_option("--universe", universe, "cut types, separated by ';'");
    inf->add_flag("--all", all, "every derivation (distinct trees)");
    inf->add_option("file", file, "judgment file")->required();

    auto* red = app.add_subcommand("reduce", "one-step reduction");
    red->add_option("--steps", steps, "number of steps, first reduct each time");
    red->add_flag("--all-redexes", all_redexes, "list every one-step reduct");
    red->add_option("file", file, "process file")->required();

    auto* run = app.add_subcommand("run", "run a closed derivation to a terminal process");
    run->add_option("--fuel", fuel, "maximum number of steps");
    run->add_option("--trace", trace_path, "write the trace as JSON lines");
    run->add_option("file", file, "derivation file")->required();

    auto* tr = app.add_subcommand("translate", "translate a derivation between systems");
    tr->add_option("--from", from, "source system")->required();
    tr->add_option("--to", to, "target system")->required();
    tr->add_option("file", file, "derivation file")->required();

    auto* cls = app.add_subcommand("classify", "r-degree and intuitionistic fragment membership");
    cls->add_option("file", file, "derivation file")->required();

    auto* diag = app.add_subcommand("diagnose", "locality diagnostics");
    diag->add_option("file", file, "process file")->required();

    auto* fz = app.add_subcommand("fuzz", "run property suites");
    fz->add_option("--suite", suite, "suite name or 'all'");
    fz->add_option("--cases", cases, "cases per suite");
    fz->add_option("--seed", seed, "seed (SESSIONFORGE_SEED overrides)");
    fz->add_option("--depth", depth, "derivation depth")->check(CLI::PositiveNumber);
    fz->add_option("--type-depth", type_depth, "type depth")->check(CLI::PositiveNumber);
    fz->add_option("--system", system, "system for system-generic suites");
    fz->add_option("--coverage", coverage, "generator samples checked for unused rules (0 = skip)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*check) return cmd_check(o, system, file);
        if (*inf) return cmd_infer(o, system, file, max_depth, max_steps, universe, all);
        if (*red) return cmd_reduce(o, file, steps, all_redexes);
        if (*run) return cmd_run(o, file, fuel, trace_path);
        if (*tr) return cmd_translate(o, from, to, file);
        if (*cls) return cmd_classify(o, file);
        if (*diag) return cmd_diagnose(o, file);
        if (*fz) return cmd_fuzz(o, suite, cases, seed, depth, type_depth, system, coverage);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SyntaxError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const DerivationFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MalformedDerivation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "morseq/borel.hpp"
#include "morseq/complex_builders.hpp"
#include "morseq/errors.hpp"
#include "morseq/flow_verifier.hpp"
#include "morseq/gluing.hpp"
#include "morseq/report.hpp"

namespace {

using namespace morseq;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Output {
    std::string format = "json";

    void emit(const Json& report, const std::string& text) const {
        if (format == "json")
            std::cout << report.dump(2) << "\n";
        else
            std::cout << text;
    }
};

std::string style(const std::string& s, const char* code) {
    if (color_disabled()) return s;
    return std::string("\033[") + code + "m" + s + "\033[0m";
}

std::string pass_fail(bool ok) { return ok ? style("pass", "32") : style("FAIL", "31"); }

// Builtin name or a path to an instance file.
MorseInstance resolve_source(const std::string& src) {
    for (const auto& name : builtin_names())
        if (name == src) return builtin_instance(name);
    if (!std::filesystem::exists(src))
        throw CLI::ValidationError("source", "'" + src + "' is neither a builtin nor a file");
    return load_instance(src);
}

std::string echo_command(int argc, char** argv) {
    std::ostringstream out;
    for (int i = 1; i < argc; ++i) out << (i > 1 ? " " : "") << argv[i];
    return out.str();
}

int run_list(const Output& out) {
    Json report = report_envelope("list", "");
    report["builtins"] = builtin_names();
    report["exit"] = kExitOk;
    std::ostringstream text;
    text << "builtin datasets:\n";
    for (const auto& name : builtin_names()) text << "  " << name << "\n";
    out.emit(report, text.str());
    return kExitOk;
}

int run_validate(const Output& out, const std::string& command, const std::string& src) {
    MorseInstance inst;
    Json report = report_envelope(command, src);
    std::ostringstream text;
    try {
        inst = resolve_source(src);
    } catch (const ParseError& e) {
        report["instance"] = src;
        report["validation"] = {{"valid", false}, {"issues", Json::array({e.what()})}};
        report["exit"] = kExitFailure;
        out.emit(report, std::string("parse error: ") + e.what() + "\n");
        return kExitFailure;
    } catch (const ValidationError& e) {
        report["validation"] = {{"valid", false}, {"issues", Json::array({e.what()})}};
        report["exit"] = kExitFailure;
        out.emit(report, std::string("invalid: ") + e.what() + "\n");
        return kExitFailure;
    }
    auto issues = validate(inst);
    report["instance"] = inst.name;
    report["validation"] = json_validation(issues);
    report["exit"] = issues.empty() ? kExitOk : kExitFailure;
    text << "instance '" << inst.name << "': " << pass_fail(issues.empty()) << "\n";
    for (const auto& issue : issues)
        text << "  [" << issue.record_id << "] " << issue.message << "\n";
    out.emit(report, text.str());
    return issues.empty() ? kExitOk : kExitFailure;
}

int run_complex(const Output& out, const std::string& command, const std::string& src,
                const std::string& variant_name, bool with_homology) {
    MorseInstance inst = resolve_source(src);
    ComplexVariant variant = variant_from_string(variant_name);
    GradedComplex c = build(inst, variant);
    Json report = report_envelope(command, inst.name);
    report["complexes"] = Json::array();
    Json entry;
    entry["variant"] = variant_name;
    Json body = json_complex(c, with_homology);
    for (auto& [key, value] : body.items()) entry[key] = value;
    report["complexes"].push_back(entry);
    bool ok = verify_boundary_squared(c).ok;
    report["exit"] = ok ? kExitOk : kExitFailure;

    std::ostringstream text;
    text << inst.name << " / " << variant_name << ": d^2 " << pass_fail(ok) << "\n";
    for (int k = c.min_degree; k <= c.max_degree; ++k) {
        text << "  degree " << k << ":";
        for (const auto& label : c.labels(k)) text << " " << label;
        text << "\n";
    }
    if (with_homology && ok) text << "homology:\n" << render_text_homology(homology(c));
    out.emit(report, text.str());
    return ok ? kExitOk : kExitFailure;
}

int run_borel(const Output& out, const std::string& command, const std::string& src, int kmax,
              std::optional<int> imax) {
    MorseInstance inst = resolve_source(src);
    GradedComplex bold = build(inst, ComplexVariant::bold);
    Involution action = g_action(inst);
    auto groups = borel_homology(bold, action, kmax,
                                 imax ? std::optional<int>(*imax) : std::nullopt);
    Json report = report_envelope(command, inst.name);
    report["kmax"] = kmax;
    report["imax"] = imax ? *imax : kmax + 1;
    report["resolution_check"] = resolution_check().ok;
    report["borel"] = json_homology_table(groups);
    report["exit"] = kExitOk;
    std::ostringstream text;
    text << "Borel equivariant homology of " << inst.name << " (k <= " << kmax << "):\n"
         << render_text_homology(groups);
    out.emit(report, text.str());
    return kExitOk;
}

int run_glue_check(const Output& out, const std::string& command, const std::string& src,
                   const std::vector<std::string>& pair) {
    MorseInstance inst = resolve_source(src);
    GradedComplex glued = differential_from_gluing(inst);
    Json report = report_envelope(command, inst.name);
    bool ok = true;
    std::ostringstream text;

    if (inst.kind != InstanceKind::generalized) {
        GradedComplex bold = build(inst, ComplexVariant::bold);
        bool same = bold.min_degree == glued.min_degree && bold.max_degree == glued.max_degree;
        for (int k = bold.min_degree; same && k <= bold.max_degree; ++k)
            same = bold.labels(k) == glued.labels(k) &&
                   bold.differential(k) == glued.differential(k);
        report["matches_bold"] = same;
        text << "gluing differential equals bold differential: " << pass_fail(same) << "\n";
        ok = ok && same;
    }

    GeneratorTable table = generator_table(inst);
    Json pairs = Json::array();
    if (!pair.empty()) {
        const std::string& start = pair[0];
        const std::string& end = pair[1];
        Generator s = resolve_generator(inst, start);
        Generator e = resolve_generator(inst, end);
        int gap = generator_grading(inst, s) - generator_grading(inst, e);
        Json entry;
        entry["start"] = start;
        entry["end"] = end;
        entry["gap"] = gap;
        entry["chains"] = Json::array();
        for (const auto& bt : enumerate_broken(inst, start, end, gap)) {
            GluingVerdict v = verdict(inst, bt);
            Json chain;
            chain["pieces"] = bt.pieces;
            chain["gluable"] = v.gluable;
            if (v.sign) chain["sign"] = static_cast<long long>(v.sign->get_si());
            entry["chains"].push_back(chain);
        }
        Int total = boundary_count(inst, start, end);
        entry["signed_count"] = static_cast<long long>(total.get_si());
        pairs.push_back(entry);
        text << start << " -> " << end << ": signed gluable count "
             << total.get_str() << "\n";
        if (gap == 2 && total != 0) ok = false;
    } else {
        // Every grading-gap-2 pair: matrix square entry vs chain count.
        for (size_t si = 0; si < table.generators.size(); ++si) {
            for (size_t ei = 0; ei < table.generators.size(); ++ei) {
                const Generator& s = table.generators[si];
                const Generator& e = table.generators[ei];
                if (table.gradings[si] - table.gradings[ei] != 2) continue;
                Int chains = boundary_count(inst, s.label(), e.label());
                int k = table.gradings[si];
                IntMatrix square = glued.differential(k - 1) * glued.differential(k);
                Index col = -1, row = -1;
                const auto& src_labels = glued.labels(k);
                const auto& tgt_labels = glued.labels(k - 2);
                for (Index j = 0; j < static_cast<Index>(src_labels.size()); ++j)
                    if (src_labels[static_cast<size_t>(j)] == s.label()) col = j;
                for (Index i = 0; i < static_cast<Index>(tgt_labels.size()); ++i)
                    if (tgt_labels[static_cast<size_t>(i)] == e.label()) row = i;
                Int matrix_entry = (row >= 0 && col >= 0) ? square(row, col) : Int(0);
                bool agree = matrix_entry == chains && chains == 0;
                ok = ok && agree;
                Json entry;
                entry["start"] = s.label();
                entry["end"] = e.label();
                entry["matrix_entry"] = static_cast<long long>(matrix_entry.get_si());
                entry["chain_count"] = static_cast<long long>(chains.get_si());
                entry["agree"] = agree;
                pairs.push_back(entry);
                if (!agree)
                    text << "  " << s.label() << " -> " << e.label() << ": matrix "
                         << matrix_entry.get_str() << " vs chains " << chains.get_str() << "\n";
            }
        }
        text << "d^2 matrix entries vs gluable chain counts: " << pass_fail(ok) << "\n";
    }
    report["pairs"] = pairs;
    report["agreement"] = ok;
    report["exit"] = ok ? kExitOk : kExitFailure;
    out.emit(report, text.str());
    return ok ? kExitOk : kExitFailure;
}

int run_flow_verify(const Output& out, const std::string& command, const std::string& src,
                    double step, int samples, double arrival_eps) {
    if (src != "torus") throw CLI::ValidationError("flow-verify", "only the torus has a chart");
    MorseInstance inst = builtin_instance("torus");
    TorusChart chart;
    FlowParams params;
    params.step = step;
    params.samples = samples;
    params.arrival_eps = arrival_eps;
    FlowVerifyReport result = verify_against(inst, chart, params);

    Json report = report_envelope(command, inst.name);
    report["counts"] = Json::object();
    for (const auto& [pair, count] : result.counts_by_pair)
        report["counts"][pair] = count;
    report["max_energy_increase"] = result.result.max_energy_increase;
    report["match"] = result.ok;
    Json mismatches = Json::array();
    for (const auto& m : result.mismatches) mismatches.push_back(m.what);
    report["mismatches"] = mismatches;
    report["exit"] = result.ok ? kExitOk : kExitFailure;

    std::ostringstream text;
    text << "flow verification against the torus dataset: " << pass_fail(result.ok) << "\n";
    for (const auto& [pair, count] : result.counts_by_pair)
        text << "  " << pair << ": " << count << " trajectories\n";
    for (const auto& m : result.mismatches) text << "  mismatch: " << m.what << "\n";
    out.emit(report, text.str());
    return result.ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact chain complexes from equivariant Morse flow data"};
    app.require_subcommand(1);
    app.fallthrough();
    Output out;
    app.add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    auto* list_cmd = app.add_subcommand("list", "enumerate builtin datasets");

    std::string src;
    auto* validate_cmd = app.add_subcommand("validate", "validate an instance");
    validate_cmd->add_option("source", src, "builtin name or file path")->required();

    std::string variant = "bold";
    bool with_homology = false;
    auto* complex_cmd = app.add_subcommand("complex", "build a chain complex");
    complex_cmd->add_option("source", src, "builtin name or file path")->required();
    complex_cmd->add_option("--variant", variant, "complex variant")
        ->check(CLI::IsMember({"bar", "check-km", "hat-km", "check-stab", "hat-stab", "bold",
                               "generalized"}))
        ->capture_default_str();
    complex_cmd->add_flag("--homology", with_homology, "also compute homology");

    int kmax = 5;
    int imax_flag = -1;
    auto* borel_cmd = app.add_subcommand("borel", "Borel equivariant homology");
    borel_cmd->add_option("source", src, "builtin name or file path")->required();
    borel_cmd->add_option("--kmax", kmax, "top degree")->capture_default_str();
    borel_cmd->add_option("--imax", imax_flag, "column truncation (default kmax + 1)");

    std::vector<std::string> pair;
    auto* glue_cmd = app.add_subcommand("glue-check", "broken-trajectory cross checks");
    glue_cmd->add_option("source", src, "builtin name or file path")->required();
    glue_cmd->add_option("--pair", pair, "start and end generator labels")->expected(2);

    double step = 1e-3, arrival_eps = 1e-5;
    int samples = 720;
    auto* flow_cmd = app.add_subcommand("flow-verify", "numerical torus cross-validation");
    flow_cmd->add_option("source", src, "must be 'torus'")->required();
    flow_cmd->add_option("--step", step, "RK4 step")->capture_default_str();
    flow_cmd->add_option("--samples", samples, "descending-sphere samples")->capture_default_str();
    flow_cmd->add_option("--arrival-eps", arrival_eps, "convergence threshold")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::string command = echo_command(argc, argv);
    try {
        if (list_cmd->parsed()) return run_list(out);
        if (validate_cmd->parsed()) return run_validate(out, command, src);
        if (complex_cmd->parsed())
            return run_complex(out, command, src, variant, with_homology);
        if (borel_cmd->parsed())
            return run_borel(out, command, src, kmax,
                             imax_flag >= 0 ? std::optional<int>(imax_flag) : std::nullopt);
        if (glue_cmd->parsed()) return run_glue_check(out, command, src, pair);
        if (flow_cmd->parsed())
            return run_flow_verify(out, command, src, step, samples, arrival_eps);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const UnknownName& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

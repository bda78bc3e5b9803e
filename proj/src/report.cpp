#include "morseq/report.hpp"

#include <unistd.h>

#include <cstdlib>
#include <sstream>

#include "morseq/errors.hpp"

namespace morseq {

namespace {

long long as_int64(const Int& v) {
    if (!v.fits_slong_p()) throw Error("report: entry exceeds 64 bits");
    return v.get_si();
}

}  // namespace

Json json_homology_group(const HomologyGroup& group) {
    Json g;
    g["betti"] = group.betti;
    g["torsion"] = Json::array();
    for (const Int& t : group.torsion) g["torsion"].push_back(as_int64(t));
    return g;
}

Json json_homology_table(const std::map<int, HomologyGroup>& table) {
    Json out = Json::object();
    for (const auto& [degree, group] : table)
        out[std::to_string(degree)] = json_homology_group(group);
    return out;
}

Json json_complex(const GradedComplex& c, bool with_homology) {
    Json out;
    out["degrees"] = {{"min", c.min_degree}, {"max", c.max_degree}};
    Json gens = Json::object();
    Json diffs = Json::object();
    for (int k = c.min_degree; k <= c.max_degree; ++k) {
        gens[std::to_string(k)] = c.labels(k);
        IntMatrix d = c.differential(k);
        Json rows = Json::array();
        for (Index i = 0; i < d.rows(); ++i) {
            Json row = Json::array();
            for (Index j = 0; j < d.cols(); ++j) row.push_back(as_int64(d(i, j)));
            rows.push_back(row);
        }
        diffs[std::to_string(k)] = rows;
    }
    out["generators"] = gens;
    out["differentials"] = diffs;
    BoundarySquaredReport square = verify_boundary_squared(c);
    Json dsq;
    dsq["ok"] = square.ok;
    dsq["violations"] = Json::array();
    for (const auto& v : square.violations)
        dsq["violations"].push_back({{"degree", v.degree},
                                     {"row", v.row},
                                     {"col", v.col},
                                     {"value", as_int64(v.value)}});
    out["d_squared"] = dsq;
    if (with_homology && square.ok) out["homology"] = json_homology_table(homology(c));
    return out;
}

Json json_validation(const std::vector<ValidationIssue>& issues) {
    Json out;
    out["valid"] = issues.empty();
    out["issues"] = Json::array();
    for (const auto& issue : issues)
        out["issues"].push_back({{"id", issue.record_id}, {"message", issue.message}});
    return out;
}

Json report_envelope(const std::string& command, const std::string& instance) {
    Json out;
    out["version"] = "1";
    out["command"] = command;
    out["instance"] = instance;
    return out;
}

std::string render_text_homology(const std::map<int, HomologyGroup>& table) {
    std::ostringstream out;
    for (const auto& [degree, group] : table)
        out << "  H_" << degree << " = " << group.to_string() << "\n";
    return out.str();
}

bool color_disabled() {
    if (std::getenv("MORSEQ_NO_COLOR")) return true;
    return isatty(fileno(stdout)) == 0;
}

}  // namespace morseq

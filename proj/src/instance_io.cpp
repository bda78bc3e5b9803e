#include <fstream>
#include <sstream>

#include "json.hpp"
#include "morseq/errors.hpp"
#include "morseq/morse_instance.hpp"

namespace morseq {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            bad(where, "unknown field '" + it.key() + "'");
    }
}

std::string require_string(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) bad(where, "missing field '" + key + "'");
    if (!obj[key].is_string()) bad(where + "." + key, "expected a string");
    return obj[key].get<std::string>();
}

int require_int(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) bad(where, "missing field '" + key + "'");
    if (!obj[key].is_number_integer()) bad(where + "." + key, "expected an integer");
    return obj[key].get<int>();
}

// Signs must be the literal integers 1 or -1.
int require_sign(const json& obj, const std::string& key, const std::string& where) {
    int v = require_int(obj, key, where);
    if (v != 1 && v != -1) bad(where + "." + key, "expected literal 1 or -1");
    return v;
}

InstanceKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "closed-equivariant") return InstanceKind::closed_equivariant;
    if (s == "boundary-double") return InstanceKind::boundary_double;
    if (s == "generalized") return InstanceKind::generalized;
    bad(where, "unknown kind '" + s + "'");
}

CriticalPoint parse_point(const json& obj, InstanceKind kind, const std::string& where) {
    if (!obj.is_object()) bad(where, "expected an object");
    reject_unknown(obj, {"id", "index", "locus", "stability", "phi", "sigma", "grading"}, where);
    CriticalPoint p;
    p.id = require_string(obj, "id", where);
    p.index = require_int(obj, "index", where);
    std::string locus = require_string(obj, "locus", where);
    if (locus == "interior") p.locus = Locus::interior;
    else if (locus == "fixed") p.locus = Locus::fixed;
    else bad(where + ".locus", "expected 'interior' or 'fixed'");
    if (obj.contains("stability")) {
        std::string s = require_string(obj, "stability", where);
        if (s == "stable") p.stability = Stability::stable;
        else if (s == "unstable") p.stability = Stability::unstable;
        else bad(where + ".stability", "expected 'stable' or 'unstable'");
    }
    p.phi = require_string(obj, "phi", where);
    p.sigma = require_sign(obj, "sigma", where);
    if (obj.contains("grading")) {
        if (kind != InstanceKind::generalized)
            bad(where + ".grading", "grading is for generalized instances only");
        p.grading = require_int(obj, "grading", where);
    }
    return p;
}

TrajectoryRecord parse_trajectory(const json& obj, InstanceKind kind, const std::string& where) {
    if (!obj.is_object()) bad(where, "expected an object");
    reject_unknown(obj, {"id", "from", "to", "carrier", "sign", "depart", "arrive", "xi", "axis"},
                   where);
    TrajectoryRecord t;
    t.id = require_string(obj, "id", where);
    t.from = require_string(obj, "from", where);
    t.to = require_string(obj, "to", where);
    std::string carrier = require_string(obj, "carrier", where);
    if (carrier == "ambient") t.carrier = Carrier::ambient;
    else if (carrier == "fixed") t.carrier = Carrier::fixed;
    else bad(where + ".carrier", "expected 'ambient' or 'fixed'");
    t.sign = require_sign(obj, "sign", where);
    if (obj.contains("depart")) t.depart = require_sign(obj, "depart", where);
    if (obj.contains("arrive")) t.arrive = require_sign(obj, "arrive", where);
    if (obj.contains("xi")) {
        std::string xi = require_string(obj, "xi", where);
        if (xi == "P") t.xi = XiClass::P;
        else if (xi == "R") t.xi = XiClass::R;
        else bad(where + ".xi", "expected 'P' or 'R'");
    }
    if (obj.contains("axis")) {
        if (kind != InstanceKind::generalized)
            bad(where + ".axis", "axis tags are for generalized instances only");
        t.axis = require_string(obj, "axis", where);
    }
    return t;
}

}  // namespace

MorseInstance parse_instance(std::istream& in, const std::string& source_name) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source_name + ": " + e.what());
    }
    if (!doc.is_object()) bad(source_name, "expected a top-level object");
    reject_unknown(doc, {"name", "kind", "points", "trajectories"}, source_name);

    MorseInstance inst;
    inst.name = require_string(doc, "name", source_name);
    inst.kind = parse_kind(require_string(doc, "kind", source_name), source_name + ".kind");
    if (!doc.contains("points") || !doc["points"].is_array())
        bad(source_name, "missing 'points' array");
    if (!doc.contains("trajectories") || !doc["trajectories"].is_array())
        bad(source_name, "missing 'trajectories' array");
    size_t i = 0;
    for (const auto& p : doc["points"])
        inst.points.push_back(
            parse_point(p, inst.kind, source_name + ".points[" + std::to_string(i++) + "]"));
    i = 0;
    for (const auto& t : doc["trajectories"])
        inst.trajectories.push_back(parse_trajectory(
            t, inst.kind, source_name + ".trajectories[" + std::to_string(i++) + "]"));

    auto issues = validate(inst);
    if (!issues.empty()) {
        std::ostringstream msg;
        msg << source_name << ": instance invalid:";
        for (const auto& issue : issues)
            msg << "\n  [" << issue.record_id << "] " << issue.message;
        throw ValidationError(msg.str());
    }
    return inst;
}

MorseInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse_instance(in, path);
}

std::string instance_to_json(const MorseInstance& inst) {
    json doc;
    doc["name"] = inst.name;
    doc["kind"] = to_string(inst.kind);
    doc["points"] = json::array();
    for (const auto& p : inst.points) {
        json obj;
        obj["id"] = p.id;
        obj["index"] = p.index;
        obj["locus"] = p.locus == Locus::interior ? "interior" : "fixed";
        if (p.stability)
            obj["stability"] = *p.stability == Stability::stable ? "stable" : "unstable";
        obj["phi"] = p.phi;
        obj["sigma"] = p.sigma;
        if (p.grading) obj["grading"] = *p.grading;
        doc["points"].push_back(obj);
    }
    doc["trajectories"] = json::array();
    for (const auto& t : inst.trajectories) {
        json obj;
        obj["id"] = t.id;
        obj["from"] = t.from;
        obj["to"] = t.to;
        obj["carrier"] = t.carrier == Carrier::ambient ? "ambient" : "fixed";
        obj["sign"] = t.sign;
        if (t.depart) obj["depart"] = *t.depart;
        if (t.arrive) obj["arrive"] = *t.arrive;
        if (t.xi) obj["xi"] = *t.xi == XiClass::P ? "P" : "R";
        if (t.axis) obj["axis"] = *t.axis;
        doc["trajectories"].push_back(obj);
    }
    return doc.dump(2) + "\n";
}

void save_instance(const MorseInstance& inst, const std::string& path) {
    auto issues = validate(inst);
    if (!issues.empty())
        throw ValidationError("save_instance: refusing to write an invalid instance");
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << instance_to_json(inst);
}

}  // namespace morseq

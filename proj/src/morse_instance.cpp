#include "morseq/morse_instance.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "morseq/errors.hpp"

namespace morseq {

std::string to_string(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::closed_equivariant: return "closed-equivariant";
        case InstanceKind::boundary_double: return "boundary-double";
        case InstanceKind::generalized: return "generalized";
    }
    return "?";
}

const CriticalPoint* MorseInstance::find_point(const std::string& id) const {
    for (const auto& p : points)
        if (p.id == id) return &p;
    return nullptr;
}

const CriticalPoint& MorseInstance::point(const std::string& id) const {
    const CriticalPoint* p = find_point(id);
    if (!p) throw UnknownGenerator("no critical point '" + id + "'");
    return *p;
}

const TrajectoryRecord* MorseInstance::find_trajectory(const std::string& id) const {
    for (const auto& t : trajectories)
        if (t.id == id) return &t;
    return nullptr;
}

int MorseInstance::plain_grading(const CriticalPoint& p) const {
    if (kind == InstanceKind::generalized) return p.grading.value_or(p.index);
    return p.unstable() ? p.index - 1 : p.index;
}

int MorseInstance::index_drop(const TrajectoryRecord& t) const {
    if (t.degenerate()) return 0;
    return point(t.from).index - point(t.to).index;
}

namespace {

int boundary_index(const CriticalPoint& p) { return p.unstable() ? p.index - 1 : p.index; }

bool is_pm(int v) { return v == 1 || v == -1; }

void check_point(const MorseInstance& inst, const CriticalPoint& p,
                 std::vector<ValidationIssue>& issues) {
    auto issue = [&](const std::string& msg) { issues.push_back({p.id, msg}); };
    const CriticalPoint* image = inst.find_point(p.phi);
    if (!image) {
        issue("phi image '" + p.phi + "' does not resolve");
        return;
    }
    if (image->phi != p.id) issue("phi is not an involution at '" + p.id + "'");
    if (image->index != p.index) issue("phi image has a different index");
    if ((p.phi == p.id) != p.fixed_locus())
        issue("fixed points must be exactly the phi-fixed ids");
    if (p.fixed_locus() != p.stability.has_value())
        issue("stability must be present exactly at fixed-locus points");
    if (!is_pm(p.sigma)) issue("sigma must be +1 or -1");
    if (inst.kind != InstanceKind::generalized && p.fixed_locus()) {
        // d(phi) is the identity on the fixed locus and flips its normal
        // line, so the orientation sign at a fixed point is determined.
        if (p.stable() && p.sigma != 1) issue("stable fixed points carry sigma = +1");
        if (p.unstable() && p.sigma != -1) issue("unstable fixed points carry sigma = -1");
    }
    if ((inst.kind == InstanceKind::generalized) != p.grading.has_value())
        issue("grading is for generalized instances only");
    if (p.index < 0) issue("negative Morse index");
}

std::set<std::string> axes_of(const MorseInstance& inst) {
    std::set<std::string> axes;
    for (const auto& t : inst.trajectories)
        if (t.axis) axes.insert(*t.axis);
    return axes;
}

std::string other_axis(const std::set<std::string>& axes, const std::string& axis) {
    if (axes.size() != 2) return axis;
    for (const auto& a : axes)
        if (a != axis) return a;
    return axis;
}

}  // namespace

/// Carrier plane of a fixed record: for generalized instances with two axes,
/// the side labels live on the transverse axis, so the plane is the other one.
std::string record_plane(const MorseInstance& inst, const TrajectoryRecord& t) {
    if (inst.kind != InstanceKind::generalized) return "";
    if (!t.axis) return "";
    auto axes = axes_of(inst);
    if (t.depart || t.arrive) return other_axis(axes, *t.axis);
    return *t.axis;
}

std::optional<std::string> decoration_axis(const MorseInstance& inst, const std::string& point_id) {
    const CriticalPoint& p = inst.point(point_id);
    if (!p.unstable()) return std::nullopt;
    if (inst.kind != InstanceKind::generalized) return std::string("");
    std::set<std::string> candidates;
    for (const auto& t : inst.trajectories) {
        if (t.degenerate()) {
            if (t.from == point_id && t.axis) candidates.insert(*t.axis);
            continue;
        }
        if (t.to == point_id && t.carrier == Carrier::fixed && inst.index_drop(t) == 0)
            candidates.insert(record_plane(inst, t));
    }
    if (candidates.size() == 1) return *candidates.begin();
    return std::nullopt;
}

namespace {

void check_record_reflection(const MorseInstance& inst, const TrajectoryRecord& t,
                             std::vector<ValidationIssue>& issues) {
    auto issue = [&](const std::string& msg) { issues.push_back({t.id, msg}); };
    const CriticalPoint& from = inst.point(t.from);
    const CriticalPoint& to = inst.point(t.to);
    if (t.degenerate()) {
        issue("degenerate records are for generalized instances only");
        return;
    }
    if (t.axis) issue("axis tags are for generalized instances only");
    if (t.carrier == Carrier::ambient) {
        if (from.index - to.index != 1) issue("ambient record must drop the index by 1");
        if (from.stable()) issue("ambient record cannot leave a stable fixed point");
        if (to.unstable()) issue("ambient record cannot end at an unstable fixed point");
        if (t.depart.has_value() != (from.fixed_locus() && from.unstable()))
            issue("departure side present iff the source is an unstable fixed point");
        if (t.arrive.has_value() != (to.fixed_locus() && to.stable()))
            issue("arrival side present iff the target is a stable fixed point");
        if (t.xi) issue("xi class only applies to fixed-locus records");
    } else {
        if (!from.fixed_locus() || !to.fixed_locus())
            issue("fixed record endpoints must lie in the fixed locus");
        else if (boundary_index(from) - boundary_index(to) != 1)
            issue("fixed record must drop the boundary index by 1");
        if (t.depart || t.arrive) issue("fixed records carry no side labels");
        if (t.xi.has_value() != to.unstable())
            issue("xi class present iff the fixed record ends at an unstable point");
    }
}

void check_record_generalized(const MorseInstance& inst, const TrajectoryRecord& t,
                              std::vector<ValidationIssue>& issues) {
    auto issue = [&](const std::string& msg) { issues.push_back({t.id, msg}); };
    const CriticalPoint& from = inst.point(t.from);
    const CriticalPoint& to = inst.point(t.to);
    if (t.degenerate()) {
        if (!t.depart) issue("degenerate record needs a departure side to name its generator");
        if (!t.axis) issue("degenerate record needs an axis tag");
        if (t.arrive || t.xi) issue("degenerate record carries only a departure side");
        if (!from.unstable()) issue("degenerate record requires a decorated (unstable) point");
        return;
    }
    if ((t.depart || t.arrive || t.xi) && !t.axis) issue("side or xi data needs an axis tag");
    if (t.carrier == Carrier::ambient) {
        if (from.index - to.index != 1) issue("ambient record must drop the index by 1");
        if (t.xi) issue("xi class only applies to fixed records");
    } else {
        int drop = from.index - to.index;
        if (drop < 0 || drop > 2) issue("fixed record index drop out of range");
        if (drop == 0 && !t.xi) issue("index-drop-0 record needs an xi class");
    }
    if (t.depart) {
        if (!from.unstable()) issue("departure side requires a decorated source point");
        else {
            auto axis = decoration_axis(inst, t.from);
            if (axis && t.axis && *axis != *t.axis)
                issue("departure side axis differs from the source decoration axis");
        }
    }
}

// o(phi gamma) = sigma(phi, p) sigma(phi, q) o(gamma) for ambient records:
// grouped by (endpoints, sides), the mirrored group must carry exactly the
// sigma-transformed sign multiset.
void check_equivariance(const MorseInstance& inst, std::vector<ValidationIssue>& issues) {
    using Key = std::tuple<std::string, std::string, int, int>;
    std::map<Key, std::multiset<long>> groups;
    auto key_of = [](const TrajectoryRecord& t, const std::string& from, const std::string& to,
                     int flip) -> Key {
        return {from, to, flip * t.depart.value_or(0), flip * t.arrive.value_or(0)};
    };
    for (const auto& t : inst.trajectories) {
        if (t.carrier != Carrier::ambient) continue;
        groups[key_of(t, t.from, t.to, +1)].insert(t.sign);
    }
    for (const auto& [key, signs] : groups) {
        const auto& [from, to, dep, arr] = key;
        const CriticalPoint& p = inst.point(from);
        const CriticalPoint& q = inst.point(to);
        Key mirrored = {p.phi, q.phi, -dep, -arr};
        std::multiset<long> expected;
        for (long sign : signs) expected.insert(p.sigma * q.sigma * sign);
        auto it = groups.find(mirrored);
        if (it == groups.end() || it->second != expected)
            issues.push_back({"", "ambient records over (" + from + " -> " + to +
                                      ") do not pair off under phi with sign "
                                      "sigma*sigma*o(gamma)"});
    }
}

}  // namespace

std::vector<ValidationIssue> validate(const MorseInstance& inst) {
    return validate(inst, inst.kind == InstanceKind::closed_equivariant);
}

std::vector<ValidationIssue> validate(const MorseInstance& inst, bool strict_equivariance) {
    std::vector<ValidationIssue> issues;

    std::set<std::string> point_ids;
    for (const auto& p : inst.points) {
        if (p.id.empty()) issues.push_back({p.id, "empty point id"});
        if (!point_ids.insert(p.id).second) issues.push_back({p.id, "duplicate point id"});
    }
    std::set<std::string> traj_ids;
    for (const auto& t : inst.trajectories) {
        if (!traj_ids.insert(t.id).second) issues.push_back({t.id, "duplicate trajectory id"});
        if (!point_ids.count(t.from)) issues.push_back({t.id, "unknown endpoint '" + t.from + "'"});
        if (!point_ids.count(t.to)) issues.push_back({t.id, "unknown endpoint '" + t.to + "'"});
        if (!is_pm(t.sign)) issues.push_back({t.id, "sign must be +1 or -1"});
        if (t.depart && !is_pm(*t.depart)) issues.push_back({t.id, "bad departure side"});
        if (t.arrive && !is_pm(*t.arrive)) issues.push_back({t.id, "bad arrival side"});
    }
    if (!issues.empty()) return issues;  // structural failures mask the rest

    for (const auto& p : inst.points) check_point(inst, p, issues);
    if (!issues.empty()) return issues;

    if (inst.kind == InstanceKind::generalized) {
        auto axes = axes_of(inst);
        if (axes.size() > 2)
            issues.push_back({"", "at most two side axes are supported"});
        for (const auto& t : inst.trajectories) check_record_generalized(inst, t, issues);
        for (const auto& p : inst.points)
            if (p.unstable() && !decoration_axis(inst, p.id))
                issues.push_back({p.id, "decoration axis of unstable point is undetermined"});
    } else {
        for (const auto& t : inst.trajectories) check_record_reflection(inst, t, issues);
        if (issues.empty() && strict_equivariance) check_equivariance(inst, issues);
    }
    return issues;
}

namespace {

struct BlockFilter {
    Carrier carrier;
    Stability source_class;  // stability of the source (interior encoded separately)
    bool source_interior = false;
    Stability target_class;
    bool target_interior = false;
    std::optional<int> depart;
    std::optional<int> arrive;
    std::optional<XiClass> xi;
};

BlockFilter filter_for(BlockSel sel) {
    using S = BlockSel;
    BlockFilter f{};
    auto ambient = [&](bool src_interior, std::optional<int> dep, bool tgt_interior,
                       std::optional<int> arr) {
        f.carrier = Carrier::ambient;
        f.source_interior = src_interior;
        f.source_class = Stability::unstable;
        f.target_interior = tgt_interior;
        f.target_class = Stability::stable;
        f.depart = dep;
        f.arrive = arr;
    };
    auto fixed = [&](Stability src, Stability tgt, std::optional<XiClass> xi) {
        f.carrier = Carrier::fixed;
        f.source_class = src;
        f.target_class = tgt;
        f.xi = xi;
    };
    switch (sel) {
        case S::d_o_o: ambient(true, std::nullopt, true, std::nullopt); break;
        case S::d_sp_o: ambient(true, std::nullopt, false, 1); break;
        case S::d_sm_o: ambient(true, std::nullopt, false, -1); break;
        case S::d_s_o: ambient(true, std::nullopt, false, std::nullopt); break;
        case S::d_o_up: ambient(false, 1, true, std::nullopt); break;
        case S::d_o_um: ambient(false, -1, true, std::nullopt); break;
        case S::d_o_u: ambient(false, std::nullopt, true, std::nullopt); break;
        case S::d_sp_up: ambient(false, 1, false, 1); break;
        case S::d_sm_up: ambient(false, 1, false, -1); break;
        case S::d_sp_um: ambient(false, -1, false, 1); break;
        case S::d_sm_um: ambient(false, -1, false, -1); break;
        case S::d_s_up: ambient(false, 1, false, std::nullopt); break;
        case S::d_s_um: ambient(false, -1, false, std::nullopt); break;
        case S::d_s_u: ambient(false, std::nullopt, false, std::nullopt); break;
        case S::bar_s_s: fixed(Stability::stable, Stability::stable, std::nullopt); break;
        case S::bar_s_u: fixed(Stability::unstable, Stability::stable, std::nullopt); break;
        case S::bar_u_s: fixed(Stability::stable, Stability::unstable, std::nullopt); break;
        case S::bar_u_u: fixed(Stability::unstable, Stability::unstable, std::nullopt); break;
        case S::P_u_s: fixed(Stability::stable, Stability::unstable, XiClass::P); break;
        case S::R_u_s: fixed(Stability::stable, Stability::unstable, XiClass::R); break;
        case S::P_u_u: fixed(Stability::unstable, Stability::unstable, XiClass::P); break;
        case S::R_u_u: fixed(Stability::unstable, Stability::unstable, XiClass::R); break;
    }
    return f;
}

bool point_in_class(const CriticalPoint& p, bool interior, Stability cls) {
    if (interior) return p.locus == Locus::interior;
    return p.fixed_locus() && p.stability == cls;
}

}  // namespace

std::string to_string(BlockSel sel) {
    switch (sel) {
        case BlockSel::d_o_o: return "d_o^o";
        case BlockSel::d_sp_o: return "d_s+^o";
        case BlockSel::d_sm_o: return "d_s-^o";
        case BlockSel::d_s_o: return "d_s^o";
        case BlockSel::d_o_up: return "d_o^u+";
        case BlockSel::d_o_um: return "d_o^u-";
        case BlockSel::d_o_u: return "d_o^u";
        case BlockSel::d_sp_up: return "d_s+^u+";
        case BlockSel::d_sm_up: return "d_s-^u+";
        case BlockSel::d_sp_um: return "d_s+^u-";
        case BlockSel::d_sm_um: return "d_s-^u-";
        case BlockSel::d_s_up: return "d_s^u+";
        case BlockSel::d_s_um: return "d_s^u-";
        case BlockSel::d_s_u: return "d_s^u";
        case BlockSel::bar_s_s: return "bar_s^s";
        case BlockSel::bar_s_u: return "bar_s^u";
        case BlockSel::bar_u_s: return "bar_u^s";
        case BlockSel::bar_u_u: return "bar_u^u";
        case BlockSel::P_u_s: return "P_u^s";
        case BlockSel::R_u_s: return "R_u^s";
        case BlockSel::P_u_u: return "P_u^u";
        case BlockSel::R_u_u: return "R_u^u";
    }
    return "?";
}

CountBlock block(const MorseInstance& inst, BlockSel sel) {
    if (!validate(inst).empty()) throw InvalidInstance("block: instance fails validation");
    BlockFilter f = filter_for(sel);

    CountBlock out;
    std::map<std::string, Index> src_pos, tgt_pos;
    for (const auto& p : inst.points) {
        if (point_in_class(p, f.source_interior, f.source_class)) {
            src_pos[p.id] = static_cast<Index>(out.source_generators.size());
            out.source_generators.push_back(p.id);
        }
        if (point_in_class(p, f.target_interior, f.target_class)) {
            tgt_pos[p.id] = static_cast<Index>(out.target_generators.size());
            out.target_generators.push_back(p.id);
        }
    }
    out.matrix = int_matrix_zero(static_cast<Index>(out.target_generators.size()),
                                 static_cast<Index>(out.source_generators.size()));
    for (const auto& t : inst.trajectories) {
        if (t.degenerate() || t.carrier != f.carrier) continue;
        auto si = src_pos.find(t.from);
        auto ti = tgt_pos.find(t.to);
        if (si == src_pos.end() || ti == tgt_pos.end()) continue;
        if (f.depart && t.depart != f.depart) continue;
        if (f.arrive && t.arrive != f.arrive) continue;
        if (f.xi && t.xi != f.xi) continue;
        out.matrix(ti->second, si->second) += t.sign;
    }
    return out;
}

}  // namespace morseq

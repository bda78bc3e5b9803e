#include "morseq/gluing.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "morseq/errors.hpp"

namespace morseq {

namespace {

bool reflection_kind(const MorseInstance& inst) {
    return inst.kind != InstanceKind::generalized;
}

// Axis carrying a record's side labels; the single reflection axis is "".
std::string side_axis(const MorseInstance& inst, const TrajectoryRecord& t) {
    if (reflection_kind(inst)) return "";
    return t.axis.value_or("");
}

bool needs_resolution(const TrajectoryRecord& t) {
    return t.carrier == Carrier::fixed && t.xi.has_value();
}

int xi_sign(const TrajectoryRecord& t) { return *t.xi == XiClass::P ? 1 : -1; }

}  // namespace

Index GeneratorTable::index_of(const std::string& label) const {
    for (size_t i = 0; i < generators.size(); ++i)
        if (generators[i].label() == label) return static_cast<Index>(i);
    return -1;
}

int generator_grading(const MorseInstance& inst, const Generator& g) {
    return inst.plain_grading(inst.point(g.point)) + (g.side != 0 ? 1 : 0);
}

GeneratorTable generator_table(const MorseInstance& inst) {
    GeneratorTable table;
    auto push = [&](const Generator& g) {
        table.generators.push_back(g);
        table.gradings.push_back(generator_grading(inst, g));
    };
    if (reflection_kind(inst)) {
        // Block order of the bold complex: C^o, C^s, C^u[-1], C^u_+, C^u_-.
        for (const auto& p : inst.points)
            if (p.locus == Locus::interior) push({p.id, 0, ""});
        for (const auto& p : inst.points)
            if (p.stable()) push({p.id, 0, ""});
        for (const auto& p : inst.points)
            if (p.unstable()) push({p.id, 0, ""});
        for (const auto& p : inst.points)
            if (p.unstable()) push({p.id, +1, ""});
        for (const auto& p : inst.points)
            if (p.unstable()) push({p.id, -1, ""});
    } else {
        for (const auto& p : inst.points) {
            push({p.id, 0, ""});
            if (p.unstable()) {
                std::string axis = decoration_axis(inst, p.id).value_or("");
                push({p.id, +1, axis});
                push({p.id, -1, axis});
            }
        }
    }
    return table;
}

Generator resolve_generator(const MorseInstance& inst, const std::string& label) {
    if (inst.find_point(label)) return {label, 0, ""};
    if (label.size() > 1) {
        char tail = label.back();
        if (tail == '+' || tail == '-') {
            std::string base = label.substr(0, label.size() - 1);
            const CriticalPoint* p = inst.find_point(base);
            if (p && p->unstable()) {
                std::string axis =
                    reflection_kind(inst) ? "" : decoration_axis(inst, base).value_or("");
                return {base, tail == '+' ? 1 : -1, axis};
            }
        }
    }
    throw UnknownGenerator("no generalized generator '" + label + "'");
}

namespace {

// One end of a piece that needs normal resolution: either the chain stays
// inside the carrier hypersurface there, or it meets transverse data.
struct EndState {
    enum Kind { inside, transverse, malformed } kind = inside;
    int factor = 0;
};

EndState start_state(const MorseInstance& inst, const std::vector<const TrajectoryRecord*>& pieces,
                     size_t i, const Generator& start, const std::string& plane) {
    if (i == 0) {
        if (start.side != 0 && start.axis == plane &&
            decoration_axis(inst, start.point) == std::optional<std::string>(plane))
            return {EndState::transverse, start.side};
        return {EndState::inside, 0};
    }
    const TrajectoryRecord& prev = *pieces[i - 1];
    if (prev.arrive && side_axis(inst, prev) == plane) return {EndState::transverse, *prev.arrive};
    if (prev.carrier == Carrier::fixed && record_plane(inst, prev) == plane)
        return {EndState::inside, 0};
    return {EndState::malformed, 0};
}

EndState end_state(const MorseInstance& inst, const std::vector<const TrajectoryRecord*>& pieces,
                   size_t i, const Generator& end, const std::string& plane) {
    if (i + 1 == pieces.size()) {
        if (end.side != 0 && end.axis == plane) return {EndState::transverse, end.side};
        return {EndState::inside, 0};
    }
    const TrajectoryRecord& next = *pieces[i + 1];
    if (next.depart && side_axis(inst, next) == plane) return {EndState::transverse, *next.depart};
    if (next.carrier == Carrier::fixed && record_plane(inst, next) == plane)
        return {EndState::inside, 0};
    return {EndState::malformed, 0};
}

// Shared sign-and-gluability evaluation for chains of m >= 2 pieces.
// Sign convention: (-1)^(m - bar-mode pieces) * prod o(u_i) * resolved-joint
// factors (the start side when piece 1 is resolved transversally, and the
// exit side at every resolved joint).
GluingVerdict evaluate_chain(const MorseInstance& inst,
                             const std::vector<const TrajectoryRecord*>& pieces,
                             const Generator& start, const Generator& end) {
    GluingVerdict out;
    const size_t m = pieces.size();
    int bar_pieces = 0;
    long factors = 1;
    for (size_t i = 0; i < m; ++i) {
        const TrajectoryRecord& piece = *pieces[i];
        int drop = inst.index_drop(piece);
        if (drop == 0 && !needs_resolution(piece))
            throw MalformedChain("piece '" + piece.id + "' has index drop 0 but no xi class");
        if (!needs_resolution(piece)) continue;
        std::string plane = record_plane(inst, piece);
        EndState in = start_state(inst, pieces, i, start, plane);
        EndState outp = end_state(inst, pieces, i, end, plane);
        if (in.kind == EndState::malformed || outp.kind == EndState::malformed)
            throw MalformedChain("no side data on axis '" + plane + "' next to piece '" +
                                 piece.id + "'");
        if (in.kind == EndState::inside && outp.kind == EndState::inside) {
            ++bar_pieces;
            continue;
        }
        if (in.kind != outp.kind) return out;  // enters or leaves the hypersurface: no gluing
        int x = xi_sign(piece);
        if (in.factor * x * outp.factor <= 0) return out;
        out.witness.push_back({static_cast<int>(i) + 1, in.factor, x, outp.factor});
        factors *= outp.factor;
        if (i == 0 && in.kind == EndState::transverse) factors *= in.factor;
    }
    Int sign = ((static_cast<int>(m) - bar_pieces) % 2 == 0) ? 1 : -1;
    for (const auto* piece : pieces) sign *= piece->sign;
    sign *= factors;
    out.gluable = true;
    out.sign = sign;
    return out;
}

struct ChainQuery {
    Generator start;
    Generator end;
    int gap = 0;
};

bool first_piece_compatible(const MorseInstance& inst, const Generator& start,
                            const TrajectoryRecord& t) {
    if (start.side == 0) return !t.depart.has_value();
    if (t.depart) return side_axis(inst, t) == start.axis && *t.depart == start.side;
    return needs_resolution(t) && record_plane(inst, t) == start.axis;
}

bool last_piece_compatible(const MorseInstance& inst, const Generator& end,
                           const TrajectoryRecord& t) {
    if (end.side == 0) return true;
    return needs_resolution(t) && record_plane(inst, t) == end.axis;
}

void enumerate_from(const MorseInstance& inst, const ChainQuery& q,
                    std::vector<const TrajectoryRecord*>& chain, std::set<std::string>& visited,
                    const std::string& at, std::vector<BrokenTrajectory>& out) {
    for (const auto& t : inst.trajectories) {
        if (t.degenerate() || t.from != at) continue;
        int drop = inst.index_drop(t);
        if (drop < 0 || drop > 1) continue;  // simple chains only
        if (chain.empty() && !first_piece_compatible(inst, q.start, t)) continue;
        if (visited.count(t.to)) continue;
        chain.push_back(&t);
        if (t.to == q.end.point && chain.size() >= 2 && last_piece_compatible(inst, q.end, t)) {
            BrokenTrajectory bt;
            for (const auto* piece : chain) bt.pieces.push_back(piece->id);
            bt.start = q.start.label();
            bt.end = q.end.label();
            out.push_back(std::move(bt));
        }
        visited.insert(t.to);
        enumerate_from(inst, q, chain, visited, t.to, out);
        visited.erase(t.to);
        chain.pop_back();
    }
}

}  // namespace

std::vector<BrokenTrajectory> enumerate_broken(const MorseInstance& inst, const std::string& start,
                                               const std::string& end, int total_drop) {
    ChainQuery q;
    q.start = resolve_generator(inst, start);
    q.end = resolve_generator(inst, end);
    if (q.start.point == q.end.point && q.start.side == q.end.side)
        throw UnknownGenerator("enumerate_broken: start and end coincide");
    q.gap = generator_grading(inst, q.start) - generator_grading(inst, q.end);
    std::vector<BrokenTrajectory> out;
    if (q.gap != total_drop) return out;  // grading filter
    std::vector<const TrajectoryRecord*> chain;
    std::set<std::string> visited{q.start.point};
    enumerate_from(inst, q, chain, visited, q.start.point, out);
    return out;
}

GluingVerdict verdict(const MorseInstance& inst, const BrokenTrajectory& bt) {
    if (bt.pieces.size() < 2) throw MalformedChain("a broken trajectory has at least two pieces");
    std::vector<const TrajectoryRecord*> pieces;
    for (const auto& id : bt.pieces) {
        const TrajectoryRecord* t = inst.find_trajectory(id);
        if (!t) throw MalformedChain("unknown trajectory '" + id + "'");
        if (t->degenerate()) throw MalformedChain("degenerate record inside a chain");
        pieces.push_back(t);
    }
    for (size_t i = 0; i + 1 < pieces.size(); ++i)
        if (pieces[i]->to != pieces[i + 1]->from)
            throw MalformedChain("pieces '" + pieces[i]->id + "' and '" + pieces[i + 1]->id +
                                 "' do not compose");
    Generator start = resolve_generator(inst, bt.start);
    Generator end = resolve_generator(inst, bt.end);
    if (pieces.front()->from != start.point || pieces.back()->to != end.point)
        throw MalformedChain("chain endpoints do not match the stated generators");
    for (const auto* piece : pieces) {
        int drop = inst.index_drop(*piece);
        if (drop < 0 || drop > 1)
            throw MalformedChain("piece '" + piece->id + "' has index drop " +
                                 std::to_string(drop));
    }
    return evaluate_chain(inst, pieces, start, end);
}

std::vector<std::pair<BrokenTrajectory, Int>> gluable_chains(const MorseInstance& inst,
                                                             const std::string& start,
                                                             const std::string& end,
                                                             int total_drop) {
    std::vector<std::pair<BrokenTrajectory, Int>> out;
    for (auto& bt : enumerate_broken(inst, start, end, total_drop)) {
        GluingVerdict v = verdict(inst, bt);
        if (v.gluable) out.emplace_back(std::move(bt), *v.sign);
    }
    return out;
}

Int boundary_count(const MorseInstance& inst, const std::string& start, const std::string& end) {
    Generator s = resolve_generator(inst, start);
    Generator e = resolve_generator(inst, end);
    int gap = generator_grading(inst, s) - generator_grading(inst, e);
    Int total = 0;
    for (const auto& [bt, sign] : gluable_chains(inst, start, end, gap)) total += sign;
    return total;
}

namespace {

// Readings of one record as a length-1 chain between generalized generators.
void add_single_readings(const MorseInstance& inst, const TrajectoryRecord& t,
                         std::vector<std::tuple<Generator, Generator, Int>>& out) {
    std::vector<Generator> starts;
    if (t.depart)
        starts.push_back({t.from, *t.depart, side_axis(inst, t)});
    else
        starts.push_back({t.from, 0, ""});
    std::string plane = needs_resolution(t) ? record_plane(inst, t) : "";
    if (needs_resolution(t) &&
        decoration_axis(inst, t.from) == std::optional<std::string>(plane)) {
        starts.push_back({t.from, +1, plane});
        starts.push_back({t.from, -1, plane});
    }
    std::vector<Generator> ends;
    ends.push_back({t.to, 0, ""});
    if (needs_resolution(t) && decoration_axis(inst, t.to) == std::optional<std::string>(plane)) {
        ends.push_back({t.to, +1, plane});
        ends.push_back({t.to, -1, plane});
    }
    for (const auto& s : starts) {
        for (const auto& e : ends) {
            if (generator_grading(inst, s) - generator_grading(inst, e) != 1) continue;
            if (!needs_resolution(t)) {
                out.emplace_back(s, e, Int(t.sign));
                continue;
            }
            bool start_trans = s.side != 0 && s.axis == plane;
            bool end_trans = e.side != 0 && e.axis == plane;
            if (start_trans != end_trans) continue;  // enters or leaves the plane: no reading
            if (!start_trans) {
                out.emplace_back(s, e, Int(t.sign));  // bar-mode count
                continue;
            }
            int x = xi_sign(t);
            if (s.side * x * e.side <= 0) continue;
            out.emplace_back(s, e, Int(-x * t.sign));
        }
    }
}

}  // namespace

GradedComplex differential_from_gluing(const MorseInstance& inst) {
    if (!validate(inst).empty())
        throw InvalidInstance("differential_from_gluing: instance fails validation");
    GeneratorTable table = generator_table(inst);

    int lo = 0, hi = -1;
    if (!table.gradings.empty()) {
        lo = *std::min_element(table.gradings.begin(), table.gradings.end());
        hi = *std::max_element(table.gradings.begin(), table.gradings.end());
    }
    std::vector<std::vector<std::string>> basis(static_cast<size_t>(hi - lo + 1));
    std::map<std::string, std::pair<int, Index>> position;  // label -> (degree, column)
    for (size_t i = 0; i < table.generators.size(); ++i) {
        int k = table.gradings[i];
        auto& names = basis[static_cast<size_t>(k - lo)];
        position[table.generators[i].label()] = {k, static_cast<Index>(names.size())};
        names.push_back(table.generators[i].label());
    }
    std::vector<IntMatrix> diffs;
    for (int k = lo; k <= hi; ++k) {
        Index rows = (k == lo) ? 0 : static_cast<Index>(basis[static_cast<size_t>(k - 1 - lo)].size());
        diffs.push_back(int_matrix_zero(rows, static_cast<Index>(basis[static_cast<size_t>(k - lo)].size())));
    }
    auto add_entry = [&](const Generator& target, const Generator& source, const Int& value) {
        auto [ks, cs] = position.at(source.label());
        auto [kt, ct] = position.at(target.label());
        if (ks - kt != 1)
            throw GradingMismatch("entry " + target.label() + " <- " + source.label() +
                                  " connects gradings " + std::to_string(ks) + " and " +
                                  std::to_string(kt));
        if (ks == lo) return;
        diffs[static_cast<size_t>(ks - lo)](ct, cs) += value;
    };

    // Trivial trajectories p_+/- -> p: definitional for reflection kinds,
    // explicit degenerate records for generalized instances.
    if (reflection_kind(inst)) {
        for (const auto& p : inst.points)
            if (p.unstable()) {
                add_entry({p.id, 0, ""}, {p.id, +1, ""}, Int(-1));
                add_entry({p.id, 0, ""}, {p.id, -1, ""}, Int(1));
            }
    } else {
        for (const auto& t : inst.trajectories)
            if (t.degenerate())
                add_entry({t.from, 0, ""}, {t.from, *t.depart, t.axis.value_or("")}, Int(t.sign));
    }

    // Length-1 chains.
    std::vector<std::tuple<Generator, Generator, Int>> singles;
    for (const auto& t : inst.trajectories) {
        if (t.degenerate()) continue;
        singles.clear();
        add_single_readings(inst, t, singles);
        for (const auto& [s, e, value] : singles) add_entry(e, s, value);
    }

    // Gluable chains of two or more pieces.
    for (const auto& source : table.generators) {
        for (const auto& target : table.generators) {
            if (generator_grading(inst, source) - generator_grading(inst, target) != 1) continue;
            if (source.point == target.point && source.side == target.side) continue;
            for (const auto& [bt, sign] :
                 gluable_chains(inst, source.label(), target.label(), 1))
                add_entry(target, source, sign);
        }
    }

    return make_complex(lo, std::move(basis), std::move(diffs));
}

}  // namespace morseq

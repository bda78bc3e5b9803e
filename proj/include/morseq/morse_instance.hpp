#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morseq/int_matrix.hpp"

namespace morseq {

enum class Locus { interior, fixed };
enum class Stability { stable, unstable };
enum class Carrier { ambient, fixed };
enum class XiClass { P, R };
enum class InstanceKind { closed_equivariant, boundary_double, generalized };

std::string to_string(InstanceKind kind);

struct CriticalPoint {
    std::string id;
    int index = 0;  // ambient Morse index
    Locus locus = Locus::fixed;
    std::optional<Stability> stability;  // present iff locus == fixed
    std::string phi;                     // id of the phi-image
    int sigma = 1;                       // orientation sign of d(phi) on the descending manifold
    std::optional<int> grading;          // generalized kind only

    bool fixed_locus() const { return locus == Locus::fixed; }
    bool unstable() const { return stability && *stability == Stability::unstable; }
    bool stable() const { return stability && *stability == Stability::stable; }
};

struct TrajectoryRecord {
    std::string id;
    std::string from;
    std::string to;
    Carrier carrier = Carrier::ambient;
    int sign = 1;                     // orientation o(gamma) of the rigid trajectory
    std::optional<int> depart;        // gamma^{-infty} side against o_{from}
    std::optional<int> arrive;        // gamma^{infty} side against o_{to}
    std::optional<XiClass> xi;        // P/R transport class along a fixed-locus trajectory
    std::optional<std::string> axis;  // generalized kind: axis of the side labels

    bool degenerate() const { return from == to; }
};

struct MorseInstance {
    std::string name;
    InstanceKind kind = InstanceKind::closed_equivariant;
    std::vector<CriticalPoint> points;
    std::vector<TrajectoryRecord> trajectories;

    const CriticalPoint* find_point(const std::string& id) const;
    const CriticalPoint& point(const std::string& id) const;  // throws UnknownGenerator
    const TrajectoryRecord* find_trajectory(const std::string& id) const;

    /// Grading of the undecorated generator of a point: explicit for the
    /// generalized kind, ind - 1 at unstable fixed points otherwise.
    int plain_grading(const CriticalPoint& p) const;

    /// Ambient index drop of a record; degenerate records report 0.
    int index_drop(const TrajectoryRecord& t) const;
};

struct ValidationIssue {
    std::string record_id;  // offending point or trajectory id ("" for global issues)
    std::string message;
};

/// Full invariant check; the report is the result, never an exception.
/// Strict equivariance defaults to on for closed-equivariant instances.
std::vector<ValidationIssue> validate(const MorseInstance& inst);
std::vector<ValidationIssue> validate(const MorseInstance& inst, bool strict_equivariance);

/// The named count-block selectors of the differential tables.
enum class BlockSel {
    d_o_o,     // ambient, interior -> interior
    d_sp_o,    // ambient, interior -> stable, arriving +
    d_sm_o,    // ambient, interior -> stable, arriving -
    d_s_o,     // side sum of the two above
    d_o_up,    // ambient, unstable departing + -> interior
    d_o_um,    // ambient, unstable departing - -> interior
    d_o_u,     // side sum
    d_sp_up,   // ambient, unstable departing + -> stable arriving +
    d_sm_up,   // departing +, arriving -
    d_sp_um,   // departing -, arriving +
    d_sm_um,   // departing -, arriving -
    d_s_up,    // departing +, arrival summed
    d_s_um,    // departing -, arrival summed
    d_s_u,     // all four summed
    bar_s_s,   // fixed, stable -> stable
    bar_s_u,   // fixed, unstable -> stable
    bar_u_s,   // fixed, stable -> unstable
    bar_u_u,   // fixed, unstable -> unstable
    P_u_s,     // fixed, stable -> unstable, orientation-preserving
    R_u_s,     // fixed, stable -> unstable, orientation-reversing
    P_u_u,     // fixed, unstable -> unstable, orientation-preserving
    R_u_u,     // fixed, unstable -> unstable, orientation-reversing
};

std::string to_string(BlockSel sel);

struct CountBlock {
    std::vector<std::string> source_generators;
    std::vector<std::string> target_generators;
    IntMatrix matrix;  // entry (i, j): signed count from source j to target i
};

/// Signed trajectory counts for one selector; instance must be valid.
CountBlock block(const MorseInstance& inst, BlockSel sel);

/// Carrier plane of a fixed record; "" for single-axis (reflection) kinds.
std::string record_plane(const MorseInstance& inst, const TrajectoryRecord& t);

/// Decoration axis of an unstable point ("" = the sole reflection axis);
/// empty optional when the point is undecorated or the axis is undetermined.
std::optional<std::string> decoration_axis(const MorseInstance& inst, const std::string& point_id);

MorseInstance load_instance(const std::string& path);
MorseInstance parse_instance(std::istream& in, const std::string& source_name);
void save_instance(const MorseInstance& inst, const std::string& path);
std::string instance_to_json(const MorseInstance& inst);

std::vector<std::string> builtin_names();
MorseInstance builtin_instance(const std::string& name);  // UnknownName if absent

}  // namespace morseq

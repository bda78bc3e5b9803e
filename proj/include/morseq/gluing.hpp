#pragma once

#include <optional>
#include <string>
#include <vector>

#include "morseq/graded_complex.hpp"
#include "morseq/morse_instance.hpp"

namespace morseq {

/// A generator of the generalized (stabilized) complex: either the plain copy
/// of a critical point or one of its two side decorations.
struct Generator {
    std::string point;
    int side = 0;      // 0 plain, +1 / -1 decorated
    std::string axis;  // decoration axis when side != 0

    std::string label() const { return point + (side == 0 ? "" : side > 0 ? "+" : "-"); }
    bool operator==(const Generator& other) const {
        return point == other.point && side == other.side && axis == other.axis;
    }
};

/// Generator inventory in the order the bold/generalized complex uses.
struct GeneratorTable {
    std::vector<Generator> generators;
    std::vector<int> gradings;  // aligned with generators

    Index index_of(const std::string& label) const;  // -1 if absent
};

GeneratorTable generator_table(const MorseInstance& inst);
Generator resolve_generator(const MorseInstance& inst, const std::string& label);
int generator_grading(const MorseInstance& inst, const Generator& g);

/// Composable chain of trajectory records, m >= 2 pieces, read from a start
/// to an end generator (side decorations constrain the two end readings).
struct BrokenTrajectory {
    std::vector<std::string> pieces;  // trajectory record ids
    std::string start;                // generator labels
    std::string end;
};

struct ObstructionWitness {
    int position = 0;    // 1-based piece index
    int entry_factor = 0;  // <u_{i-1}^inf, xi^{-inf}>
    int xi_factor = 0;     // +1 for P, -1 for R
    int exit_factor = 0;   // <xi^inf, u_{i+1}^{-inf}> side part
};

struct GluingVerdict {
    bool gluable = false;
    std::optional<Int> sign;
    std::vector<ObstructionWitness> witness;
};

/// All composable chains from start to end whose generalized gradings drop by
/// total_drop. Empty when total_drop differs from the endpoints' grading gap.
std::vector<BrokenTrajectory> enumerate_broken(const MorseInstance& inst, const std::string& start,
                                               const std::string& end, int total_drop);

GluingVerdict verdict(const MorseInstance& inst, const BrokenTrajectory& bt);

/// The verdict-filtered subset of enumerate_broken, paired with glued signs.
std::vector<std::pair<BrokenTrajectory, Int>> gluable_chains(const MorseInstance& inst,
                                                             const std::string& start,
                                                             const std::string& end,
                                                             int total_drop);

/// Signed count of gluable chains over the endpoints' actual grading gap;
/// zero for every gap-2 pair of a valid instance.
Int boundary_count(const MorseInstance& inst, const std::string& start, const std::string& end);

/// Differential assembled purely from chain counting: single records, trivial
/// (projection) trajectories, and gluable multi-piece chains. Reproduces the
/// bold differential entrywise on reflection instances.
GradedComplex differential_from_gluing(const MorseInstance& inst);

}  // namespace morseq

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morseq/graded_complex.hpp"

namespace morseq {

struct ResolutionCheckReport {
    bool ok = true;
    std::vector<std::string> checks;  // one line per exactness check
};

/// Exactness of the 2-periodic resolution ... -> Z[G] -(1+phi)-> Z[G]
/// -(1-phi)-> Z[G] -> Z -> 0 on the rank-2 regular representation.
ResolutionCheckReport resolution_check();

/// Truncated Borel double complex, columns 0..i_max, totalized.
/// Horizontal differential: 1 - A out of odd columns, 1 + A out of even
/// columns >= 2; vertical differential (-1)^i d on column i.
GradedComplex borel_total_complex(const GradedComplex& base, const Involution& action, int i_max);

/// Equivariant homology in degrees 0..k_max; the default truncation
/// i_max = k_max + 1 makes these degrees truncation-independent.
std::map<int, HomologyGroup> borel_homology(const GradedComplex& base, const Involution& action,
                                            int k_max,
                                            std::optional<int> i_max = std::nullopt);

}  // namespace morseq

#pragma once

#include <map>
#include <string>
#include <vector>

#include "morseq/graded_complex.hpp"
#include "morseq/morse_instance.hpp"

namespace morseq {

/// The chain complex shapes assembled from one instance.
enum class ComplexVariant {
    bar,         // (C-bar, d-bar) on the fixed locus
    check_km,    // C^o + C^s, computes H(N)
    hat_km,      // C^o + C^u, computes H(N, dN)
    check_stab,  // C^o + C^s + C^u[-1] + C^u_-
    hat_stab,    // quotient of check_stab by the bar subcomplex
    bold,        // C^o + C^s + C^u[-1] + C^u_+ + C^u_-
    generalized  // generators from explicit gradings, differential from gluing
};

std::string to_string(ComplexVariant v);
ComplexVariant variant_from_string(const std::string& s);  // UnknownName if absent

GradedComplex build(const MorseInstance& inst, ComplexVariant variant);

/// The stabilization comparison map psi: check_stab -> check_km; a verified
/// quasi-isomorphism on every valid instance.
ChainMap psi(const MorseInstance& inst);

/// Projection check_stab -> hat_km killing the bar subcomplex.
ChainMap hat_quotient_map(const MorseInstance& inst);

/// Generator labels of the bar subcomplex inside check_stab or bold.
std::map<int, std::vector<std::string>> bar_subcomplex_labels(const MorseInstance& inst);

/// The sigma-twisted reflection action on the bold complex.
Involution g_action(const MorseInstance& inst);

}  // namespace morseq

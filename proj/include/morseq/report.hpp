#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "morseq/borel.hpp"
#include "morseq/graded_complex.hpp"
#include "morseq/morse_instance.hpp"

namespace morseq {

using Json = nlohmann::ordered_json;

/// Machine-readable report fragments; field order is part of the contract.
Json json_homology_group(const HomologyGroup& group);
Json json_homology_table(const std::map<int, HomologyGroup>& table);
Json json_complex(const GradedComplex& c, bool with_homology);
Json json_validation(const std::vector<ValidationIssue>& issues);

/// Top-level report envelope: version, command echo, instance, status.
Json report_envelope(const std::string& command, const std::string& instance);

std::string render_text_homology(const std::map<int, HomologyGroup>& table);

/// True when stdout styling should be suppressed (MORSEQ_NO_COLOR or no tty).
bool color_disabled();

}  // namespace morseq

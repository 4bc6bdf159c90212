#pragma once

#include "parasafe/encoder/ab_pmas.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parasafe::io
{

/// MCMT input file for the encoding and the goal. Rules print in `s.rules`
/// order, so transition t<n> is rule n-1. Throws logic::EncodingError for an
/// empty goal or a rule with more than two existential index variables.
std::string emit_mcmt( const encoder::AbPmas& s, const logic::StateFormula& goal );

struct WitnessToken
{
    int ordinal = 0;            // 1-based transition number
    std::optional<int> sub;     // t3_1 -> 1, carried opaquely

    bool operator==( const WitnessToken& ) const = default;
};

/// Parses `[t2][t17][t3_1]...`; whitespace between tokens is ignored.
/// Throws model::ParseError positioned at the offending column.
std::vector<WitnessToken> parse_mcmt_witness( const std::string& text );

std::string format_mcmt_witness( const std::vector<WitnessToken>& tokens );

/// Rule labels recovered from the `:comment` line preceding each `:transition`
/// of an emitted file, in file order.
std::vector<std::string> mcmt_transition_labels( const std::string& mcmt );

} // namespace parasafe::io

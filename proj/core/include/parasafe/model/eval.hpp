#pragma once

#include "parasafe/model/pmas.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parasafe::model
{

/// Agent position inside a snapshot.
struct AgentRef
{
    int tmpl = 0;
    int index = 0;
};

/// Existential satisfaction: some grounding of the free index variables over
/// agents of their templates satisfies the formula. `self` binds self.
bool eval_agent_formula( const Pmas& p, const Snapshot& g, const RelInterpretation& interp, const AgentFormula& f,
                         std::optional<AgentRef> self = std::nullopt );

/// Every agent (and the environment) in its initial local state; counts by
/// template, the environment entry is ignored.
Snapshot initial_snapshot( const Pmas& p, const std::vector<int>& counts );

/// Empty interpretation sized for the model's relations.
RelInterpretation empty_interpretation( const Pmas& p );

/// Reads relation tuples, one `R(c1, ..., cm)` per line; `#` comments allowed.
RelInterpretation parse_interpretation( const Pmas& p, const std::string& text );

/// Pretty printers producing the modelling language.
std::string print_formula( const Pmas& p, const AgentFormula& f );
std::string print_pmas( const Pmas& p );

} // namespace parasafe::model

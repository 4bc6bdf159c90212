#pragma once

#include "parasafe/encoder/ab_pmas.hpp"
#include "parasafe/engine/breach.hpp"
#include "parasafe/model/pmas.hpp"

#include <string>
#include <utility>
#include <vector>

namespace parasafe::engine
{

/// Every literal mentions at most one index variable.
bool cube_is_local( const logic::Cube& c );

struct LocalityReport
{
    bool goal_local = false;
    std::vector<std::pair<std::string, bool>> protocols; // "action@Template" -> local
    bool interleaved = false;
    bool guaranteed_termination = false;

    [[nodiscard]] bool protocols_local() const;
};

LocalityReport check_locality( const encoder::AbPmas& s, const logic::StateFormula& goal, const model::Pmas& p );

/// One global step of a run: the actions performed, by template.
struct RunStep
{
    enum class Kind
    {
        Local,
        Sync,
        Individual
    };
    Kind kind = Kind::Local;
    std::vector<std::pair<std::string, int>> actions; // (action, template), sorted, no duplicates

    [[nodiscard]] std::string text( const model::Pmas& p ) const;
    bool operator==( const RunStep& ) const = default;
};

/// Collapses declare/join/commit groups of an UNSAFE trace into global steps.
/// Throws std::logic_error on a trace that does not follow the phase graph.
std::vector<RunStep> extract_run_template( const Verdict& v, const encoder::AbPmas& s );

} // namespace parasafe::engine

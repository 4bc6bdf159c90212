#pragma once

#include "parasafe/encoder/ab_pmas.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace parasafe::engine
{

struct TraceStep
{
    std::size_t rule = 0; // index into AbPmas::rules
    std::string label;
    encoder::StepKind kind = encoder::StepKind::Declare;
    std::string action;
    int tmpl = -1;

    bool operator==( const TraceStep& ) const = default;
};

struct Verdict
{
    enum class Kind
    {
        Safe,
        Unsafe,
        Unknown
    };
    enum class Reason
    {
        None,
        DepthBudget,
        CubeBudget
    };

    Kind kind = Kind::Unknown;
    Reason reason = Reason::None;
    std::vector<TraceStep> trace; // from the initial state towards the goal
    bool spurious_possible = false; // concurrent encodings: universal guards were over-approximated
    std::size_t depth = 0;          // layers explored
    std::size_t cubes = 0;          // cubes kept in the visited region
    std::string detail;
};

const char* to_string( Verdict::Kind k );
const char* to_string( Verdict::Reason r );

struct Budgets
{
    std::size_t max_depth = 200;
    std::size_t max_cubes = 100000;
    std::size_t entailment_branches = 20000; // per check; exceeding it counts as not entailed
};

/// One cube of the search with the rule and parent that produced it.
struct FrontierCube
{
    logic::Cube cube;
    std::size_t layer = 0;
    std::size_t rule = 0;           // meaningless on layer 0
    std::size_t parent = SIZE_MAX;  // index into Frontier::cubes
};

/// Visited region B (every kept cube) and the provenance of each cube.
struct Frontier
{
    std::vector<FrontierCube> cubes;
    std::vector<std::size_t> layer_start; // first cube index of each layer
};

/// Backward reachability from the goal. The frontier is filled in when given.
Verdict breach( const encoder::AbPmas& s, const logic::StateFormula& goal, const Budgets& budgets = {},
                Frontier* frontier = nullptr );

/// Whether `c` is entailed by the disjunction of `region`. Inconclusive
/// searches report false.
bool entailed( const encoder::AbPmas& s, const logic::Cube& c, const std::vector<const logic::Cube*>& region,
               std::size_t max_branches = 20000 );

} // namespace parasafe::engine

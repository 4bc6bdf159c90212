#pragma once

#include "parasafe/encoder/ab_pmas.hpp"
#include "parasafe/engine/analysis.hpp"
#include "parasafe/engine/breach.hpp"
#include "parasafe/model/eval.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace parasafe::oracle
{

using encoder::Semantics;
using engine::RunStep;

struct ConcreteConfig
{
    std::vector<int> counts; // by template; the environment entry is ignored
    model::RelInterpretation interp;
    Semantics semantics = Semantics::Interleaved;
    int depth = 15;
    std::size_t state_cap = 2000000;
};

/// A legal global step: per template and agent, the index of the action
/// performed in the template's action list, or -1 for nop.
struct Move
{
    RunStep::Kind kind = RunStep::Kind::Local;
    std::vector<std::vector<int>> choice;
};

RunStep step_of( const model::Pmas& p, const Move& m );

/// Agents of one template sorted by local state and renumbered.
model::Snapshot canonical( model::Snapshot g );

/// All legal global steps from `g` with their canonical successor snapshots.
std::vector<std::pair<Move, model::Snapshot>> successors( const model::Pmas& p, const model::RelInterpretation& interp,
                                                          Semantics sem, const model::Snapshot& g );

struct Run
{
    std::vector<model::Snapshot> states; // states[0] is initial
    std::vector<RunStep> steps;          // steps[i] leads from states[i] to states[i+1]
};

struct ReachResult
{
    enum class Kind
    {
        Reached,
        NotReached,
        Overflow
    };
    Kind kind = Kind::NotReached;
    Run run;
    std::size_t states = 0;
};

const char* to_string( ReachResult::Kind k );

/// Breadth-first search over canonical snapshots up to cfg.depth global steps.
ReachResult enumerate_reachable( const model::Pmas& p, const ConcreteConfig& cfg, const model::AgentFormula& goal );

struct ReplayResult
{
    bool valid = false;
    std::size_t step = 0; // first step that could not be matched, or the template length
    std::string reason;
};

/// Searches, step by step, for legal global steps performing exactly the
/// template's actions; valid when some completion satisfies the goal.
ReplayResult replay_run_template( const model::Pmas& p, const std::vector<RunStep>& steps, const ConcreteConfig& cfg,
                                  const model::AgentFormula& goal );

/// Every interpretation of the relations over declared constants, or
/// `budget` of them drawn with a fixed seed when there are more.
std::vector<model::RelInterpretation> interpretations( const model::Pmas& p, std::size_t budget, unsigned seed = 1 );

struct CrossCheckBounds
{
    int max_count = 3;
    int max_depth = 15;
    std::size_t interpretation_budget = 4096;
    engine::Budgets engine;
};

enum class Agreement
{
    AgreeSafe,
    AgreeUnsafe,
    EngineUnsafeOracleSilent,
    EngineSafeOracleReached,
    EngineUnknown,
    OracleOverflow
};

const char* to_string( Agreement a );

struct CrossCheckReport
{
    Agreement agreement = Agreement::AgreeSafe;
    engine::Verdict verdict;
    std::size_t configurations = 0;  // (counts, interpretation) pairs explored
    std::vector<int> witness_counts; // first configuration reaching the goal
    std::size_t witness_interpretation = 0;
    Run witness;
};

CrossCheckReport cross_check( const model::Pmas& p, const model::AgentFormula& goal, Semantics sem,
                              const CrossCheckBounds& bounds = {} );

struct CorpusParams
{
    int max_agent_templates = 2;
    int max_vars = 2;
    int max_values = 3;
    int max_actions = 3;
    bool relation = true;
};

/// Source text of a small valid model with a goal, determined by the seed.
std::string random_pmas( unsigned seed, const CorpusParams& params = {} );

} // namespace parasafe::oracle

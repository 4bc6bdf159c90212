#pragma once

#include "parasafe/logic/term.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace parasafe::encoder
{

using logic::ArrayId;
using logic::ConstId;
using logic::GlobalId;
using logic::SortId;
using logic::VarId;

enum class Semantics
{
    Interleaved,
    Concurrent
};

enum class StepKind
{
    Declare,    // a concrete agent or the environment writes its local action
    LocalGate,  // concurrent only: nobody else can still declare
    BulkLocal,  // applies declared local actions, resets action arrays
    Start,      // environment and one agent open a synchronisation
    Join,       // a further agent joins the pending synchronisation
    SyncGate,   // concurrent only: every able agent has joined
    Commit,     // applies the synchronisation effects
    Individual  // environment and exactly one agent in one step
};

const char* to_string( StepKind k );

/// Universally quantified guard: for all values of `vars` (numbered after the
/// rule's existentials) the matrix holds.
struct UniversalGuard
{
    std::vector<SortId> vars;
    logic::Formula matrix;
};

/// a' = lambda j. case { guards[i](j) : values[i]; otherwise }
/// Guards and values use logic::kBoundVar for j; values are constants or a[j].
struct BulkUpdate
{
    ArrayId array = 0;
    std::vector<logic::Formula> guards;
    std::vector<logic::Term> values;
    logic::Term otherwise;
};

struct TransitionRule
{
    std::string label;
    StepKind kind = StepKind::Declare;
    std::string action; // empty for an idle environment
    int tmpl = -1;      // acting template (model index), -1 when none
    std::vector<SortId> vars; // existential index variables; 0 is j_self when the rule has one
    bool has_self = false;
    std::vector<logic::Literal> guard;
    std::vector<UniversalGuard> uguards;
    std::vector<std::pair<logic::Term, logic::Term>> assigns; // global or a[var] := constant
    std::vector<BulkUpdate> bulk;
};

/// Symbols owned by one template.
struct TemplateSymbols
{
    bool env = false;
    SortId index = 0;                  // agent templates
    ArrayId act = 0;                   // agent templates
    std::vector<ArrayId> arrays;       // agent templates, by variable slot
    std::vector<GlobalId> globals;     // environment, by variable slot
};

struct AbPmas
{
    logic::Signature sig;
    Semantics semantics = Semantics::Interleaved;

    std::vector<SortId> element_sorts; // by model sort
    std::vector<logic::RelId> relations; // by model relation
    std::vector<std::vector<ConstId>> values; // by model sort, value
    std::vector<TemplateSymbols> templates; // by model template

    SortId action_sort = 0;
    SortId phase_sort = 0;
    ConstId nop = 0;
    std::map<std::string, ConstId> action_consts;
    std::map<std::string, ConstId> phase_consts; // P0, PL, PS, PL2, PS2
    GlobalId env_act = 0;
    GlobalId phase = 0;
    std::optional<GlobalId> turn;
    std::vector<ConstId> turn_consts;

    // initial values; every global and every array is covered
    std::vector<std::pair<GlobalId, ConstId>> init_globals;
    std::vector<std::pair<ArrayId, ConstId>> init_arrays;

    std::vector<TransitionRule> rules;

    [[nodiscard]] ConstId phase_const( const std::string& name ) const { return phase_consts.at( name ); }
    [[nodiscard]] ConstId init_of_global( GlobalId g ) const;
    [[nodiscard]] ConstId init_of_array( ArrayId a ) const;
};

} // namespace parasafe::encoder

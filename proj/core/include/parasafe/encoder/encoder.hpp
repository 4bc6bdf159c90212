#pragma once

#include "parasafe/encoder/ab_pmas.hpp"
#include "parasafe/model/pmas.hpp"

namespace parasafe::encoder
{

/// How `self` is read while translating a formula.
struct SelfBinding
{
    enum class Kind
    {
        None,
        Env,
        Var
    };
    Kind kind = Kind::None;
    VarId var = 0;

    static SelfBinding none() { return {}; }
    static SelfBinding env() { return { Kind::Env, 0 }; }
    static SelfBinding at( VarId v ) { return { Kind::Var, v }; }
};

/// A translated formula: the formula's free index variables become variables
/// first_var, first_var+1, ... with sorts `new_vars`.
struct Translation
{
    logic::Formula formula;
    std::vector<SortId> new_vars;
};

Translation translate_formula( const AbPmas& s, const model::Pmas& p, const model::AgentFormula& f, SelfBinding self,
                               VarId first_var );

/// Cube translation of a disjunction-free formula. `lits` is empty and
/// `unsat` set when the formula folds to false.
struct CubeTranslation
{
    std::vector<logic::Literal> lits;
    std::vector<SortId> new_vars;
    bool unsat = false;
};

/// Throws logic::EncodingError when a disjunction remains after normalisation.
CubeTranslation translate_agent_formula( const AbPmas& s, const model::Pmas& p, const model::AgentFormula& f,
                                         SelfBinding self, VarId first_var );

/// Signature, state symbols and initial values, without rules.
AbPmas encode_signature( const model::Pmas& p, Semantics sem );

AbPmas encode_interleaved( const model::Pmas& p );
AbPmas encode_concurrent( const model::Pmas& p );
AbPmas encode( const model::Pmas& p, Semantics sem );

/// One differentiated cube per index-equality pattern of each disjunct.
/// Throws logic::EncodingError for goals that mention self.
logic::StateFormula encode_goal( const AbPmas& s, const model::Pmas& p, const model::AgentFormula& goal );

/// Splits a cube with free (non-differentiated) variables into differentiated
/// cubes, one per set partition, resolving index literals.
std::vector<logic::Cube> differentiate( const logic::Signature& sig, const logic::Cube& c );

} // namespace parasafe::encoder

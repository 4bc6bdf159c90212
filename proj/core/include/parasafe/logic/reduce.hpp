#pragma once

#include "parasafe/logic/term.hpp"

#include <cstddef>
#include <vector>

namespace parasafe::logic
{

struct UFormula;

/// Term-level expression that may contain case-defined values and applied
/// lambda abstractions over the bound variable kBoundVar.
struct UExpr
{
    enum class Kind : std::uint8_t
    {
        Plain,
        Case,
        Apply
    };

    Kind kind = Kind::Plain;
    Term term;                  // Plain: the term; Apply: the index argument
    std::vector<UFormula> guards;
    std::vector<UExpr> values;  // Case: one per guard, plus the catch-all when has_default; Apply: the body
    bool has_default = false;

    static UExpr plain( Term t );
    static UExpr cases( std::vector<UFormula> guards, std::vector<UExpr> values, bool has_default );
    static UExpr apply( UExpr body, Term arg );
};

struct UFormula
{
    enum class Kind : std::uint8_t
    {
        True,
        False,
        Eq,
        Rel,
        Not,
        And,
        Or
    };

    Kind kind = Kind::True;
    RelId rel = 0;
    std::vector<UExpr> args;
    std::vector<UFormula> kids;

    static UFormula eq( UExpr a, UExpr b );
    static UFormula app( RelId r, std::vector<UExpr> args );
    static UFormula lift( const Literal& l );
    static UFormula lift( const Formula& f );
    static UFormula negate( UFormula f );
    static UFormula conj( std::vector<UFormula> fs );
    static UFormula disj( std::vector<UFormula> fs );
};

/// Substitutes `arg` for the bound variable throughout.
UExpr instantiate_bound( const UExpr& e, VarId arg );
UFormula instantiate_bound( const UFormula& f, VarId arg );

/// Beta-reduces every applied lambda; the result contains no Apply node.
UExpr beta( const UExpr& e );

/// Eliminates lambdas and case-defined values. A case without catch-all must
/// be exhaustive, otherwise EncodingError. `var_sorts` types the free variables.
Formula reduce_updates( const Signature& sig, const std::vector<SortId>& var_sorts, const UFormula& f );

/// Disjunctive normal form as literal lists. Throws BudgetExceeded past `cap` cubes.
std::vector<std::vector<Literal>> dnf( const Formula& f, std::size_t cap = 100000 );

} // namespace parasafe::logic

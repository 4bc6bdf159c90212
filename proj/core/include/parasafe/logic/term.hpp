#pragma once

#include "parasafe/logic/signature.hpp"

#include <compare>
#include <limits>
#include <vector>

namespace parasafe::logic
{

/// A term of the array-based language: index variable, element constant,
/// global variable, or an array read at an index variable.
struct Term
{
    enum class Kind : std::uint8_t
    {
        Var,
        Const,
        Global,
        Read
    };

    Kind kind = Kind::Const;
    std::uint32_t id = 0;    // VarId, ConstId, GlobalId or ArrayId
    VarId index = 0;         // Read only

    static Term var( VarId v ) { return { Kind::Var, v, 0 }; }
    static Term constant( ConstId c ) { return { Kind::Const, c, 0 }; }
    static Term global( GlobalId g ) { return { Kind::Global, g, 0 }; }
    static Term read( ArrayId a, VarId v ) { return { Kind::Read, a, v }; }

    [[nodiscard]] bool is_var() const { return kind == Kind::Var; }
    [[nodiscard]] bool is_const() const { return kind == Kind::Const; }
    [[nodiscard]] bool mentions_var() const { return kind == Kind::Var || kind == Kind::Read; }
    [[nodiscard]] VarId var_of() const { return kind == Kind::Var ? id : index; }

    auto operator<=>( const Term& ) const = default;
};

/// Reserved variable id used for the bound variable of a lambda.
inline constexpr VarId kBoundVar = std::numeric_limits<VarId>::max();

/// Equality between two terms of one sort, or a relation application.
struct Literal
{
    enum class Kind : std::uint8_t
    {
        Eq,
        Rel
    };

    Kind kind = Kind::Eq;
    bool positive = true;
    RelId rel = 0;
    std::vector<Term> args;

    static Literal eq( Term a, Term b, bool positive = true ) { return { Kind::Eq, positive, 0, { a, b } }; }
    static Literal neq( Term a, Term b ) { return eq( a, b, false ); }
    static Literal app( RelId r, std::vector<Term> args, bool positive = true )
    {
        return { Kind::Rel, positive, r, std::move( args ) };
    }

    [[nodiscard]] Literal negated() const
    {
        Literal l = *this;
        l.positive = !positive;
        return l;
    }

    auto operator<=>( const Literal& ) const = default;
};

/// Existentially closed conjunction of literals. Variables are numbered by
/// position in `vars`; distinct variables of one index sort denote distinct
/// indexes.
struct Cube
{
    std::vector<SortId> vars;
    std::vector<Literal> lits;

    auto operator<=>( const Cube& ) const = default;
};

/// Disjunction of cubes; no cubes means false.
struct StateFormula
{
    std::vector<Cube> cubes;

    [[nodiscard]] bool is_false() const { return cubes.empty(); }
};

/// Quantifier-free formula with arbitrary boolean structure.
struct Formula
{
    enum class Kind : std::uint8_t
    {
        True,
        False,
        Lit,
        Not,
        And,
        Or
    };

    Kind kind = Kind::True;
    Literal lit;
    std::vector<Formula> kids;

    static Formula top() { return {}; }
    static Formula bottom() { return { Kind::False, {}, {} }; }
    static Formula literal( Literal l ) { return { Kind::Lit, std::move( l ), {} }; }
    static Formula negate( Formula f );
    static Formula conj( std::vector<Formula> fs );
    static Formula disj( std::vector<Formula> fs );

    auto operator<=>( const Formula& ) const = default;
};

/// Exists-forall formula. Variables 0..exists-1 are existential, the rest
/// universal. Existentials are not implicitly differentiated.
struct EFFormula
{
    std::vector<SortId> exists;
    std::vector<SortId> forall;
    Formula matrix;
};

// Sort of a term under a variable-sort context.
SortId term_sort( const Signature& sig, const std::vector<SortId>& var_sorts, const Term& t );

// Throws IllTypedError on any sort mismatch.
void check_literal( const Signature& sig, const std::vector<SortId>& var_sorts, const Literal& l );
void check_formula( const Signature& sig, const std::vector<SortId>& var_sorts, const Formula& f );

// Variable renaming; `map[v]` is the new id of v.
Term rename( const Term& t, const std::vector<VarId>& map );
Literal rename( const Literal& l, const std::vector<VarId>& map );
Formula rename( const Formula& f, const std::vector<VarId>& map );

// Pushes negations onto literals and folds constants.
Formula nnf( const Formula& f );

Formula cube_formula( const Cube& c );

// Literals over index variables only.
bool is_index_literal( const Signature& sig, const std::vector<SortId>& var_sorts, const Literal& l );

} // namespace parasafe::logic

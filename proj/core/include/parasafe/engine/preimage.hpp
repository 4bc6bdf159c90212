#pragma once

#include "parasafe/encoder/ab_pmas.hpp"

#include <cstddef>

namespace parasafe::engine
{

/// Canonical cube form: equalities oriented with constants on the right,
/// literals sorted and deduplicated, `t != c` dropped when `t = c'` is present.
/// Returns false when the cube is unsatisfiable (index literals included).
bool normalize_cube( const logic::Signature& sig, logic::Cube& c );

/// Cubes of the preimage of one differentiated cube under one rule; every
/// output cube is differentiated, normalized and satisfiable. Universal guards
/// are instantiated over the variables of each produced cube. Throws
/// logic::BudgetExceeded when more than `max_cubes` cubes arise.
std::vector<logic::Cube> preimage( const encoder::AbPmas& s, const encoder::TransitionRule& r, const logic::Cube& c,
                                   std::size_t max_cubes = 100000 );

logic::StateFormula preimage( const encoder::AbPmas& s, const encoder::TransitionRule& r, const logic::StateFormula& phi,
                              std::size_t max_cubes = 100000 );

/// The same preimage computed by generic lambda/case elimination and DNF,
/// without the per-term case sharing; kept as a cross-check.
std::vector<logic::Cube> preimage_by_reduction( const encoder::AbPmas& s, const encoder::TransitionRule& r,
                                                const logic::Cube& c );

/// Satisfiability of the cube together with the initial formula.
bool intersects_init( const encoder::AbPmas& s, const logic::Cube& c );

/// Syntactic embedding: an injective sort-matching map sends every literal
/// of `general` into `specific`.
bool embeds( const logic::Cube& general, const logic::Cube& specific );

} // namespace parasafe::engine

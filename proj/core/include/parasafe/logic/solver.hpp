#pragma once

#include "parasafe/logic/euf.hpp"

#include <cstddef>
#include <vector>

namespace parasafe::logic
{

enum class SearchResult
{
    Sat,
    Unsat,
    Unknown
};

/// Backtracking search for a consistent choice of literals satisfying every
/// formula in `conjuncts` (NNF, variables read as distinct index constants),
/// on top of the facts already in `cc`. `max_branches` = 0 means unbounded;
/// running out yields Unknown.
SearchResult ground_search( CongruenceClosure cc, const std::vector<Formula>& conjuncts, std::size_t max_branches = 0 );

/// One map per set partition of `sorts`, sending every variable to the
/// smallest variable of its block. Only same-sort variables share a block.
std::vector<std::vector<VarId>> alldiff_partitions( const std::vector<SortId>& sorts );

/// All maps from `from` variables to `to` variables that respect sorts.
/// With `injective`, distinct sources go to distinct targets.
std::vector<std::vector<VarId>> sort_matching_maps( const std::vector<SortId>& from, const std::vector<SortId>& to,
                                                    bool injective );

struct SolverOptions
{
    std::size_t max_branches = 100000;
};

/// Decides an exists-forall formula by differentiation over set partitions of
/// the existentials, instantiation of universals over the named indexes, and
/// ground search. Throws BudgetExceeded when the branch budget runs out.
bool sat_exists_forall( const Signature& sig, const EFFormula& f, const SolverOptions& opts = {} );

} // namespace parasafe::logic

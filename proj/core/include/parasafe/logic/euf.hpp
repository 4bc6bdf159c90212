#pragma once

#include "parasafe/logic/term.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace parasafe::logic
{

/// Congruence closure over ground terms. Index variables are read as pairwise
/// distinct index constants; element constants of one sort are pairwise
/// distinct; relation atoms are applications equated with a TRUE or FALSE node.
/// Cheap to copy, so callers branch by copying.
class CongruenceClosure
{
public:
    using Node = std::uint32_t;

    CongruenceClosure();

    // Returns false once the asserted set is inconsistent; the object is then
    // poisoned and further assertions keep returning false.
    bool assert_literal( const Literal& l );
    bool assert_eq( const Term& a, const Term& b );
    bool assert_neq( const Term& a, const Term& b );

    [[nodiscard]] bool consistent() const { return _ok; }

    // Truth of a literal under the current closure when already decided.
    [[nodiscard]] std::optional<bool> evaluate( const Literal& l ) const;

private:
    Node intern( const Term& t );
    Node intern_app( RelId r, const std::vector<Term>& args );
    [[nodiscard]] std::optional<Node> lookup( const Term& t ) const;
    [[nodiscard]] std::optional<Node> lookup_app( RelId r, const std::vector<Term>& args ) const;
    [[nodiscard]] Node find( Node n ) const;
    bool merge( Node a, Node b );
    bool separate( Node a, Node b );
    [[nodiscard]] bool known_distinct( Node a, Node b ) const;
    [[nodiscard]] std::vector<Node> signature( Node app ) const;

    Node new_node( bool distinct );

    bool _ok = true;
    Node _true = 0;
    Node _false = 0;
    std::vector<Node> _parent;
    std::vector<std::uint32_t> _size;
    std::vector<bool> _distinct;              // root carries a pairwise-distinct value
    std::vector<std::vector<Node>> _uses;     // root -> apps with an argument in the class
    std::vector<std::vector<Node>> _app_args; // app node -> argument nodes (empty for atoms)
    std::vector<RelId> _app_rel;
    std::map<Term, Node> _atoms;
    std::map<std::vector<Node>, Node> _sigs; // (rel, arg roots...) -> app
    std::vector<std::pair<Node, Node>> _diseqs;
};

/// Satisfiability of a cube after reading its variables as distinct index
/// constants. Throws IllTypedError on sort mismatch.
bool euf_sat_cube( const Cube& cube, const Signature& sig );

} // namespace parasafe::logic

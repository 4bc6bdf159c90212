#include "parasafe/logic/euf.hpp"

#include <algorithm>

namespace parasafe::logic
{

CongruenceClosure::CongruenceClosure()
{
    _true = new_node( true );
    _false = new_node( true );
}

CongruenceClosure::Node CongruenceClosure::new_node( bool distinct )
{
    const auto n = static_cast<Node>( _parent.size() );
    _parent.push_back( n );
    _size.push_back( 1 );
    _distinct.push_back( distinct );
    _uses.emplace_back();
    _app_args.emplace_back();
    _app_rel.push_back( 0 );
    return n;
}

CongruenceClosure::Node CongruenceClosure::find( Node n ) const
{
    while ( _parent[n] != n )
        n = _parent[n];
    return n;
}

std::optional<CongruenceClosure::Node> CongruenceClosure::lookup( const Term& t ) const
{
    auto it = _atoms.find( t );
    if ( it == _atoms.end() )
        return std::nullopt;
    return it->second;
}

CongruenceClosure::Node CongruenceClosure::intern( const Term& t )
{
    if ( auto n = lookup( t ) )
        return *n;
    const bool distinct = t.kind == Term::Kind::Const || t.kind == Term::Kind::Var;
    const auto n = new_node( distinct );
    _atoms.emplace( t, n );
    return n;
}

std::vector<CongruenceClosure::Node> CongruenceClosure::signature( Node app ) const
{
    std::vector<Node> sig;
    sig.reserve( _app_args[app].size() + 1 );
    sig.push_back( _app_rel[app] );
    for ( auto a : _app_args[app] )
        sig.push_back( find( a ) );
    return sig;
}

CongruenceClosure::Node CongruenceClosure::intern_app( RelId r, const std::vector<Term>& args )
{
    std::vector<Node> arg_nodes;
    arg_nodes.reserve( args.size() );
    for ( const auto& a : args )
        arg_nodes.push_back( intern( a ) );

    std::vector<Node> sig;
    sig.push_back( r );
    for ( auto a : arg_nodes )
        sig.push_back( find( a ) );
    if ( auto it = _sigs.find( sig ); it != _sigs.end() )
        return it->second;

    const auto n = new_node( false );
    _app_rel[n] = r;
    _app_args[n] = arg_nodes;
    for ( auto a : arg_nodes )
    {
        auto& uses = _uses[find( a )];
        if ( std::find( uses.begin(), uses.end(), n ) == uses.end() )
            uses.push_back( n );
    }
    _sigs.emplace( std::move( sig ), n );
    return n;
}

std::optional<CongruenceClosure::Node> CongruenceClosure::lookup_app( RelId r, const std::vector<Term>& args ) const
{
    std::vector<Node> sig;
    sig.push_back( r );
    for ( const auto& a : args )
    {
        auto n = lookup( a );
        if ( !n )
            return std::nullopt;
        sig.push_back( find( *n ) );
    }
    auto it = _sigs.find( sig );
    if ( it == _sigs.end() )
        return std::nullopt;
    return it->second;
}

bool CongruenceClosure::merge( Node a, Node b )
{
    std::vector<std::pair<Node, Node>> pending{ { a, b } };
    while ( !pending.empty() )
    {
        auto [x, y] = pending.back();
        pending.pop_back();
        auto rx = find( x );
        auto ry = find( y );
        if ( rx == ry )
            continue;
        if ( _distinct[rx] && _distinct[ry] )
            return _ok = false;
        if ( _size[rx] < _size[ry] )
            std::swap( rx, ry );
        _parent[ry] = rx;
        _size[rx] += _size[ry];
        _distinct[rx] = _distinct[rx] || _distinct[ry];

        auto moved = std::move( _uses[ry] );
        _uses[ry].clear();
        for ( auto u : moved )
        {
            auto sig = signature( u );
            auto [it, inserted] = _sigs.emplace( std::move( sig ), u );
            if ( !inserted && find( it->second ) != find( u ) )
                pending.emplace_back( u, it->second );
            auto& uses = _uses[rx];
            if ( std::find( uses.begin(), uses.end(), u ) == uses.end() )
                uses.push_back( u );
        }
    }
    for ( auto [p, q] : _diseqs )
        if ( find( p ) == find( q ) )
            return _ok = false;
    return true;
}

bool CongruenceClosure::separate( Node a, Node b )
{
    if ( find( a ) == find( b ) )
        return _ok = false;
    _diseqs.emplace_back( a, b );
    return true;
}

bool CongruenceClosure::known_distinct( Node a, Node b ) const
{
    const auto ra = find( a );
    const auto rb = find( b );
    if ( ra == rb )
        return false;
    if ( _distinct[ra] && _distinct[rb] )
        return true;
    for ( auto [p, q] : _diseqs )
    {
        const auto rp = find( p );
        const auto rq = find( q );
        if ( ( rp == ra && rq == rb ) || ( rp == rb && rq == ra ) )
            return true;
    }
    return false;
}

bool CongruenceClosure::assert_eq( const Term& a, const Term& b )
{
    if ( !_ok )
        return false;
    return merge( intern( a ), intern( b ) );
}

bool CongruenceClosure::assert_neq( const Term& a, const Term& b )
{
    if ( !_ok )
        return false;
    return separate( intern( a ), intern( b ) );
}

bool CongruenceClosure::assert_literal( const Literal& l )
{
    if ( !_ok )
        return false;
    if ( l.kind == Literal::Kind::Eq )
        return l.positive ? assert_eq( l.args[0], l.args[1] ) : assert_neq( l.args[0], l.args[1] );
    const auto n = intern_app( l.rel, l.args );
    return merge( n, l.positive ? _true : _false );
}

std::optional<bool> CongruenceClosure::evaluate( const Literal& l ) const
{
    if ( !_ok )
        return std::nullopt;
    if ( l.kind == Literal::Kind::Eq )
    {
        const auto& a = l.args[0];
        const auto& b = l.args[1];
        std::optional<bool> eq;
        if ( a == b )
            eq = true;
        else
        {
            auto na = lookup( a );
            auto nb = lookup( b );
            const bool da = a.kind == Term::Kind::Const || a.kind == Term::Kind::Var;
            const bool db = b.kind == Term::Kind::Const || b.kind == Term::Kind::Var;
            if ( na && nb )
            {
                if ( find( *na ) == find( *nb ) )
                    eq = true;
                else if ( known_distinct( *na, *nb ) )
                    eq = false;
            }
            else if ( da && db )
                eq = false;
            else if ( na && db && _distinct[find( *na )] )
                eq = false;
            else if ( nb && da && _distinct[find( *nb )] )
                eq = false;
        }
        if ( !eq )
            return std::nullopt;
        return *eq == l.positive;
    }
    auto n = lookup_app( l.rel, l.args );
    if ( !n )
        return std::nullopt;
    const auto r = find( *n );
    if ( r == find( _true ) )
        return l.positive;
    if ( r == find( _false ) )
        return !l.positive;
    return std::nullopt;
}

bool euf_sat_cube( const Cube& cube, const Signature& sig )
{
    for ( const auto& l : cube.lits )
        check_literal( sig, cube.vars, l );
    CongruenceClosure cc;
    for ( const auto& l : cube.lits )
        if ( !cc.assert_literal( l ) )
            return false;
    return true;
}

} // namespace parasafe::logic

#include "parasafe/logic/signature.hpp"

#include "parasafe/logic/errors.hpp"

namespace parasafe::logic
{

namespace
{

template <typename Map>
auto lookup( const Map& map, std::string_view name ) -> std::optional<typename Map::mapped_type>
{
    auto it = map.find( std::string{ name } );
    if ( it == map.end() )
        return std::nullopt;
    return it->second;
}

} // namespace

void Signature::claim( const std::string& name )
{
    if ( name_taken( name ) )
        throw IllTypedError( "duplicate symbol '" + name + "'" );
}

bool Signature::name_taken( std::string_view name ) const
{
    const std::string key{ name };
    return _sort_by_name.contains( key ) || _const_by_name.contains( key ) || _rel_by_name.contains( key )
           || _global_by_name.contains( key ) || _array_by_name.contains( key );
}

SortId Signature::add_sort( std::string name, SortKind kind, const std::vector<std::string>& constants )
{
    claim( name );
    if ( kind == SortKind::Index && !constants.empty() )
        throw IllTypedError( "index sort '" + name + "' cannot declare constants" );

    const auto id = static_cast<SortId>( _sorts.size() );
    SortDecl decl{ name, kind, {} };
    for ( const auto& c : constants )
    {
        claim( c );
        const auto cid = static_cast<ConstId>( _const_names.size() );
        _const_names.push_back( c );
        _const_sorts.push_back( id );
        _const_by_name.emplace( c, cid );
        decl.constants.push_back( cid );
    }
    _sort_by_name.emplace( name, id );
    _sorts.push_back( std::move( decl ) );
    return id;
}

RelId Signature::add_relation( std::string name, std::vector<SortId> args )
{
    claim( name );
    if ( args.empty() )
        throw IllTypedError( "relation '" + name + "' needs at least one argument" );
    for ( auto s : args )
        if ( sort( s ).kind == SortKind::Index )
            throw IllTypedError( "relation '" + name + "' takes an index-sorted argument" );
    const auto id = static_cast<RelId>( _relations.size() );
    _rel_by_name.emplace( name, id );
    _relations.push_back( { std::move( name ), std::move( args ) } );
    return id;
}

GlobalId Signature::add_global( std::string name, SortId sort_id )
{
    claim( name );
    const auto id = static_cast<GlobalId>( _globals.size() );
    _global_by_name.emplace( name, id );
    _globals.push_back( { std::move( name ), sort_id } );
    return id;
}

ArrayId Signature::add_array( std::string name, SortId index, SortId element )
{
    claim( name );
    if ( sort( index ).kind != SortKind::Index )
        throw IllTypedError( "array '" + name + "' must be indexed by an index sort" );
    const auto id = static_cast<ArrayId>( _arrays.size() );
    _array_by_name.emplace( name, id );
    _arrays.push_back( { std::move( name ), index, element } );
    return id;
}

std::optional<SortId> Signature::find_sort( std::string_view name ) const { return lookup( _sort_by_name, name ); }
std::optional<ConstId> Signature::find_constant( std::string_view name ) const { return lookup( _const_by_name, name ); }
std::optional<RelId> Signature::find_relation( std::string_view name ) const { return lookup( _rel_by_name, name ); }
std::optional<GlobalId> Signature::find_global( std::string_view name ) const { return lookup( _global_by_name, name ); }
std::optional<ArrayId> Signature::find_array( std::string_view name ) const { return lookup( _array_by_name, name ); }

} // namespace parasafe::logic

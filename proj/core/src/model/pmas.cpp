#include "parasafe/model/pmas.hpp"

#include <algorithm>

namespace parasafe::model
{

int Pmas::env_template() const
{
    for ( std::size_t t = 0; t < templates.size(); ++t )
        if ( templates[t].is_env )
            return static_cast<int>( t );
    return -1;
}

std::optional<int> Pmas::find_sort( const std::string& name ) const
{
    for ( std::size_t i = 0; i < sorts.size(); ++i )
        if ( sorts[i].name == name )
            return static_cast<int>( i );
    return std::nullopt;
}

std::optional<int> Pmas::find_relation( const std::string& name ) const
{
    for ( std::size_t i = 0; i < relations.size(); ++i )
        if ( relations[i].name == name )
            return static_cast<int>( i );
    return std::nullopt;
}

std::optional<int> Pmas::find_var( const std::string& name ) const
{
    for ( std::size_t i = 0; i < vars.size(); ++i )
        if ( vars[i].name == name )
            return static_cast<int>( i );
    return std::nullopt;
}

std::optional<int> Pmas::find_template( const std::string& name ) const
{
    for ( std::size_t i = 0; i < templates.size(); ++i )
        if ( templates[i].name == name )
            return static_cast<int>( i );
    return std::nullopt;
}

std::optional<std::pair<int, int>> Pmas::find_constant( const std::string& name ) const
{
    for ( std::size_t s = 0; s < sorts.size(); ++s )
        for ( std::size_t v = 0; v < sorts[s].values.size(); ++v )
            if ( sorts[s].values[v] == name )
                return std::pair{ static_cast<int>( s ), static_cast<int>( v ) };
    return std::nullopt;
}

int Pmas::slot( int var ) const
{
    const auto& owner = templates.at( vars.at( var ).owner ).vars;
    return static_cast<int>( std::find( owner.begin(), owner.end(), var ) - owner.begin() );
}

std::vector<std::string> Pmas::sync_actions() const
{
    std::vector<std::string> out;
    for ( const auto& t : templates )
        for ( const auto& a : t.actions )
            if ( a.kind != ActionKind::Local && std::find( out.begin(), out.end(), a.name ) == out.end() )
                out.push_back( a.name );
    return out;
}

const Action* Pmas::find_action( int tmpl, const std::string& name ) const
{
    for ( const auto& a : templates.at( tmpl ).actions )
        if ( a.name == name )
            return &a;
    return nullptr;
}

int Pmas::turn_group( int tmpl ) const
{
    if ( !alternation )
        return 0;
    const auto& s = alternation->second;
    return std::find( s.begin(), s.end(), tmpl ) != s.end() ? 1 : 0;
}

int Pmas::sync_group( const std::string& action ) const
{
    for ( std::size_t t = 0; t < templates.size(); ++t )
        if ( const auto* a = find_action( static_cast<int>( t ), action ); a && a->initiator )
            return turn_group( static_cast<int>( t ) );
    return turn_group( env_template() );
}

bool RelInterpretation::holds( int rel, const std::vector<int>& args ) const
{
    if ( rel < 0 || static_cast<std::size_t>( rel ) >= tuples.size() )
        return false;
    const auto& ts = tuples[rel];
    return std::binary_search( ts.begin(), ts.end(), args );
}

} // namespace parasafe::model

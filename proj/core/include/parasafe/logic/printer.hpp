#pragma once

#include "parasafe/logic/term.hpp"

#include <string>

namespace parasafe::logic
{

// Variables print as z<id+1>.
std::string to_string( const Signature& sig, const Term& t );
std::string to_string( const Signature& sig, const Literal& l );
std::string to_string( const Signature& sig, const Cube& c );
std::string to_string( const Signature& sig, const StateFormula& f );
std::string to_string( const Signature& sig, const Formula& f );

} // namespace parasafe::logic

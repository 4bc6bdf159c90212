#pragma once

#include <stdexcept>
#include <string>

namespace parasafe::logic
{

/// Raised when a literal or formula mixes sorts.
class IllTypedError : public std::runtime_error
{
public:
    explicit IllTypedError( const std::string& what ) : std::runtime_error( "ill-typed input: " + what ) {}
};

/// Raised when a normal-form expansion exceeds its configured cube cap.
class BudgetExceeded : public std::runtime_error
{
public:
    explicit BudgetExceeded( const std::string& what ) : std::runtime_error( "budget exceeded: " + what ) {}
};

/// Raised by update reduction when a case partition is not exhaustive.
class EncodingError : public std::runtime_error
{
public:
    explicit EncodingError( const std::string& what ) : std::runtime_error( "encoding error: " + what ) {}
};

} // namespace parasafe::logic

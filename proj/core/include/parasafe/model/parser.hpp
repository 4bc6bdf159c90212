#pragma once

#include "parasafe/model/pmas.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace parasafe::model
{

struct Diagnostic
{
    Position pos;
    std::string message;
};

std::string format_diagnostics( const std::vector<Diagnostic>& diags );

/// Lexical, syntax, resolution or validation failure with positioned diagnostics.
class ParseError : public std::runtime_error
{
public:
    explicit ParseError( std::vector<Diagnostic> diags )
        : std::runtime_error( format_diagnostics( diags ) ), _diags( std::move( diags ) )
    {
    }

    [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const { return _diags; }

private:
    std::vector<Diagnostic> _diags;
};

/// Parses and validates a model document.
Pmas parse_pmas( std::string_view text );

/// Parses without running validate_pmas; resolution errors still throw.
Pmas parse_pmas_unchecked( std::string_view text );

/// Parses a standalone goal formula against a model's declarations.
AgentFormula parse_goal( const Pmas& p, std::string_view text );

std::vector<Diagnostic> validate_pmas( const Pmas& p );

} // namespace parasafe::model

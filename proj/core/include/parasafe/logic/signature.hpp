#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace parasafe::logic
{

using SortId = std::uint32_t;
using ConstId = std::uint32_t;
using RelId = std::uint32_t;
using GlobalId = std::uint32_t;
using ArrayId = std::uint32_t;
using VarId = std::uint32_t;

enum class SortKind : std::uint8_t
{
    Index,
    Element,
    Action,
    Phase
};

struct SortDecl
{
    std::string name;
    SortKind kind = SortKind::Element;
    std::vector<ConstId> constants;
};

struct RelDecl
{
    std::string name;
    std::vector<SortId> args;
};

struct GlobalDecl
{
    std::string name;
    SortId sort = 0;
};

struct ArrayDecl
{
    std::string name;
    SortId index = 0;
    SortId element = 0;
};

// Sorts, constants, relations and the state symbols (globals and arrays) of a
// many-sorted signature. Constants of non-index sorts are pairwise distinct.
// Constant names are unique across the whole signature.
class Signature
{
public:
    SortId add_sort( std::string name, SortKind kind, const std::vector<std::string>& constants = {} );
    RelId add_relation( std::string name, std::vector<SortId> args );
    GlobalId add_global( std::string name, SortId sort );
    ArrayId add_array( std::string name, SortId index, SortId element );

    [[nodiscard]] const SortDecl& sort( SortId id ) const { return _sorts.at( id ); }
    [[nodiscard]] const RelDecl& relation( RelId id ) const { return _relations.at( id ); }
    [[nodiscard]] const GlobalDecl& global( GlobalId id ) const { return _globals.at( id ); }
    [[nodiscard]] const ArrayDecl& array( ArrayId id ) const { return _arrays.at( id ); }

    [[nodiscard]] std::size_t sort_count() const { return _sorts.size(); }
    [[nodiscard]] std::size_t relation_count() const { return _relations.size(); }
    [[nodiscard]] std::size_t global_count() const { return _globals.size(); }
    [[nodiscard]] std::size_t array_count() const { return _arrays.size(); }
    [[nodiscard]] std::size_t constant_count() const { return _const_names.size(); }

    [[nodiscard]] const std::string& constant_name( ConstId id ) const { return _const_names.at( id ); }
    [[nodiscard]] SortId constant_sort( ConstId id ) const { return _const_sorts.at( id ); }

    [[nodiscard]] std::optional<SortId> find_sort( std::string_view name ) const;
    [[nodiscard]] std::optional<ConstId> find_constant( std::string_view name ) const;
    [[nodiscard]] std::optional<RelId> find_relation( std::string_view name ) const;
    [[nodiscard]] std::optional<GlobalId> find_global( std::string_view name ) const;
    [[nodiscard]] std::optional<ArrayId> find_array( std::string_view name ) const;

    // Every symbol name in one namespace; used to reject clashes.
    [[nodiscard]] bool name_taken( std::string_view name ) const;

private:
    void claim( const std::string& name );

    std::vector<SortDecl> _sorts;
    std::vector<RelDecl> _relations;
    std::vector<GlobalDecl> _globals;
    std::vector<ArrayDecl> _arrays;
    std::vector<std::string> _const_names;
    std::vector<SortId> _const_sorts;

    std::unordered_map<std::string, SortId> _sort_by_name;
    std::unordered_map<std::string, ConstId> _const_by_name;
    std::unordered_map<std::string, RelId> _rel_by_name;
    std::unordered_map<std::string, GlobalId> _global_by_name;
    std::unordered_map<std::string, ArrayId> _array_by_name;
};

} // namespace parasafe::logic

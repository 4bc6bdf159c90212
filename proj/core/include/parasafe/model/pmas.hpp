#pragma once

#include <optional>
#include <string>
#include <vector>

namespace parasafe::model
{

struct Position
{
    int line = 0;
    int column = 0;
};

/// Finite enumerated domain of template variables; values are indices into `values`.
struct Sort
{
    std::string name;
    std::vector<std::string> values;
};

struct Relation
{
    std::string name;
    std::vector<int> sorts;
};

struct Variable
{
    std::string name;
    int sort = 0;
    int init = 0;
    int owner = 0; // template index
};

/// Index position inside a formula: a formula-local variable, self, or the environment.
struct IndexRef
{
    enum class Kind
    {
        Var,
        Self,
        Env
    };
    Kind kind = Kind::Var;
    int var = 0;

    static IndexRef variable( int v ) { return { Kind::Var, v }; }
    static IndexRef self() { return { Kind::Self, 0 }; }
    static IndexRef env() { return { Kind::Env, 0 }; }

    bool operator==( const IndexRef& ) const = default;
};

/// v[idx] or a constant value of a sort.
struct ATerm
{
    enum class Kind
    {
        Read,
        Const
    };
    Kind kind = Kind::Const;
    int var = 0;
    IndexRef at;
    int sort = 0;
    int value = 0;

    static ATerm read( int var, IndexRef at ) { return { Kind::Read, var, at, 0, 0 }; }
    static ATerm constant( int sort, int value ) { return { Kind::Const, 0, {}, sort, value }; }

    bool operator==( const ATerm& ) const = default;
};

struct FNode
{
    enum class Kind
    {
        True,
        False,
        Eq,
        Rel,
        IdxEq,
        Not,
        And,
        Or
    };
    Kind kind = Kind::True;
    std::vector<ATerm> terms; // Eq: two sides, Rel: arguments
    int rel = 0;
    IndexRef a;
    IndexRef b;
    std::vector<FNode> kids;
    Position pos;

    static FNode top() { return {}; }
    static FNode bottom() { return { Kind::False, {}, 0, {}, {}, {}, {} }; }
    static FNode eq( ATerm l, ATerm r ) { return { Kind::Eq, { l, r }, 0, {}, {}, {}, {} }; }
    static FNode app( int rel, std::vector<ATerm> args ) { return { Kind::Rel, std::move( args ), rel, {}, {}, {}, {} }; }
    static FNode idx_eq( IndexRef a, IndexRef b ) { return { Kind::IdxEq, {}, 0, a, b, {}, {} }; }
    static FNode negate( FNode f ) { return { Kind::Not, {}, 0, {}, {}, { std::move( f ) }, {} }; }
    static FNode conj( std::vector<FNode> fs ) { return { Kind::And, {}, 0, {}, {}, std::move( fs ), {} }; }
    static FNode disj( std::vector<FNode> fs ) { return { Kind::Or, {}, 0, {}, {}, std::move( fs ), {} }; }

    bool operator==( const FNode& o ) const
    {
        return kind == o.kind && terms == o.terms && rel == o.rel && a == o.a && b == o.b && kids == o.kids;
    }
};

/// Quantifier-free agent formula; its free index variables are read existentially.
/// `index_owner[i]` is the template whose agents variable i ranges over (-1 before typing).
struct AgentFormula
{
    FNode root;
    std::vector<std::string> index_names;
    std::vector<int> index_owner;

    bool operator==( const AgentFormula& ) const = default;
};

enum class ActionKind
{
    Local,
    Sync,
    Individual
};

struct Effect
{
    int var = 0;
    int value = 0;

    bool operator==( const Effect& ) const = default;
};

struct Action
{
    std::string name;
    ActionKind kind = ActionKind::Local;
    bool initiator = false;
    AgentFormula pre;
    std::vector<Effect> effects;
    Position pos;
};

struct Template
{
    std::string name;
    bool is_env = false;
    std::vector<int> vars; // indices into Pmas::vars, declaration order
    std::vector<Action> actions;
    Position pos;
};

struct Alternation
{
    std::vector<int> first; // holds the initial turn
    std::vector<int> second;
};

struct Pmas
{
    std::vector<Sort> sorts;
    std::vector<Relation> relations;
    std::vector<Variable> vars;
    std::vector<Template> templates;
    std::optional<Alternation> alternation;
    std::optional<AgentFormula> goal;

    [[nodiscard]] int env_template() const;
    [[nodiscard]] std::optional<int> find_sort( const std::string& name ) const;
    [[nodiscard]] std::optional<int> find_relation( const std::string& name ) const;
    [[nodiscard]] std::optional<int> find_var( const std::string& name ) const;
    [[nodiscard]] std::optional<int> find_template( const std::string& name ) const;
    // (sort, value) of a constant name.
    [[nodiscard]] std::optional<std::pair<int, int>> find_constant( const std::string& name ) const;
    // Position of a variable inside its owner's variable list.
    [[nodiscard]] int slot( int var ) const;
    // Sync action names in first-declaration order across templates.
    [[nodiscard]] std::vector<std::string> sync_actions() const;
    [[nodiscard]] const Action* find_action( int tmpl, const std::string& name ) const;
    // Turn group (0 or 1) of a template; 0 without alternation.
    [[nodiscard]] int turn_group( int tmpl ) const;
    // Turn group of a sync action: that of an initiator, else the environment's.
    [[nodiscard]] int sync_group( const std::string& action ) const;
};

/// Concrete agents per template. The environment template holds exactly one agent.
struct Agent
{
    int id = 0;
    std::vector<int> vals; // by slot

    auto operator<=>( const Agent& ) const = default;
};

struct Snapshot
{
    std::vector<std::vector<Agent>> agents; // by template
    int turn = 0;

    auto operator<=>( const Snapshot& ) const = default;
};

/// Tuples (value indices) on which each relation holds.
struct RelInterpretation
{
    std::vector<std::vector<std::vector<int>>> tuples; // by relation, kept sorted

    [[nodiscard]] bool holds( int rel, const std::vector<int>& args ) const;
};

} // namespace parasafe::model

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crn2dsd
{

/// Species are plain identifiers: `[A-Za-z0-9_]+`, case-sensitive, never the literal `0`.
using SpeciesId = std::string;

struct SourceLocation
{
  std::size_t line = 0;
  std::size_t column = 0;
};

/*! \brief A high-level reaction.
 *
 * Reactant order is significant and is preserved by every pass; products form
 * an unordered multiset, kept sorted so that structural equality is canonical.
 */
struct Reaction
{
  std::size_t id = 0;
  std::vector<SpeciesId> reactants;
  std::vector<SpeciesId> products;
  SourceLocation where{};

  bool is_bimolecular() const noexcept { return reactants.size() == 2; }
  bool is_termolecular() const noexcept { return reactants.size() == 3; }

  /// Location is diagnostic only and does not take part in equality.
  friend bool operator==( Reaction const& a, Reaction const& b )
  {
    return a.id == b.id && a.reactants == b.reactants && a.products == b.products;
  }
};

struct Crn
{
  std::vector<Reaction> reactions;
  std::set<SpeciesId> species;

  bool empty() const noexcept { return reactions.empty(); }

  friend bool operator==( Crn const& a, Crn const& b )
  {
    return a.reactions == b.reactions && a.species == b.species;
  }
};

inline bool is_identifier( std::string_view s )
{
  if ( s.empty() || s == "0" )
    return false;
  return std::all_of( s.begin(), s.end(), []( char c ) {
    return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_';
  } );
}

/// Renumbers reactions 0..n-1, canonicalizes products and rebuilds the species table.
inline Crn make_crn( std::vector<Reaction> reactions )
{
  Crn crn;
  for ( std::size_t i = 0; i < reactions.size(); ++i )
  {
    auto& r = reactions[i];
    r.id = i;
    std::sort( r.products.begin(), r.products.end() );
    crn.species.insert( r.reactants.begin(), r.reactants.end() );
    crn.species.insert( r.products.begin(), r.products.end() );
  }
  crn.reactions = std::move( reactions );
  return crn;
}

enum class ParseErrorCode
{
  syntax,
  identifier,
  arity,
};

class ParseError : public std::runtime_error
{
public:
  ParseError( ParseErrorCode code, SourceLocation where, std::string const& what )
      : std::runtime_error( std::to_string( where.line ) + ":" + std::to_string( where.column ) + ": " + what ),
        code_( code ), where_( where )
  {
  }

  ParseErrorCode code() const noexcept { return code_; }
  SourceLocation where() const noexcept { return where_; }

private:
  ParseErrorCode code_;
  SourceLocation where_;
};

namespace detail
{

struct Token
{
  std::string text;
  std::size_t column;
};

/* splits one side of a reaction on '+', keeping 1-based columns */
inline std::vector<Token> split_side( std::string_view line, std::size_t begin, std::size_t end, std::size_t lineno )
{
  std::vector<Token> terms;
  std::size_t pos = begin;
  while ( true )
  {
    auto plus = line.find( '+', pos );
    if ( plus == std::string_view::npos || plus >= end )
      plus = end;

    std::size_t a = pos, b = plus;
    while ( a < b && std::isspace( static_cast<unsigned char>( line[a] ) ) )
      ++a;
    while ( b > a && std::isspace( static_cast<unsigned char>( line[b - 1] ) ) )
      --b;
    if ( a == b )
      throw ParseError( ParseErrorCode::syntax, { lineno, a + 1 }, "expected a species name" );
    terms.push_back( { std::string( line.substr( a, b - a ) ), a + 1 } );

    if ( plus == end )
      break;
    pos = plus + 1;
  }
  return terms;
}

} // namespace detail

/*! \brief Parses CRN text, one reaction per line.
 *
 * Grammar: `side -> side [# comment]`, where a side is `IDENT (+ IDENT)*` or
 * `0` (product side only).  Blank and comment-only lines are skipped.
 * Throws ParseError carrying a line/column; more than three reactants is
 * reported with ParseErrorCode::arity.
 */
inline Crn parse_crn( std::string_view text )
{
  std::vector<Reaction> reactions;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while ( start <= text.size() )
  {
    auto nl = text.find( '\n', start );
    if ( nl == std::string_view::npos )
      nl = text.size();
    auto line = text.substr( start, nl - start );
    ++lineno;
    start = nl + 1;

    if ( auto hash = line.find( '#' ); hash != std::string_view::npos )
      line = line.substr( 0, hash );
    if ( !line.empty() && line.back() == '\r' )
      line.remove_suffix( 1 );
    if ( std::all_of( line.begin(), line.end(), []( char c ) { return std::isspace( static_cast<unsigned char>( c ) ); } ) )
    {
      if ( nl == text.size() )
        break;
      continue;
    }

    auto arrow = line.find( "->" );
    if ( arrow == std::string_view::npos )
      throw ParseError( ParseErrorCode::syntax, { lineno, 1 }, "missing '->'" );
    if ( line.find( "->", arrow + 2 ) != std::string_view::npos )
      throw ParseError( ParseErrorCode::syntax, { lineno, line.find( "->", arrow + 2 ) + 1 }, "more than one '->'" );

    auto lhs = detail::split_side( line, 0, arrow, lineno );
    auto rhs = detail::split_side( line, arrow + 2, line.size(), lineno );

    Reaction r;
    r.where = { lineno, lhs.front().column };
    for ( auto const& tok : lhs )
    {
      if ( tok.text == "0" )
        throw ParseError( ParseErrorCode::syntax, { lineno, tok.column }, "'0' is only allowed as the product side" );
      if ( !is_identifier( tok.text ) )
        throw ParseError( ParseErrorCode::identifier, { lineno, tok.column }, "invalid species name '" + tok.text + "'" );
      r.reactants.push_back( tok.text );
    }
    if ( r.reactants.size() > 3 )
      throw ParseError( ParseErrorCode::arity, { lineno, lhs[3].column },
                        "reaction has " + std::to_string( r.reactants.size() ) + " reactants, at most 3 are supported" );

    if ( rhs.size() == 1 && rhs.front().text == "0" )
    {
      // empty product side
    }
    else
    {
      for ( auto const& tok : rhs )
      {
        if ( tok.text == "0" )
          throw ParseError( ParseErrorCode::syntax, { lineno, tok.column }, "'0' cannot be combined with other products" );
        if ( !is_identifier( tok.text ) )
          throw ParseError( ParseErrorCode::identifier, { lineno, tok.column }, "invalid species name '" + tok.text + "'" );
        r.products.push_back( tok.text );
      }
    }
    reactions.push_back( std::move( r ) );

    if ( nl == text.size() )
      break;
  }
  return make_crn( std::move( reactions ) );
}

inline std::string format_reaction( Reaction const& r )
{
  std::string out;
  for ( std::size_t i = 0; i < r.reactants.size(); ++i )
    out += ( i ? " + " : "" ) + r.reactants[i];
  out += " -> ";
  if ( r.products.empty() )
    out += "0";
  for ( std::size_t i = 0; i < r.products.size(); ++i )
    out += ( i ? " + " : "" ) + r.products[i];
  return out;
}

/// Canonical text; `parse_crn( serialize_crn( c ) ) == c`.
inline std::string serialize_crn( Crn const& crn )
{
  std::string out;
  for ( auto const& r : crn.reactions )
    out += format_reaction( r ) + "\n";
  return out;
}

/// Last reactant in the significant order: 2nd of a bimolecular, 3rd of a termolecular reaction.
inline SpeciesId const& final_reactant( Reaction const& r )
{
  if ( r.reactants.size() < 2 )
    throw std::invalid_argument( "reaction " + std::to_string( r.id ) + " has no final reactant (unimolecular)" );
  return r.reactants.back();
}

} // namespace crn2dsd

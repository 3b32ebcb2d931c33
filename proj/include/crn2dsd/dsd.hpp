#pragma once

#include <compare>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crn2dsd
{

enum class DomainKind
{
  toehold,
  recognition,
};

/*! \brief A nominal domain.
 *
 * Identity is (kind, label, complemented); toehold and recognition labels
 * never compare equal even if the label text coincides.
 */
struct Domain
{
  DomainKind kind = DomainKind::recognition;
  std::string label;
  bool complemented = false;

  static Domain toehold( std::string label ) { return { DomainKind::toehold, std::move( label ), false }; }
  static Domain recognition( std::string label ) { return { DomainKind::recognition, std::move( label ), false }; }

  Domain complement() const { return { kind, label, !complemented }; }
  bool is_toehold() const noexcept { return kind == DomainKind::toehold; }
  bool pairs_with( Domain const& other ) const noexcept
  {
    return kind == other.kind && label == other.label && complemented != other.complemented;
  }

  std::string str() const { return complemented ? label + "*" : label; }

  friend auto operator<=>( Domain const&, Domain const& ) = default;
};

enum class StrandRole
{
  species,
  linker,
  buffer1,
  buffer2,
  cap,
  backbone,
};

inline std::string_view to_string( StrandRole role )
{
  switch ( role )
  {
  case StrandRole::species: return "species";
  case StrandRole::linker: return "linker";
  case StrandRole::buffer1: return "buffer1";
  case StrandRole::buffer2: return "buffer2";
  case StrandRole::cap: return "cap";
  case StrandRole::backbone: return "backbone";
  }
  return "?";
}

struct Strand
{
  std::string id;
  std::vector<Domain> domains;
  StrandRole role = StrandRole::species;

  friend bool operator==( Strand const&, Strand const& ) = default;
};

inline std::string format_domains( std::vector<Domain> const& domains )
{
  std::string out = "[";
  for ( std::size_t i = 0; i < domains.size(); ++i )
    out += ( i ? ", " : "" ) + domains[i].str();
  return out + "]";
}

/// A domain instance inside a complex: strand index and domain index.
struct Site
{
  std::size_t strand = 0;
  std::size_t domain = 0;

  friend auto operator<=>( Site const&, Site const& ) = default;
};

struct Bond
{
  Site a;
  Site b;

  friend bool operator==( Bond const&, Bond const& ) = default;
};

/// Strands are linear; gadget complexes are nicked duplexes, so no pseudoknot check is made.
struct Complex
{
  std::string name;
  std::vector<Strand> strands;
  std::vector<Bond> bonds;

  Domain const& domain_at( Site s ) const { return strands[s.strand].domains[s.domain]; }

  /// The site bonded to `s`, if any.
  std::optional<Site> partner( Site s ) const
  {
    for ( auto const& b : bonds )
    {
      if ( b.a == s )
        return b.b;
      if ( b.b == s )
        return b.a;
    }
    return std::nullopt;
  }

  friend bool operator==( Complex const&, Complex const& ) = default;
};

enum class FaultKind
{
  dangling_bond,
  non_complementary,
  multiply_bonded,
  disconnected,
};

struct Fault
{
  FaultKind kind;
  std::string detail;
};

/// Empty result means the complex is well formed.
inline std::vector<Fault> check_complex( Complex const& c )
{
  std::vector<Fault> faults;
  auto valid = [&]( Site s ) { return s.strand < c.strands.size() && s.domain < c.strands[s.strand].domains.size(); };
  auto name = [&]( Site s ) { return "(" + std::to_string( s.strand ) + "," + std::to_string( s.domain ) + ")"; };

  std::vector<std::vector<int>> uses( c.strands.size() );
  for ( std::size_t i = 0; i < c.strands.size(); ++i )
    uses[i].assign( c.strands[i].domains.size(), 0 );

  std::vector<std::size_t> parent( c.strands.size() );
  std::iota( parent.begin(), parent.end(), 0u );
  auto find = [&]( std::size_t x ) {
    while ( parent[x] != x )
      x = parent[x] = parent[parent[x]];
    return x;
  };

  for ( auto const& b : c.bonds )
  {
    if ( !valid( b.a ) || !valid( b.b ) )
    {
      faults.push_back( { FaultKind::dangling_bond, "bond " + name( b.a ) + "-" + name( b.b ) + " refers to a missing domain" } );
      continue;
    }
    if ( !c.domain_at( b.a ).pairs_with( c.domain_at( b.b ) ) )
      faults.push_back( { FaultKind::non_complementary,
                          "bond " + c.domain_at( b.a ).str() + "-" + c.domain_at( b.b ).str() + " is not complementary" } );
    for ( auto s : { b.a, b.b } )
      if ( ++uses[s.strand][s.domain] == 2 )
        faults.push_back( { FaultKind::multiply_bonded, "domain " + name( s ) + " takes part in more than one bond" } );
    parent[find( b.a.strand )] = find( b.b.strand );
  }

  for ( std::size_t i = 1; i < c.strands.size(); ++i )
    if ( find( i ) != find( 0 ) )
    {
      faults.push_back( { FaultKind::disconnected, "strand " + c.strands[i].id + " is not connected to " + c.strands[0].id } );
      break;
    }
  return faults;
}

struct Exposure
{
  Complex const* complex = nullptr;
  std::vector<Site> sites;
};

/// Unbonded domain instances in strand order, then domain order.
inline Exposure exposed_sites( Complex const& c )
{
  Exposure out{ &c, {} };
  for ( std::size_t s = 0; s < c.strands.size(); ++s )
    for ( std::size_t d = 0; d < c.strands[s].domains.size(); ++d )
      if ( !c.partner( { s, d } ) )
        out.sites.push_back( { s, d } );
  return out;
}

} // namespace crn2dsd

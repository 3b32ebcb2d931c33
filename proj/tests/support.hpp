#pragma once

// Test-only generators and brute-force oracles.  Nothing here calls into the
// allocator or the ordering solver it is used to check.

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <crn2dsd/crn.hpp>

namespace crn2dsd::oracle
{

struct CrnShape
{
  std::size_t max_reactions = 6;
  std::size_t species = 6;
  std::size_t min_arity = 2;
  std::size_t max_arity = 3;
  std::size_t max_products = 3;
};

inline std::string species_name( std::size_t i )
{
  static const char* pool[] = { "A", "B", "C", "D", "E", "F", "G", "H", "S_1", "x2", "Yy", "Z_" };
  return i < std::size( pool ) ? pool[i] : "S" + std::to_string( i );
}

inline Crn random_crn( std::mt19937_64& rng, CrnShape const& shape )
{
  auto pick = [&]( std::size_t lo, std::size_t hi ) { return std::uniform_int_distribution<std::size_t>( lo, hi )( rng ); };
  std::vector<Reaction> rs( pick( 0, shape.max_reactions ) );
  for ( auto& r : rs )
  {
    auto const arity = pick( shape.min_arity, shape.max_arity );
    for ( std::size_t i = 0; i < arity; ++i )
      r.reactants.push_back( species_name( pick( 0, shape.species - 1 ) ) );
    auto const np = pick( 0, shape.max_products );
    for ( std::size_t i = 0; i < np; ++i )
      r.products.push_back( species_name( pick( 0, shape.species - 1 ) ) );
  }
  return make_crn( std::move( rs ) );
}

/// Direct check of the forbidden pattern: some species is reactant 1 somewhere and reactant 2 of a termolecular reaction.
inline bool ordering_ok_naive( std::vector<std::vector<std::string>> const& reactant_lists )
{
  std::set<std::string> firsts, seconds;
  for ( auto const& rs : reactant_lists )
  {
    firsts.insert( rs[0] );
    if ( rs.size() == 3 )
      seconds.insert( rs[1] );
  }
  for ( auto const& s : firsts )
    if ( seconds.count( s ) )
      return false;
  return true;
}

/// Tries all 2^k swaps of reactants 1 and 2 over the k termolecular reactions.
inline bool ordering_feasible_exhaustive( Crn const& crn )
{
  std::vector<std::size_t> ter;
  for ( std::size_t i = 0; i < crn.reactions.size(); ++i )
    if ( crn.reactions[i].reactants.size() == 3 )
      ter.push_back( i );
  for ( std::uint64_t mask = 0; mask < ( std::uint64_t{ 1 } << ter.size() ); ++mask )
  {
    std::vector<std::vector<std::string>> lists;
    for ( auto const& r : crn.reactions )
      lists.push_back( r.reactants );
    for ( std::size_t b = 0; b < ter.size(); ++b )
      if ( mask >> b & 1 )
        std::swap( lists[ter[b]][0], lists[ter[b]][1] );
    if ( ordering_ok_naive( lists ) )
      return true;
  }
  return false;
}

/*! Smallest number of linker labels satisfying: labels differ within a
 * final-reactant group.  Reactions are given only by their group index; the
 * search tries every assignment of k labels for increasing k. */
inline std::size_t min_labels_brute_force( std::vector<std::size_t> const& group_of )
{
  auto const n = group_of.size();
  if ( n == 0 )
    return 0;
  for ( std::size_t k = 1; k <= n; ++k )
  {
    std::vector<std::size_t> label( n, 0 );
    while ( true )
    {
      bool valid = true;
      for ( std::size_t i = 0; i < n && valid; ++i )
        for ( std::size_t j = i + 1; j < n && valid; ++j )
          if ( group_of[i] == group_of[j] && label[i] == label[j] )
            valid = false;
      if ( valid )
        return k;
      std::size_t pos = 0;
      while ( pos < n && ++label[pos] == k )
        label[pos++] = 0;
      if ( pos == n )
        break;
    }
  }
  return n;
}

/// All set partitions of {0..n-1} as restricted-growth strings.
inline std::vector<std::vector<std::size_t>> set_partitions( std::size_t n )
{
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> rgs( n, 0 );
  auto rec = [&]( auto&& self, std::size_t i, std::size_t max_used ) -> void {
    if ( i == n )
    {
      out.push_back( rgs );
      return;
    }
    for ( std::size_t g = 0; g <= max_used + 1; ++g )
    {
      rgs[i] = g;
      self( self, i + 1, std::max( max_used, g ) );
    }
  };
  if ( n == 0 )
    out.push_back( {} );
  else
  {
    rgs[0] = 0;
    rec( rec, 1, 0 );
  }
  return out;
}

/// CRN whose reactions have the given final-reactant groups (reaction i ends in species `F<group>`).
inline Crn crn_with_groups( std::vector<std::size_t> const& group_of, bool termolecular )
{
  std::vector<Reaction> rs;
  for ( std::size_t i = 0; i < group_of.size(); ++i )
  {
    Reaction r;
    r.reactants.push_back( "In" + std::to_string( i ) );
    if ( termolecular )
      r.reactants.push_back( "Mid" + std::to_string( i ) );
    r.reactants.push_back( "F" + std::to_string( group_of[i] ) );
    r.products.push_back( "Out" );
    rs.push_back( r );
  }
  return make_crn( std::move( rs ) );
}

/// Random CRN that already satisfies the ordering constraint.
inline Crn random_valid_crn( std::mt19937_64& rng, CrnShape const& shape )
{
  while ( true )
  {
    auto crn = random_crn( rng, shape );
    std::vector<std::vector<std::string>> lists;
    for ( auto const& r : crn.reactions )
      lists.push_back( r.reactants );
    if ( ordering_ok_naive( lists ) )
      return crn;
  }
}

} // namespace crn2dsd::oracle

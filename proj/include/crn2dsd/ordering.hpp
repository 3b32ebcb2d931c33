#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "crn.hpp"

namespace crn2dsd
{

/*! \brief Reactant roles relevant to buffer crosstalk.
 *
 * `first_of[s]` lists reactions where `s` is reactant 1 (any arity);
 * `second_ter_of[s]` lists termolecular reactions where `s` is reactant 2.
 * Position 2 of a bimolecular reaction is the final reactant and is not a
 * buffer role, so it never appears here.
 */
struct RoleTable
{
  std::map<SpeciesId, std::set<std::size_t>> first_of;
  std::map<SpeciesId, std::set<std::size_t>> second_ter_of;
};

inline RoleTable role_table( Crn const& crn )
{
  RoleTable roles;
  for ( auto const& r : crn.reactions )
  {
    if ( r.reactants.size() < 2 )
      continue;
    roles.first_of[r.reactants[0]].insert( r.id );
    if ( r.is_termolecular() )
      roles.second_ter_of[r.reactants[1]].insert( r.id );
  }
  return roles;
}

struct OrderingViolation
{
  SpeciesId species;
  std::size_t first_in = 0;
  std::size_t second_in = 0;

  friend auto operator<=>( OrderingViolation const&, OrderingViolation const& ) = default;
};

/// One violation per (species, reaction using it first, termolecular reaction using it second); sorted.
inline std::vector<OrderingViolation> validate_ordering( Crn const& crn )
{
  auto const roles = role_table( crn );
  std::vector<OrderingViolation> out;
  for ( auto const& [species, firsts] : roles.first_of )
  {
    auto it = roles.second_ter_of.find( species );
    if ( it == roles.second_ter_of.end() )
      continue;
    for ( auto f : firsts )
      for ( auto s : it->second )
        out.push_back( { species, f, s } );
  }
  return out;
}

/// Returned when no swap of reactants 1 and 2 fixes the ordering; `witness` is an irreducible conflicting set.
struct Infeasible
{
  std::vector<std::size_t> witness;
};

using OrderingResult = std::variant<Crn, Infeasible>;

namespace detail
{

/*! \brief Backtracking over one swap bit per termolecular reaction.
 *
 * Bimolecular reactions are fixed: swapping them would change their final
 * reactant.  Their first reactants are constants of the problem.
 */
class OrderingSearch
{
public:
  OrderingSearch( std::vector<Reaction const*> const& reactions )
  {
    for ( auto const* r : reactions )
    {
      if ( r->is_bimolecular() )
        fixed_first_.insert( r->reactants[0] );
      else if ( r->is_termolecular() )
        ter_.push_back( r );
    }
    std::sort( ter_.begin(), ter_.end(), []( auto* a, auto* b ) { return a->id < b->id; } );
  }

  /// Minimum-swap assignment, lexicographically smallest by reaction id among those; nullopt if none.
  std::optional<std::map<std::size_t, bool>> solve() const
  {
    std::map<std::size_t, bool> swaps;
    for ( auto const& component : components() )
    {
      auto bits = solve_component( component );
      if ( !bits )
        return std::nullopt;
      for ( std::size_t i = 0; i < component.size(); ++i )
        swaps[component[i]->id] = ( *bits )[i];
    }
    return swaps;
  }

private:
  /* termolecular reactions interact only through shared species in positions 1 and 2 */
  std::vector<std::vector<Reaction const*>> components() const
  {
    std::vector<std::size_t> parent( ter_.size() );
    std::iota( parent.begin(), parent.end(), 0u );
    auto find = [&]( std::size_t x ) {
      while ( parent[x] != x )
        x = parent[x] = parent[parent[x]];
      return x;
    };
    std::map<SpeciesId, std::size_t> owner;
    for ( std::size_t i = 0; i < ter_.size(); ++i )
      for ( std::size_t p = 0; p < 2; ++p )
      {
        auto [it, fresh] = owner.emplace( ter_[i]->reactants[p], i );
        if ( !fresh )
          parent[find( i )] = find( it->second );
      }

    std::map<std::size_t, std::vector<Reaction const*>> groups;
    for ( std::size_t i = 0; i < ter_.size(); ++i )
      groups[find( i )].push_back( ter_[i] );
    std::vector<std::vector<Reaction const*>> out;
    for ( auto& [root, members] : groups )
      out.push_back( std::move( members ) );
    std::sort( out.begin(), out.end(), []( auto const& a, auto const& b ) { return a.front()->id < b.front()->id; } );
    return out;
  }

  std::optional<std::vector<bool>> solve_component( std::vector<Reaction const*> const& rs ) const
  {
    for ( std::size_t budget = 0; budget <= rs.size(); ++budget )
    {
      std::vector<bool> bits( rs.size(), false );
      std::map<SpeciesId, int> firsts, seconds;
      for ( auto const& s : fixed_first_ )
        firsts[s] = 1;
      if ( dfs( rs, 0, budget, bits, firsts, seconds ) )
        return bits;
    }
    return std::nullopt;
  }

  static bool dfs( std::vector<Reaction const*> const& rs, std::size_t i, std::size_t budget, std::vector<bool>& bits,
                   std::map<SpeciesId, int>& firsts, std::map<SpeciesId, int>& seconds )
  {
    if ( budget > rs.size() - i )
      return false;
    if ( i == rs.size() )
      return budget == 0;

    for ( bool swap : { false, true } )
    {
      if ( swap && budget == 0 )
        break;
      auto const& first = rs[i]->reactants[swap ? 1 : 0];
      auto const& second = rs[i]->reactants[swap ? 0 : 1];
      if ( seconds[first] > 0 || firsts[second] > 0 || first == second )
        continue;
      ++firsts[first];
      ++seconds[second];
      bits[i] = swap;
      if ( dfs( rs, i + 1, budget - ( swap ? 1 : 0 ), bits, firsts, seconds ) )
        return true;
      --firsts[first];
      --seconds[second];
      bits[i] = false;
    }
    return false;
  }

  std::set<SpeciesId> fixed_first_;
  std::vector<Reaction const*> ter_;
};

inline bool ordering_feasible( std::vector<Reaction const*> const& reactions )
{
  return OrderingSearch( reactions ).solve().has_value();
}

} // namespace detail

/*! \brief Repairs the reactant ordering by swapping reactants 1 and 2 of termolecular reactions.
 *
 * The final reactant, the products and all bimolecular reactions are never
 * touched.  Among valid repairs the one with the fewest swaps wins, ties broken
 * by the lexicographically smallest swap vector in reaction-id order.
 */
inline OrderingResult solve_ordering( Crn const& crn )
{
  std::vector<Reaction const*> all;
  for ( auto const& r : crn.reactions )
    all.push_back( &r );

  if ( auto swaps = detail::OrderingSearch( all ).solve() )
  {
    Crn fixed = crn;
    for ( auto& r : fixed.reactions )
      if ( auto it = swaps->find( r.id ); it != swaps->end() && it->second )
        std::swap( r.reactants[0], r.reactants[1] );
    return fixed;
  }

  // deletion-based shrinking to an irreducible infeasible subset
  std::vector<Reaction const*> witness = all;
  for ( std::size_t i = 0; i < witness.size(); )
  {
    auto without = witness;
    without.erase( without.begin() + static_cast<std::ptrdiff_t>( i ) );
    if ( !detail::ordering_feasible( without ) )
      witness = std::move( without );
    else
      ++i;
  }
  Infeasible result;
  for ( auto const* r : witness )
    result.witness.push_back( r->id );
  return result;
}

} // namespace crn2dsd

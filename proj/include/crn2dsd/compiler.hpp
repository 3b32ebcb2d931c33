#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crn.hpp"
#include "dsd.hpp"
#include "ordering.hpp"

namespace crn2dsd
{

/* naming
 *
 * Every identity that is not a species strand contains a ':' so it can never
 * collide with a species name.
 */
namespace names
{

inline Domain universal_toehold() { return Domain::toehold( "t" ); }
inline Domain linker_toehold( std::size_t k ) { return Domain::toehold( "t" + std::to_string( k ) ); }
inline Domain species_domain( SpeciesId const& s ) { return Domain::recognition( "x_" + s ); }
inline Domain tail_domain( std::size_t reaction ) { return Domain::recognition( "j" + std::to_string( reaction ) ); }

inline std::string reaction( std::size_t r ) { return "r" + std::to_string( r ); }
inline std::string linker( std::size_t r ) { return "L:" + reaction( r ); }
inline std::string cap( std::size_t r ) { return "cap:" + reaction( r ); }
inline std::string buffer1( SpeciesId const& s ) { return "buf1:" + s; }
inline std::string buffer2( SpeciesId const& s ) { return "buf2:" + s; }
inline std::string input_gate( std::size_t r ) { return "g1:" + reaction( r ); }
inline std::string output_gate( std::size_t r ) { return "g2:" + reaction( r ); }
inline std::string waste( std::size_t r ) { return "waste:" + reaction( r ); }
inline std::string sink( std::size_t r ) { return "sink:" + reaction( r ); }

} // namespace names

/*! \brief Linker toehold per reaction plus the universal toehold.
 *
 * Valid assignments keep every linker toehold distinct from the universal
 * one, and distinct from each other within a group of reactions sharing the
 * same final reactant.  Reuse across groups is allowed.
 */
struct ToeholdAssignment
{
  Domain universal = names::universal_toehold();
  std::map<std::size_t, Domain> linker_of;

  std::size_t label_count() const
  {
    std::set<Domain> labels;
    for ( auto const& [r, d] : linker_of )
      labels.insert( d );
    return labels.size();
  }

  friend bool operator==( ToeholdAssignment const&, ToeholdAssignment const& ) = default;
};

/// Reactions grouped by final reactant; unimolecular reactions are skipped.
inline std::map<SpeciesId, std::vector<std::size_t>> final_reactant_groups( Crn const& crn )
{
  std::map<SpeciesId, std::vector<std::size_t>> groups;
  for ( auto const& r : crn.reactions )
    if ( r.reactants.size() >= 2 )
      groups[final_reactant( r )].push_back( r.id );
  return groups;
}

/// Human-readable rule violations of an assignment; empty means valid.
inline std::vector<std::string> validate_assignment( Crn const& crn, ToeholdAssignment const& asg )
{
  std::vector<std::string> problems;
  for ( auto const& r : crn.reactions )
  {
    auto it = asg.linker_of.find( r.id );
    if ( it == asg.linker_of.end() )
      problems.push_back( "reaction " + std::to_string( r.id ) + " has no linker toehold" );
    else if ( it->second == asg.universal )
      problems.push_back( "reaction " + std::to_string( r.id ) + " uses the universal toehold as its linker toehold" );
  }
  for ( auto const& [final, members] : final_reactant_groups( crn ) )
    for ( std::size_t i = 0; i < members.size(); ++i )
      for ( std::size_t j = i + 1; j < members.size(); ++j )
      {
        auto a = asg.linker_of.find( members[i] ), b = asg.linker_of.find( members[j] );
        if ( a != asg.linker_of.end() && b != asg.linker_of.end() && a->second == b->second )
          problems.push_back( "reactions " + std::to_string( members[i] ) + " and " + std::to_string( members[j] ) +
                              " share final reactant " + final + " and linker toehold " + a->second.str() );
      }
  return problems;
}

/*! \brief First-fit allocation of linker toeholds.
 *
 * Walking reactions in id order, each takes the smallest label `t1, t2, ...`
 * not yet used inside its final-reactant group.  The label count equals the
 * size of the largest group.
 */
inline ToeholdAssignment allocate_toeholds( Crn const& crn )
{
  ToeholdAssignment asg;
  std::map<SpeciesId, std::size_t> used;
  for ( auto const& r : crn.reactions )
  {
    auto const& final = final_reactant( r );
    asg.linker_of[r.id] = names::linker_toehold( ++used[final] );
  }
  return asg;
}

struct FaninWarning
{
  SpeciesId final;
  std::size_t group_size = 0;

  friend auto operator<=>( FaninWarning const&, FaninWarning const& ) = default;
};

inline constexpr std::size_t expected_max_fanin = 3;

/// Final reactants shared by more than three reactions; a diagnostic, allocation still succeeds.
inline std::vector<FaninWarning> check_fanin_bound( Crn const& crn )
{
  std::vector<FaninWarning> out;
  for ( auto const& [final, members] : final_reactant_groups( crn ) )
    if ( members.size() > expected_max_fanin )
      out.push_back( { final, members.size() } );
  return out;
}

enum class Stage
{
  fresh,
  r1_bound,
  r2_bound,
  final_bound,
  linker_bound,
};

inline std::string_view to_string( Stage s )
{
  switch ( s )
  {
  case Stage::fresh: return "Fresh";
  case Stage::r1_bound: return "R1Bound";
  case Stage::r2_bound: return "R2Bound";
  case Stage::final_bound: return "FinalBound";
  case Stage::linker_bound: return "LinkerBound";
  }
  return "?";
}

inline std::string gate_state_id( std::size_t reaction, Stage s )
{
  return names::input_gate( reaction ) + "@" + std::string( to_string( s ) );
}

/// One toehold-mediated displacement on the input gate's intended pathway.
struct PathwayStep
{
  Stage from;
  Stage to;
  std::string invader;
  std::size_t site = 0; ///< backbone position of the toehold the invader binds
  std::string displaced;
  bool consumes_displaced = false; ///< displaced strand goes to the reaction's sink

  friend bool operator==( PathwayStep const&, PathwayStep const& ) = default;
};

/*! \brief Gate complexes and fuels implementing one high-level reaction.
 *
 * Input gate backbone for `A + B + C -> ...` with linker toehold `tr`:
 *
 *     t*  x_A*  t*  x_B*  t*  x_C*  tr*
 *         [x_A   t ][x_B   t ][x_C   tr]     buffer1, buffer2, cap
 *
 * Only the leftmost `t*` is exposed.  Each reactant `[t, x_S]` binds the
 * exposed `t*`, displaces the strand to its right and uncovers the next
 * toehold.  Once the final reactant is bound `tr*` is exposed, and the linker
 * `[x_C, tr, jr]` binds it and displaces the final reactant leftwards.  The
 * linker tail `jr` then opens the output gate, which holds one `[t, x_P]` per
 * product on a backbone `jr* (t* x_P*)...`.  A bimolecular gadget omits the
 * middle segment and its buffer2.
 */
struct Gadget
{
  std::size_t reaction = 0;
  Reaction source;
  Complex input_gate;
  Complex output_gate;
  Strand linker;
  Strand cap;
  std::vector<Strand> buffers_initial;
  std::vector<Stage> stages;
  std::vector<PathwayStep> pathway;
};

inline Strand species_strand( SpeciesId const& s )
{
  return { s, { names::universal_toehold(), names::species_domain( s ) }, StrandRole::species };
}

enum class CompileErrorKind
{
  ordering,
  infeasible,
  arity,
  missing_assignment,
  unknown_species,
};

class CompileError : public std::runtime_error
{
public:
  CompileError( CompileErrorKind kind, std::string const& what ) : std::runtime_error( what ), kind_( kind ) {}

  CompileErrorKind kind() const noexcept { return kind_; }

  std::vector<OrderingViolation> violations;
  std::vector<std::size_t> witness;

private:
  CompileErrorKind kind_;
};

inline Gadget compile_reaction( Reaction const& r, ToeholdAssignment const& asg )
{
  if ( r.reactants.size() < 2 || r.reactants.size() > 3 )
    throw CompileError( CompileErrorKind::arity, "reaction " + std::to_string( r.id ) + " (" + format_reaction( r ) +
                                                     ") must have 2 or 3 reactants" );
  auto it = asg.linker_of.find( r.id );
  if ( it == asg.linker_of.end() )
    throw CompileError( CompileErrorKind::missing_assignment, "no linker toehold for reaction " + std::to_string( r.id ) );

  auto const t = asg.universal;
  auto const tr = it->second;
  auto const k = r.reactants.size();
  auto const& final = r.reactants.back();

  Gadget g;
  g.reaction = r.id;
  g.source = r;

  Strand backbone{ names::input_gate( r.id ), {}, StrandRole::backbone };
  for ( auto const& s : r.reactants )
  {
    backbone.domains.push_back( t.complement() );
    backbone.domains.push_back( names::species_domain( s ).complement() );
  }
  backbone.domains.push_back( tr.complement() );

  g.input_gate.name = gate_state_id( r.id, Stage::fresh );
  g.input_gate.strands.push_back( backbone );
  auto bind_top = [&]( Strand const& top, std::size_t at ) {
    auto const idx = g.input_gate.strands.size();
    g.input_gate.strands.push_back( top );
    for ( std::size_t d = 0; d < top.domains.size(); ++d )
      g.input_gate.bonds.push_back( { { 0, at + d }, { idx, d } } );
  };

  Strand buffer1{ names::buffer1( r.reactants[0] ), { names::species_domain( r.reactants[0] ), t }, StrandRole::buffer1 };
  bind_top( buffer1, 1 );
  g.buffers_initial.push_back( buffer1 );
  if ( k == 3 )
  {
    Strand buffer2{ names::buffer2( r.reactants[1] ), { names::species_domain( r.reactants[1] ), t }, StrandRole::buffer2 };
    bind_top( buffer2, 3 );
    g.buffers_initial.push_back( buffer2 );
  }
  g.cap = { names::cap( r.id ), { names::species_domain( final ), tr }, StrandRole::cap };
  bind_top( g.cap, 2 * k - 1 );

  g.linker = { names::linker( r.id ), { names::species_domain( final ), tr, names::tail_domain( r.id ) }, StrandRole::linker };

  g.stages = { Stage::fresh, Stage::r1_bound };
  g.pathway.push_back( { Stage::fresh, Stage::r1_bound, r.reactants[0], 0, buffer1.id, false } );
  if ( k == 3 )
  {
    g.stages.push_back( Stage::r2_bound );
    g.pathway.push_back( { Stage::r1_bound, Stage::r2_bound, r.reactants[1], 2, names::buffer2( r.reactants[1] ), false } );
  }
  g.pathway.push_back( { g.stages.back(), Stage::final_bound, final, 2 * ( k - 1 ), g.cap.id, false } );
  g.pathway.push_back( { Stage::final_bound, Stage::linker_bound, g.linker.id, 2 * k, final, true } );
  g.stages.push_back( Stage::final_bound );
  g.stages.push_back( Stage::linker_bound );

  Strand out_backbone{ names::output_gate( r.id ), { names::tail_domain( r.id ).complement() }, StrandRole::backbone };
  for ( auto const& p : r.products )
  {
    out_backbone.domains.push_back( t.complement() );
    out_backbone.domains.push_back( names::species_domain( p ).complement() );
  }
  g.output_gate.name = names::output_gate( r.id );
  g.output_gate.strands.push_back( out_backbone );
  for ( std::size_t i = 0; i < r.products.size(); ++i )
  {
    auto const idx = g.output_gate.strands.size();
    g.output_gate.strands.push_back( species_strand( r.products[i] ) );
    g.output_gate.bonds.push_back( { { 0, 1 + 2 * i }, { idx, 0 } } );
    g.output_gate.bonds.push_back( { { 0, 2 + 2 * i }, { idx, 1 } } );
  }
  return g;
}

/// Deliberate rule violations, used to reproduce the crosstalk failures the rules prevent.
enum class Sabotage
{
  none,
  share_linker_toehold, ///< reactions sharing a final reactant share one linker toehold
  linker_equals_t,      ///< every linker toehold is the universal toehold
  swap_order,           ///< reactants 1 and 2 of the first termolecular reaction are swapped, ordering unchecked
};

struct CompileOptions
{
  bool fix_order = false;
  bool force = false; ///< skip ordering validation
  std::uint64_t fuel_count = 100;
  std::map<SpeciesId, std::uint64_t> initial;
  Sabotage sabotage = Sabotage::none;
};

struct DsdSystem
{
  Crn crn;
  ToeholdAssignment assignment;
  std::vector<Gadget> gadgets;
  std::map<std::string, Strand> strands; ///< every strand that can be free in solution, by identity
  std::map<std::string, std::uint64_t> initial_counts;
  std::set<std::string> gc_sinks;
  std::vector<std::string> warnings;
};

inline ToeholdAssignment sabotage_assignment( Crn const& crn, ToeholdAssignment asg, Sabotage how )
{
  if ( how == Sabotage::share_linker_toehold )
  {
    for ( auto const& [final, members] : final_reactant_groups( crn ) )
      for ( auto r : members )
        asg.linker_of[r] = asg.linker_of[members.front()];
  }
  else if ( how == Sabotage::linker_equals_t )
  {
    for ( auto& [r, d] : asg.linker_of )
      d = asg.universal;
  }
  return asg;
}

inline DsdSystem compile_crn( Crn crn, CompileOptions const& opts = {} )
{
  for ( auto const& r : crn.reactions )
    if ( r.reactants.size() < 2 )
      throw CompileError( CompileErrorKind::arity, "reaction " + std::to_string( r.id ) + " (" + format_reaction( r ) +
                                                       ") is unimolecular; only 2 or 3 reactants are supported" );

  DsdSystem sys;
  bool check_order = !opts.force;

  if ( opts.fix_order )
  {
    auto fixed = solve_ordering( crn );
    if ( auto* bad = std::get_if<Infeasible>( &fixed ) )
    {
      std::string ids;
      for ( auto r : bad->witness )
        ids += ( ids.empty() ? "" : ", " ) + std::to_string( r );
      CompileError err( CompileErrorKind::infeasible, "no reactant ordering satisfies the buffer constraint; conflicting reactions: " + ids );
      err.witness = bad->witness;
      throw err;
    }
    crn = std::get<Crn>( std::move( fixed ) );
  }

  if ( opts.sabotage == Sabotage::swap_order )
  {
    for ( auto& r : crn.reactions )
      if ( r.is_termolecular() )
      {
        std::swap( r.reactants[0], r.reactants[1] );
        break;
      }
    check_order = false;
  }

  if ( check_order )
    if ( auto violations = validate_ordering( crn ); !violations.empty() )
    {
      CompileError err( CompileErrorKind::ordering, std::to_string( violations.size() ) + " reactant ordering violation(s)" );
      err.violations = std::move( violations );
      throw err;
    }

  for ( auto const& [s, n] : opts.initial )
    if ( !crn.species.count( s ) )
      throw CompileError( CompileErrorKind::unknown_species, "initial count given for unknown species '" + s + "'" );

  for ( auto const& w : check_fanin_bound( crn ) )
    sys.warnings.push_back( "final reactant " + w.final + " is shared by " + std::to_string( w.group_size ) +
                            " reactions (more than " + std::to_string( expected_max_fanin ) + ")" );

  sys.assignment = sabotage_assignment( crn, allocate_toeholds( crn ), opts.sabotage );

  for ( auto const& s : crn.species )
  {
    sys.strands.emplace( s, species_strand( s ) );
    auto it = opts.initial.find( s );
    sys.initial_counts[s] = it == opts.initial.end() ? 0 : it->second;
  }

  for ( auto const& r : crn.reactions )
  {
    auto g = compile_reaction( r, sys.assignment );
    for ( auto const& b : g.buffers_initial )
    {
      sys.strands.emplace( b.id, b );
      if ( b.role == StrandRole::buffer2 )
        sys.gc_sinks.insert( b.id );
    }
    sys.strands.emplace( g.cap.id, g.cap );
    sys.strands.emplace( g.linker.id, g.linker );

    sys.initial_counts[g.input_gate.name] = opts.fuel_count;
    sys.initial_counts[g.linker.id] = opts.fuel_count;
    sys.initial_counts[g.output_gate.name] = opts.fuel_count;
    sys.gadgets.push_back( std::move( g ) );
  }
  sys.crn = std::move( crn );
  return sys;
}

using DomainList = std::vector<Domain>;

/// Identities (full domain lists) of buffer1 and buffer2 strands across all gadgets.
inline std::pair<std::set<DomainList>, std::set<DomainList>> buffer_sets( DsdSystem const& sys )
{
  std::pair<std::set<DomainList>, std::set<DomainList>> out;
  for ( auto const& g : sys.gadgets )
    for ( auto const& b : g.buffers_initial )
      ( b.role == StrandRole::buffer1 ? out.first : out.second ).insert( b.domains );
  return out;
}

} // namespace crn2dsd

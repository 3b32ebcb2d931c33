#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "analyzer.hpp"
#include "compiler.hpp"

namespace crn2dsd
{

struct LowLevelReaction
{
  std::string name;
  std::vector<std::pair<std::size_t, std::uint32_t>> reactants;
  std::vector<std::pair<std::size_t, std::uint32_t>> products;
  double rate = 1.0;
};

/// Low-level reactions over identities (free strands, gate stages, output gates, sinks).
struct SsaNetwork
{
  std::vector<std::string> species;
  std::map<std::string, std::size_t> index;
  std::vector<LowLevelReaction> reactions;

  std::size_t intern( std::string const& id )
  {
    auto [it, fresh] = index.emplace( id, species.size() );
    if ( fresh )
      species.push_back( id );
    return it->second;
  }
};

struct SsaOptions
{
  bool include_spurious = false;
  GcMode gc = GcMode::assumed;
  bool final_sink = true; ///< the final reactant displaced by the linker is consumed
  std::map<std::string, double> rates; ///< per-event overrides, by event name
};

namespace detail
{

inline void add_term( std::vector<std::pair<std::size_t, std::uint32_t>>& side, std::size_t id )
{
  for ( auto& [s, n] : side )
    if ( s == id )
    {
      ++n;
      return;
    }
  side.emplace_back( id, 1 );
}

inline std::string event_name( InteractionEvent const& e )
{
  if ( e.kind == EventKind::product_release )
    return names::reaction( e.gadget ) + "/release";
  auto name = names::reaction( e.gadget ) + "/" + std::string( to_string( e.stage ) ) + "/" + e.invader;
  return e.classification == Classification::spurious ? name + "!" : name;
}

} // namespace detail

/*! \brief One unit-rate low-level reaction per intended (and optionally spurious) interaction.
 *
 * Reverse events are not included.  In `GcMode::assumed` every buffer2 strand
 * also gets a first-order sink reaction.
 */
inline SsaNetwork build_ssa_network( DsdSystem const& sys, SsaOptions const& opts = {} )
{
  SsaNetwork net;
  for ( auto const& [id, n] : sys.initial_counts )
    net.intern( id );
  if ( sys.gadgets.empty() )
    return net;

  auto const report = enumerate_interactions( sys, { opts.gc } );
  for ( auto const& e : report.events )
  {
    if ( e.classification == Classification::intended_reverse )
      continue;
    if ( e.classification == Classification::spurious && !opts.include_spurious )
      continue;

    LowLevelReaction r;
    r.name = detail::event_name( e );
    if ( e.kind == EventKind::product_release )
    {
      detail::add_term( r.reactants, net.intern( gate_state_id( e.gadget, e.stage ) ) );
      detail::add_term( r.reactants, net.intern( e.target ) );
      detail::add_term( r.products, net.intern( e.result ) );
      for ( auto const& p : e.displaced )
        detail::add_term( r.products, net.intern( p ) );
    }
    else
    {
      detail::add_term( r.reactants, net.intern( e.invader ) );
      detail::add_term( r.reactants, net.intern( e.target ) );
      detail::add_term( r.products, net.intern( e.result ) );
      bool const consumed = opts.final_sink && e.classification == Classification::intended && e.stage == Stage::final_bound;
      detail::add_term( r.products, net.intern( consumed ? names::sink( e.gadget ) : e.displaced.front() ) );
    }
    if ( auto it = opts.rates.find( r.name ); it != opts.rates.end() )
      r.rate = it->second;
    net.reactions.push_back( std::move( r ) );
  }

  if ( opts.gc == GcMode::assumed )
    for ( auto const& id : sys.gc_sinks )
    {
      LowLevelReaction r;
      r.name = "gc/" + id;
      detail::add_term( r.reactants, net.intern( id ) );
      if ( auto it = opts.rates.find( r.name ); it != opts.rates.end() )
        r.rate = it->second;
      net.reactions.push_back( std::move( r ) );
    }
  return net;
}

struct SystemState
{
  std::map<std::string, std::uint64_t> counts;
  double time = 0.0;
};

inline SystemState initial_state( DsdSystem const& sys )
{
  return { sys.initial_counts, 0.0 };
}

/// Quiescence always stops a run; the optional limits stop it earlier.
struct StopCondition
{
  std::optional<std::uint64_t> max_steps;
  std::optional<double> max_time;
};

struct TrajectoryStep
{
  double time = 0.0;
  std::size_t event = 0;
  std::vector<std::pair<std::size_t, std::int64_t>> delta;

  friend bool operator==( TrajectoryStep const&, TrajectoryStep const& ) = default;
};

struct Trajectory
{
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> initial;
  std::vector<TrajectoryStep> steps;
  std::vector<std::uint64_t> final;
  double final_time = 0.0;
  bool quiescent = false;

  friend bool operator==( Trajectory const&, Trajectory const& ) = default;
};

namespace detail
{

inline double choose( std::uint64_t n, std::uint32_t k )
{
  double c = 1.0;
  for ( std::uint32_t i = 0; i < k; ++i )
  {
    if ( n < k )
      return 0.0;
    c = c * static_cast<double>( n - i ) / static_cast<double>( i + 1 );
  }
  return c;
}

inline std::vector<std::uint64_t> dense_state( SsaNetwork const& net, SystemState const& s )
{
  std::vector<std::uint64_t> counts( net.species.size(), 0 );
  for ( auto const& [id, n] : s.counts )
  {
    auto it = net.index.find( id );
    if ( it == net.index.end() )
    {
      if ( n == 0 )
        continue;
      throw std::invalid_argument( "state mentions '" + id + "', which the network does not know" );
    }
    counts[it->second] = n;
  }
  return counts;
}

} // namespace detail

/*! \brief Exact stochastic simulation (direct method).
 *
 * Propensity is rate times the product of binomial reactant counts.  The
 * generator is a 64-bit Mersenne twister seeded with `seed`; uniforms are
 * drawn from its top 53 bits so runs are identical across platforms.
 */
inline Trajectory simulate( SsaNetwork const& net, SystemState const& initial, std::uint64_t seed, StopCondition const& stop = {} )
{
  Trajectory traj;
  traj.seed = seed;
  traj.initial = detail::dense_state( net, initial );
  auto counts = traj.initial;
  double time = initial.time;

  std::mt19937_64 rng( seed );
  auto uniform = [&rng] { return static_cast<double>( rng() >> 11 ) * 0x1.0p-53; };

  std::vector<double> propensity( net.reactions.size() );
  while ( true )
  {
    if ( stop.max_steps && traj.steps.size() >= *stop.max_steps )
      break;

    double total = 0.0;
    for ( std::size_t i = 0; i < net.reactions.size(); ++i )
    {
      double a = net.reactions[i].rate;
      for ( auto const& [s, k] : net.reactions[i].reactants )
        a *= detail::choose( counts[s], k );
      propensity[i] = a;
      total += a;
    }
    if ( total <= 0.0 )
    {
      traj.quiescent = true;
      break;
    }

    double const dt = -std::log( 1.0 - uniform() ) / total;
    if ( stop.max_time && time + dt > *stop.max_time )
    {
      time = *stop.max_time;
      break;
    }
    time += dt;

    double pick = uniform() * total;
    std::size_t chosen = 0;
    for ( ; chosen + 1 < propensity.size(); ++chosen )
    {
      if ( pick < propensity[chosen] )
        break;
      pick -= propensity[chosen];
    }
    while ( propensity[chosen] <= 0.0 )
      --chosen;

    TrajectoryStep step{ time, chosen, {} };
    std::map<std::size_t, std::int64_t> delta;
    for ( auto const& [s, k] : net.reactions[chosen].reactants )
      delta[s] -= k;
    for ( auto const& [s, k] : net.reactions[chosen].products )
      delta[s] += k;
    for ( auto const& [s, d] : delta )
    {
      if ( d == 0 )
        continue;
      counts[s] = static_cast<std::uint64_t>( static_cast<std::int64_t>( counts[s] ) + d );
      step.delta.emplace_back( s, d );
    }
    traj.steps.push_back( std::move( step ) );
  }
  traj.final = counts;
  traj.final_time = time;
  return traj;
}

inline SystemState to_state( SsaNetwork const& net, std::vector<std::uint64_t> const& counts, double time = 0.0 )
{
  SystemState s;
  s.time = time;
  for ( std::size_t i = 0; i < counts.size(); ++i )
    s.counts[net.species[i]] = counts[i];
  return s;
}

namespace detail
{

/* which reactants a gate at `stage` holds; the final reactant stays accounted
 * to the gate once the linker has displaced it into the sink */
inline std::vector<SpeciesId> bound_reactants( Reaction const& r, Stage stage, bool final_sink )
{
  auto const& rs = r.reactants;
  switch ( stage )
  {
  case Stage::fresh: return {};
  case Stage::r1_bound: return { rs[0] };
  case Stage::r2_bound: return { rs[0], rs[1] };
  case Stage::final_bound: return rs;
  case Stage::linker_bound:
    return final_sink ? rs : std::vector<SpeciesId>( rs.begin(), rs.end() - 1 );
  }
  return {};
}

enum class IdentityKind
{
  species,
  free_strand,
  gate_stage,
  gate_corrupted,
  output_gate,
  waste,
  sink,
};

struct Identity
{
  IdentityKind kind;
  std::size_t reaction = 0;
  Stage stage = Stage::fresh;
};

inline std::optional<Identity> classify_identity( DsdSystem const& sys, std::string const& id )
{
  if ( sys.crn.species.count( id ) )
    return Identity{ IdentityKind::species };
  if ( sys.strands.count( id ) )
    return Identity{ IdentityKind::free_strand };
  for ( auto const& g : sys.gadgets )
  {
    auto const r = g.reaction;
    if ( id == names::output_gate( r ) )
      return Identity{ IdentityKind::output_gate, r };
    if ( id == names::waste( r ) )
      return Identity{ IdentityKind::waste, r };
    if ( id == names::sink( r ) )
      return Identity{ IdentityKind::sink, r };
    for ( auto s : g.stages )
    {
      auto const gate = gate_state_id( r, s );
      if ( id == gate )
        return Identity{ IdentityKind::gate_stage, r, s };
      if ( id.size() > gate.size() && id.compare( 0, gate.size(), gate ) == 0 && id[gate.size()] == '~' )
        return Identity{ IdentityKind::gate_corrupted, r, s };
    }
  }
  return std::nullopt;
}

} // namespace detail

/// Free species-strand counts; every identity of the system maps, anything else throws.
inline std::map<SpeciesId, std::uint64_t> map_state( DsdSystem const& sys, SystemState const& s )
{
  std::map<SpeciesId, std::uint64_t> out;
  for ( auto const& sp : sys.crn.species )
    out[sp] = 0;
  for ( auto const& [id, n] : s.counts )
  {
    auto kind = detail::classify_identity( sys, id );
    if ( !kind )
      throw std::invalid_argument( "unknown identity '" + id + "'" );
    if ( kind->kind == detail::IdentityKind::species )
      out[id] += n;
  }
  return out;
}

/// Reactants held by gates that have not completed their pathway yet.
inline std::map<SpeciesId, std::uint64_t> in_flight( DsdSystem const& sys, SystemState const& s, bool final_sink = true )
{
  std::map<SpeciesId, std::uint64_t> out;
  for ( auto const& [id, n] : s.counts )
  {
    if ( n == 0 )
      continue;
    auto kind = detail::classify_identity( sys, id );
    if ( !kind )
      throw std::invalid_argument( "unknown identity '" + id + "'" );
    if ( kind->kind != detail::IdentityKind::gate_stage )
      continue;
    for ( auto const& sp : detail::bound_reactants( sys.gadgets[kind->reaction].source, kind->stage, final_sink ) )
      out[sp] += n;
  }
  return out;
}

/*! \brief Replays a trajectory and checks it against the high-level CRN.
 *
 * At every state: input-gate instances per reaction (all stages plus
 * completed) and output-gate instances (unused plus completed) are conserved,
 * and free species plus in-flight reactants equal the initial species plus
 * the net effect of every completed pathway.  Returns one message per failure.
 */
inline std::vector<std::string> audit_trajectory( DsdSystem const& sys, SsaNetwork const& net, Trajectory const& traj, bool final_sink = true )
{
  std::vector<std::string> problems;
  auto counts = traj.initial;

  auto const initial_species = map_state( sys, to_state( net, counts ) );
  std::vector<std::uint64_t> gates0( sys.gadgets.size(), 0 ), outputs0( sys.gadgets.size(), 0 );

  std::vector<std::optional<detail::Identity>> kinds;
  for ( auto const& id : net.species )
    kinds.push_back( detail::classify_identity( sys, id ) );

  auto tally = [&]( std::vector<std::uint64_t> const& c, std::vector<std::uint64_t>& gates, std::vector<std::uint64_t>& outputs,
                    std::vector<std::uint64_t>& done ) {
    gates.assign( sys.gadgets.size(), 0 );
    outputs.assign( sys.gadgets.size(), 0 );
    done.assign( sys.gadgets.size(), 0 );
    for ( std::size_t i = 0; i < c.size(); ++i )
    {
      if ( !kinds[i] )
        continue;
      switch ( kinds[i]->kind )
      {
      case detail::IdentityKind::gate_stage:
      case detail::IdentityKind::gate_corrupted: gates[kinds[i]->reaction] += c[i]; break;
      case detail::IdentityKind::output_gate: outputs[kinds[i]->reaction] += c[i]; break;
      case detail::IdentityKind::waste: done[kinds[i]->reaction] += c[i]; break;
      default: break;
      }
    }
  };

  std::vector<std::uint64_t> done0;
  tally( counts, gates0, outputs0, done0 );

  auto check = [&]( std::size_t step ) {
    std::vector<std::uint64_t> gates, outputs, done;
    tally( counts, gates, outputs, done );
    std::map<SpeciesId, std::int64_t> expected, have;
    for ( auto const& [sp, n] : initial_species )
    {
      expected[sp] = static_cast<std::int64_t>( n );
      have[sp] = 0;
    }
    for ( std::size_t r = 0; r < sys.gadgets.size(); ++r )
    {
      if ( gates[r] + done[r] != gates0[r] + done0[r] )
        problems.push_back( "step " + std::to_string( step ) + ": input gates of " + names::reaction( r ) + " not conserved" );
      if ( outputs[r] + done[r] != outputs0[r] + done0[r] )
        problems.push_back( "step " + std::to_string( step ) + ": output gates of " + names::reaction( r ) + " not conserved" );
      auto const completed = static_cast<std::int64_t>( done[r] ) - static_cast<std::int64_t>( done0[r] );
      for ( auto const& sp : sys.gadgets[r].source.reactants )
        expected[sp] -= completed;
      for ( auto const& sp : sys.gadgets[r].source.products )
        expected[sp] += completed;
    }
    for ( std::size_t i = 0; i < counts.size(); ++i )
    {
      if ( !kinds[i] || counts[i] == 0 )
        continue;
      auto const n = static_cast<std::int64_t>( counts[i] );
      if ( kinds[i]->kind == detail::IdentityKind::species )
        have[net.species[i]] += n;
      else if ( kinds[i]->kind == detail::IdentityKind::gate_stage )
        for ( auto const& sp : detail::bound_reactants( sys.gadgets[kinds[i]->reaction].source, kinds[i]->stage, final_sink ) )
          have[sp] += n;
    }
    for ( auto const& [sp, want] : expected )
      if ( have[sp] != want )
        problems.push_back( "step " + std::to_string( step ) + ": species " + sp + " is " + std::to_string( have[sp] ) +
                            " (free + in flight), expected " + std::to_string( want ) );
  };

  check( 0 );
  for ( std::size_t i = 0; i < traj.steps.size(); ++i )
  {
    for ( auto const& [s, d] : traj.steps[i].delta )
    {
      auto const next = static_cast<std::int64_t>( counts[s] ) + d;
      if ( next < 0 )
        problems.push_back( "step " + std::to_string( i + 1 ) + ": negative count for " + net.species[s] );
      counts[s] = static_cast<std::uint64_t>( std::max<std::int64_t>( next, 0 ) );
    }
    check( i + 1 );
  }
  if ( counts != traj.final )
    problems.push_back( "replaying the deltas does not reproduce the final state" );
  return problems;
}

} // namespace crn2dsd

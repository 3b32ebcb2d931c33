#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "compiler.hpp"
#include "dsd.hpp"

namespace crn2dsd
{

enum class GcMode
{
  assumed, ///< released buffer2 strands are removed immediately
  off,     ///< released buffer2 strands stay in solution
};

struct AnalysisOptions
{
  GcMode gc = GcMode::assumed;
};

/*! \brief An input gate at one stage of its intended pathway.
 *
 * `predecessor[i]` is the strand that top strand `i` displaced when it bound,
 * i.e. the strand whose return would undo that step.  It is empty for strands
 * present in the freshly compiled gate.
 */
struct GateSnapshot
{
  std::size_t gadget = 0;
  Stage stage = Stage::fresh;
  Complex complex;
  std::vector<std::optional<Strand>> predecessor;
};

/*! \brief A free strand binding an exposed toehold.
 *
 * `neighbor` is the adjacent site the invader migrates into (left or right of
 * the toehold, matching the invader's own domain order) and `incumbent` the
 * strand index bonded there.  An incumbent that keeps a recognition bond after
 * losing `neighbor` is not released and the attachment stays transient.
 */
struct Attachment
{
  Site site;
  std::size_t invader_toehold = 0;
  std::optional<Site> neighbor;
  std::optional<std::size_t> incumbent;
};

inline std::vector<Attachment> attachments( Complex const& target, Strand const& invader )
{
  std::vector<Attachment> out;
  for ( auto const& site : exposed_sites( target ).sites )
  {
    auto const& d = target.domain_at( site );
    if ( !d.is_toehold() )
      continue;
    for ( std::size_t m = 0; m < invader.domains.size(); ++m )
    {
      if ( !invader.domains[m].pairs_with( d ) )
        continue;

      bool displaced = false;
      auto const& host = target.strands[site.strand].domains;
      for ( int dir : { -1, +1 } )
      {
        auto const mi = static_cast<std::ptrdiff_t>( m ) + dir;
        auto const hi = static_cast<std::ptrdiff_t>( site.domain ) + dir;
        if ( mi < 0 || hi < 0 || mi >= static_cast<std::ptrdiff_t>( invader.domains.size() ) ||
             hi >= static_cast<std::ptrdiff_t>( host.size() ) )
          continue;
        Site const next{ site.strand, static_cast<std::size_t>( hi ) };
        if ( !invader.domains[static_cast<std::size_t>( mi )].pairs_with( target.domain_at( next ) ) )
          continue;
        auto bound = target.partner( next );
        if ( !bound || bound->strand == site.strand )
          continue;

        bool releases = true;
        for ( auto const& b : target.bonds )
          for ( auto [mine, other] : { std::pair{ b.a, b.b }, std::pair{ b.b, b.a } } )
            if ( mine.strand == bound->strand && mine != *bound && !target.domain_at( mine ).is_toehold() )
              releases = false;
        if ( !releases )
          continue;

        out.push_back( { site, m, next, bound->strand } );
        displaced = true;
      }
      if ( !displaced )
        out.push_back( { site, m, std::nullopt, std::nullopt } );
    }
  }
  return out;
}

/// Result of a displacing attachment: incumbent removed, invader bonded at the toehold and neighbor.
inline Complex displace( Complex const& target, Attachment const& att, Strand const& invader )
{
  if ( !att.incumbent || !att.neighbor )
    throw std::logic_error( "attachment does not displace anything" );
  auto const gone = *att.incumbent;
  auto remap = [gone]( Site s ) { return Site{ s.strand > gone ? s.strand - 1 : s.strand, s.domain }; };

  Complex out;
  out.name = target.name;
  for ( std::size_t i = 0; i < target.strands.size(); ++i )
    if ( i != gone )
      out.strands.push_back( target.strands[i] );
  for ( auto const& b : target.bonds )
    if ( b.a.strand != gone && b.b.strand != gone )
      out.bonds.push_back( { remap( b.a ), remap( b.b ) } );

  auto const idx = out.strands.size();
  out.strands.push_back( invader );
  auto const neighbor_index = att.neighbor->domain > att.site.domain ? att.invader_toehold + 1 : att.invader_toehold - 1;
  out.bonds.push_back( { remap( att.site ), { idx, att.invader_toehold } } );
  out.bonds.push_back( { remap( *att.neighbor ), { idx, neighbor_index } } );
  return out;
}

namespace detail
{

inline GateSnapshot advance( GateSnapshot const& from, Stage to, Attachment const& att, Strand const& invader )
{
  GateSnapshot next;
  next.gadget = from.gadget;
  next.stage = to;
  next.complex = displace( from.complex, att, invader );
  next.complex.name = gate_state_id( from.gadget, to );
  for ( std::size_t i = 0; i < from.predecessor.size(); ++i )
    if ( i != *att.incumbent )
      next.predecessor.push_back( from.predecessor[i] );
  next.predecessor.push_back( from.complex.strands[*att.incumbent] );
  return next;
}

inline std::string incumbent_id( GateSnapshot const& s, Attachment const& att )
{
  return s.complex.strands[*att.incumbent].id;
}

} // namespace detail

/// Input-gate complexes at every stage of every gadget, obtained by replaying the intended pathway.
inline std::vector<GateSnapshot> reachable_states( DsdSystem const& sys )
{
  std::vector<GateSnapshot> out;
  for ( auto const& g : sys.gadgets )
  {
    GateSnapshot current{ g.reaction, Stage::fresh, g.input_gate, {} };
    current.predecessor.resize( g.input_gate.strands.size() );
    out.push_back( current );
    for ( auto const& step : g.pathway )
    {
      auto const& invader = sys.strands.at( step.invader );
      bool found = false;
      for ( auto const& att : attachments( current.complex, invader ) )
        if ( att.incumbent && att.site == Site{ 0, step.site } && detail::incumbent_id( current, att ) == step.displaced )
        {
          current = detail::advance( current, step.to, att, invader );
          found = true;
          break;
        }
      if ( !found )
        throw std::logic_error( "pathway step of " + names::reaction( g.reaction ) + " from " +
                                std::string( to_string( step.from ) ) + " is not a valid displacement" );
      out.push_back( current );
    }
  }
  return out;
}

/// Every strand that is free at some point of some intended pathway, sorted by identity.
inline std::vector<Strand> free_strand_pool( DsdSystem const& sys, AnalysisOptions const& opts = {} )
{
  std::map<std::string, Strand> pool;
  for ( auto const& [id, strand] : sys.strands )
  {
    if ( strand.role == StrandRole::buffer2 && opts.gc == GcMode::assumed )
      continue;
    pool.emplace( id, strand );
  }
  std::vector<Strand> out;
  for ( auto& [id, s] : pool )
    out.push_back( std::move( s ) );
  return out;
}

enum class EventKind
{
  displacement,
  product_release,
};

enum class Classification
{
  intended,
  intended_reverse,
  spurious,
};

enum class Rule
{
  none,
  shared_linker_toehold,
  linker_toehold_is_universal,
  buffer_identity_collision,
  unattributed,
};

inline std::string_view to_string( Classification c )
{
  switch ( c )
  {
  case Classification::intended: return "intended";
  case Classification::intended_reverse: return "intended-reverse";
  case Classification::spurious: return "spurious";
  }
  return "?";
}

inline std::string_view to_string( Rule r )
{
  switch ( r )
  {
  case Rule::none: return "none";
  case Rule::shared_linker_toehold: return "shared-linker-toehold";
  case Rule::linker_toehold_is_universal: return "linker-toehold-equals-t";
  case Rule::buffer_identity_collision: return "buffer-identity-collision";
  case Rule::unattributed: return "unattributed";
  }
  return "?";
}

struct InteractionEvent
{
  EventKind kind = EventKind::displacement;
  std::string invader;
  StrandRole invader_role = StrandRole::species;
  std::size_t gadget = 0;
  Stage stage = Stage::fresh;
  std::string target; ///< complex identity
  Site site;
  Domain site_domain;
  std::vector<std::string> displaced;
  std::string result; ///< identity of the target complex afterwards
  Classification classification = Classification::spurious;
  Rule rule = Rule::none;
  std::string narrative;
};

struct CrosstalkReport
{
  std::vector<InteractionEvent> events;
  std::size_t spurious_count = 0;
  std::size_t intended_count = 0;
  std::size_t reverse_count = 0;
  std::size_t transient_attachments = 0; ///< toehold binding with nothing displaced
  std::map<Rule, std::size_t> rule_counts;
};

namespace detail
{

inline Rule attribute( DsdSystem const& sys, Gadget const& target, GateSnapshot const& snap, Attachment const& att,
                       Strand const& invader, std::map<std::string, std::size_t> const& origin )
{
  auto const& site_domain = snap.complex.domain_at( att.site );
  auto const linker_slot = att.site.strand == 0 && att.site.domain + 1 == target.input_gate.strands[0].domains.size();
  bool const linker_like = invader.role == StrandRole::linker || invader.role == StrandRole::cap;
  auto const& universal = sys.assignment.universal;
  auto const toehold = invader.domains[att.invader_toehold];

  if ( ( linker_like && toehold == universal ) ||
       ( linker_slot && site_domain == universal.complement() ) )
    return Rule::linker_toehold_is_universal;

  if ( linker_like && linker_slot )
    if ( auto it = origin.find( invader.id ); it != origin.end() && it->second != target.reaction &&
                                               final_reactant( sys.gadgets[it->second].source ) == final_reactant( target.source ) )
      return Rule::shared_linker_toehold;

  auto is_buffer = []( StrandRole r ) { return r == StrandRole::buffer1 || r == StrandRole::buffer2; };
  auto const& pred = snap.predecessor[*att.incumbent];
  if ( pred && is_buffer( pred->role ) && is_buffer( invader.role ) && pred->domains == invader.domains )
    return Rule::buffer_identity_collision;

  return Rule::unattributed;
}

inline std::string narrate( InteractionEvent const& e )
{
  std::string out = std::string( to_string( e.classification ) ) + ": " + e.invader + " binds " + e.target + " at " +
                    e.site_domain.str() + "[" + std::to_string( e.site.domain ) + "]";
  if ( e.kind == EventKind::product_release )
  {
    out += ", releases";
    if ( e.displaced.empty() )
      out += " nothing";
    for ( auto const& d : e.displaced )
      out += " " + d;
  }
  else
  {
    out += ", displaces " + e.displaced.front();
  }
  if ( e.classification == Classification::spurious )
    out += " (" + std::string( to_string( e.rule ) ) + ")";
  return out;
}

} // namespace detail

/*! \brief Enumerates every toehold-mediated interaction between free strands and gate states.
 *
 * A free strand attaches to an exposed toehold it complements; it displaces
 * the incumbent when its domain adjacent to that toehold matches the domain
 * bonded next to the toehold on the gate.  Events on a gadget's declared
 * pathway are intended, events that return a strand's predecessor are benign
 * reversals, and everything else is spurious.
 */
inline CrosstalkReport enumerate_interactions( DsdSystem const& sys, AnalysisOptions const& opts = {} )
{
  CrosstalkReport report;
  auto const pool = free_strand_pool( sys, opts );
  auto const snapshots = reachable_states( sys );

  std::map<std::string, std::size_t> origin;
  for ( auto const& g : sys.gadgets )
  {
    origin[g.linker.id] = g.reaction;
    origin[g.cap.id] = g.reaction;
  }

  for ( auto const& snap : snapshots )
  {
    auto const& gadget = sys.gadgets[snap.gadget];
    for ( auto const& invader : pool )
      for ( auto const& att : attachments( snap.complex, invader ) )
      {
        if ( !att.incumbent )
        {
          ++report.transient_attachments;
          continue;
        }
        InteractionEvent e;
        e.invader = invader.id;
        e.invader_role = invader.role;
        e.gadget = snap.gadget;
        e.stage = snap.stage;
        e.target = snap.complex.name;
        e.site = att.site;
        e.site_domain = snap.complex.domain_at( att.site );
        e.displaced = { detail::incumbent_id( snap, att ) };

        auto const step = std::find_if( gadget.pathway.begin(), gadget.pathway.end(), [&]( PathwayStep const& p ) {
          return p.from == snap.stage && p.invader == invader.id && att.site == Site{ 0, p.site } && p.displaced == e.displaced.front();
        } );
        auto const& pred = snap.predecessor[*att.incumbent];
        if ( step != gadget.pathway.end() )
        {
          e.classification = Classification::intended;
          e.result = gate_state_id( snap.gadget, step->to );
        }
        else if ( pred && pred->domains == invader.domains && pred->role == invader.role )
        {
          e.classification = Classification::intended_reverse;
          e.result = snap.complex.name + "~" + invader.id;
        }
        else
        {
          e.classification = Classification::spurious;
          e.rule = detail::attribute( sys, gadget, snap, att, invader, origin );
          e.result = snap.complex.name + "~" + invader.id;
        }
        report.events.push_back( std::move( e ) );
      }

    // a bound linker tail opens an output gate by hybridizing with its exposed tail complement
    for ( auto const& top : exposed_sites( snap.complex ).sites )
    {
      if ( top.strand == 0 || snap.complex.domain_at( top ).is_toehold() )
        continue;
      for ( auto const& g2 : sys.gadgets )
        for ( auto const& site : exposed_sites( g2.output_gate ).sites )
        {
          if ( !g2.output_gate.domain_at( site ).pairs_with( snap.complex.domain_at( top ) ) )
            continue;
          InteractionEvent e;
          e.kind = EventKind::product_release;
          e.invader = snap.complex.strands[top.strand].id;
          e.invader_role = snap.complex.strands[top.strand].role;
          e.gadget = snap.gadget;
          e.stage = snap.stage;
          e.target = g2.output_gate.name;
          e.site = site;
          e.site_domain = g2.output_gate.domain_at( site );
          for ( std::size_t i = 1; i < g2.output_gate.strands.size(); ++i )
            e.displaced.push_back( g2.output_gate.strands[i].id );
          e.result = names::waste( g2.reaction );
          bool const own = g2.reaction == snap.gadget && snap.stage == Stage::linker_bound;
          e.classification = own ? Classification::intended : Classification::spurious;
          e.rule = own ? Rule::none : Rule::unattributed;
          report.events.push_back( std::move( e ) );
        }
    }
  }

  // output gates expose only their tail complement, but check them against the pool as well
  for ( auto const& g2 : sys.gadgets )
    for ( auto const& invader : pool )
      for ( auto const& att : attachments( g2.output_gate, invader ) )
      {
        if ( !att.incumbent )
        {
          ++report.transient_attachments;
          continue;
        }
        InteractionEvent e;
        e.invader = invader.id;
        e.invader_role = invader.role;
        e.gadget = g2.reaction;
        e.stage = Stage::fresh;
        e.target = g2.output_gate.name;
        e.site = att.site;
        e.site_domain = g2.output_gate.domain_at( att.site );
        e.displaced = { g2.output_gate.strands[*att.incumbent].id };
        e.result = g2.output_gate.name + "~" + invader.id;
        e.classification = Classification::spurious;
        e.rule = Rule::unattributed;
        report.events.push_back( std::move( e ) );
      }

  auto key = []( InteractionEvent const& e ) {
    return std::tuple( e.gadget, e.stage, e.kind, e.target, e.invader, e.site, e.displaced );
  };
  std::sort( report.events.begin(), report.events.end(), [&]( auto const& a, auto const& b ) { return key( a ) < key( b ); } );

  for ( auto& e : report.events )
  {
    e.narrative = detail::narrate( e );
    switch ( e.classification )
    {
    case Classification::intended: ++report.intended_count; break;
    case Classification::intended_reverse: ++report.reverse_count; break;
    case Classification::spurious:
      ++report.spurious_count;
      ++report.rule_counts[e.rule];
      break;
    }
  }
  return report;
}

/// One line per event followed by a summary; empty for a report without events.
inline std::string explain( CrosstalkReport const& report )
{
  if ( report.events.empty() )
    return "";
  std::string out;
  for ( auto const& e : report.events )
    out += e.narrative + "\n";
  out += std::to_string( report.events.size() ) + " events: " + std::to_string( report.intended_count ) + " intended, " +
         std::to_string( report.reverse_count ) + " reverse, " + std::to_string( report.spurious_count ) + " spurious\n";
  for ( auto const& [rule, n] : report.rule_counts )
    out += "  " + std::string( to_string( rule ) ) + ": " + std::to_string( n ) + "\n";
  return out;
}

} // namespace crn2dsd

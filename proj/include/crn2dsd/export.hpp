#pragma once

#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "analyzer.hpp"
#include "compiler.hpp"
#include "sim.hpp"

namespace crn2dsd
{

using Json = nlohmann::ordered_json;

namespace detail
{

inline Json domain_list( std::vector<Domain> const& ds )
{
  Json out = Json::array();
  for ( auto const& d : ds )
    out.push_back( d.str() );
  return out;
}

inline Json complex_json( Complex const& c, std::size_t reaction )
{
  Json strands = Json::array();
  for ( auto const& s : c.strands )
    strands.push_back( { { "id", s.id }, { "role", to_string( s.role ) }, { "domains", domain_list( s.domains ) } } );
  Json bonds = Json::array();
  for ( auto const& b : c.bonds )
    bonds.push_back( { b.a.strand, b.a.domain, b.b.strand, b.b.domain } );
  return { { "name", c.name }, { "reaction", reaction }, { "strands", strands }, { "bonds", bonds } };
}

} // namespace detail

/*! \brief Self-describing export of a compiled system.
 *
 * Sections, in order: `format`, `crn`, `domains`, `strands`, `complexes`,
 * `assignment`, `counts`, `gc_sinks`, `warnings`.  Bonds are
 * `[strand, domain, strand, domain]` index quadruples.
 */
inline Json system_to_json( DsdSystem const& sys )
{
  Json doc;
  doc["format"] = "crn2dsd-system/1";
  doc["crn"] = serialize_crn( sys.crn );

  std::set<Domain> domains;
  auto collect = [&]( std::vector<Domain> const& ds ) {
    for ( auto const& d : ds )
      domains.insert( d.complemented ? d.complement() : d );
  };
  for ( auto const& [id, s] : sys.strands )
    collect( s.domains );
  for ( auto const& g : sys.gadgets )
  {
    for ( auto const& s : g.input_gate.strands )
      collect( s.domains );
    for ( auto const& s : g.output_gate.strands )
      collect( s.domains );
  }
  Json dj = Json::array();
  for ( auto const& d : domains )
    dj.push_back( { { "label", d.label }, { "kind", d.is_toehold() ? "toehold" : "recognition" } } );
  doc["domains"] = dj;

  Json sj = Json::array();
  for ( auto const& [id, s] : sys.strands )
    sj.push_back( { { "id", id }, { "role", to_string( s.role ) }, { "domains", detail::domain_list( s.domains ) } } );
  doc["strands"] = sj;

  Json cj = Json::array();
  for ( auto const& g : sys.gadgets )
  {
    cj.push_back( detail::complex_json( g.input_gate, g.reaction ) );
    cj.push_back( detail::complex_json( g.output_gate, g.reaction ) );
  }
  doc["complexes"] = cj;

  Json linkers = Json::array();
  for ( auto const& g : sys.gadgets )
    linkers.push_back( { { "reaction", g.reaction },
                         { "final", final_reactant( g.source ) },
                         { "toehold", sys.assignment.linker_of.at( g.reaction ).str() } } );
  doc["assignment"] = { { "universal", sys.assignment.universal.str() },
                        { "labels", sys.assignment.label_count() },
                        { "linkers", linkers } };

  Json counts = Json::object();
  for ( auto const& [id, n] : sys.initial_counts )
    counts[id] = n;
  doc["counts"] = counts;
  doc["gc_sinks"] = sys.gc_sinks;
  doc["warnings"] = sys.warnings;
  return doc;
}

inline Json report_to_json( CrosstalkReport const& report )
{
  Json events = Json::array();
  for ( auto const& e : report.events )
    events.push_back( { { "kind", e.kind == EventKind::displacement ? "displacement" : "product-release" },
                        { "invader", e.invader },
                        { "invader_role", to_string( e.invader_role ) },
                        { "reaction", e.gadget },
                        { "stage", to_string( e.stage ) },
                        { "target", e.target },
                        { "site", { e.site.strand, e.site.domain } },
                        { "site_domain", e.site_domain.str() },
                        { "displaced", e.displaced },
                        { "result", e.result },
                        { "classification", to_string( e.classification ) },
                        { "rule", to_string( e.rule ) } } );
  Json rules = Json::object();
  for ( auto const& [rule, n] : report.rule_counts )
    rules[std::string( to_string( rule ) )] = n;
  return { { "spurious_count", report.spurious_count },
           { "intended_count", report.intended_count },
           { "reverse_count", report.reverse_count },
           { "transient_attachments", report.transient_attachments },
           { "rules", rules },
           { "events", events } };
}

inline std::string format_time( double t )
{
  char buf[32];
  std::snprintf( buf, sizeof buf, "%.9g", t );
  return buf;
}

/// One line per step: `time event-name id:+n id:-n ...`.
inline std::string format_trajectory( SsaNetwork const& net, Trajectory const& traj )
{
  std::string out;
  for ( auto const& step : traj.steps )
  {
    out += format_time( step.time ) + " " + net.reactions[step.event].name;
    for ( auto const& [s, d] : step.delta )
      out += " " + net.species[s] + ":" + ( d > 0 ? "+" : "" ) + std::to_string( d );
    out += "\n";
  }
  return out;
}

inline std::string format_species_state( std::map<SpeciesId, std::uint64_t> const& state )
{
  std::string out;
  for ( auto const& [sp, n] : state )
    out += ( out.empty() ? "" : " " ) + sp + "=" + std::to_string( n );
  return out;
}

namespace detail
{

inline std::string dot_quote( std::string const& s )
{
  std::string out = "\"";
  for ( char c : s )
  {
    if ( c == '"' || c == '\\' )
      out += '\\';
    out += c;
  }
  return out + "\"";
}

inline void dot_complex( std::string& out, Complex const& c, std::string const& prefix )
{
  out += "  subgraph " + dot_quote( "cluster_" + prefix ) + " {\n    label=" + dot_quote( c.name ) + ";\n";
  auto node = [&]( Site s ) { return dot_quote( prefix + "_" + std::to_string( s.strand ) + "_" + std::to_string( s.domain ) ); };
  for ( std::size_t s = 0; s < c.strands.size(); ++s )
  {
    auto const& strand = c.strands[s];
    for ( std::size_t d = 0; d < strand.domains.size(); ++d )
      out += "    " + node( { s, d } ) + " [label=" + dot_quote( strand.domains[d].str() ) +
             ( strand.domains[d].is_toehold() ? ", shape=box" : "" ) + ", tooltip=" + dot_quote( strand.id ) + "];\n";
    for ( std::size_t d = 1; d < strand.domains.size(); ++d )
      out += "    " + node( { s, d - 1 } ) + " -- " + node( { s, d } ) + " [penwidth=2];\n";
  }
  for ( auto const& b : c.bonds )
    out += "    " + node( b.a ) + " -- " + node( b.b ) + " [style=dashed];\n";
  out += "  }\n";
}

} // namespace detail

/// Graphviz rendering of every gadget's input and output gate: strands as node chains, bonds as dashed edges.
inline std::string export_dot( DsdSystem const& sys )
{
  std::string out = "graph crn2dsd {\n";
  for ( auto const& g : sys.gadgets )
  {
    detail::dot_complex( out, g.input_gate, "g1_r" + std::to_string( g.reaction ) );
    detail::dot_complex( out, g.output_gate, "g2_r" + std::to_string( g.reaction ) );
  }
  return out + "}\n";
}

} // namespace crn2dsd

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "analyzer.hpp"
#include "compiler.hpp"
#include "crn.hpp"
#include "export.hpp"
#include "sim.hpp"

namespace crn2dsd::cli
{

/// Documented exit codes.
enum ExitCode : int
{
  ok = 0,
  failure = 1,         ///< usage, I/O or unsupported input
  ordering_error = 2,  ///< ordering violations, or no repair exists
  parse_error = 3,
  spurious_found = 4,
  unreachable_stop = 5,
};

struct RunConfig
{
  std::string command;
  std::string input;
  bool fix_order = false;
  std::uint64_t fuel_count = 100;
  std::string init;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> max_steps;
  std::optional<double> max_time;
  bool quiescence = true;
  std::string gc = "assumed";
  bool include_spurious = false;
  std::string sabotage = "none";
  std::vector<std::string> rates;
  std::uint64_t trajectories = 1;
  std::string output;
  std::string report;
};

namespace detail
{

inline std::map<std::string, std::string> split_pairs( std::string const& text, std::string const& what )
{
  std::map<std::string, std::string> out;
  std::stringstream ss( text );
  std::string item;
  while ( std::getline( ss, item, ',' ) )
  {
    auto const trim = []( std::string s ) {
      s.erase( 0, s.find_first_not_of( " \t" ) );
      s.erase( s.find_last_not_of( " \t" ) + 1 );
      return s;
    };
    item = trim( item );
    if ( item.empty() )
      continue;
    auto eq = item.find( '=' );
    if ( eq == std::string::npos )
      throw std::invalid_argument( "malformed " + what + " entry '" + item + "', expected NAME=VALUE" );
    out[trim( item.substr( 0, eq ) )] = trim( item.substr( eq + 1 ) );
  }
  return out;
}

inline std::map<SpeciesId, std::uint64_t> parse_init( std::string const& text )
{
  std::map<SpeciesId, std::uint64_t> out;
  for ( auto const& [name, value] : split_pairs( text, "--init" ) )
  {
    std::size_t used = 0;
    auto n = std::stoull( value, &used );
    if ( used != value.size() || value.front() == '-' )
      throw std::invalid_argument( "invalid count '" + value + "' for " + name );
    out[name] = n;
  }
  return out;
}

inline Sabotage parse_sabotage( std::string const& s )
{
  if ( s == "share-linker-toehold" )
    return Sabotage::share_linker_toehold;
  if ( s == "linker-equals-t" )
    return Sabotage::linker_equals_t;
  if ( s == "swap-order" )
    return Sabotage::swap_order;
  return Sabotage::none;
}

class Output
{
public:
  Output( std::string const& path, std::ostream& fallback )
  {
    if ( !path.empty() )
    {
      file_.open( path );
      if ( !file_ )
        throw std::runtime_error( "cannot write '" + path + "'" );
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_;
};

inline std::string read_input( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw std::runtime_error( "cannot read '" + path + "'" );
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// parse + order + allocate + compile; returns an exit code on failure
inline std::variant<DsdSystem, int> build( RunConfig const& cfg, std::ostream& err )
{
  Crn crn;
  try
  {
    crn = parse_crn( read_input( cfg.input ) );
  }
  catch ( ParseError const& e )
  {
    err << cfg.input << ":" << e.what() << "\n";
    return parse_error;
  }

  CompileOptions opts;
  opts.fix_order = cfg.fix_order;
  opts.fuel_count = cfg.fuel_count;
  opts.initial = parse_init( cfg.init );
  opts.sabotage = parse_sabotage( cfg.sabotage );
  try
  {
    auto sys = compile_crn( std::move( crn ), opts );
    for ( auto const& w : sys.warnings )
      err << "warning: " << w << "\n";
    return sys;
  }
  catch ( CompileError const& e )
  {
    err << "error: " << e.what() << "\n";
    for ( auto const& v : e.violations )
      err << "  " << v.species << " is reactant 1 of " << names::reaction( v.first_in ) << " and reactant 2 of termolecular "
          << names::reaction( v.second_in ) << "\n";
    if ( e.kind() == CompileErrorKind::ordering )
      err << "  (use --fix-order to search for a valid reactant order)\n";
    return e.kind() == CompileErrorKind::ordering || e.kind() == CompileErrorKind::infeasible ? ordering_error : failure;
  }
}

inline GcMode gc_mode( RunConfig const& cfg )
{
  return cfg.gc == "off" ? GcMode::off : GcMode::assumed;
}

} // namespace detail

inline int cmd_compile( RunConfig const& cfg, std::ostream& out, std::ostream& err )
{
  auto built = detail::build( cfg, err );
  if ( auto* code = std::get_if<int>( &built ) )
    return *code;
  detail::Output o( cfg.output, out );
  *o << system_to_json( std::get<DsdSystem>( built ) ).dump( 2 ) << "\n";
  return ok;
}

inline int cmd_check( RunConfig const& cfg, std::ostream& out, std::ostream& err )
{
  auto built = detail::build( cfg, err );
  if ( auto* code = std::get_if<int>( &built ) )
    return *code;
  auto const& sys = std::get<DsdSystem>( built );
  auto const report = enumerate_interactions( sys, { detail::gc_mode( cfg ) } );

  detail::Output o( cfg.output, out );
  auto text = explain( report );
  *o << ( text.empty() ? "0 events: 0 intended, 0 reverse, 0 spurious\n" : text );
  if ( !cfg.report.empty() )
  {
    detail::Output r( cfg.report, out );
    *r << report_to_json( report ).dump( 2 ) << "\n";
  }
  return report.spurious_count == 0 ? ok : spurious_found;
}

inline int cmd_simulate( RunConfig const& cfg, std::ostream& out, std::ostream& err )
{
  if ( ( cfg.max_steps && *cfg.max_steps == 0 ) || ( cfg.max_time && *cfg.max_time <= 0.0 ) || cfg.trajectories == 0 )
  {
    err << "error: stop condition can never be reached\n";
    return unreachable_stop;
  }
  auto built = detail::build( cfg, err );
  if ( auto* code = std::get_if<int>( &built ) )
    return *code;
  auto const& sys = std::get<DsdSystem>( built );

  SsaOptions sopts;
  sopts.include_spurious = cfg.include_spurious;
  sopts.gc = detail::gc_mode( cfg );
  for ( auto const& spec : cfg.rates )
    for ( auto const& [name, value] : detail::split_pairs( spec, "--rate" ) )
      sopts.rates[name] = std::stod( value );
  auto const net = build_ssa_network( sys, sopts );
  StopCondition stop{ cfg.max_steps, cfg.max_time };
  auto const init = initial_state( sys );

  std::vector<std::future<Trajectory>> runs;
  for ( std::uint64_t i = 0; i < cfg.trajectories; ++i )
    runs.push_back( std::async( std::launch::async, [&, i] { return simulate( net, init, cfg.seed + i, stop ); } ) );

  detail::Output o( cfg.output, out );
  for ( auto& run : runs )
  {
    auto const traj = run.get();
    *o << "# seed " << traj.seed << "\n";
    *o << format_trajectory( net, traj );
    *o << "# " << ( traj.quiescent ? "quiescent" : "stopped" ) << " after " << traj.steps.size() << " steps at t="
       << format_time( traj.final_time ) << "\n";
    *o << "final " << format_species_state( map_state( sys, to_state( net, traj.final ) ) ) << "\n";
  }
  return ok;
}

inline int cmd_export_dot( RunConfig const& cfg, std::ostream& out, std::ostream& err )
{
  auto built = detail::build( cfg, err );
  if ( auto* code = std::get_if<int>( &built ) )
    return *code;
  detail::Output o( cfg.output, out );
  *o << export_dot( std::get<DsdSystem>( built ) );
  return ok;
}

/// Runs one command; `args` excludes the program name.
inline int run( std::vector<std::string> args, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "crn2dsd: compile chemical reaction networks to DNA strand-displacement gates" };
  app.require_subcommand( 1 );
  RunConfig cfg;

  auto common = [&]( CLI::App* sub ) {
    sub->add_option( "input", cfg.input, "CRN file" )->required();
    sub->add_flag( "--fix-order", cfg.fix_order, "Swap reactants 1 and 2 where needed to satisfy the buffer constraint" );
    sub->add_option( "--fuel-count", cfg.fuel_count, "Initial count of every gate and linker" )->check( CLI::PositiveNumber );
    sub->add_option( "--init", cfg.init, "Initial species counts, e.g. \"A=10,B=5\"" );
    sub->add_option( "--gc", cfg.gc, "Buffer2 garbage collection" )->check( CLI::IsMember( { "assumed", "off" } ) );
    sub->add_option( "--sabotage", cfg.sabotage, "Violate one design rule on purpose" )
        ->check( CLI::IsMember( { "none", "share-linker-toehold", "linker-equals-t", "swap-order" } ) );
    sub->add_option( "-o,--output", cfg.output, "Output path (default: stdout)" );
  };

  auto* compile = app.add_subcommand( "compile", "Compile a CRN and export the DSD system as JSON" );
  common( compile );
  auto* check = app.add_subcommand( "check", "Enumerate toehold interactions and report spurious displacements" );
  common( check );
  check->add_option( "--report", cfg.report, "Also write the structured report (JSON) here" );
  auto* sim = app.add_subcommand( "simulate", "Stochastically simulate the compiled system" );
  common( sim );
  sim->add_option( "--seed", cfg.seed, "Random seed" );
  sim->add_option( "--max-steps", cfg.max_steps, "Stop after this many events" );
  sim->add_option( "--max-time", cfg.max_time, "Stop at this simulated time" );
  sim->add_flag( "--quiescence", cfg.quiescence, "Run until no event can fire (default)" );
  sim->add_flag( "--include-spurious", cfg.include_spurious, "Include spurious interactions as low-level reactions" );
  sim->add_option( "--rate", cfg.rates, "Rate override EVENT=VALUE (repeatable)" );
  sim->add_option( "--trajectories", cfg.trajectories, "Number of independent runs (seeds seed, seed+1, ...)" );
  auto* dot = app.add_subcommand( "export-dot", "Render gate complexes as a Graphviz graph" );
  common( dot );

  std::reverse( args.begin(), args.end() );
  try
  {
    app.parse( args );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e, out, err );
    return code == 0 ? ok : failure;
  }

  try
  {
    if ( compile->parsed() )
      return cmd_compile( cfg, out, err );
    if ( check->parsed() )
      return cmd_check( cfg, out, err );
    if ( sim->parsed() )
      return cmd_simulate( cfg, out, err );
    return cmd_export_dot( cfg, out, err );
  }
  catch ( std::exception const& e )
  {
    err << "error: " << e.what() << "\n";
    return failure;
  }
}

} // namespace crn2dsd::cli

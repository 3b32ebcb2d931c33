#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <crn2dsd/sim.hpp>

using namespace crn2dsd;

namespace
{

DsdSystem system_for( std::string const& text, std::map<SpeciesId, std::uint64_t> initial, std::uint64_t fuel = 100 )
{
  CompileOptions opts;
  opts.initial = std::move( initial );
  opts.fuel_count = fuel;
  return compile_crn( parse_crn( text ), opts );
}

std::vector<std::string> names_of( SsaNetwork const& net )
{
  std::vector<std::string> out;
  for ( auto const& r : net.reactions )
    out.push_back( r.name );
  return out;
}

} // namespace

TEST( SsaNetwork, IntendedEventsOnly )
{
  auto net = build_ssa_network( system_for( "A + B -> C", { { "A", 1 }, { "B", 1 } } ) );
  EXPECT_EQ( names_of( net ), ( std::vector<std::string>{ "r0/Fresh/A", "r0/R1Bound/B", "r0/FinalBound/L:r0", "r0/release" } ) );
  auto const& linker = net.reactions[2];
  ASSERT_EQ( linker.products.size(), 2u );
  EXPECT_EQ( net.species[linker.products[1].first], "sink:r0" );
}

TEST( SsaNetwork, GcSinksAndOptions )
{
  auto sys = system_for( "A + B + C -> D", {} );
  auto net = build_ssa_network( sys );
  EXPECT_EQ( names_of( net ).back(), "gc/buf2:B" );
  EXPECT_EQ( net.reactions.size(), 6u );

  SsaOptions off;
  off.gc = GcMode::off;
  off.final_sink = false;
  off.rates["r0/release"] = 2.5;
  net = build_ssa_network( sys, off );
  EXPECT_EQ( net.reactions.size(), 5u );
  EXPECT_EQ( net.species[net.reactions[3].products[1].first], "C" );
  EXPECT_EQ( net.reactions[4].rate, 2.5 );
}

TEST( SsaNetwork, SpuriousEventsOnRequest )
{
  CompileOptions opts;
  opts.sabotage = Sabotage::share_linker_toehold;
  auto sys = compile_crn( parse_crn( "A + B -> C\nD + B -> E" ), opts );
  EXPECT_EQ( build_ssa_network( sys ).reactions.size(), 8u );
  SsaOptions with;
  with.include_spurious = true;
  auto net = build_ssa_network( sys, with );
  EXPECT_EQ( net.reactions.size(), 10u );
  EXPECT_EQ( net.reactions[3].name, "r0/FinalBound/L:r1!" );
}

TEST( Simulate, SingleReactionRunsToCompletion )
{
  auto sys = system_for( "A + B -> C", { { "A", 1 }, { "B", 1 } } );
  auto net = build_ssa_network( sys );
  auto traj = simulate( net, initial_state( sys ), 1 );
  EXPECT_TRUE( traj.quiescent );
  EXPECT_EQ( traj.steps.size(), 4u );
  auto species = map_state( sys, to_state( net, traj.final ) );
  EXPECT_EQ( species, ( std::map<SpeciesId, std::uint64_t>{ { "A", 0 }, { "B", 0 }, { "C", 1 } } ) );
  EXPECT_TRUE( audit_trajectory( sys, net, traj ).empty() );
}

TEST( Simulate, SameSeedSameTrajectory )
{
  auto sys = system_for( "A + B -> C\nC + A -> B", { { "A", 10 }, { "B", 5 } } );
  auto net = build_ssa_network( sys );
  auto a = simulate( net, initial_state( sys ), 42 );
  EXPECT_EQ( a, simulate( net, initial_state( sys ), 42 ) );
  EXPECT_NE( a, simulate( net, initial_state( sys ), 43 ) );
}

TEST( Simulate, StopConditions )
{
  auto sys = system_for( "A + B -> C", { { "A", 5 }, { "B", 5 } } );
  auto net = build_ssa_network( sys );
  auto traj = simulate( net, initial_state( sys ), 3, { 7, std::nullopt } );
  EXPECT_EQ( traj.steps.size(), 7u );
  EXPECT_FALSE( traj.quiescent );
  traj = simulate( net, initial_state( sys ), 3, { std::nullopt, 0.0 } );
  EXPECT_TRUE( traj.steps.empty() );
  EXPECT_EQ( traj.final_time, 0.0 );
}

TEST( Simulate, NothingToDo )
{
  auto sys = system_for( "A + B -> C", {} );
  auto net = build_ssa_network( sys );
  auto traj = simulate( net, initial_state( sys ), 9 );
  EXPECT_TRUE( traj.quiescent );
  EXPECT_TRUE( traj.steps.empty() );
  EXPECT_EQ( traj.final, traj.initial );

  auto empty = compile_crn( Crn{} );
  EXPECT_TRUE( simulate( build_ssa_network( empty ), initial_state( empty ), 1 ).quiescent );
}

TEST( Simulate, UnknownStateIdentityThrows )
{
  auto sys = system_for( "A + B -> C", {} );
  auto net = build_ssa_network( sys );
  SystemState s;
  s.counts["Z"] = 1;
  EXPECT_THROW( simulate( net, s, 1 ), std::invalid_argument );
  EXPECT_THROW( map_state( sys, s ), std::invalid_argument );
}

TEST( MapState, IgnoresBoundAndAuxiliaryIdentities )
{
  auto sys = system_for( "A + B -> C", {} );
  SystemState s;
  s.counts = { { "A", 2 }, { "g1:r0@R1Bound", 4 }, { "buf1:A", 3 }, { "waste:r0", 1 }, { "g1:r0@FinalBound~L:r0", 1 } };
  EXPECT_EQ( map_state( sys, s ), ( std::map<SpeciesId, std::uint64_t>{ { "A", 2 }, { "B", 0 }, { "C", 0 } } ) );
  EXPECT_EQ( in_flight( sys, s ), ( std::map<SpeciesId, std::uint64_t>{ { "A", 4 } } ) );
}

TEST( Simulate, MeanCompletionTimeMatchesSumOfExponentials )
{
  // one gate and unit counts: four sequential unit-propensity steps, so completion ~ Gamma(4, 1)
  auto sys = system_for( "A + B -> C", { { "A", 1 }, { "B", 1 } }, 1 );
  auto net = build_ssa_network( sys );
  std::size_t const runs = 1000;
  double sum = 0.0;
  for ( std::uint64_t seed = 0; seed < runs; ++seed )
    sum += simulate( net, initial_state( sys ), seed ).final_time;
  double const mean = sum / runs;
  double const sigma = std::sqrt( 4.0 / runs );
  EXPECT_NEAR( mean, 4.0, 3 * sigma );

  // the same chain collapsed into one waiting-time draw per run, from an unrelated generator
  std::mt19937 other( 2024 );
  std::gamma_distribution<double> chain( 4.0, 1.0 );
  double collapsed = 0.0;
  for ( std::size_t i = 0; i < runs; ++i )
    collapsed += chain( other );
  EXPECT_NEAR( mean, collapsed / runs, 3 * std::sqrt( 2.0 ) * sigma );
}

TEST( Audit, DetectsTamperedTrajectory )
{
  auto sys = system_for( "A + B -> C", { { "A", 2 }, { "B", 2 } } );
  auto net = build_ssa_network( sys );
  auto traj = simulate( net, initial_state( sys ), 5 );
  ASSERT_TRUE( audit_trajectory( sys, net, traj ).empty() );

  auto tampered = traj;
  tampered.steps.back().delta.push_back( { net.index.at( "C" ), 1 } );
  EXPECT_FALSE( audit_trajectory( sys, net, tampered ).empty() );
}

TEST( Audit, NandWithManyInputs )
{
  std::map<SpeciesId, std::uint64_t> init;
  for ( auto const* s : { "X0", "X1", "Y0", "Y1", "Ob" } )
    init[s] = 20;
  auto sys = system_for( "X0 + Y0 + Ob -> X0 + Y0 + O1\nX0 + Y1 + Ob -> X0 + Y1 + O1\n"
                         "X1 + Y0 + Ob -> X1 + Y0 + O1\nX1 + Ob + Y1 -> X1 + Y1 + O0\n",
                         init );
  auto net = build_ssa_network( sys );
  for ( std::uint64_t seed = 0; seed < 5; ++seed )
  {
    auto traj = simulate( net, initial_state( sys ), seed );
    EXPECT_TRUE( traj.quiescent );
    EXPECT_TRUE( audit_trajectory( sys, net, traj ).empty() );
    // gates may stall holding partial inputs, so count those too
    auto const state = to_state( net, traj.final );
    auto fin = map_state( sys, state );
    auto held = in_flight( sys, state );
    EXPECT_EQ( fin["O0"] + fin["O1"] + fin["Ob"] + held["Ob"], 20u );
    EXPECT_EQ( fin["X0"] + held["X0"], 20u );
  }
}

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include <crn2dsd/analyzer.hpp>

#include "support.hpp"

using namespace crn2dsd;

namespace
{

/// Recompiles every gadget of `sys` under a hand-made assignment.
DsdSystem with_assignment( DsdSystem sys, ToeholdAssignment const& asg )
{
  sys.assignment = asg;
  for ( auto& g : sys.gadgets )
  {
    g = compile_reaction( sys.crn.reactions[g.reaction], asg );
    sys.strands[g.linker.id] = g.linker;
    sys.strands[g.cap.id] = g.cap;
  }
  return sys;
}

bool final_also_non_final( Crn const& crn, SpeciesId const& s )
{
  return std::any_of( crn.reactions.begin(), crn.reactions.end(), [&]( Reaction const& r ) {
    return std::find( r.reactants.begin(), r.reactants.end() - 1, s ) != r.reactants.end() - 1;
  } );
}

Crn const nand = parse_crn( "X0 + Y0 + Ob -> X0 + Y0 + O1\n"
                            "X0 + Y1 + Ob -> X0 + Y1 + O1\n"
                            "X1 + Y0 + Ob -> X1 + Y0 + O1\n"
                            "X1 + Ob + Y1 -> X1 + Y1 + O0\n" );

} // namespace

TEST( ReachableStates, OneSnapshotPerStage )
{
  auto sys = compile_crn( parse_crn( "A + B -> C\nD + E + F -> G" ) );
  auto snaps = reachable_states( sys );
  ASSERT_EQ( snaps.size(), 9u );
  EXPECT_EQ( snaps[3].complex.name, "g1:r0@LinkerBound" );
  EXPECT_EQ( snaps[6].complex.name, "g1:r1@R2Bound" );

  // at LinkerBound the gate holds reactant 1, the linker and nothing of the final reactant
  std::vector<std::string> ids;
  for ( auto const& s : snaps[3].complex.strands )
    ids.push_back( s.id );
  EXPECT_EQ( ids, ( std::vector<std::string>{ "g1:r0", "A", "L:r0" } ) );
  ASSERT_TRUE( snaps[3].predecessor[2].has_value() );
  EXPECT_EQ( snaps[3].predecessor[2]->id, "B" );
}

TEST( FreeStrandPool, GcModes )
{
  auto sys = compile_crn( parse_crn( "A + B + C -> D" ) );
  auto ids = []( std::vector<Strand> const& v ) {
    std::vector<std::string> out;
    for ( auto const& s : v )
      out.push_back( s.id );
    return out;
  };
  EXPECT_EQ( ids( free_strand_pool( sys, { GcMode::assumed } ) ),
             ( std::vector<std::string>{ "A", "B", "C", "D", "L:r0", "buf1:A", "cap:r0" } ) );
  EXPECT_EQ( ids( free_strand_pool( sys, { GcMode::off } ) ),
             ( std::vector<std::string>{ "A", "B", "C", "D", "L:r0", "buf1:A", "buf2:B", "cap:r0" } ) );
}

TEST( Attachments, ToeholdWithoutBranchMigrationIsTransient )
{
  auto sys = compile_crn( parse_crn( "A + B -> C" ) );
  auto atts = attachments( sys.gadgets[0].input_gate, species_strand( "B" ) );
  ASSERT_EQ( atts.size(), 1u );
  EXPECT_FALSE( atts[0].incumbent.has_value() );

  atts = attachments( sys.gadgets[0].input_gate, species_strand( "A" ) );
  ASSERT_EQ( atts.size(), 1u );
  EXPECT_EQ( atts[0].incumbent, 1u );
}

TEST( EnumerateInteractions, CleanSystemHasOnlyIntendedEvents )
{
  auto sys = compile_crn( parse_crn( "A + B -> C\nC + D + B -> A" ) );
  for ( auto gc : { GcMode::assumed, GcMode::off } )
  {
    auto rep = enumerate_interactions( sys, { gc } );
    EXPECT_EQ( rep.spurious_count, 0u );
    EXPECT_EQ( rep.intended_count, 4u + 5u );
    EXPECT_TRUE( rep.rule_counts.empty() );
    std::map<std::size_t, std::size_t> per_gadget;
    for ( auto const& e : rep.events )
      if ( e.classification == Classification::intended )
        ++per_gadget[e.gadget];
    EXPECT_EQ( per_gadget, ( std::map<std::size_t, std::size_t>{ { 0, 4 }, { 1, 5 } } ) );
  }
}

TEST( EnumerateInteractions, NandIsClean )
{
  auto sys = compile_crn( nand );
  for ( auto gc : { GcMode::assumed, GcMode::off } )
  {
    auto rep = enumerate_interactions( sys, { gc } );
    EXPECT_EQ( rep.spurious_count, 0u );
    EXPECT_EQ( rep.intended_count, 20u );
  }
}

TEST( EnumerateInteractions, SharedLinkerToehold )
{
  CompileOptions opts;
  opts.sabotage = Sabotage::share_linker_toehold;
  auto rep = enumerate_interactions( compile_crn( nand, opts ) );
  ASSERT_GT( rep.spurious_count, 0u );
  for ( auto const& e : rep.events )
    if ( e.classification == Classification::spurious )
    {
      EXPECT_EQ( e.rule, Rule::shared_linker_toehold );
      EXPECT_EQ( e.displaced, ( std::vector<std::string>{ "Ob" } ) );
      EXPECT_EQ( e.invader_role, StrandRole::linker );
      EXPECT_NE( e.invader, names::linker( e.gadget ) );
    }
}

TEST( EnumerateInteractions, LinkerEqualsUniversal )
{
  CompileOptions opts;
  opts.sabotage = Sabotage::linker_equals_t;
  auto sys = compile_crn( nand, opts );
  auto rep = enumerate_interactions( sys );
  ASSERT_GT( rep.spurious_count, 0u );
  EXPECT_EQ( rep.rule_counts.size(), 1u );
  EXPECT_TRUE( rep.rule_counts.count( Rule::linker_toehold_is_universal ) );

  bool non_final_displaced = false;
  for ( auto const& e : rep.events )
    if ( e.classification == Classification::spurious )
    {
      auto const& r = sys.crn.reactions[e.gadget];
      if ( std::find( r.reactants.begin(), r.reactants.end() - 1, e.displaced.front() ) != r.reactants.end() - 1 )
        non_final_displaced = true;
    }
  EXPECT_TRUE( non_final_displaced );
}

TEST( EnumerateInteractions, SwappedOrderCollidesBuffers )
{
  CompileOptions opts;
  opts.sabotage = Sabotage::swap_order;
  auto sys = compile_crn( nand, opts );
  EXPECT_FALSE( validate_ordering( sys.crn ).empty() );
  for ( auto gc : { GcMode::assumed, GcMode::off } )
  {
    auto rep = enumerate_interactions( sys, { gc } );
    EXPECT_GT( rep.spurious_count, 0u );
    EXPECT_EQ( rep.rule_counts.size(), 1u );
    EXPECT_TRUE( rep.rule_counts.count( Rule::buffer_identity_collision ) );
  }
}

TEST( EnumerateInteractions, Deterministic )
{
  CompileOptions opts;
  opts.sabotage = Sabotage::linker_equals_t;
  auto a = enumerate_interactions( compile_crn( nand, opts ) );
  auto b = enumerate_interactions( compile_crn( nand, opts ) );
  EXPECT_EQ( explain( a ), explain( b ) );
}

TEST( Explain, Format )
{
  EXPECT_EQ( explain( CrosstalkReport{} ), "" );
  auto text = explain( enumerate_interactions( compile_crn( parse_crn( "A + B -> C" ) ) ) );
  EXPECT_NE( text.find( "intended: A binds g1:r0@Fresh at t*[0], displaces buf1:A\n" ), std::string::npos );
  EXPECT_NE( text.find( "intended: L:r0 binds g2:r0 at j0*[0], releases C\n" ), std::string::npos );
  EXPECT_NE( text.find( " events: 4 intended, " ), std::string::npos );
}

TEST( Properties, RandomValidCrnsAreClean )
{
  std::mt19937_64 rng( 23 );
  for ( int i = 0; i < 60; ++i )
  {
    auto sys = compile_crn( oracle::random_valid_crn( rng, {} ) );
    for ( auto gc : { GcMode::assumed, GcMode::off } )
      EXPECT_EQ( enumerate_interactions( sys, { gc } ).spurious_count, 0u ) << serialize_crn( sys.crn );
  }
}

TEST( Properties, EachLinkerRuleIsNecessary )
{
  std::mt19937_64 rng( 29 );
  int checked_t = 0, checked_share = 0;
  for ( int i = 0; i < 80; ++i )
  {
    auto sys = compile_crn( oracle::random_valid_crn( rng, { 6, 5, 2, 3, 2 } ) );

    for ( auto const& r : sys.crn.reactions )
    {
      // a linker on t can only invade where its final species also sits left of a t*
      if ( !final_also_non_final( sys.crn, final_reactant( r ) ) )
        continue;
      auto asg = sys.assignment;
      asg.linker_of[r.id] = asg.universal;
      auto rep = enumerate_interactions( with_assignment( sys, asg ) );
      bool protects = false;
      for ( auto const& e : rep.events )
      {
        auto const& rs = sys.crn.reactions[e.gadget].reactants;
        if ( e.classification == Classification::spurious && e.kind == EventKind::displacement &&
             std::find( rs.begin(), rs.end() - 1, e.displaced.front() ) != rs.end() - 1 )
          protects = true;
      }
      EXPECT_TRUE( protects ) << serialize_crn( sys.crn );
      ++checked_t;
    }

    for ( auto const& [final, members] : final_reactant_groups( sys.crn ) )
      if ( members.size() >= 2 )
      {
        auto asg = sys.assignment;
        asg.linker_of[members[1]] = asg.linker_of[members[0]];
        auto rep = enumerate_interactions( with_assignment( sys, asg ) );
        EXPECT_GT( rep.rule_counts[Rule::shared_linker_toehold], 0u );
        EXPECT_TRUE( std::any_of( rep.events.begin(), rep.events.end(), [&]( InteractionEvent const& e ) {
          return e.classification == Classification::spurious && e.displaced == std::vector<std::string>{ final };
        } ) );
        ++checked_share;
      }
  }
  EXPECT_GT( checked_t, 20 );
  EXPECT_GT( checked_share, 20 );
}

TEST( Properties, OrderingViolationsProduceSpuriousEvents )
{
  std::mt19937_64 rng( 31 );
  int checked = 0;
  for ( int i = 0; i < 300 && checked < 40; ++i )
  {
    auto crn = oracle::random_crn( rng, { 5, 5, 2, 3, 2 } );
    if ( validate_ordering( crn ).empty() )
      continue;
    CompileOptions opts;
    opts.force = true;
    auto rep = enumerate_interactions( compile_crn( crn, opts ), { GcMode::off } );
    EXPECT_GT( rep.rule_counts[Rule::buffer_identity_collision], 0u ) << serialize_crn( crn );
    ++checked;
  }
  EXPECT_EQ( checked, 40 );
}

#include <iostream>
#include <string>
#include <vector>

#include <crn2dsd/cli.hpp>

int main( int argc, char** argv )
{
  std::vector<std::string> args( argv + 1, argv + argc );
  return crn2dsd::cli::run( std::move( args ), std::cout, std::cerr );
}

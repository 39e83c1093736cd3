#include <iostream>

#include <ddrc/cli.hpp>

int main(int argc, char **argv)
{
  return ddrc::run_cli(argc, argv, std::cout, std::cerr);
}

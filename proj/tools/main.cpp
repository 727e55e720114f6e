#include "cli.hpp"

int
main(int argc, char** argv)
{
  return relreg::cli::run(argc, argv);
}

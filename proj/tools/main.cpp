#include "gdd/cli.hpp"

int main(int argc, char** argv)
{
  return gdd::cli_main(argc, argv);
}

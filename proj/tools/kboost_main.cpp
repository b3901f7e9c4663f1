#include "kboost/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return kboost::main_entry(argc, argv, std::cout, std::cerr);
}

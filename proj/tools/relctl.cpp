/// @file   relctl.cpp
/// @brief  Entry point of the relctl tool

#include "relctl/cli.hpp"

int main(int argc, char **argv) { return relctl::cli::run(argc, argv); }

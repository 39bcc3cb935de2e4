#include "prandtl/cli.hpp"

int main(int argc, char** argv) { return prandtl::cli_main(argc, argv); }

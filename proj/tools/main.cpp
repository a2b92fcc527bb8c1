#include "npdg/cli.hpp"

int main(int argc, char** argv) { return npdg::cli_main(argc, argv); }

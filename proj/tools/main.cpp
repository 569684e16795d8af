#include "deuler/cli.hpp"

int main(int argc, char** argv) { return deuler::cli_main(argc, argv); }

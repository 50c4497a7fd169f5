#include "bext/cli.hpp"

int main(int argc, char** argv) { return bext::cli_main(argc, argv); }

#include "coin/cli.hpp"

int main(int argc, char** argv) { return coin::cli_main(argc, argv); }

#include "exaul/cli.hpp"

int main(int argc, char** argv) { return exaul::run_cli(argc, argv); }

#include "subreg/cli.hpp"

int main(int argc, char** argv) { return subreg::run_cli(argc, argv); }

#include "cli.hpp"

int main(int argc, char** argv) { return faircd::cli::run_cli(argc, argv); }

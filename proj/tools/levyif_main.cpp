#include "levyif/cli.hpp"

int main(int argc, char** argv) { return levyif::run_cli(argc, argv); }

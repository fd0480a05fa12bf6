#include "modres/cli.hpp"

int main(int argc, char** argv) { return modres::cli::run(argc, argv); }

#include "bunkbed/cli.hpp"

int main(int argc, char** argv) { return bunkbed::cli::run(argc, argv); }

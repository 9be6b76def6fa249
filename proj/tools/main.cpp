#include "cli.hpp"

int main(int argc, char** argv) { return qwork::cli::run(argc, argv); }

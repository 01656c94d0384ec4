#include "cli.hpp"

int main(int argc, char** argv) { return milnebands::cli::run(argc, argv); }

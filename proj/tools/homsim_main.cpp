#include "homsim/cli.hpp"

int main(int argc, char** argv) { return homsim::cli::main_entry(argc, argv); }

#include "isoalg/cli.hpp"

int main(int argc, char** argv) { return isoalg::cli::run(argc, argv); }

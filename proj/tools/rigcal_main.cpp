#include "rigcal/cli.hpp"

int main(int argc, char** argv) { return rigcal::cli_main(argc, argv); }

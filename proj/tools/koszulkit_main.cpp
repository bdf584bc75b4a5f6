#include "koszulkit/cli.hpp"

int main(int argc, char** argv) { return koszulkit::run_cli(argc, argv); }

#include "multidet/cli.hpp"

int main(int argc, char** argv) { return multidet::run_cli(argc, argv); }

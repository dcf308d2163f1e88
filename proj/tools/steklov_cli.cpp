#include "steklov/cli.hpp"

int main(int argc, char** argv) { return steklov::run_cli(argc, argv); }

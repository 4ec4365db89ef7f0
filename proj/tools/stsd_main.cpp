#include "stsd/cli.hpp"

int main(int argc, char** argv) { return stsd::cli_main(argc, argv); }

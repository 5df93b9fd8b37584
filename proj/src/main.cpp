#include "switchcast/cli.hpp"

int main(int argc, char** argv) { return switchcast::cli_main(argc, argv); }

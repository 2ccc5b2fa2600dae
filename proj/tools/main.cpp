#include "nlot/cli.hpp"

int main(int argc, char** argv) { return nlot::run_cli(argc, argv); }

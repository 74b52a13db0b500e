#include "critlog/cli.hpp"

int main(int argc, char** argv) { return critlog::run_cli(argc, argv); }

#include "qssf/cli.hpp"

int main(int argc, char** argv) { return qssf::run_cli(argc, argv); }

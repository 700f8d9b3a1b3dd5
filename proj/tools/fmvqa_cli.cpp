#include "fmvqa/cli.hpp"

int main(int argc, char** argv) { return fmvqa::run_cli(argc, argv); }

#include "lgp/cli.hpp"

int main(int argc, char** argv) { return lgp::run_cli(argc, argv); }

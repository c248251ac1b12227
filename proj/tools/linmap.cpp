#include <linq/cli.hpp>

int main(int argc, char** argv) { return linq::run_cli(argc, argv); }

#include "wedgeshock/cli.hpp"

int main(int argc, char** argv) { return wedgeshock::run_cli(argc, argv); }

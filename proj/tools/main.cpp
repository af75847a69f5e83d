#include "looptree/cli.hpp"

int main(int argc, char** argv) { return looptree::run_cli(argc, argv); }

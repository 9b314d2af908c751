#include "svf/cli.hpp"

int main(int argc, char** argv) { return svf::run(argc, argv); }

#include "imb/bench.hpp"

int main(int argc, char **argv) { return imb::bench::cli(argc, argv); }

#include "tlab/cli.hpp"

int main(int argc, char** argv) { return tlab::dispatch(argc, argv); }

// Compiles the amalgamated Catch2 implementation (with its default main)
// exactly once for the whole test tree.
#include <catch2/catch_amalgamated.cpp>

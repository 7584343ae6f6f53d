#include "gotl/harness.hpp"

int main(int argc, char** argv) { return gotl::cli_main(argc, argv); }

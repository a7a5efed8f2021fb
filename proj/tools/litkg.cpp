#include "litkg/report/cli.hpp"

int main(int argc, char** argv) { return litkg::report::cli_dispatch(argc, argv); }

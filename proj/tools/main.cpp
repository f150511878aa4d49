#include <vhom/cli.hpp>

int main(int argc, char **argv) { return vhom::cli_main(argc, argv); }

#include "qspi/cli.hpp"

int main(int argc, char** argv) {
    return qspi::run_cli(argc, argv);
}

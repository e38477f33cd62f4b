#include "flcontract/cli.hpp"

int main(int argc, char** argv) {
    return flcontract::run_cli(argc, argv);
}

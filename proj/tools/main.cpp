#include "rhd/cli.hpp"

int main(int argc, char** argv) {
    return rhd::cli_main(argc, argv);
}

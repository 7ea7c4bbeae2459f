#include <string>
#include <vector>

#include "quadclass/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return quadclass::run_command(args);
}

#include <vector>

#include "zenoplan/harness.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return zenoplan::run_cli(args);
}

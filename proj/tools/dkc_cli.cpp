#include <iostream>
#include <string>
#include <vector>

#include "cli_app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return dkc::cli::run(std::move(args), std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "dkc: internal error: " << e.what() << "\n";
        return dkc::cli::kUsageError;
    }
}

#include <cstdio>

#include "specgap/cli.hpp"

int main(int argc, char** argv) {
    try {
        const auto cfg = specgap::cli::parse_command_line(argc, argv);
        return specgap::cli::run(cfg);
    } catch (const specgap::cli::HelpRequested& h) {
        std::printf("%s", h.text.c_str());
        return 0;
    } catch (const specgap::cli::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure.  `--criterion N` restricts to a single criterion (used by the
// per-criterion ctest entries); `--list` prints the table.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "yamabe/accept.hpp"

int main(int argc, char** argv) {
    int only = 0;
    std::uint64_t seed = 20240801ull;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
            seed = std::strtoull(argv[++i], nullptr, 10);
        } else if (std::strcmp(argv[i], "--list") == 0) {
            for (int id = 1; id <= yamabe::accept::criterion_count(); ++id)
                std::printf("%d\n", id);
            return 0;
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N] [--seed S] [--list]\n",
                         argv[0]);
            return 2;
        }
    }
    bool all_pass = true;
    auto run_one = [&](int id) {
        yamabe::accept::CriterionResult r = yamabe::accept::run_criterion(id, seed);
        std::printf("%s\n", yamabe::accept::format_line(r).c_str());
        for (const std::string& d : r.details) std::printf("%s\n", d.c_str());
        std::fflush(stdout);
        all_pass = all_pass && r.pass;
    };
    if (only > 0) {
        run_one(only);
    } else {
        for (int id = 1; id <= yamabe::accept::criterion_count(); ++id) run_one(id);
    }
    return all_pass ? 0 : 1;
}

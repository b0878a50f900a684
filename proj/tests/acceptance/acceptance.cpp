#include "criteria.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            ids.push_back(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]...\n");
            return 2;
        }
    }
    if (ids.empty()) ids = acceptance::all_criteria();
    bool all = true;
    for (int id : ids) {
        acceptance::Outcome o;
        try {
            o = acceptance::run_criterion(id);
        } catch (const std::exception& e) {
            o.id = id;
            o.title = "error";
            o.measured = e.what();
        }
        std::printf("[%s] criterion %2d  %-34s %s  (%.2fs, limit %.0fs)\n", o.pass ? "PASS" : "FAIL", o.id,
                    o.title.c_str(), o.measured.c_str(), o.seconds, o.limit);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}

#include "qzw/acceptance.hpp"
#include "qzw/error.hpp"

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

// usage: qzw_acceptance [config.json] [criterion ids...]
int main(int argc, char** argv)
{
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    try {
        qzw::AcceptanceOptions opts;
        int i = 1;
        if (argc > 1 && std::string(argv[1]).ends_with(".json")) {
            opts.config = qzw::load_config(argv[1]);
            ++i;
        }
        for (; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
        int failed = 0;
        qzw::run_acceptance(opts, [&](const qzw::CriterionResult& r) {
            std::printf("%s\n", qzw::format_result(r).c_str());
            if (!r.passed) ++failed;
        });
        std::printf("%d criteria failed\n", failed);
        return failed == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

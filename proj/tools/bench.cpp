#include "fglfans/descent.hpp"
#include "fglfans/lazard.hpp"
#include "fglfans/pps.hpp"

#include "CLI11.hpp"

#include <omp.h>

#include <chrono>
#include <iomanip>
#include <iostream>

using namespace fglfans;

namespace {

Vec v2(long a, long b) { return Vec{Int(a), Int(b)}; }
Vec v3(long a, long b, long c) { return Vec{Int(a), Int(b), Int(c)}; }

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct Task {
    std::string name;
    std::shared_ptr<const Fan> fan;
    int trunc;
    int max_degree;
};

enum class Mode {
    serial,          // reference path: serial sweep, serial assembly
    omp_assembly,    // constraint blocks assembled in parallel within a solve
    omp_degrees,     // independent degrees solved in parallel
};

double run_sweep(const Task& task, Mode mode, std::vector<int>& ranks) {
    auto ring = build_lazard_ring(task.trunc);
    SheafSystem sys(task.fan, ring);
    SheafDomain dom = fan_domain(task.fan);
    ranks.assign(task.max_degree + 1, 0);
    auto t0 = std::chrono::steady_clock::now();
    if (mode == Mode::omp_degrees) {
#pragma omp parallel for schedule(dynamic)
        for (int d = 0; d <= task.max_degree; ++d)
            ranks[d] = global_sections(sys, dom, d, {false, false}).rank();
    } else {
        for (int d = 0; d <= task.max_degree; ++d)
            ranks[d] = global_sections(sys, dom, d, {mode == Mode::omp_assembly, false}).rank();
    }
    return ms_since(t0);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial reference vs OpenMP solver paths"};
    int threads = 0;
    int repeat = 3;
    app.add_option("--threads", threads, "thread count for the parallel path (0 = default)");
    app.add_option("--repeat", repeat, "repetitions per measurement");
    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    std::vector<Task> tasks;
    tasks.push_back({"p1xp1 D=5", Fan::build(2, {v2(1, 0), v2(0, 1), v2(-1, 0), v2(0, -1)},
                                             {{0, 1}, {1, 2}, {2, 3}, {0, 3}}),
                     5, 3});
    tasks.push_back({"blowupp2 D=4", Fan::build(2, {v2(1, 0), v2(0, 1), v2(-1, -1), v2(1, 1)},
                                                {{0, 3}, {1, 3}, {1, 2}, {0, 2}}),
                     4, 3});
    tasks.push_back({"squarecone D=3",
                     Fan::build(3, {v3(1, 0, 1), v3(0, 1, 1), v3(-1, 0, 1), v3(0, -1, 1)},
                                {{0, 1, 2, 3}}),
                     3, 2});

    std::cout << "threads available: " << omp_get_max_threads() << "\n";
    std::cout << std::left << std::setw(18) << "task" << std::setw(13) << "serial(ms)"
              << std::setw(16) << "omp-blocks(ms)" << std::setw(17) << "omp-degrees(ms)"
              << "best speedup\n";
    for (const Task& task : tasks) {
        std::vector<int> ref, blocks, degrees;
        double t_ref = 1e100, t_blocks = 1e100, t_degrees = 1e100;
        for (int r = 0; r < repeat; ++r) {
            t_ref = std::min(t_ref, run_sweep(task, Mode::serial, ref));
            t_blocks = std::min(t_blocks, run_sweep(task, Mode::omp_assembly, blocks));
            t_degrees = std::min(t_degrees, run_sweep(task, Mode::omp_degrees, degrees));
        }
        if (ref != blocks || ref != degrees) {
            std::cerr << "MISMATCH between serial and parallel results on " << task.name << "\n";
            return 4;
        }
        std::cout << std::left << std::setw(18) << task.name << std::setw(13) << std::fixed
                  << std::setprecision(2) << t_ref << std::setw(16) << t_blocks << std::setw(17)
                  << t_degrees << std::setprecision(2) << t_ref / std::min(t_blocks, t_degrees)
                  << "\n";
    }
    return 0;
}

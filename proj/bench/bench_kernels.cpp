// Serial vs OpenMP throughput for the data-parallel kernels. Both paths
// produce identical results (disjoint writes / order-free reductions); this
// binary reports the speedup actually obtained.

#include <chrono>
#include <cstdio>

#include "cubetower/branched.hpp"
#include "cubetower/flatnorm.hpp"
#include "cubetower/forms.hpp"
#include "cubetower/metric.hpp"
#include "cubetower/parallel.hpp"

using namespace cubetower;

namespace {

double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

template <class Fn>
double timed(Fn&& fn) {
    double t0 = now();
    fn();
    return now() - t0;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3fs  omp %8.3fs  speedup %.2fx\n", name, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
    std::vector<BuildStep> schedule(2, BuildStep{PlanePair{1, 2}});
    InverseSystem sys = InverseSystem::build(new_unit_cube(2, 5), schedule);

    {
        ExplicitVertexGraph g = build_vertex_graph(sys.level(2), 1);
        std::vector<std::int32_t> sources;
        for (int i = 0; i < 64; ++i)
            sources.push_back(static_cast<std::int32_t>((i * 9973) % g.node_count()));
        auto run = [&](Exec e) {
            double sink = 0;
            g.dijkstra_batch(sources, e, [&](std::int64_t, const std::vector<float>& d) {
                sink += d.back();
            });
            (void)sink;
        };
        double ts = timed([&] { run(Exec::Serial); });
        double tp = timed([&] { run(Exec::Parallel); });
        report("dijkstra_batch (64 src)", ts, tp);
    }
    {
        CubicalChain n2 = fundamental_chain(sys.level(2));
        FormPack fp = random_forms(sys.level(0), 7);
        auto anc = [&](CellId c) { return sys.ancestor_cell(2, c, 0); };
        double r1 = 0, r2 = 0;
        setenv("CUBETOWER_SERIAL", "1", 1);
        double ts = timed([&] { r1 = evaluate_on_form(n2, fp, 3, anc); });
        unsetenv("CUBETOWER_SERIAL");
        double tp = timed([&] { r2 = evaluate_on_form(n2, fp, 3, anc); });
        if (r1 != r2) std::printf("MISMATCH in form evaluation: %.17g vs %.17g\n", r1, r2);
        report("evaluate_on_form (1089c)", ts, tp);
    }
    {
        GridComplex fine(2, 256);
        GridChain a, b;
        setenv("CUBETOWER_SERIAL", "1", 1);
        double ts = timed([&] { a = rasterize(rotated_square(), 1.0, fine); });
        unsetenv("CUBETOWER_SERIAL");
        double tp = timed([&] { b = rasterize(rotated_square(), 1.0, fine); });
        if (a.entries != b.entries) std::printf("MISMATCH in rasterize\n");
        report("rasterize (256x256)", ts, tp);
    }
    return 0;
}

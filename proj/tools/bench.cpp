// Compares the serial reference kernels against the OpenMP paths on the
// built-in workloads and checks they agree bit for bit.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "ebmod/estimator.hpp"

using namespace ebmod;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& f, int reps) {
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) f();
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, double serial_ms, double parallel_ms, bool match) {
    std::printf("%-32s %10.2f ms %10.2f ms   x%.2f   %s\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms,
                match ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    const Tolerances tol;
    std::printf("%-32s %13s %13s %7s\n", "kernel", "serial", "parallel",
                "speedup");

    {
        Scenario s = make_builtin("max-quad-affine");
        SampleConfig cfg = s.default_cfg;
        cfg.directions = 4096;
        ShellProfile ser, par;
        const double ts =
            time_ms([&] { ser = empirical_ebm(s, cfg, tol, Exec::Serial); }, 3);
        const double tp =
            time_ms([&] { par = empirical_ebm(s, cfg, tol, Exec::Parallel); }, 3);
        row("empirical shells (max func)", ts, tp,
            ser.shell_min == par.shell_min && ser.liminf == par.liminf);
    }
    {
        Scenario s = make_builtin("circle-unit");
        const Vector x{1.3, 0.4};
        double vs = 0, vp = 0;
        const double ts =
            time_ms([&] { vs = residual(*s.sys, x, Exec::Serial); }, 200);
        const double tp =
            time_ms([&] { vp = residual(*s.sys, x, Exec::Parallel); }, 200);
        row("curve residual (grid 4096)", ts, tp, vs == vp);
    }
    {
        Scenario s = make_builtin("max-quad-affine");
        SampleConfig cfg = s.default_cfg;
        cfg.directions = 4096;
        LimitingCollection cs, cp;
        const double ts = time_ms(
            [&] {
                cs = limiting_collection(*s.phi, s.base_point, cfg, tol,
                                         Exec::Serial);
            },
            3);
        const double tp = time_ms(
            [&] {
                cp = limiting_collection(*s.phi, s.base_point, cfg, tol,
                                         Exec::Parallel);
            },
            3);
        row("limiting collection", ts, tp, cs.index_sets == cp.index_sets);
    }
    {
        std::vector<Vector> pts;
        for (int i = 0; i < 11; ++i) {
            const double a = 0.5 + 0.1 * i;
            pts.push_back({std::cos(a) + 1.5, std::sin(a) + 1.5});
        }
        const PointSet A(pts);
        FaceCollection fs, fp;
        const double ts = time_ms(
            [&] { fs = face_collection(A, {}, tol, Exec::Serial); }, 3);
        const double tp = time_ms(
            [&] { fp = face_collection(A, {}, tol, Exec::Parallel); }, 3);
        bool match = fs.faces.size() == fp.faces.size();
        for (std::size_t i = 0; match && i < fs.faces.size(); ++i)
            match = fs.faces[i].indices == fp.faces[i].indices;
        row("face enumeration (|A|=11)", ts, tp, match);
    }
    {
        Scenario s = make_builtin("circle-weighted");
        RegularityProbe ps, pp;
        const double ts = time_ms(
            [&] {
                ps = regularity_probe(*s.sys, s.base_point,
                                      ProbeKind::LocallyPolyhedral, 20000,
                                      {1e-2, 1e-3, 1e-4}, 0, tol, Exec::Serial);
            },
            3);
        const double tp = time_ms(
            [&] {
                pp = regularity_probe(*s.sys, s.base_point,
                                      ProbeKind::LocallyPolyhedral, 20000,
                                      {1e-2, 1e-3, 1e-4}, 0, tol,
                                      Exec::Parallel);
            },
            3);
        row("regularity probe (20k samples)", ts, tp,
            ps.counterexample_found == pp.counterexample_found &&
                ps.direction == pp.direction);
    }
    return 0;
}

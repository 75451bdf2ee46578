// Brute-force grid-pair Beer index of the L-shape (unit square minus the open
// top-right quadrant). Points are grid cell centers inside the L; a pair is
// visible iff its segment avoids the open removed quadrant. Independent of
// the library's polygon machinery.
//
// Usage: lshape_oracle [grid = 400] [threads = hw]

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <thread>
#include <vector>

namespace {

// parametric interval of the segment with coordinate > 0.5, intersected for
// x and y; a nonempty open overlap means the segment enters the quadrant
bool blocked(double ax, double ay, double bx, double by) {
    double t0 = 0.0, t1 = 1.0;
    double dx = bx - ax;
    if (dx == 0.0) {
        if (ax <= 0.5) return false;
    } else {
        double t = (0.5 - ax) / dx;
        if (dx > 0.0)
            t0 = t > t0 ? t : t0;
        else
            t1 = t < t1 ? t : t1;
    }
    double dy = by - ay;
    if (dy == 0.0) {
        if (ay <= 0.5) return false;
    } else {
        double t = (0.5 - ay) / dy;
        if (dy > 0.0)
            t0 = t > t0 ? t : t0;
        else
            t1 = t < t1 ? t : t1;
    }
    return t0 < t1;
}

}  // namespace

int main(int argc, char** argv) {
    int grid = argc > 1 ? std::atoi(argv[1]) : 400;
    int threads =
        argc > 2 ? std::atoi(argv[2]) : static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;

    std::vector<double> xs, ys;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            double x = (i + 0.5) / grid;
            double y = (j + 0.5) / grid;
            if (x > 0.5 && y > 0.5) continue;  // removed quadrant
            xs.push_back(x);
            ys.push_back(y);
        }
    const std::int64_t n = static_cast<std::int64_t>(xs.size());
    std::fprintf(stderr, "grid %d: %lld points, %lld pairs, %d threads\n", grid,
                 static_cast<long long>(n), static_cast<long long>(n * (n - 1) / 2), threads);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::int64_t> vis(threads, 0);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            std::int64_t local = 0;
            for (std::int64_t i = t; i < n; i += threads) {
                double ax = xs[i], ay = ys[i];
                bool a_low = ax <= 0.5, a_left = ay <= 0.5;
                for (std::int64_t j = i + 1; j < n; ++j) {
                    // both left of or both below the quadrant: trivially clear
                    if ((a_low && xs[j] <= 0.5) || (a_left && ys[j] <= 0.5)) {
                        ++local;
                        continue;
                    }
                    if (!blocked(ax, ay, xs[j], ys[j])) ++local;
                }
            }
            vis[t] = local;
        });
    }
    for (auto& th : pool) th.join();
    std::int64_t visible = 0;
    for (auto v : vis) visible += v;

    // ordered pairs including the diagonal (self-pairs are visible)
    long double b = (2.0L * visible + n) / (static_cast<long double>(n) * n);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%.12Lf\n", static_cast<long double>(b));
    std::fprintf(stderr, "visible unordered pairs: %lld, elapsed %.1f s\n",
                 static_cast<long long>(visible), secs);
    return 0;
}

// End-to-end acceptance suite. Each numbered check prints one PASS/FAIL line;
// the process exits nonzero if any check fails.
//
// Usage: gpor-acceptance <path-to-gpor-cli> <baseline-dir>
//   The CLI binary and the committed trajectory hashes are needed for the
//   determinism regression (check 9); all other checks are self-contained.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gpor/experiment.hpp"
#include "gpor/gp.hpp"
#include "gpor/internal_model.hpp"
#include "gpor/ode.hpp"
#include "gpor/plants.hpp"
#include "gpor/regulator.hpp"

using namespace gpor;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::printf("[%s] %d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
    if (!ok) ++g_failures;
    std::fflush(stdout);
}

double rms(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s / double(v.size()));
}

// ---- minimal SHA-256 (FIPS 180-4), enough to fingerprint trajectory files ----

struct Sha256 {
    std::array<uint32_t, 8> h{0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a, 0x510e527f,
                              0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::array<uint8_t, 64> block{};
    std::size_t block_len = 0;
    uint64_t total_len = 0;

    static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void compress() {
        static constexpr uint32_t k[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = uint32_t(block[4 * i]) << 24 | uint32_t(block[4 * i + 1]) << 16 |
                   uint32_t(block[4 * i + 2]) << 8 | uint32_t(block[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        auto [a, b, c, d, e, f, g, hh] = h;
        for (int i = 0; i < 64; ++i) {
            const uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const uint32_t ch = (e & f) ^ (~e & g);
            const uint32_t t1 = hh + s1 + ch + k[i] + w[i];
            const uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            const uint32_t t2 = s0 + maj;
            hh = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }

    void update(const uint8_t* data, std::size_t len) {
        total_len += len;
        while (len > 0) {
            const std::size_t take = std::min(len, block.size() - block_len);
            std::copy(data, data + take, block.begin() + block_len);
            block_len += take;
            data += take;
            len -= take;
            if (block_len == block.size()) {
                compress();
                block_len = 0;
            }
        }
    }

    std::string hex_digest() {
        const uint64_t bits = total_len * 8;
        const uint8_t one = 0x80;
        update(&one, 1);
        const uint8_t zero = 0x00;
        while (block_len != 56) update(&zero, 1);
        for (int i = 7; i >= 0; --i) {
            const auto byte = uint8_t(bits >> (8 * i));
            update(&byte, 1);
        }
        char out[65];
        for (int i = 0; i < 8; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
        return std::string(out, 64);
    }
};

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<unreadable>";
    Sha256 ctx;
    std::vector<char> buf(1 << 20);
    while (in.read(buf.data(), std::streamsize(buf.size())) || in.gcount() > 0)
        ctx.update(reinterpret_cast<const uint8_t*>(buf.data()), std::size_t(in.gcount()));
    return ctx.hex_digest();
}

std::string read_line(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    // keep only the leading token (sha256sum-style files may append a name)
    std::stringstream ss(line);
    std::string tok;
    ss >> tok;
    return tok;
}

// ---------------------------------------------------------------------------

void check_gp_exactness() {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> xdist(-2.0, 2.0);
    std::normal_distribution<double> ydist(0.0, 1.5);
    gp::Kernel noise_free{1.0, {1.0, 1.0}, 0.0};
    gp::Kernel regular{1.0, {1.0, 1.0}, 1e-6};

    bool interp_ok = true, var_ok = true, rank1_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        gp::Dataset d;
        for (int i = 0; i < 5; ++i) {
            d.inputs.push_back({xdist(rng), xdist(rng)});
            d.targets.push_back(ydist(rng));
        }
        const gp::GpModel clean = gp::GpModel::fit(d, noise_free);
        for (std::size_t i = 0; i < d.size(); ++i)
            if (std::abs(clean.predict_mean(d.inputs[i]) - d.targets[i]) > 1e-6)
                interp_ok = false;
        for (int probe = 0; probe < 10; ++probe) {
            const double v = clean.predict_variance({xdist(rng), xdist(rng)});
            if (v < 0.0 || v > noise_free.signal_variance + 1e-9) var_ok = false;
        }

        // rank-1 update vs refit
        gp::Dataset d4 = d;
        const Vector x_new = d4.inputs.back();
        d4.inputs.pop_back();
        d4.targets.pop_back();
        const gp::GpModel g4 = gp::GpModel::fit(d4, regular);
        const gp::GpModel g5 = gp::GpModel::fit(d, regular);
        const Vector x{xdist(rng), xdist(rng)};
        auto kvec = [&](const Vector& q) {
            Vector out(d4.size());
            for (std::size_t i = 0; i < d4.size(); ++i)
                out[i] = gp::kernel_eval(regular, q, d4.inputs[i]);
            return out;
        };
        const double cov =
            gp::kernel_eval(regular, x, x_new) - dot(kvec(x), solve_cholesky(g4.chol(), kvec(x_new)));
        const double gamma = cov * cov / (g4.predict_variance(x_new) + regular.noise_variance);
        if (std::abs(g5.predict_variance(x) - (g4.predict_variance(x) - gamma)) > 1e-8)
            rank1_ok = false;
    }
    report(1, interp_ok && var_ok && rank1_ok,
           "GP exactness: interpolation <= 1e-6, variance in [0, sigma_f^2 + 1e-9], rank-1 "
           "update == refit to 1e-8 over 100 random datasets");
}

void check_variance_monotonicity() {
    // eta samples from the first benchmark's closed loop
    ExperimentConfig cfg = example_config(1);
    cfg.duration = 1.5;
    const RunResult r = run_experiment(cfg);

    std::vector<Vector> etas;
    std::vector<double> us;
    std::size_t last_j = 0;
    for (const auto& s : r.trajectory.samples)
        if (s.j == last_j + 1) {  // row logged right after a jump
            etas.push_back(s.eta);
            us.push_back(s.u);
            last_j = s.j;
            if (etas.size() >= 10) break;
        }

    std::vector<Vector> probes;
    for (std::size_t i = 0; i < r.trajectory.samples.size() && probes.size() < 20; i += 37)
        probes.push_back(r.trajectory.samples[i].eta);

    gp::Kernel k = cfg.regulator.kernel;
    std::vector<double> prev(probes.size(), k.signal_variance);
    bool ok = etas.size() == 10;
    gp::Dataset d;
    for (std::size_t n = 0; n < etas.size(); ++n) {
        d.inputs.push_back(etas[n]);
        d.targets.push_back(us[n]);
        const gp::GpModel g = gp::GpModel::fit(d, k);
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const double v = g.predict_variance(probes[p]);
            if (v > prev[p] + 1e-8) ok = false;
            prev[p] = v;
        }
    }
    report(2, ok,
           "variance monotonicity on nested 1..10-point datasets from the closed-loop eta "
           "trajectory, 20 probes, tol 1e-8");
}

void check_lorenz_oracle() {
    const plants::LorenzParams p;
    const plants::PlantModel plant = plants::make_lorenz_plant(p);
    const double period = 2.0 * 3.14159265358979323846 / p.sigma_exo;
    const plants::LorenzCoefficients base = plants::lorenz_coefficients(p);

    auto residual_with = [&](const plants::LorenzCoefficients& c) {
        plants::SteadyMaps maps{
            [c](const Vector& w) {
                const double w1 = w[0], w2 = w[1];
                return Vector{c.r11 * w1 + c.r12 * w2,
                              c.r21 * w1 * w1 + c.r22 * w2 * w2 + c.r23 * w1 * w2, w1};
            },
            [c](const Vector& w) {
                const double w1 = w[0], w2 = w[1];
                return c.r31 * w1 + c.r32 * w2 + c.r33 * w1 * w1 * w1 + c.r34 * w2 * w2 * w2 +
                       c.r35 * w1 * w1 * w2 + c.r36 * w1 * w2 * w2;
            }};
        return plants::regulator_residual(plant, maps, {0.0, 4.0}, period);
    };

    const double nominal = residual_with(base);
    bool ok = nominal <= 1e-4;
    for (int which = 0; which < 11 && ok; ++which) {
        plants::LorenzCoefficients c = base;
        double* fields[] = {&c.r11, &c.r12, &c.r21, &c.r22, &c.r23, &c.r31,
                            &c.r32, &c.r33, &c.r34, &c.r35, &c.r36};
        *fields[which] *= 1.1;
        if (residual_with(c) <= 1e-2) ok = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "regulator-equation residual %.3e <= 1e-4 and every 10%%-corrupted "
                  "coefficient detected above 1e-2",
                  nominal);
    report(3, ok, buf);
}

void check_bioreactor_anchor() {
    plants::BioreactorParams p;
    p.a0 = 0.0;
    const double mu = plants::growth_rate(2.404, 24.87, p);
    const Vector rhs = plants::bioreactor_rhs({7.038, 2.404, 24.87}, 20.0, 0.0, p);
    double n = 0.0;
    for (double v : rhs) n += v * v;
    n = std::sqrt(n);
    const bool ok = std::abs(mu - 0.15) <= 1e-3 && n <= 5e-3;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "equilibrium anchor: growth rate %.6f (target 0.15 +- 1e-3), ||rhs|| %.2e <= 5e-3",
                  mu, n);
    report(4, ok, buf);
}

// returns the trajectory for reuse by the with/without comparison
RunResult check_benchmark_one() {
    const ExperimentConfig cfg = example_config(1);
    RunResult r;
    bool bounded = true;
    try {
        r = run_experiment(cfg);
    } catch (const NonFiniteState&) {
        bounded = false;
    }
    report(5, bounded, "benchmark 1 (a): bounded over 40 time units");
    if (!bounded) return r;

    double sup_early = 0.0, sup_late = 0.0;
    std::vector<double> ff_first, ff_last;
    for (const auto& s : r.trajectory.samples) {
        if (s.t <= 5.0) sup_early = std::max(sup_early, std::abs(s.e));
        if (s.t >= 30.0) sup_late = std::max(sup_late, std::abs(s.e));
        const double ustar = plants::lorenz_ideal_feedforward(s.w, cfg.lorenz);
        if (s.t <= 0.25 * cfg.duration) ff_first.push_back(s.gp_mean - ustar);
        if (s.t >= 0.75 * cfg.duration) ff_last.push_back(s.gp_mean - ustar);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "benchmark 1 (b): sup|e| over [30,40] = %.3e <= 0.1 x sup|e| over [0,5] = %.3e",
                  sup_late, sup_early);
    report(5, sup_late <= 0.1 * sup_early, buf);
    const double r1 = rms(ff_first), r4 = rms(ff_last);
    std::snprintf(buf, sizeof buf,
                  "benchmark 1 (c): RMS(mu - u*) final quarter %.3e <= 0.25 x first quarter %.3e",
                  r4, r1);
    report(5, r4 <= 0.25 * r1, buf);
    return r;
}

void check_with_vs_without(const RunResult& with_one) {
    for (int which = 1; which <= 3; ++which) {
        ExperimentConfig cfg = example_config(which);
        const RunMetrics with_gp =
            which == 1 ? with_one.metrics : run_experiment(cfg).metrics;
        cfg.regulator.gp_enabled = false;
        const RunMetrics without_gp = run_experiment(cfg).metrics;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "benchmark %d: final-quarter RMS error %.3e with the internal-model term "
                      "< %.3e without it",
                      which, with_gp.rms_error_last_quarter, without_gp.rms_error_last_quarter);
        report(6, with_gp.rms_error_last_quarter < without_gp.rms_error_last_quarter, buf);
    }
}

void check_bioreactor_operation() {
    const ExperimentConfig cfg = example_config(3);
    const RunResult r = run_experiment(cfg);
    bool positive = true, in_bounds = true;
    std::vector<double> first, last;
    for (const auto& s : r.trajectory.samples) {
        for (double v : s.plant_state)
            if (v < 0.0) positive = false;
        if (s.u < 0.0 || s.u > 45.0) in_bounds = false;
        if (s.t <= 0.25 * cfg.duration) first.push_back(s.e);
        if (s.t >= 0.75 * cfg.duration) last.push_back(s.e);
    }
    const bool improves = rms(last) < rms(first);
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "bioreactor: states positive (%s), feed within [0,45] (%s), substrate RMS "
                  "improves %.3e -> %.3e",
                  positive ? "yes" : "no", in_bounds ? "yes" : "no", rms(first), rms(last));
    report(7, positive && in_bounds && improves, buf);
}

void check_structure() {
    bool chains_ok = true;
    for (std::size_t n = 1; n <= 16; ++n) {
        const InternalModel im = build_chain(n);
        if (std::abs(max_real_eigenvalue(im.m) + 1.0) > 1e-8) chains_ok = false;
        if (controllability_min_singular_value(im.m, im.n) <= 1e-12) chains_ok = false;
    }
    report(8, chains_ok,
           "chains 1..16 Hurwitz at -1 (tol 1e-8) and controllable (min singular value > 1e-12)");

    Vector w{0.0, 4.0};
    auto harmonic = [](double, const Vector& x) { return plants::harmonic_exo_rhs(x, 0.8); };
    for (int i = 0; i < 100000; ++i) w = rk4_step(harmonic, 0.0, w, 1e-3);
    const bool harmonic_ok = std::abs(w[0] * w[0] + w[1] * w[1] - 16.0) <= 1e-8;

    auto ham = [](const Vector& x) {
        return 0.5 * x[0] * x[0] + 0.25 * x[0] * x[0] * x[0] * x[0] + 0.5 * x[1] * x[1];
    };
    Vector wd{0.0, 4.0};
    const double h0 = ham(wd);
    auto duffing = [](double, const Vector& x) { return plants::duffing_exo_rhs(x); };
    bool duffing_ok = true;
    for (int i = 0; i < 10000; ++i) {
        wd = rk4_step(duffing, 0.0, wd, 1e-3);
        if (std::abs(ham(wd) - h0) > 1e-6) duffing_ok = false;
    }
    report(8, harmonic_ok && duffing_ok,
           "exosystem first integrals conserved (harmonic 1e-8 over 100 units, Duffing 1e-6 "
           "over 10 units)");
}

void check_determinism(const std::string& cli, const std::string& baseline_dir) {
    for (int which = 1; which <= 3; ++which) {
        const std::string name = "example" + std::to_string(which);
        const std::string csv = "./acceptance_" + name + ".csv";
        const std::string cmd =
            "'" + cli + "' reproduce " + name + " --csv '" + csv + "' > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        const std::string expected = read_line(baseline_dir + "/" + name + ".sha256");
        const std::string actual = rc == 0 ? sha256_file(csv) : "<run failed>";
        std::remove(csv.c_str());
        char buf[200];
        std::snprintf(buf, sizeof buf, "reproduce %s: trajectory digest %.16s... matches baseline %.16s...",
                      name.c_str(), actual.c_str(), expected.c_str());
        report(9, rc == 0 && !expected.empty() && actual == expected, buf);
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: %s <gpor-cli> <baseline-dir>\n", argv[0]);
        return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();

    check_gp_exactness();
    check_variance_monotonicity();
    check_lorenz_oracle();
    check_bioreactor_anchor();
    const RunResult one = check_benchmark_one();
    check_with_vs_without(one);
    check_bioreactor_operation();
    check_structure();
    check_determinism(argv[1], argv[2]);

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s (%d failure%s, %.1f s)\n", g_failures == 0 ? "ALL CHECKS PASSED" : "FAILURES",
                g_failures, g_failures == 1 ? "" : "s", secs);
    return g_failures == 0 ? 0 : 1;
}

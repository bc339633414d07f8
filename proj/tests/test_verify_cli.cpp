#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vchain/cli/cli.hpp"
#include "vchain/cli/io.hpp"
#include "vchain/cli/verify.hpp"
#include "vchain/parallel.hpp"
#include "vchain/theta.hpp"

using namespace vchain;
using namespace vchain::cli;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "vchain_test";
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<double> column(const std::vector<std::string>& lines, int col) {
    std::vector<double> out;
    for (size_t i = 1; i < lines.size(); ++i) {
        std::stringstream ss(lines[i]);
        std::string cell;
        for (int c = 0; c <= col; ++c) std::getline(ss, cell, ',');
        out.push_back(cell.empty() ? std::nan("") : std::stod(cell));
    }
    return out;
}

}  // namespace

TEST_CASE("float formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 3.141592653589793}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("tables are deterministic and json mirrors csv") {
    Table t({"a", "b"});
    t.add_row({1.5, std::nullopt});
    t.add_row({-0.25, 3.0});
    std::ostringstream c1, c2, j;
    t.write_csv(c1);
    t.write_csv(c2);
    CHECK(c1.str() == c2.str());
    CHECK(c1.str() == "a,b\n1.5,\n-0.25,3\n");
    t.write_json(j);
    const auto parsed = nlohmann::json::parse(j.str());
    CHECK(parsed.size() == 2);
    CHECK(parsed[0]["a"] == 1.5);
    CHECK(parsed[0]["b"].is_null());
    CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("config parsing") {
    const auto dir = temp_dir();
    const auto path = dir / "run.conf";
    {
        std::ofstream out(path);
        out << "# comment\nmu = 3\nbeta = 0.2\nt_max = 1.25\nformat = json\n";
    }
    RunConfig cfg;
    cfg.apply(parse_config_file(path.string()));
    CHECK(cfg.mu == 3);
    CHECK(cfg.beta == 0.2);
    CHECK(cfg.t_max == 1.25);
    CHECK(cfg.format == "json");
    cfg.validate();

    {
        std::ofstream out(path);
        out << "mu = 3\nwhatisthis = 1\n";
    }
    RunConfig cfg2;
    CHECK_THROWS(cfg2.apply(parse_config_file(path.string())));
    RunConfig cfg3;
    cfg3.format = "xml";
    CHECK_THROWS(cfg3.validate());
    RunConfig cfg4;
    cfg4.beta = -1.0;
    CHECK_THROWS(cfg4.validate());
}

TEST_CASE("density-1d command") {
    const auto out = temp_dir() / "density.csv";
    const int rc = run({"density-1d", "--nx", "201", "--nt", "8", "--out", out.string()});
    CHECK(rc == 0);
    const auto lines = read_lines(out);
    CHECK(lines.size() == 201 * 8 + 1);
    CHECK(lines[0] == "x,t,f1");

    const auto x = column(lines, 0);
    const auto t = column(lines, 1);
    const auto f = column(lines, 2);
    for (double v : f) CHECK(v >= -1e-12);
    // t strictly increasing within each fixed-x block
    for (size_t i = 1; i < t.size(); ++i) {
        if (x[i] == x[i - 1]) CHECK(t[i] > t[i - 1]);
    }
    // t = 0 rows carry exactly mu = 5 peaks
    std::vector<double> row0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] == 0.0) row0.push_back(f[i]);
    }
    CHECK(count_interior_maxima(row0) == 5);
}

TEST_CASE("flux-1d command") {
    const auto out = temp_dir() / "flux.csv";
    const int rc = run({"flux-1d", "--nx", "101", "--nt", "6", "--out", out.string()});
    CHECK(rc == 0);
    const auto lines = read_lines(out);
    CHECK(lines.size() == 101 * 6 + 1);
    int defined = 0;
    const auto v = column(lines, 2);
    for (double u : v) {
        if (!std::isnan(u)) {
            CHECK(u >= 0.0);
            ++defined;
        }
    }
    CHECK(defined > 100);
}

TEST_CASE("theta-maps command") {
    const auto stem = temp_dir() / "maps";
    const int rc = run({"theta-maps", "--nx", "81", "--nt", "41", "--out", stem.string()});
    CHECK(rc == 0);

    const auto dens = read_lines(stem.string() + ".density.csv");
    CHECK(dens[0] == "eta,tau,F");
    CHECK(dens.size() == 81 * 41 + 1);
    // eta = 0 and eta = a rows carry zero density
    {
        std::ifstream in(stem.string() + ".density.csv");
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            std::stringstream ss(line);
            std::string eta_s, tau_s, f_s;
            std::getline(ss, eta_s, ',');
            std::getline(ss, tau_s, ',');
            std::getline(ss, f_s, ',');
            const double eta = std::stod(eta_s);
            if (eta == 0.0 || eta == 0.5) CHECK(std::abs(std::stod(f_s)) < 1e-12);
        }
    }

    // the map covers exactly one period: the tau = 0 and tau = T rows match
    {
        const auto etas = column(dens, 0);
        const auto taus = column(dens, 1);
        const auto fs = column(dens, 2);
        double tau_end = 0.0;
        for (double tv : taus) tau_end = std::max(tau_end, tv);
        std::map<double, double> first_row;
        for (size_t i = 0; i < taus.size(); ++i) {
            if (taus[i] == 0.0) first_row[etas[i]] = fs[i];
        }
        for (size_t i = 0; i < taus.size(); ++i) {
            if (taus[i] == tau_end) {
                CHECK(std::abs(fs[i] - first_row.at(etas[i])) < 1e-10);
            }
        }
    }

    // flux profiles: each late-period profile crosses zero
    const auto flux_lines = read_lines(stem.string() + ".flux.csv");
    CHECK(flux_lines[0] == "tau,eta,u");
    const auto taus = column(flux_lines, 0);
    const auto us = column(flux_lines, 2);
    // group by tau value
    std::vector<double> distinct;
    for (double tv : taus) {
        if (distinct.empty() || tv != distinct.back()) distinct.push_back(tv);
    }
    CHECK(distinct.size() == 4);
    for (double tv : {distinct[2], distinct[3]}) {  // T/2.5 and T/2.2
        int sign_changes = 0;
        double prev = std::nan("");
        for (size_t i = 0; i < taus.size(); ++i) {
            if (taus[i] != tv || std::isnan(us[i])) continue;
            if (!std::isnan(prev) && us[i] * prev < 0.0) ++sign_changes;
            if (us[i] != 0.0) prev = us[i];
        }
        CHECK(sign_changes >= 1);
    }

    const auto lines_file = read_lines(stem.string() + ".lines.csv");
    CHECK(lines_file[0] == "s_plus_k_plus_1,slope,tau_frac,eta_frac");
    CHECK(lines_file.size() > 4);
}

TEST_CASE("phase-snapshots command") {
    const auto stem = temp_dir() / "phase";
    const int rc = run({"phase-snapshots", "--nx", "41", "--out", stem.string(), "--snapshots",
                        "3"});
    CHECK(rc == 0);
    const auto dens = read_lines(stem.string() + ".density.csv");
    CHECK(dens[0] == "t,x,v,f2");
    CHECK(dens.size() == 3 * 41 * 41 + 1);

    const auto poly = read_lines(stem.string() + ".polygon.csv");
    CHECK(poly[0] == "t,corner,x,v");
    CHECK(poly.size() == 3 * 4 + 1);
    // polygon area conserved: shoelace over each group of four corners
    const auto px = column(poly, 2);
    const auto pv = column(poly, 3);
    for (int g = 0; g < 3; ++g) {
        double area2 = 0.0;
        for (int c = 0; c < 4; ++c) {
            const int i = g * 4 + c;
            const int j = g * 4 + (c + 1) % 4;
            area2 += px[i] * pv[j] - px[j] * pv[i];
        }
        CHECK(std::abs(std::abs(area2) / 2.0 - 0.5 * 1.0) <= 1e-12 * 0.5);
    }
    // t = 0 snapshot support is the axis-aligned box
    CHECK(px[0] == 0.0);
    CHECK(px[1] == 0.5);
    CHECK(pv[2] == 1.0);
}

TEST_CASE("verify command and exit codes") {
    const auto out = temp_dir() / "verify.json";
    CHECK(run({"verify", "--out", out.string()}) == 0);

    // report round-trips as JSON with the expected shape
    std::ifstream in(out);
    const auto parsed = nlohmann::json::parse(in);
    CHECK(parsed.is_array());
    CHECK(parsed.size() > 20);
    for (const auto& entry : parsed) {
        CHECK(entry.contains("name"));
        CHECK(entry.contains("grid"));
        CHECK(entry.contains("max_abs"));
        CHECK(entry.contains("tolerance"));
        CHECK(entry["pass"].is_boolean());
        CHECK(entry["pass"] == (entry["max_abs"].get<double>() <=
                                entry["tolerance"].get<double>()));
    }

    // negative control: mis-parsed flux series must fail the continuity check
    const auto conf = temp_dir() / "negctl.conf";
    {
        std::ofstream c(conf);
        c << "negative_control = flux-parse\n";
    }
    CHECK(run({"verify", "--config", conf.string(), "--out", out.string()}) == 1);

    // usage and config errors
    CHECK(run({"verify", "--config", "/does/not/exist.conf"}) == 2);
    CHECK(run({"density-1d", "--out", "/does/not/exist/dir/file.csv"}) == 2);
    CHECK(run({"no-such-command"}) == 2);
    CHECK(run({"density-1d", "--nx", "1"}) == 2);
    CHECK(run({}) == 2);
}

TEST_CASE("csv output is byte-identical across runs") {
    const auto o1 = temp_dir() / "rep1.csv";
    const auto o2 = temp_dir() / "rep2.csv";
    CHECK(run({"density-1d", "--nx", "64", "--nt", "5", "--out", o1.string()}) == 0);
    CHECK(run({"density-1d", "--nx", "64", "--nt", "5", "--out", o2.string()}) == 0);
    std::ifstream a(o1), b(o2);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().size() > 1000);
}

TEST_CASE("flags override config file") {
    const auto conf = temp_dir() / "mu.conf";
    {
        std::ofstream c(conf);
        c << "mu = 2\nnx = 51\nnt = 4\n";
    }
    const auto out = temp_dir() / "override.csv";
    CHECK(run({"density-1d", "--config", conf.string(), "--mu", "1", "--out", out.string()}) ==
          0);
    const auto lines = read_lines(out);
    CHECK(lines.size() == 51 * 4 + 1);
    // with mu = 1 the t = 0 row has exactly one peak (mu = 2 would give two)
    const auto t = column(lines, 1);
    const auto f = column(lines, 2);
    std::vector<double> row0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] == 0.0) row0.push_back(f[i]);
    }
    CHECK(count_interior_maxima(row0) == 1);
}

TEST_CASE("half-period probe reports the reflection identity") {
    const ThetaSolution sol(WellParams(1.0, 1.0, 0.5), 1, 0.1);
    const auto probe = probe_half_period_flux(sol, 33, 10);
    MESSAGE("shift pointwise=", probe.shift_pointwise, " shift reflected=",
            probe.shift_reflected, " reverse pointwise=", probe.reverse_pointwise,
            " reverse reflected=", probe.reverse_reflected);
    // the time reflection is the exact sign flip; the half-period shifts
    // and the space reflection are not
    CHECK(probe.reverse_pointwise < 1e-8);
    CHECK(probe.shift_pointwise > 1e-3);
    CHECK(probe.shift_reflected > 1e-3);
}

TEST_CASE("worker pool respects the thread cap") {
    setenv("VLASOV_CHAR_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    setenv("VLASOV_CHAR_THREADS", "0", 1);
    CHECK(worker_count() >= 1);
    unsetenv("VLASOV_CHAR_THREADS");

    // chunks cover [0, n) exactly once
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](size_t b, size_t e) {
        for (size_t i = b; i < e; ++i) hits[i] += 1;
    });
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("evaluations are safe to run concurrently") {
    const ThetaSolution sol(WellParams(1.0, 1.0, 0.5), 1, 0.05);
    const double T = sol.mode().period;
    std::vector<double> serial(64);
    for (int i = 0; i < 64; ++i) serial[i] = sol.density(0.5 * (i + 1) / 66.0, 0.31 * T);

    std::vector<double> parallel_vals(64);
    std::vector<std::thread> pool;
    for (int w = 0; w < 4; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < 64; i += 4) {
                parallel_vals[i] = sol.density(0.5 * (i + 1) / 66.0, 0.31 * T);
            }
        });
    }
    for (auto& th : pool) th.join();
    for (int i = 0; i < 64; ++i) CHECK(parallel_vals[i] == serial[i]);
}

TEST_CASE("verification battery passes on defaults") {
    RunConfig cfg;
    const auto reports = run_verification(cfg);
    for (const auto& r : reports) {
        INFO(r.name, " max_abs=", r.max_abs, " tol=", r.tolerance);
        CHECK(r.pass);
    }
    CHECK(all_pass(reports));
    const auto parsed = nlohmann::json::parse(reports_to_json(reports));
    CHECK(parsed.size() == reports.size());
}

// Command-line front end: sampling runs, condition checks, threshold tables,
// series-oracle evaluations and plot-data extraction.
//
// Exit codes: 0 ok, 1 negative verdict, 2 config error, 3 no feasible start,
// 4 numerics (non-converged tails).

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gibbspp/conditions.hpp"
#include "gibbspp/errors.hpp"
#include "gibbspp/oracle.hpp"
#include "gibbspp/pointpattern.hpp"
#include "gibbspp/runconfig.hpp"
#include "gibbspp/sampler.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gibbspp;

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Writes body prefixed by a comment header carrying the seed and an FNV-1a
/// hash of the body, so artifacts are self-identifying.
void write_artifact(const fs::path& path, std::uint64_t seed, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    std::ostringstream h;
    h << "# seed=" << seed << " hash=" << std::hex << fnv1a(body) << "\n";
    out << h.str() << body;
}

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
    return os.str();
}

int cmd_sample(const std::string& config_path, const std::string& out_dir, std::int64_t seed_ov,
               int chains_ov, std::int64_t steps_ov) {
    RunConfig cfg = RunConfig::parse_file(config_path);
    if (seed_ov >= 0) cfg.seed = static_cast<std::uint64_t>(seed_ov);
    if (chains_ov > 0) cfg.chains = chains_ov;
    if (steps_ov > 0) cfg.sampler.steps = steps_ov;
    cfg.sampler.seed = cfg.seed;
    fs::create_directories(out_dir);

    const GibbsSpec spec = cfg.spec();
    json report;
    report["seed"] = cfg.seed;
    report["config"] = cfg.serialize();
    report["z_volume"] = cfg.z * spec.window.volume();
    json chain_reports = json::array();

    for (int c = 0; c < cfg.chains; ++c) {
        SamplerConfig sc = cfg.sampler;
        sc.seed = cfg.seed + static_cast<std::uint64_t>(c) * 0x9e3779b97f4a7c15ull;
        ChainState state = init_feasible(spec, cfg.lattice(), cfg.cell_template(), sc.seed);

        std::ostringstream trace;
        trace << "step,energy,n,accepted\n";
        long retained = 0, sample_idx = 0;
        double sum = 0.0, sumsq = 0.0;
        for (long s = 0; s < sc.steps; ++s) {
            const bool acc = step(state, spec, sc);
            trace << state.step_count << ',' << num(state.cached_energy.value()) << ','
                  << state.interior.size() << ',' << (acc ? 1 : 0) << '\n';
            if (s < sc.burn_in || (s - sc.burn_in) % std::max<long>(1, sc.thinning) != 0) continue;
            ++retained;
            sum += state.interior.size();
            sumsq += static_cast<double>(state.interior.size()) * state.interior.size();
            if (sc.store_samples) {
                std::ostringstream pat;
                write_point_pattern(pat, state.interior);
                std::ostringstream name;
                name << "chain" << c << "_sample" << std::setw(6) << std::setfill('0')
                     << sample_idx++ << ".csv";
                write_artifact(fs::path(out_dir) / name.str(), sc.seed, pat.str());
            }
        }
        write_artifact(fs::path(out_dir) / ("trace_chain" + std::to_string(c) + ".csv"), sc.seed,
                       trace.str());

        const double mean = retained ? sum / retained : 0.0;
        const double var = retained > 1 ? (sumsq - retained * mean * mean) / (retained - 1) : 0.0;
        json cr;
        cr["chain"] = c;
        cr["chain_seed"] = sc.seed;
        cr["retained"] = retained;
        cr["mean_n"] = mean;
        cr["se_n"] = retained ? std::sqrt(std::max(0.0, var) / retained) : 0.0;
        cr["final_energy"] = state.cached_energy.value();
        cr["acceptance"] = {
            {"birth", {{"proposed", state.birth.proposed}, {"accepted", state.birth.accepted}}},
            {"death", {{"proposed", state.death.proposed}, {"accepted", state.death.accepted}}},
            {"translate",
             {{"proposed", state.translate.proposed}, {"accepted", state.translate.accepted}}}};
        chain_reports.push_back(cr);
    }
    report["chains"] = chain_reports;
    const std::string body = report.dump(2) + "\n";
    std::ofstream rep(fs::path(out_dir) / "run_report.json");
    rep << body;
    std::cout << "wrote artifacts to " << out_dir << "\n";
    return 0;
}

int cmd_check(const std::string& config_path) {
    const RunConfig cfg = RunConfig::parse_file(config_path);
    const RegularityReport rep = check_conditions(cfg.structure_id(), cfg.make_potential(), cfg.z,
                                                  cfg.lattice(), cfg.cell_template());
    std::cout << serialize_report(rep);
    return rep.verdict ? 0 : 1;
}

int cmd_threshold(const std::string& model, const std::vector<double>& k0s,
                  const std::vector<double>& k1s, const std::vector<double>& alphas,
                  const std::string& out_path) {
    ThresholdInput in;
    if (model == "poly_edge")
        in.model = ThresholdInput::Model::EdgeLength;
    else if (model == "poly_triangle")
        in.model = ThresholdInput::Model::TriangleDiameter;
    else
        throw ConfigError("threshold model must be poly_edge or poly_triangle");
    std::ostringstream os;
    os << "kappa0,kappa1,alpha,z_min\n";
    for (double k0 : k0s)
        for (double k1 : k1s)
            for (double a : alphas) {
                in.kappa0 = k0;
                in.kappa1 = k1;
                in.alpha = a;
                os << num(k0) << ',' << num(k1) << ',' << num(a) << ',' << num(threshold(in))
                   << '\n';
            }
    if (out_path.empty())
        std::cout << os.str();
    else
        write_artifact(out_path, 0, os.str());
    return 0;
}

int cmd_oracle(const std::string& config_path, const std::string& mode, const std::string& out_path,
               std::int64_t seed_ov, int n_max, int mc_per_n) {
    RunConfig cfg = RunConfig::parse_file(config_path);
    if (seed_ov >= 0) cfg.seed = static_cast<std::uint64_t>(seed_ov);
    const Window window = cfg.window();
    if (window.volume() > 4.0) throw TailNotConverged("window too large for the series oracle");
    const StructureId s = cfg.structure_id();
    const Potential pot = cfg.make_potential();
    const double c_s = stability_constant(s, pot);
    Rng rng(cfg.seed);
    std::ostringstream os;

    if (mode == "Z") {
        const GibbsSpec spec = oracle_spec(s, pot, cfg.z, window, cfg.boundary());
        os << series_report(partition_function(spec, n_max, mc_per_n, rng, c_s));
    } else if (mode == "consistency") {
        const GibbsSpec outer = oracle_spec(s, pot, cfg.z, window, cfg.boundary());
        const Window inner = window.scaled(0.5);
        std::vector<TestFunctional> fs = {
            [](const Configuration& c) { return static_cast<double>(c.size()); },
            [](const Configuration& c) { return static_cast<double>(c.size() * c.size()); },
            [&inner](const Configuration& c) {
                double n = 0;
                for (const Point& p : c.points()) n += inner.contains(p);
                return n;
            }};
        const ConsistencyResult res = consistency_check(outer, inner, fs, n_max, mc_per_n, rng);
        os << "max_deviation: " << num(res.max_deviation) << "\n";
        os << "budget: " << num(res.budget) << "\n";
        for (std::size_t j = 0; j < res.deviations.size(); ++j)
            os << "deviation_" << j << ": " << num(res.deviations[j]) << " sigma "
               << num(res.sigmas[j]) << "\n";
        os << "within_budget: " << (res.max_deviation <= std::max(res.budget, 1e-2) ? 1 : 0)
           << "\n";
    } else if (mode == "entropy") {
        const EntropyDiagnostic d = entropy_diagnostic(s, pot, cfg.z, cfg.lattice(),
                                                       cfg.cell_template(), 1, 40000, rng);
        os << "lhs: " << num(d.lhs) << "\nrhs: " << num(d.rhs) << "\nsigma: " << num(d.sigma)
           << "\nholds: " << (d.holds ? 1 : 0) << "\n";
    } else {
        throw ConfigError("oracle mode must be Z, consistency or entropy");
    }

    if (out_path.empty())
        std::cout << os.str();
    else
        write_artifact(out_path, cfg.seed, os.str());
    return 0;
}

int cmd_plotdata(const std::string& sample_dir, const std::string& out_dir) {
    std::vector<fs::path> inputs;
    if (fs::is_regular_file(sample_dir)) {
        inputs.push_back(sample_dir);
    } else if (fs::is_directory(sample_dir)) {
        for (const auto& e : fs::directory_iterator(sample_dir))
            if (e.path().extension() == ".csv" &&
                e.path().filename().string().find("sample") != std::string::npos)
                inputs.push_back(e.path());
    }
    if (inputs.empty()) throw ConfigError("no point-pattern samples under " + sample_dir);
    fs::create_directories(out_dir);
    std::sort(inputs.begin(), inputs.end());

    for (const fs::path& in : inputs) {
        std::ifstream f(in);
        std::string first;
        std::getline(f, first);
        if (first.rfind("# ", 0) != 0) f.seekg(0);  // tolerate missing artifact header
        const Configuration config = read_point_pattern(f);
        std::ostringstream del, vor;
        del << "x1,y1,x2,y2\n";
        vor << "x1,y1,x2,y2\n";
        if (config.size() >= 3) {
            const DelaunayResult dr = delaunay(config);
            // bounding box for clipping unbounded Voronoi rays
            Point lo = config.points()[0], hi = lo;
            for (const Point& p : config.points())
                for (int i = 0; i < 2; ++i) {
                    lo[i] = std::min(lo[i], p[i]);
                    hi[i] = std::max(hi[i], p[i]);
                }
            const double pad = 0.25 * std::max(hi[0] - lo[0], hi[1] - lo[1]) + 1e-9;
            for (int i = 0; i < 2; ++i) {
                lo[i] -= pad;
                hi[i] += pad;
            }
            auto clip = [&](Point a, Point b) -> std::optional<std::pair<Point, Point>> {
                // Liang-Barsky against [lo, hi]
                double t0 = 0.0, t1 = 1.0;
                const double dx[2] = {b[0] - a[0], b[1] - a[1]};
                for (int i = 0; i < 2; ++i) {
                    for (int sgn : {-1, 1}) {
                        const double p = sgn < 0 ? -dx[i] : dx[i];
                        const double q = sgn < 0 ? a[i] - lo[i] : hi[i] - a[i];
                        if (p == 0.0) {
                            if (q < 0.0) return std::nullopt;
                        } else {
                            const double t = q / p;
                            if (p < 0.0)
                                t0 = std::max(t0, t);
                            else
                                t1 = std::min(t1, t);
                        }
                    }
                }
                if (t0 > t1) return std::nullopt;
                const Point a2 = {a[0] + t0 * dx[0], a[1] + t0 * dx[1]};
                const Point b2 = {a[0] + t1 * dx[0], a[1] + t1 * dx[1]};
                return std::make_pair(a2, b2);
            };
            std::vector<Point> centers;
            for (const auto& t : dr.triangles) {
                const auto cb = circumball(
                    {config.points()[t[0]], config.points()[t[1]], config.points()[t[2]]});
                centers.push_back(cb ? cb->center : Point{0.0, 0.0});
            }
            for (std::size_t e = 0; e < dr.edges.size(); ++e) {
                const Point& a = config.points()[dr.edges[e][0]];
                const Point& b = config.points()[dr.edges[e][1]];
                del << num(a[0]) << ',' << num(a[1]) << ',' << num(b[0]) << ',' << num(b[1])
                    << '\n';
                const auto& tris = dr.edge_triangles[e];
                std::optional<std::pair<Point, Point>> seg;
                if (tris.size() == 2) {
                    seg = clip(centers[tris[0]], centers[tris[1]]);
                } else if (tris.size() == 1) {
                    // ray from the circumcenter through the edge midpoint,
                    // outward, clipped to the box
                    const Point& c = centers[tris[0]];
                    Point mid = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
                    Point dir = {mid[0] - c[0], mid[1] - c[1]};
                    const double span = 4.0 * std::max(hi[0] - lo[0], hi[1] - lo[1]);
                    const double nrm = std::hypot(dir[0], dir[1]);
                    if (nrm > 0.0) {
                        Point far = {c[0] + dir[0] / nrm * span, c[1] + dir[1] / nrm * span};
                        seg = clip(c, far);
                    }
                }
                if (seg)
                    vor << num(seg->first[0]) << ',' << num(seg->first[1]) << ','
                        << num(seg->second[0]) << ',' << num(seg->second[1]) << '\n';
            }
        } else if (config.size() == 2) {
            const Point& a = config.points()[0];
            const Point& b = config.points()[1];
            del << num(a[0]) << ',' << num(a[1]) << ',' << num(b[0]) << ',' << num(b[1]) << '\n';
        }
        const std::string stem = in.stem().string();
        write_artifact(fs::path(out_dir) / (stem + "_delaunay.csv"), 0, del.str());
        write_artifact(fs::path(out_dir) / (stem + "_voronoi.csv"), 0, vor.str());
    }
    std::cout << "wrote segment files for " << inputs.size() << " pattern(s) to " << out_dir
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gibbs point process toolkit"};
    app.require_subcommand(1);

    std::string config_path, out = "out", model = "poly_edge", mode = "Z", sample_dir;
    std::int64_t seed = -1, steps = -1;
    int chains = 0, n_max = 10, mc_per_n = 2000;
    std::vector<double> k0s{0.0}, k1s{1.0}, alphas{2.0};

    auto* sample = app.add_subcommand("sample", "run MCMC chains and dump artifacts");
    sample->add_option("--config", config_path)->required();
    sample->add_option("--out", out);
    sample->add_option("--seed", seed);
    sample->add_option("--chains", chains);
    sample->add_option("--steps", steps);

    auto* check = app.add_subcommand("check", "evaluate the regularity conditions");
    check->add_option("--config", config_path)->required();

    auto* thresh = app.add_subcommand("threshold", "activity threshold table");
    thresh->add_option("--model", model);
    thresh->add_option("--kappa0", k0s);
    thresh->add_option("--kappa1", k1s);
    thresh->add_option("--alpha", alphas);
    thresh->add_option("--out", out)->default_val("");

    auto* oracle = app.add_subcommand("oracle", "truncated-series computations");
    oracle->add_option("--config", config_path)->required();
    oracle->add_option("--mode", mode)->check(CLI::IsMember({"Z", "consistency", "entropy"}));
    oracle->add_option("--out", out)->default_val("");
    oracle->add_option("--seed", seed);
    oracle->add_option("--nmax", n_max);
    oracle->add_option("--mc", mc_per_n);

    auto* plot = app.add_subcommand("plotdata", "tessellation segments from samples");
    plot->add_option("--in", sample_dir)->required();
    plot->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed()) return cmd_sample(config_path, out, seed, chains, steps);
        if (check->parsed()) return cmd_check(config_path);
        if (thresh->parsed()) return cmd_threshold(model, k0s, k1s, alphas, out);
        if (oracle->parsed()) return cmd_oracle(config_path, mode, out, seed, n_max, mc_per_n);
        if (plot->parsed()) return cmd_plotdata(sample_dir, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedModel& e) {
        std::cerr << "unsupported model: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedDimension& e) {
        std::cerr << "unsupported dimension: " << e.what() << "\n";
        return 2;
    } catch (const NoFeasibleStart& e) {
        std::cerr << "no feasible start: " << e.what() << "\n";
        return 3;
    } catch (const TailNotConverged& e) {
        std::cerr << "numerics: " << e.what() << "\n";
        return 4;
    } catch (const DivergentSum& e) {
        std::cerr << "numerics: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

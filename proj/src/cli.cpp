#include "zslice/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zslice/dispersion.hpp"
#include "zslice/errors.hpp"
#include "zslice/invariants.hpp"
#include "zslice/propagator.hpp"
#include "zslice/random.hpp"
#include "zslice/transfer_oracle.hpp"

namespace zslice::cli {

namespace {

using nlohmann::json;

constexpr double kCrossMethodTolerance = 0.02;

struct Range {
    double lo = -3.0;
    double hi = 3.0;
    int n = 61;

    double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

// Every field is optional so that flags can be layered over a config file.
struct Options {
    std::optional<double> m, eps, cutoff, delta, spacing, ky;
    std::optional<int> nodes, count;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> method, lattice, suite, out, format, kx_range, kt_range;
    std::optional<std::vector<std::string>> points;
    std::optional<bool> timing;

    void overlay(const Options& o) {
        auto take = [](auto& dst, const auto& src) {
            if (src) dst = src;
        };
        take(m, o.m), take(eps, o.eps), take(cutoff, o.cutoff), take(delta, o.delta), take(spacing, o.spacing);
        take(ky, o.ky), take(nodes, o.nodes), take(count, o.count), take(seed, o.seed), take(method, o.method);
        take(lattice, o.lattice), take(suite, o.suite), take(out, o.out), take(format, o.format);
        take(kx_range, o.kx_range), take(kt_range, o.kt_range), take(points, o.points), take(timing, o.timing);
    }
};

std::string num(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, r.ptr};
}

std::vector<double> split_numbers(const std::string& s, char sep, std::size_t expected, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        double v = 0.0;
        const char* b = item.data();
        const char* e = b + item.size();
        while (b < e && *b == ' ') ++b;
        const auto r = std::from_chars(b, e, v);
        if (r.ec != std::errc{} || r.ptr != e || !std::isfinite(v)) throw InvalidInput("cannot parse " + what + " '" + s + "'");
        out.push_back(v);
    }
    if (out.size() != expected) throw InvalidInput(what + " needs " + std::to_string(expected) + " values: '" + s + "'");
    return out;
}

prop::SpacetimePoint parse_point(const std::string& s) {
    const auto v = split_numbers(s, ',', 4, "point x,y,z,t");
    return {v[0], v[1], v[2], v[3]};
}

lattice::LatticeSpec4D parse_lattice(const std::string& s) {
    const auto v = split_numbers(s, 'x', 4, "lattice NtxNxxNyxNz");
    lattice::LatticeSpec4D spec;
    int* dims[] = {&spec.n_t, &spec.n_x, &spec.n_y, &spec.n_z};
    for (std::size_t i = 0; i < 4; ++i) {
        if (v[i] != std::floor(v[i]) || v[i] > 1e6) throw InvalidInput("lattice extents must be integers: '" + s + "'");
        *dims[i] = static_cast<int>(v[i]);
    }
    return spec;
}

Range parse_range(const std::string& s, const std::string& what) {
    const auto v = split_numbers(s, ',', 3, what + " lo,hi,n");
    if (v[2] < 1 || v[2] != std::floor(v[2]) || v[2] > 1e5) throw InvalidInput(what + " count must be an integer >= 1");
    if (!(v[0] <= v[1])) throw InvalidInput(what + " needs lo <= hi");
    return {v[0], v[1], static_cast<int>(v[2])};
}

// A JSON config document uses the long flag names with '-' replaced by '_'.
Options load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw InvalidInput("config file must hold a JSON object");
    Options o;
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "m") o.m = v.get<double>();
            else if (key == "eps") o.eps = v.get<double>();
            else if (key == "cutoff") o.cutoff = v.get<double>();
            else if (key == "delta") o.delta = v.get<double>();
            else if (key == "spacing") o.spacing = v.get<double>();
            else if (key == "ky") o.ky = v.get<double>();
            else if (key == "nodes") o.nodes = v.get<int>();
            else if (key == "count") o.count = v.get<int>();
            else if (key == "seed") o.seed = v.get<std::uint64_t>();
            else if (key == "method") o.method = v.get<std::string>();
            else if (key == "lattice") o.lattice = v.get<std::string>();
            else if (key == "suite") o.suite = v.get<std::string>();
            else if (key == "out") o.out = v.get<std::string>();
            else if (key == "format") o.format = v.get<std::string>();
            else if (key == "kx_range") o.kx_range = v.get<std::string>();
            else if (key == "kt_range") o.kt_range = v.get<std::string>();
            else if (key == "timing") o.timing = v.get<bool>();
            else if (key == "point") {
                std::vector<std::string> pts;
                if (v.is_string()) pts.push_back(v.get<std::string>());
                else
                    for (const auto& p : v) pts.push_back(p.get<std::string>());
                o.points = pts;
            } else
                throw InvalidInput("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw InvalidInput("bad value in config file: " + std::string(e.what()));
    }
    return o;
}

json tagged(double value, std::optional<double> error) {
    json j;
    j["value"] = value;
    if (error) j["error"] = *error;
    else j["error"] = "exact";
    return j;
}

json tagged_complex(complex value, std::optional<double> error) {
    json j;
    j["re"] = value.real();
    j["im"] = value.imag();
    if (error) j["error"] = *error;
    else j["error"] = "exact";
    return j;
}

json record_header(const std::string& command) {
    json j;
    j["schema"] = kSchema;
    j["command"] = command;
    j["version"] = ZSLICE_VERSION;
    return j;
}

std::string format_of(const Options& o, const std::string& fallback) {
    const std::string f = o.format.value_or(fallback);
    if (f != "csv" && f != "json") throw InvalidInput("format must be csv or json, got '" + f + "'");
    return f;
}

MassParam mass_of(const Options& o, double default_eps_per_m2) {
    MassParam mp{o.m.value_or(1.0), 0.0};
    mp.eps = o.eps.value_or(default_eps_per_m2 * mp.m * mp.m);
    mp.validate();
    return mp;
}

struct Result {
    std::string content;
    int status = kOk;
};

Result cmd_lambda_map(const Options& o) {
    const MassParam mp = mass_of(o, 0.0);
    const Range kx = parse_range(o.kx_range.value_or("-3,3,61"), "kx-range");
    const Range kt = parse_range(o.kt_range.value_or("-3,3,61"), "kt-range");
    const double ky = o.ky.value_or(0.0);
    if (!std::isfinite(ky)) throw DomainError("ky must be finite");
    const std::string fmt = format_of(o, "csv");

    std::ostringstream csv;
    json rows = json::array();
    if (fmt == "csv") csv << "kx,ky,kt,re_lambda,im_lambda,region,error\n";
    for (int i = 0; i < kt.n; ++i)
        for (int j = 0; j < kx.n; ++j) {
            const MomentumTriple kp{kx.at(j), ky, kt.at(i)};
            const DispersionValue d = lambda_of(kp, mp);
            const std::string region(to_string(d.region));
            if (fmt == "csv") {
                csv << num(kp.kx) << ',' << num(kp.ky) << ',' << num(kp.kt) << ',' << num(d.lambda.real()) << ','
                    << num(d.lambda.imag()) << ',' << region << ",exact\n";
            } else {
                rows.push_back({{"kx", kp.kx}, {"ky", kp.ky}, {"kt", kp.kt},
                                {"lambda", tagged_complex(d.lambda, std::nullopt)}, {"region", region}});
            }
        }
    if (fmt == "csv") return {csv.str()};
    json rec = record_header("lambda-map");
    rec["inputs"] = {{"m", mp.m}, {"eps", mp.eps}, {"kx_range", {kx.lo, kx.hi, kx.n}},
                     {"kt_range", {kt.lo, kt.hi, kt.n}}, {"ky", ky}};
    rec["outputs"] = rows;
    return {rec.dump(2) + "\n"};
}

Result cmd_propagator(const Options& o) {
    const MassParam mp = mass_of(o, 0.1);
    if (!(mp.eps > 0.0)) throw PreconditionError("propagator needs eps > 0");
    const std::string method = o.method.value_or("all");
    std::vector<prop::Method> methods;
    if (method == "zform") methods = {prop::Method::ZForm};
    else if (method == "tform") methods = {prop::Method::TForm};
    else if (method == "fourd") methods = {prop::Method::FourD};
    else if (method == "all") methods = {prop::Method::ZForm, prop::Method::TForm, prop::Method::FourD};
    else throw InvalidInput("method must be zform, tform, fourd or all, got '" + method + "'");

    std::vector<std::string> point_text = o.points.value_or(
        std::vector<std::string>{"0,0,0,0", "0.5,0,0.5,0.5", "1,0,0,0", "0,0,1,0", "0.3,0.3,0.3,0.8"});
    std::vector<prop::SpacetimePoint> points;
    for (const auto& s : point_text) points.push_back(parse_point(s));
    if (points.empty()) throw InvalidInput("no sample points");

    auto q3 = prop::default_quadrature_3d(mp);
    auto q4 = prop::default_quadrature_4d(mp);
    if (o.cutoff) q3.cutoff = q4.cutoff = *o.cutoff;
    if (o.nodes) q3.nodes = q4.nodes = *o.nodes;
    q3.validate();
    q4.validate();
    const std::string fmt = format_of(o, "json");

    Result res;
    std::ostringstream csv;
    if (fmt == "csv") csv << "x,y,z,t,method,re,im,error\n";
    json outputs = json::array();
    for (const auto& p : points) {
        std::vector<prop::PropagatorValue> vals;
        for (auto mt : methods) vals.push_back(prop::propagator(mt, p, mp, mt == prop::Method::FourD ? q4 : q3));
        json entry;
        entry["point"] = {p.x, p.y, p.z, p.t};
        for (const auto& v : vals) {
            const std::string name(prop::to_string(v.method));
            entry["values"][name] = tagged_complex(v.value, v.error_estimate);
            if (fmt == "csv")
                csv << num(p.x) << ',' << num(p.y) << ',' << num(p.z) << ',' << num(p.t) << ',' << name << ','
                    << num(v.value.real()) << ',' << num(v.value.imag()) << ',' << num(v.error_estimate) << '\n';
        }
        for (std::size_t a = 0; a < vals.size(); ++a)
            for (std::size_t b = a + 1; b < vals.size(); ++b) {
                const double scale = std::max(std::abs(vals[a].value), std::abs(vals[b].value));
                const double dev = std::abs(vals[a].value - vals[b].value) / scale;
                const double err = (vals[a].error_estimate + vals[b].error_estimate) / scale;
                const std::string key =
                    std::string(prop::to_string(vals[a].method)) + "_vs_" + std::string(prop::to_string(vals[b].method));
                json d = tagged(dev, err);
                d["within_tolerance"] = dev <= kCrossMethodTolerance;
                entry["relative_deviation"][key] = d;
                if (dev > kCrossMethodTolerance) res.status = kNumericalFailure;
            }
        outputs.push_back(entry);
    }
    if (fmt == "csv") {
        res.content = csv.str();
        return res;
    }
    json rec = record_header("propagator");
    rec["inputs"] = {{"m", mp.m},           {"eps", mp.eps},         {"method", method},
                     {"cutoff", q3.cutoff}, {"nodes_3d", q3.nodes},  {"nodes_4d", q4.nodes},
                     {"offset", q3.offset}, {"points", point_text}, {"tolerance", kCrossMethodTolerance}};
    rec["outputs"] = outputs;
    res.content = rec.dump(2) + "\n";
    return res;
}

lattice::LatticeSpec4D lattice_of(const Options& o) {
    lattice::LatticeSpec4D spec = parse_lattice(o.lattice.value_or("3x2x2x3"));
    spec.m = o.m.value_or(1.0);
    spec.delta = o.delta.value_or(0.1);
    spec.spacing = o.spacing.value_or(1.0);
    spec.validate();
    return spec;
}

int count_of(const Options& o) {
    const int c = o.count.value_or(20);
    if (c < 1 || c > 100000) throw InvalidInput("count must be in [1, 100000]");
    return c;
}

Result cmd_invariants(const Options& o) {
    const std::string suite = o.suite.value_or("all");
    const auto& names = inv::suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) throw InvalidInput("unknown suite '" + suite + "'");
    inv::SuiteOptions so;
    so.lattice = lattice_of(o);
    so.seed = o.seed.value_or(42);
    so.configurations = count_of(o);
    const std::string fmt = format_of(o, "json");

    const inv::SuiteReport rep = inv::run_suite(suite, so);
    Result res;
    res.status = rep.all_passed() ? kOk : kNumericalFailure;
    if (fmt == "csv") {
        std::ostringstream csv;
        csv << "check,measured,threshold,comparison,passed,error\n";
        for (const auto& c : rep.checks)
            csv << c.name << ',' << num(c.measured) << ',' << num(c.threshold) << ',' << inv::to_string(c.comparison)
                << ',' << (c.passed ? "pass" : "fail") << ",exact\n";
        res.content = csv.str();
        return res;
    }
    json rec = record_header("invariants");
    rec["inputs"] = {{"suite", suite},
                     {"seed", so.seed},
                     {"generator", kGeneratorName},
                     {"lattice", o.lattice.value_or("3x2x2x3")},
                     {"delta", so.lattice.delta},
                     {"count", so.configurations}};
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"measured", tagged(c.measured, std::nullopt)},
                          {"threshold", c.threshold},
                          {"comparison", inv::to_string(c.comparison)},
                          {"passed", c.passed}});
    rec["outputs"] = {{"checks", checks}, {"all_passed", rep.all_passed()}};
    res.content = rec.dump(2) + "\n";
    return res;
}

Result cmd_oracle(const Options& o) {
    const lattice::LatticeSpec4D spec = lattice_of(o);
    const std::uint64_t seed = o.seed.value_or(42);
    const int count = count_of(o);
    const std::string fmt = format_of(o, "csv");

    const auto form = lattice::build_action(spec);
    const auto zero_t = lattice::zero_boundary(spec, lattice::Axis::T);
    const auto ref_d = lattice::amplitude_direct(form, zero_t);
    const auto ref_t = lattice::amplitude_sliced(form, zero_t, lattice::Axis::T);
    const auto ref_z = lattice::amplitude_sliced(form, lattice::reorient(zero_t), lattice::Axis::Z);

    Result res;
    std::ostringstream csv;
    if (fmt == "csv")
        csv << "config,direct_re,direct_im,t_sliced_re,t_sliced_im,z_sliced_re,z_sliced_im,"
               "dev_direct_t,dev_direct_z,dev_t_z,max_dev\n";
    json rows = json::array();
    double worst = 0.0;
    for (int c = 0; c < count; ++c) {
        const auto b = lattice::random_boundary(spec, lattice::Axis::T, seed, static_cast<std::uint64_t>(c));
        const auto d = lattice::normalized(lattice::amplitude_direct(form, b), ref_d);
        const auto t = lattice::normalized(lattice::amplitude_sliced(form, b, lattice::Axis::T), ref_t);
        const auto z = lattice::normalized(lattice::amplitude_sliced(form, lattice::reorient(b), lattice::Axis::Z), ref_z);
        const double dt = lattice::relative_deviation(d, t);
        const double dz = lattice::relative_deviation(d, z);
        const double tz = lattice::relative_deviation(t, z);
        const double mx = std::max({dt, dz, tz});
        worst = std::max(worst, mx);
        const complex vd = d.value(), vt = t.value(), vz = z.value();
        if (fmt == "csv") {
            csv << c << ',' << num(vd.real()) << ',' << num(vd.imag()) << ',' << num(vt.real()) << ','
                << num(vt.imag()) << ',' << num(vz.real()) << ',' << num(vz.imag()) << ',' << num(dt) << ','
                << num(dz) << ',' << num(tz) << ',' << num(mx) << '\n';
        } else {
            // The spread between the three eliminations is the error estimate
            // carried by each amplitude.
            rows.push_back({{"config", c},
                            {"direct", tagged_complex(vd, mx * std::abs(vd))},
                            {"t_sliced", tagged_complex(vt, mx * std::abs(vt))},
                            {"z_sliced", tagged_complex(vz, mx * std::abs(vz))},
                            {"dev_direct_t", tagged(dt, std::nullopt)},
                            {"dev_direct_z", tagged(dz, std::nullopt)},
                            {"dev_t_z", tagged(tz, std::nullopt)}});
        }
    }
    res.status = worst <= 1e-8 ? kOk : kNumericalFailure;
    if (fmt == "csv") {
        res.content = csv.str();
        return res;
    }
    json rec = record_header("oracle");
    rec["inputs"] = {{"lattice", o.lattice.value_or("3x2x2x3")},
                     {"m", spec.m},
                     {"delta", spec.delta},
                     {"spacing", spec.spacing},
                     {"seed", seed},
                     {"generator", kGeneratorName},
                     {"count", count}};
    rec["outputs"] = {{"configurations", rows}, {"max_deviation", tagged(worst, std::nullopt)}};
    res.content = rec.dump(2) + "\n";
    return res;
}

void add_common(CLI::App* sub, Options& o, std::string& config) {
    sub->add_option("--config", config, "JSON config file; flags override its values");
    sub->add_option("--m", o.m, "Mass m > 0");
    sub->add_option("--eps", o.eps, "i*eps regulator");
    sub->add_option("--out", o.out, "Output file (default: stdout)");
    sub->add_option("--format", o.format, "csv or json");
    sub->add_flag("--timing", o.timing, "Record wall time in the output");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"z-sliced scalar field toolkit", "zslice"};
    app.set_version_flag("--version", ZSLICE_VERSION);
    app.require_subcommand(1);

    Options flags;
    std::string config;

    auto* lm = app.add_subcommand("lambda-map", "Tabulate lambda and region over a (kx, kt) grid");
    add_common(lm, flags, config);
    lm->add_option("--kx-range", flags.kx_range, "lo,hi,n (default -3,3,61)");
    lm->add_option("--kt-range", flags.kt_range, "lo,hi,n (default -3,3,61)");
    lm->add_option("--ky", flags.ky, "Fixed ky (default 0)");

    auto* pr = app.add_subcommand("propagator", "Feynman propagator by z-ordered, t-ordered and 4D integrals");
    add_common(pr, flags, config);
    pr->add_option("--cutoff", flags.cutoff, "Momentum cutoff per axis (default 6/m)");
    pr->add_option("--nodes", flags.nodes, "Nodes per axis (default 48 for 3D, 32 for 4D)");
    pr->add_option("--point", flags.points, "Sample point x,y,z,t (repeatable)");
    pr->add_option("--method", flags.method, "zform, tform, fourd or all");

    auto* iv = app.add_subcommand("invariants", "Run an invariant suite");
    add_common(iv, flags, config);
    iv->add_option("--suite", flags.suite, "algebra, fieldops, evolution, oracle or all");
    iv->add_option("--lattice", flags.lattice, "NtxNxxNyxNz (default 3x2x2x3)");
    iv->add_option("--delta", flags.delta, "Lattice regulator (default 0.1)");
    iv->add_option("--seed", flags.seed, "Seed (default 42)");
    iv->add_option("--count", flags.count, "Boundary configurations (default 20)");
    iv->add_option("--spacing", flags.spacing, "Lattice spacing (default 1)");

    auto* orc = app.add_subcommand("oracle", "Direct vs t-sliced vs z-sliced lattice amplitudes");
    add_common(orc, flags, config);
    orc->add_option("--lattice", flags.lattice, "NtxNxxNyxNz (default 3x2x2x3)");
    orc->add_option("--delta", flags.delta, "Lattice regulator (default 0.1)");
    orc->add_option("--seed", flags.seed, "Seed (default 42)");
    orc->add_option("--count", flags.count, "Boundary configurations (default 20)");
    orc->add_option("--spacing", flags.spacing, "Lattice spacing (default 1)");

    std::vector<std::string> storage{"zslice"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        Options opts = config.empty() ? Options{} : load_config(config);
        opts.overlay(flags);

        const auto start = std::chrono::steady_clock::now();
        Result res;
        std::string name;
        if (lm->parsed()) res = cmd_lambda_map(opts), name = "lambda-map";
        else if (pr->parsed()) res = cmd_propagator(opts), name = "propagator";
        else if (iv->parsed()) res = cmd_invariants(opts), name = "invariants";
        else res = cmd_oracle(opts), name = "oracle";

        if (opts.timing.value_or(false)) {
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (!res.content.empty() && res.content.front() == '{') {
                json rec = json::parse(res.content);
                rec["wall_time_s"] = secs;
                res.content = rec.dump(2) + "\n";
            } else {
                res.content += "# wall_time_s=" + num(secs) + "\n";
            }
        }

        if (opts.out) {
            std::ofstream f(*opts.out, std::ios::binary | std::ios::trunc);
            if (!f) throw InvalidInput("cannot write output file '" + *opts.out + "'");
            f << res.content;
            if (!f) throw InvalidInput("failed writing output file '" + *opts.out + "'");
        } else {
            out << res.content;
        }
        if (res.status != kOk) err << name << ": numerical check failed\n";
        return res.status;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace zslice::cli
